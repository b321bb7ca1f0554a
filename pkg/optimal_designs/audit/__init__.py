"""
Robustness audit of a design, run as a configurable openedx-filters pipeline.
"""
