"""
Exact optimal factorial designs under standard, modified and compound criteria.
"""

__version__ = '0.1.0'

default_app_config = 'optimal_designs.apps.OptimalDesignsConfig'  # pylint: disable=invalid-name
