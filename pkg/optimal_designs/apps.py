"""
optimal_designs Django application initialization.
"""

from django.apps import AppConfig


class OptimalDesignsConfig(AppConfig):
    """
    Configuration for the optimal_designs Django application.
    """

    name = 'optimal_designs'
    verbose_name = 'Optimal factorial designs'
