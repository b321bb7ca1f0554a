"""
Settings used by the ``optimal-designs`` console script.

Projects installing ``optimal_designs`` as an app configure the same keys in
their own settings instead.
"""

SECRET_KEY = 'optimal-designs-console-script'

INSTALLED_APPS = (
    'optimal_designs',
)

USE_TZ = True

OPTIMAL_DESIGNS = {}

OPEN_EDX_FILTERS_CONFIG = {
    "optimal_designs.robustness.audit.requested.v1": {
        "fail_silently": False,
        "pipeline": [
            "optimal_designs.audit.pipeline.BreakdownNumberStep",
            "optimal_designs.audit.pipeline.BreakdownProbabilityStep",
            "optimal_designs.audit.pipeline.LeverageVarianceStep",
            "optimal_designs.audit.pipeline.ModelChangeStep",
            "optimal_designs.audit.pipeline.CriterionChangeStep",
        ]
    }
}

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'simple': {
            'format': '%(asctime)s %(levelname)s %(name)s: %(message)s',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'simple',
        },
    },
    'loggers': {
        'optimal_designs': {
            'handlers': ['console'],
            'level': 'WARNING',
        },
    },
}
