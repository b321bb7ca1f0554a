"""
Project level defaults, overridable through the ``OPTIMAL_DESIGNS`` Django setting.

Example usage:

Add the following to your settings file:

    OPTIMAL_DESIGNS = {
        "RESTARTS": 500,
        "P_MISSING": {"M1": 0.40, "default": 0.40},
    }
"""
import copy

DEFAULTS = {
    "RUNS": 16,
    "RESTARTS": 200,
    "MAX_PASSES": 50,
    "SEED": 0,
    "ALPHA": 0.05,
    "TEST_DF_CONVENTION": "exclude_intercept",
    "F_EXPONENT": "q",
    "REPS": 10000,
    "P_MISSING": {"M1": 0.40, "default": 0.20},
    "MC_CHUNK_SIZE": 10000,
    "WORKERS": 1,
}


def get_setting(name):
    """
    Return the configured value for ``name``, falling back to ``DEFAULTS``.

    Django settings are only consulted when they are configured, so the
    numerical modules keep working as a plain library.
    """
    if name not in DEFAULTS:
        raise KeyError(f"Unknown optimal_designs setting: {name}")
    overrides = {}
    try:
        from django.conf import settings  # pylint: disable=import-outside-toplevel

        if settings.configured:
            overrides = getattr(settings, "OPTIMAL_DESIGNS", {}) or {}
    except ImportError:
        pass
    return copy.deepcopy(overrides.get(name, DEFAULTS[name]))


def default_p_missing(model_name):
    """
    Missing-observation probability used for the named model.
    """
    table = get_setting("P_MISSING")
    fallback = table.get("default", DEFAULTS["P_MISSING"]["default"])
    return float(table.get(model_name, fallback))
