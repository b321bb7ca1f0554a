"""
F-distribution CDF and quantiles for the modified criteria.

The special functions come from ``scipy.special``; the quantile is found by
bracketed root finding on the CDF so that ``f_cdf(f_quantile(p)) == p`` holds
to the solver tolerance for every degree-of-freedom pair in scope.
"""
import math
from functools import lru_cache

import numpy as np
from scipy import optimize, special

from optimal_designs.exceptions import DomainError

QUANTILE_BRACKET = (1e-8, 1e8)


def ln_gamma(x):
    """
    Natural logarithm of the gamma function for ``x > 0``.
    """
    if not x > 0:
        raise DomainError(f"ln_gamma is only defined for positive arguments, got {x}.")
    return float(special.gammaln(x))


def reg_inc_beta(x, a, b):
    """
    Regularized incomplete beta function ``I_x(a, b)``.
    """
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"x must lie in [0, 1], got {x}.")
    if a <= 0 or b <= 0:
        raise DomainError(f"a and b must be positive, got a={a}, b={b}.")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    return float(special.betainc(a, b, x))


def _check_dfs(df1, df2):
    if int(df1) != df1 or int(df2) != df2 or df1 < 1 or df2 < 1:
        raise DomainError(f"Degrees of freedom must be positive integers, got ({df1}, {df2}).")


def f_cdf(x, df1, df2):
    """
    ``P(F <= x)`` for an F variable with ``df1`` and ``df2`` degrees of freedom.
    """
    _check_dfs(df1, df2)
    if x < 0:
        raise DomainError(f"x must be non-negative, got {x}.")
    if math.isinf(x):
        return 1.0
    scaled = df1 * x
    return reg_inc_beta(scaled / (scaled + df2), df1 / 2.0, df2 / 2.0)


@lru_cache(maxsize=4096)
def f_quantile(prob, df1, df2):
    """
    The ``prob`` quantile of the F distribution with ``df1`` and ``df2`` degrees of freedom.

    Zero pure-error degrees of freedom (``df2 == 0``) are refused; callers map
    that case onto a zero criterion value.
    """
    if not 0.0 < prob < 1.0:
        raise DomainError(f"prob must lie in (0, 1), got {prob}.")
    _check_dfs(df1, df2)
    low, high = QUANTILE_BRACKET
    if f_cdf(low, df1, df2) >= prob:
        return low
    if f_cdf(high, df1, df2) <= prob:
        return high
    return float(optimize.brentq(
        lambda x: f_cdf(x, df1, df2) - prob,
        low,
        high,
        xtol=1e-14,
        rtol=4 * np.finfo(float).eps,
        maxiter=500,
    ))
