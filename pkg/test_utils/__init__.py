"""
Test utilities.

Since pytest discourages putting __init__.py into testdirectory
(i.e. making tests a package) one cannot import from anywhere
under tests folder. However, some utility classes/methods might be useful
in multiple test modules (i.e. candidate sets, published designs).

So this package is the place to put them.
"""
from optimal_designs import published
from optimal_designs.design import Design
from optimal_designs.model import FactorSpec, enumerate_candidates

CORNERS = (
    (-1.0, -1.0, -1.0), (-1.0, -1.0, 1.0), (-1.0, 1.0, -1.0), (-1.0, 1.0, 1.0),
    (1.0, -1.0, -1.0), (1.0, -1.0, 1.0), (1.0, 1.0, -1.0), (1.0, 1.0, 1.0),
)
HALF_FRACTION = tuple(point for point in CORNERS if point[0] * point[1] * point[2] > 0)


def grid_candidates(factors=3):
    """
    The 3-level grid, 27 points for three factors.
    """
    return enumerate_candidates(FactorSpec.uniform(factors))


def two_level_candidates(factors=3):
    """
    The 2-level grid, 8 points for three factors.
    """
    return enumerate_candidates(FactorSpec.uniform(factors, (-1.0, 1.0)))


def design_of(points, replicates=1, candidates=None):
    """
    Design placing ``replicates`` runs on each of ``points``.
    """
    candidates = candidates or grid_candidates(len(points[0]))
    return Design.from_points(candidates, points, [replicates] * len(points))


def full_factorial(replicates=2, candidates=None):
    """
    The 2^3 factorial replicated ``replicates`` times.
    """
    return design_of(CORNERS, replicates, candidates)


def half_fraction(replicates=4, candidates=None):
    """
    The ``x1 * x2 * x3 = +1`` half fraction replicated ``replicates`` times.
    """
    return design_of(HALF_FRACTION, replicates, candidates)


def published_design(model_name, criterion_name, candidates=None):
    return published.published_design(model_name, criterion_name, candidates or grid_candidates())
