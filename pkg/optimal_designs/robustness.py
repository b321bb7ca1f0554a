"""
Robustness of a design to missing observations, model change and criterion change.

A set of runs is "estimable" when the information matrix of the rows that
are kept still has full rank ``p``. Ranks are decided by ``linalg`` with its
relative tolerance; the ``{-1, 0, 1}`` designs in scope have integer
information matrices, so the decision is exact.

Monte Carlo draws are made in chunks, chunk ``k`` drawing from its own
generator ``numpy.random.default_rng([seed, k])``. Results therefore do not
depend on how the chunks are scheduled.
"""
import itertools
import logging
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Dict, Optional, Tuple

import numpy as np

from optimal_designs import linalg
from optimal_designs.conf import get_setting
from optimal_designs.criteria import CompoundReferences, CriterionConfig, efficiency
from optimal_designs.design import Design, design_matrix, pure_error_df
from optimal_designs.exceptions import ConfigurationError, SingularDesignError, SingularMatrixError
from optimal_designs.model import ModelSpec, common_submodel

log = logging.getLogger(__name__)

MAX_EXHAUSTIVE_RUNS = 20
SUBSET_CHUNK_SIZE = 4096


class BreakdownSemantics(Enum):
    EXISTS_MIN = "exists_min"
    GUARANTEED_MAX = "guaranteed_max"


@dataclass(frozen=True)
class MissingPattern:
    """
    Which runs are kept (``True``) and which are missing.
    """

    keep_mask: Tuple[bool, ...]

    def __post_init__(self):
        object.__setattr__(self, "keep_mask", tuple(bool(keep) for keep in self.keep_mask))

    @classmethod
    def missing(cls, n, positions):
        """
        Pattern over ``n`` runs with the runs at ``positions`` missing.
        """
        positions = set(positions)
        return cls(tuple(index not in positions for index in range(n)))

    @property
    def n(self):
        return len(self.keep_mask)

    @property
    def missing_count(self):
        return self.keep_mask.count(False)


@dataclass
class RobustnessReport:
    """
    Robustness measures of one design; fields stay ``None`` until computed.
    """

    model: str
    n: int
    pedf: int
    p_missing: float
    reps: int
    seed: int
    bdn_exists: Optional[int] = None
    bdn_guaranteed: Optional[int] = None
    bdp_estimate: Optional[float] = None
    bdp_mc_stderr: Optional[float] = None
    bdp_exact: Optional[float] = None
    sigma2_v: Optional[float] = None
    psi2: Dict[str, Dict[str, Optional[float]]] = field(default_factory=dict)
    psi3: Dict[str, Optional[float]] = field(default_factory=dict)
    diagnostics: Dict[str, str] = field(default_factory=dict)

    @classmethod
    def for_design(cls, design: Design, model: ModelSpec, p_missing, reps, seed):
        return cls(model=model.name, n=design.n, pedf=pure_error_df(design),
                   p_missing=float(p_missing), reps=int(reps), seed=int(seed))

    def to_dict(self):
        return asdict(self)


def _row_outer(design, model):
    rows = design_matrix(design, model)
    return np.einsum("ri,rj->rij", rows, rows)


def estimable_after(design: Design, model: ModelSpec, pattern: MissingPattern):
    """
    Whether the kept rows of ``design`` still estimate every parameter of ``model``.
    """
    if pattern.n != design.n:
        raise ValueError(f"Pattern covers {pattern.n} runs but the design has {design.n}.")
    kept = design_matrix(design, model)[np.asarray(pattern.keep_mask)]
    if kept.shape[0] < model.p:
        return False
    return linalg.rank(linalg.gram(kept)) == model.p


def _chunks(iterable, size):
    iterator = iter(iterable)
    while True:
        chunk = list(itertools.islice(iterator, size))
        if not chunk:
            return
        yield np.array(chunk, dtype=int)


def breakdown_number(design: Design, model: ModelSpec, semantics=BreakdownSemantics.EXISTS_MIN):
    """
    Breakdown number by exhaustive scan over removal subsets of growing size.

    ``exists_min`` is the smallest number of removed runs for which some
    removal destroys estimability; ``guaranteed_max`` is one less, the
    largest number for which every removal keeps it. A design that is
    already singular scores 0 under both.
    """
    semantics = BreakdownSemantics(semantics)
    if design.n > MAX_EXHAUSTIVE_RUNS:
        raise ConfigurationError(
            f"Exhaustive breakdown scans are limited to {MAX_EXHAUSTIVE_RUNS} runs, got {design.n}."
        )
    outer = _row_outer(design, model)
    full = outer.sum(axis=0)
    if linalg.rank(full) < model.p:
        return 0
    for size in range(1, design.n + 1):
        for removed in _chunks(itertools.combinations(range(design.n), size), SUBSET_CHUNK_SIZE):
            remaining = full[None, :, :] - outer[removed].sum(axis=1)
            if np.any(linalg.batch_rank(remaining) < model.p):
                log.debug("Design breaks down after removing %d of %d runs", size, design.n)
                return size if semantics is BreakdownSemantics.EXISTS_MIN else size - 1
    return design.n


def _check_probability(p_missing):
    if not 0.0 < p_missing < 1.0:
        raise ConfigurationError(f"p_missing must lie in (0, 1), got {p_missing}.")


def breakdown_probability(design: Design, model: ModelSpec, p_missing, reps, seed, chunk_size=None):
    """
    Monte Carlo probability that independent row losses destroy estimability.

    Returns:
        tuple: ``(estimate, stderr)`` with ``stderr = sqrt(p(1 - p) / reps)``.
    """
    _check_probability(p_missing)
    if int(reps) < 1:
        raise ConfigurationError(f"reps must be at least 1, got {reps}.")
    chunk_size = int(chunk_size or get_setting("MC_CHUNK_SIZE"))
    outer = _row_outer(design, model)
    lost = 0
    for chunk, start in enumerate(range(0, reps, chunk_size)):
        draws = min(chunk_size, reps - start)
        rng = np.random.default_rng([int(seed), chunk])
        keep = rng.random((draws, design.n)) >= p_missing
        matrices = np.tensordot(keep.astype(float), outer, axes=(1, 0))
        lost += int(np.count_nonzero(linalg.batch_rank(matrices) < model.p))
    estimate = lost / reps
    return estimate, float(np.sqrt(estimate * (1.0 - estimate) / reps))


def exact_breakdown_probability(design: Design, model: ModelSpec, p_missing):
    """
    Breakdown probability summed over all ``2**n`` keep masks.
    """
    _check_probability(p_missing)
    if design.n > MAX_EXHAUSTIVE_RUNS:
        raise ConfigurationError(
            f"Exhaustive mask enumeration is limited to {MAX_EXHAUSTIVE_RUNS} runs, got {design.n}."
        )
    outer = _row_outer(design, model)
    bits = np.arange(design.n)
    total = 0.0
    for masks in _chunks(range(2 ** design.n), SUBSET_CHUNK_SIZE * 4):
        keep = (masks[:, None] >> bits[None, :]) & 1
        kept = keep.sum(axis=1)
        weights = (1.0 - p_missing) ** kept * p_missing ** (design.n - kept)
        ranks = linalg.batch_rank(np.tensordot(keep.astype(float), outer, axes=(1, 0)))
        total += float(weights[ranks < model.p].sum())
    return total


def leverage_variance(design: Design, model: ModelSpec):
    """
    Population variance of the leverages, the diagonal of ``X (X'X)^-1 X'``.

    Raises:
        SingularDesignError: when the design cannot estimate the model.
    """
    rows = design_matrix(design, model)
    try:
        inverse = linalg.inverse_spd(linalg.gram(rows))
    except SingularMatrixError as error:
        raise SingularDesignError(f"Design is singular under model {model.name}.") from error
    leverages = np.einsum("ij,jk,ik->i", rows, inverse, rows)
    return float(np.var(leverages))


def _available(value):
    return value if value else None


def psi2(config: CriterionConfig, design_for_m: Design, model_m: ModelSpec, model_eval: ModelSpec,
         reference_optimum: Design, references: CompoundReferences = None):
    """
    Efficiency of a design built for ``model_m`` when only the terms it shares with ``model_eval`` are fitted.

    The reference is the ``config``-optimal design of that shared model.
    Returns ``None`` when the design cannot estimate the shared model.
    """
    shared = common_submodel(model_m, model_eval)
    return _available(efficiency(design_for_m, shared, config, reference_optimum, references))


def psi3(design_k: Design, design_kprime: Design, config_kprime: CriterionConfig, model: ModelSpec,
         references: CompoundReferences = None):
    """
    Efficiency of ``design_k`` under another criterion, relative to that criterion's optimum.

    Returns ``None`` when ``design_k`` scores zero under ``config_kprime``.
    """
    return _available(efficiency(design_k, model, config_kprime, design_kprime, references))
