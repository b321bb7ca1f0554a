"""
Multi-start point-exchange search for exact n-run optimal designs.

Each restart draws a random nonsingular start and repeatedly applies the best
strictly improving single-run swap found by scanning every run position
against every candidate point. Restarts advance in lockstep batches of
``RESTART_BATCH``: all ``n * N`` swaps of every active restart in a batch are
scored in one call of ``Criterion.values``. Batches may be spread over worker
processes; the merge always walks restarts in index order.
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from concurrent.futures.process import BrokenProcessPool
from dataclasses import dataclass, field
from itertools import repeat
from typing import List, Optional

import numpy as np

from optimal_designs import linalg
from optimal_designs.criteria import (
    CompoundReferences,
    Criterion,
    CriterionConfig,
    CriterionKind,
    scaled_display,
)
from optimal_designs.design import Design, design_frame, info_matrix, pure_error_df
from optimal_designs.exceptions import ConfigurationError, InfeasibleDesignError
from optimal_designs.model import CandidateSet, FactorSpec, ModelSpec, enumerate_candidates

log = logging.getLogger(__name__)

MAX_START_DRAWS = 100
IMPROVEMENT_TOLERANCE = 1e-12
BEST_VALUE_TOLERANCE = 1e-9
RESTART_BATCH = 16


@dataclass(frozen=True)
class SearchConfig:
    """
    Run size and search budget. ``candidates`` defaults to the 3-level grid on the model's factors.

    ``workers`` only changes how restart batches are scheduled, never the result.
    """

    n: int
    restarts: int = 200
    max_passes: int = 50
    seed: int = 0
    workers: int = 1
    candidates: Optional[CandidateSet] = field(default=None, compare=False)

    def __post_init__(self):
        if int(self.n) < 1:
            raise ConfigurationError(f"n must be a positive run count, got {self.n}.")
        if int(self.restarts) < 1:
            raise ConfigurationError(f"restarts must be at least 1, got {self.restarts}.")
        if int(self.max_passes) < 1:
            raise ConfigurationError(f"max_passes must be at least 1, got {self.max_passes}.")
        if int(self.seed) < 0:
            raise ConfigurationError(f"seed must be non-negative, got {self.seed}.")
        if int(self.workers) < 1:
            raise ConfigurationError(f"workers must be at least 1, got {self.workers}.")

    def candidate_set(self, model: ModelSpec):
        if self.candidates is not None:
            return self.candidates
        return enumerate_candidates(FactorSpec.uniform(model.factor_count))

    def to_dict(self):
        return {
            "n": self.n,
            "restarts": self.restarts,
            "max_passes": self.max_passes,
            "seed": self.seed,
            "workers": self.workers,
        }


@dataclass
class SearchResult:
    model: ModelSpec
    criterion: CriterionConfig
    best_design: Design
    best_value: float
    scaled_value: Optional[float]
    pedf: int
    restarts_hitting_best: int
    trace: List[float]
    seed: int
    references: CompoundReferences = field(default_factory=CompoundReferences)

    def to_dict(self):
        return {
            "model": self.model.name,
            "criterion": self.criterion.to_dict(),
            "n": self.best_design.n,
            "best_value": self.best_value,
            "scaled_value": self.scaled_value,
            "pedf": self.pedf,
            "restarts": len(self.trace),
            "restarts_hitting_best": self.restarts_hitting_best,
            "seed": self.seed,
            "trace": list(self.trace),
            "design": design_frame(self.best_design).to_dict(orient="records"),
        }


def random_start(config: SearchConfig, model: ModelSpec, rng, candidates: CandidateSet = None) -> Design:
    """
    ``n`` candidate indices drawn uniformly with replacement, redrawn until nonsingular.

    Raises:
        InfeasibleDesignError: when ``n < p`` or no nonsingular draw is found.
    """
    if candidates is None:
        candidates = config.candidate_set(model)
    if config.n < model.p:
        raise InfeasibleDesignError(
            f"{config.n} runs cannot estimate the {model.p} parameters of model {model.name}."
        )
    for _ in range(MAX_START_DRAWS):
        design = Design(candidates, tuple(rng.integers(0, len(candidates), size=config.n)))
        if not linalg.logdet_spd(info_matrix(design, model)).is_singular:
            return design
    raise InfeasibleDesignError(
        f"No nonsingular {config.n}-run start for model {model.name} after {MAX_START_DRAWS} draws."
    )


def swap_counts(design: Design):
    """
    Replicate counts of every single-swap neighbour, shape ``(n * N, N)``.

    Row ``i * N + c`` holds the design with run ``i`` moved to candidate ``c``.
    """
    size = len(design.candidates)
    removed = design.counts[None, :] - np.eye(size, dtype=int)[list(design.runs)]
    stack = removed[:, None, :] + np.eye(size, dtype=int)[None, :, :]
    return stack.reshape(design.n * size, size)


def exchange_pass(design: Design, criterion: Criterion):
    """
    Apply the best strictly improving swap, if any.

    Ties go to the lowest run position, then the lowest candidate index.

    Returns:
        tuple: ``(design, improved)``.
    """
    current = float(criterion.values(design.counts[None, :])[0])
    best = best_swap(criterion.values(swap_counts(design)), current)
    if best is None:
        return design, False
    position, candidate = divmod(best, len(design.candidates))
    return design.with_run(position, candidate), True


def best_swap(values, current):
    """
    Index of the first swap tying the best value, or ``None`` when no swap strictly improves on ``current``.

    Values within ``IMPROVEMENT_TOLERANCE`` of each other count as a tie, so
    rounding noise of the eigendecomposition never decides between equal swaps.
    """
    top = float(values.max())
    floor = current + IMPROVEMENT_TOLERANCE * abs(current)
    if not top > floor:
        return None
    ties = (values >= top - IMPROVEMENT_TOLERANCE * abs(top)) & (values > floor)
    return int(np.flatnonzero(ties)[0])


def run_restarts(indices, model, criterion_config, references, config, candidates):
    """
    Run the restarts ``indices`` in lockstep.

    Returns:
        list: ``(design, value)`` per index, in order; ``design`` is ``None`` for a restart without a nonsingular start.
    """
    criterion = Criterion(model, candidates, criterion_config, references)
    designs, outcomes = {}, {}
    for index in indices:
        try:
            designs[index] = random_start(config, model, np.random.default_rng([config.seed, index]), candidates)
        except InfeasibleDesignError as error:
            log.debug("Restart %d skipped: %s", index, error)
            outcomes[index] = (None, 0.0)

    active = list(designs)
    for _ in range(config.max_passes):
        if not active:
            break
        current = criterion.values(np.stack([designs[index].counts for index in active]))
        values = criterion.values(np.concatenate([swap_counts(designs[index]) for index in active]))
        width = config.n * len(candidates)
        improving = []
        for row, index in enumerate(active):
            best = best_swap(values[row * width:(row + 1) * width], float(current[row]))
            if best is None:
                continue
            position, candidate = divmod(best, len(candidates))
            designs[index] = designs[index].with_run(position, candidate)
            improving.append(index)
        active = improving

    for index, design in designs.items():
        outcomes[index] = (design, float(criterion.values(design.counts[None, :])[0]))
    return [outcomes[index] for index in indices]


def restart_batches(restarts):
    return [range(start, min(start + RESTART_BATCH, restarts)) for start in range(0, restarts, RESTART_BATCH)]


def _schedule(batches, arguments, workers):
    if workers > 1 and len(batches) > 1:
        try:
            with ProcessPoolExecutor(max_workers=workers) as executor:
                return list(executor.map(run_restarts, batches, *(repeat(value) for value in arguments)))
        except (OSError, BrokenProcessPool) as error:
            log.warning("Parallel restarts failed (%s); running them sequentially.", error)
    return [run_restarts(batch, *arguments) for batch in batches]


def reference_optima(model: ModelSpec, criterion_config: CriterionConfig, search_config: SearchConfig):
    """
    DP- and AP-optimal designs for the compound components that carry weight.
    """
    found = {}
    for position, kind in ((0, CriterionKind.DP), (1, CriterionKind.AP)):
        if criterion_config.kappa[position] > 0:
            log.info("Searching %s reference optimum for model %s", kind.value, model.name)
            result = optimize(model, criterion_config.component(kind), search_config)
            found[kind.value.lower()] = result.best_design
    return CompoundReferences(**found)


def optimize(model: ModelSpec, criterion_config: CriterionConfig, search_config: SearchConfig,
             references: CompoundReferences = None) -> SearchResult:
    """
    Best design over all restarts; deterministic for a given seed.

    Compound criteria search their DP/AP reference optima first unless
    ``references`` are supplied.

    Raises:
        InfeasibleDesignError: when ``n < p`` or no restart reaches a positive value.
    """
    candidates = search_config.candidate_set(model)
    if search_config.n < model.p:
        raise InfeasibleDesignError(
            f"{search_config.n} runs cannot estimate the {model.p} parameters of model {model.name}."
        )
    if criterion_config.kind is CriterionKind.COMPOUND and references is None:
        references = reference_optima(model, criterion_config, search_config)
    criterion = Criterion(model, candidates, criterion_config, references)

    batches = restart_batches(search_config.restarts)
    arguments = (model, criterion_config, references, search_config, candidates)
    best_design, best_value, trace = None, 0.0, []
    for index, (design, value) in enumerate(
        outcome for batch in _schedule(batches, arguments, search_config.workers) for outcome in batch
    ):
        log.debug("Restart %d finished at %.10g", index, value)
        trace.append(value)
        if design is not None and value > best_value:
            best_design, best_value = design, value

    if best_design is None:
        raise InfeasibleDesignError(
            f"No restart found a {search_config.n}-run design with positive "
            f"{criterion_config.label} value for model {model.name}."
        )
    hits = sum(1 for value in trace if value >= best_value * (1.0 - BEST_VALUE_TOLERANCE))
    best_design = best_design.sorted()
    value = criterion(best_design)
    d = pure_error_df(best_design)
    scaled = scaled_display(
        criterion_config.kind, value, model.p, d, criterion_config.alpha,
        criterion_config.test_df_convention, criterion_config.f_exponent,
    )
    log.info(
        "%s-optimal %d-run design for %s: value %.6g (display %s), pedf %d, %d/%d restarts at best",
        criterion_config.label, best_design.n, model.name, value, scaled, d, hits, len(trace),
    )
    return SearchResult(
        model=model,
        criterion=criterion_config,
        best_design=best_design,
        best_value=value,
        scaled_value=scaled,
        pedf=d,
        restarts_hitting_best=hits,
        trace=trace,
        seed=search_config.seed,
        references=references or CompoundReferences(),
    )
