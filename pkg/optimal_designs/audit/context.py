"""
Shared state handed to every step of the robustness audit pipeline.
"""
import logging
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional

from optimal_designs.criteria import CompoundReferences, CriterionConfig, CriterionKind
from optimal_designs.design import Design
from optimal_designs.exceptions import MissingReferenceError
from optimal_designs.model import ModelSpec
from optimal_designs.search import SearchConfig, optimize

log = logging.getLogger(__name__)


@dataclass
class AuditContext:
    """
    What to audit and how.

    ``submodels`` lists the models a design is refitted under for model
    change robustness; ``criteria`` names the criteria used for criterion
    change robustness. Reference optima come from ``optima`` when present and
    are otherwise searched with ``search`` (its ``n`` is replaced by the
    audited design's run count) and cached there.
    """

    criterion: CriterionConfig
    p_missing: float
    reps: int
    seed: int
    search: Optional[SearchConfig] = None
    submodels: List[ModelSpec] = field(default_factory=list)
    criteria: List[str] = field(default_factory=list)
    exact_bdp: bool = False
    chunk_size: Optional[int] = None
    optima: Dict[tuple, Design] = field(default_factory=dict)

    @staticmethod
    def key(model: ModelSpec, config: CriterionConfig):
        return model.terms, config

    def remember(self, model: ModelSpec, config: CriterionConfig, design: Design):
        self.optima[self.key(model, config)] = design

    def named(self, name):
        """
        Named criterion sharing the audited criterion's alpha, weights and conventions.
        """
        base = self.criterion
        return CriterionConfig.named(
            name,
            alpha=base.alpha,
            test_df_convention=base.test_df_convention,
            f_exponent=base.f_exponent,
        )

    def references(self, model: ModelSpec, config: CriterionConfig, n):
        """
        Compound reference optima for ``config`` under ``model``; empty for single criteria.
        """
        if config.kind is not CriterionKind.COMPOUND:
            return CompoundReferences()
        found = {}
        for position, kind in ((0, "DP"), (1, "AP")):
            if config.kappa[position] > 0:
                found[kind.lower()] = self.optimum(model, config.component(kind), n)
        return CompoundReferences(**found)

    def optimum(self, model: ModelSpec, config: CriterionConfig, n):
        """
        ``config``-optimal ``n``-run design for ``model``.

        Raises:
            MissingReferenceError: when it is neither cached nor searchable.
        """
        key = self.key(model, config)
        if key in self.optima:
            return self.optima[key]
        if self.search is None:
            raise MissingReferenceError(
                f"No {config.label}-optimal reference design for model {model.name} and no search configured."
            )
        log.info("Searching %s-optimal reference design for model %s", config.label, model.name)
        result = optimize(model, config, replace(self.search, n=n), self.references(model, config, n))
        self.remember(model, config, result.best_design)
        return result.best_design
