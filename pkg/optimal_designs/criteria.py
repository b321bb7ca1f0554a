"""
Standard (D, A), modified (DP, AP) and compound optimality criteria.

The modified criteria divide by quantiles of the F distribution whose
denominator degrees of freedom are the design's pure-error df ``d``. A design
with ``d == 0`` cannot estimate pure error, so it scores 0 under DP and AP
and its efficiencies are reported as not available (``None``).

By default the global test uses ``q = p - 1`` numerator df (the intercept is
not tested) and ``q`` is also the exponent of the F quantile in DP. Both are
switchable through ``CriterionConfig``.
"""
import logging
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Dict, NamedTuple, Optional, Tuple

import numpy as np

from optimal_designs import linalg
from optimal_designs.design import Design, df_efficiency, info_matrix, pure_error_df
from optimal_designs.exceptions import (
    ConfigurationError,
    MissingReferenceError,
    SingularMatrixError,
)
from optimal_designs.fdist import f_quantile
from optimal_designs.model import CandidateSet, ModelSpec

log = logging.getLogger(__name__)

DEFAULT_ALPHA = 0.05


class CriterionKind(Enum):
    D = "D"
    A = "A"
    DP = "DP"
    AP = "AP"
    COMPOUND = "Compound"

    @property
    def is_modified(self):
        return self in (CriterionKind.DP, CriterionKind.AP)

    @property
    def is_determinant(self):
        return self in (CriterionKind.D, CriterionKind.DP)


class TestDfConvention(Enum):
    EXCLUDE_INTERCEPT = "exclude_intercept"
    INCLUDE_INTERCEPT = "include_intercept"


NAMED_KAPPAS = {
    "C1": (0.8, 0.0, 0.2),
    "C2": (0.0, 0.8, 0.2),
}
CRITERION_NAMES = ("D", "A", "DP", "AP", "C1", "C2")


@dataclass(frozen=True)
class CriterionConfig:
    """
    Which criterion to evaluate and its tuning constants.

    ``f_exponent`` selects the power of the F quantile in DP: ``"q"`` (the
    test df, default) or ``"p"`` (number of parameters).
    """

    kind: CriterionKind
    alpha: float = DEFAULT_ALPHA
    weights: Optional[Tuple[float, ...]] = None
    kappa: Optional[Tuple[float, float, float]] = None
    test_df_convention: TestDfConvention = TestDfConvention.EXCLUDE_INTERCEPT
    f_exponent: str = "q"
    name: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "kind", CriterionKind(self.kind))
        object.__setattr__(self, "test_df_convention", TestDfConvention(self.test_df_convention))
        if not 0.0 < self.alpha < 1.0:
            raise ConfigurationError(f"alpha must lie in (0, 1), got {self.alpha}.")
        if self.weights is not None:
            weights = tuple(float(weight) for weight in self.weights)
            if any(weight <= 0 for weight in weights):
                raise ConfigurationError("Criterion weights must be positive.")
            object.__setattr__(self, "weights", weights)
        if self.f_exponent not in ("q", "p"):
            raise ConfigurationError(f"f_exponent must be 'q' or 'p', got {self.f_exponent!r}.")
        if self.kind is CriterionKind.COMPOUND:
            if self.kappa is None or len(self.kappa) != 3:
                raise ConfigurationError("A compound criterion needs three kappa weights.")
            kappa = tuple(float(value) for value in self.kappa)
            if any(value < 0 for value in kappa) or not math.isclose(sum(kappa), 1.0, abs_tol=1e-9):
                raise ConfigurationError(f"kappa weights must be non-negative and sum to 1, got {kappa}.")
            object.__setattr__(self, "kappa", kappa)
        elif self.kappa is not None:
            raise ConfigurationError("kappa only applies to compound criteria.")

    @classmethod
    def named(cls, name, **options):
        """
        Config for one of ``D, A, DP, AP, C1, C2`` or ``Compound`` (which needs ``kappa``).
        """
        key = str(name).upper()
        if key in NAMED_KAPPAS:
            if options.get("kappa") is None:
                options["kappa"] = NAMED_KAPPAS[key]
            return cls(CriterionKind.COMPOUND, name=key, **options)
        if key == "COMPOUND":
            return cls(CriterionKind.COMPOUND, name=options.pop("name", key), **options)
        try:
            kind = CriterionKind(key)
        except ValueError as error:
            raise ConfigurationError(
                f"Unknown criterion {name!r}; expected one of {', '.join(CRITERION_NAMES)} or Compound."
            ) from error
        options.pop("kappa", None)
        return cls(kind, name=key, **options)

    @property
    def label(self):
        return self.name or self.kind.value

    def component(self, kind):
        """
        DP or AP config sharing this config's constants, for compound references.
        """
        return replace(self, kind=CriterionKind(kind), kappa=None, name=CriterionKind(kind).value)

    def to_dict(self):
        return {
            "kind": self.kind.value,
            "name": self.label,
            "alpha": self.alpha,
            "weights": list(self.weights) if self.weights else None,
            "kappa": list(self.kappa) if self.kappa else None,
            "test_df_convention": self.test_df_convention.value,
            "f_exponent": self.f_exponent,
        }


class CompoundReferences(NamedTuple):
    """
    DP- and AP-optimal designs that compound efficiencies are relative to.
    """

    dp: Optional[Design] = None
    ap: Optional[Design] = None


@dataclass
class EvalResult:
    raw_value: float
    scaled_value: Optional[float]
    pedf: int
    estimable: bool
    components: Dict[str, Optional[float]] = field(default_factory=dict)

    def to_dict(self):
        return {
            "raw_value": self.raw_value,
            "scaled_value": self.scaled_value,
            "pedf": self.pedf,
            "estimable": self.estimable,
            "components": dict(self.components),
        }


def test_df(p, convention=TestDfConvention.EXCLUDE_INTERCEPT):
    """
    Numerator df of the global F test; never below one.
    """
    if TestDfConvention(convention) is TestDfConvention.INCLUDE_INTERCEPT:
        return p
    return max(p - 1, 1)


def weight_vector(model: ModelSpec, weights=None):
    if weights is None:
        return np.ones(model.p)
    weights = np.asarray(weights, dtype=float)
    if weights.shape != (model.p,):
        raise ConfigurationError(f"Expected {model.p} criterion weights, got {weights.size}.")
    return weights


def _f_power(p, convention, f_exponent):
    q = test_df(p, convention)
    return q, (q if f_exponent == "q" else p)


def phi_D(design: Design, model: ModelSpec):
    """
    ``|X'X|``, zero for singular designs.
    """
    result = linalg.logdet_spd(info_matrix(design, model))
    return 0.0 if result.is_singular else math.exp(result.logdet)


def _weighted_trace(design, model, weights):
    try:
        inverse = linalg.inverse_spd(info_matrix(design, model))
    except SingularMatrixError:
        return None
    return float(np.sum(weight_vector(model, weights) * np.diag(inverse)))


def phi_A(design: Design, model: ModelSpec, weights=None):
    """
    ``(tr{W (X'X)^-1})^-1``, zero for singular designs.
    """
    trace = _weighted_trace(design, model, weights)
    return 0.0 if trace is None else 1.0 / trace


def phi_DP(design: Design, model: ModelSpec, alpha=DEFAULT_ALPHA,
           convention=TestDfConvention.EXCLUDE_INTERCEPT, f_exponent="q"):
    """
    ``|X'X| / F(q, d, 1 - alpha)^e``; zero when ``d == 0`` or the design is singular.
    """
    d = pure_error_df(design)
    result = linalg.logdet_spd(info_matrix(design, model))
    if d == 0 or result.is_singular:
        return 0.0
    q, power = _f_power(model.p, convention, f_exponent)
    return math.exp(result.logdet - power * math.log(f_quantile(1.0 - alpha, q, d)))


def phi_AP(design: Design, model: ModelSpec, alpha=DEFAULT_ALPHA, weights=None):
    """
    ``(F(1, d, 1 - alpha) tr{W (X'X)^-1})^-1``; zero when ``d == 0`` or the design is singular.
    """
    d = pure_error_df(design)
    if d == 0:
        return 0.0
    trace = _weighted_trace(design, model, weights)
    if trace is None:
        return 0.0
    return 1.0 / (f_quantile(1.0 - alpha, 1, d) * trace)


def _standard_value(design, model, config):
    kind = config.kind
    if kind is CriterionKind.D:
        return phi_D(design, model)
    if kind is CriterionKind.A:
        return phi_A(design, model, config.weights)
    if kind is CriterionKind.DP:
        return phi_DP(design, model, config.alpha, config.test_df_convention, config.f_exponent)
    if kind is CriterionKind.AP:
        return phi_AP(design, model, config.alpha, config.weights)
    raise ConfigurationError(f"{kind.value} is not a single criterion.")


def _ratio(value, reference_value, kind, p):
    if kind.is_determinant:
        return (value / reference_value) ** (1.0 / p)
    return value / reference_value


def efficiency(design: Design, model: ModelSpec, config: CriterionConfig, reference_design: Design,
               references: CompoundReferences = None):
    """
    Efficiency of ``design`` relative to ``reference_design`` under ``config``.

    Determinant criteria are put on the ``1/p`` scale. ``None`` (not available)
    is returned when the design scores zero under a modified or compound
    criterion.

    Raises:
        MissingReferenceError: when no usable reference design is given.
    """
    if reference_design is None:
        raise MissingReferenceError(f"No reference design given for the {config.label} efficiency.")
    value = criterion_value(design, model, config, references)
    reference_value = criterion_value(reference_design, model, config, references)
    if reference_value <= 0.0:
        raise MissingReferenceError(f"The {config.label} reference design scores zero under {model.name}.")
    if value <= 0.0:
        return 0.0 if config.kind in (CriterionKind.D, CriterionKind.A) else None
    return _ratio(value, reference_value, config.kind, model.p)


def compound_components(design: Design, model: ModelSpec, config: CriterionConfig,
                        references: CompoundReferences):
    """
    ``E_DP``, ``E_AP`` and ``E_DF`` of a design; components with zero weight are skipped.
    """
    references = references or CompoundReferences()
    kappa = config.kappa
    components = {}
    if kappa[0] > 0:
        components["E_DP"] = efficiency(design, model, config.component("DP"), references.dp)
    if kappa[1] > 0:
        components["E_AP"] = efficiency(design, model, config.component("AP"), references.ap)
    if kappa[2] > 0:
        components["E_DF"] = df_efficiency(design, model)
    return components


def phi_compound(design: Design, model: ModelSpec, config: CriterionConfig, references: CompoundReferences):
    """
    ``E_DP^k1 * E_AP^k2 * E_DF^k3``; zero when any weighted component is zero or not available.
    """
    if config.kind is not CriterionKind.COMPOUND:
        raise ConfigurationError("phi_compound needs a compound criterion config.")
    if linalg.logdet_spd(info_matrix(design, model)).is_singular:
        return 0.0
    components = compound_components(design, model, config, references)
    weights = dict(zip(("E_DP", "E_AP", "E_DF"), config.kappa))
    value = 1.0
    for key, component in components.items():
        if not component:
            return 0.0
        value *= component ** weights[key]
    return value


def criterion_value(design: Design, model: ModelSpec, config: CriterionConfig, references=None):
    """
    Raw value of any configured criterion.
    """
    if config.kind is CriterionKind.COMPOUND:
        return phi_compound(design, model, config, references)
    return _standard_value(design, model, config)


def scaled_display(kind, raw, p, d, alpha=DEFAULT_ALPHA, convention=TestDfConvention.EXCLUDE_INTERCEPT,
                   f_exponent="q"):
    """
    Value on the scale printed in design tables.

    D shows ``|X'X|^(1/p)``, DP shows ``|X'X|^(1/p) / F(q, d)``, A and AP show
    ``p`` times the raw value and compound values are shown raw. Modified
    criteria on designs without pure error are ``None``.
    """
    kind = CriterionKind(kind)
    if raw < 0:
        raise ValueError("Criterion values are non-negative.")
    if kind.is_modified and d == 0:
        return None
    if kind is CriterionKind.D:
        return raw ** (1.0 / p)
    if kind is CriterionKind.DP:
        if raw == 0.0:
            return 0.0
        q, power = _f_power(p, convention, f_exponent)
        f_value = f_quantile(1.0 - alpha, q, d)
        return (raw * f_value ** power) ** (1.0 / p) / f_value
    if kind in (CriterionKind.A, CriterionKind.AP):
        return p * raw
    return raw


def evaluate(design: Design, model: ModelSpec, config: CriterionConfig, references=None) -> EvalResult:
    """
    Raw and display values of ``config`` on ``design``, plus compound components.
    """
    d = pure_error_df(design)
    estimable = not linalg.logdet_spd(info_matrix(design, model)).is_singular
    raw = criterion_value(design, model, config, references)
    components = {}
    if config.kind is CriterionKind.COMPOUND and estimable:
        components = compound_components(design, model, config, references)
    scaled = scaled_display(
        config.kind, raw, model.p, d, config.alpha, config.test_df_convention, config.f_exponent,
    )
    return EvalResult(raw, scaled, d, estimable, components)


class Criterion:
    """
    A criterion bound to a model and candidate set, scoring many designs at once.

    Designs are passed as replicate-count vectors over the candidate set; every
    count vector gets its own information matrix, built from scratch.
    """

    def __init__(self, model: ModelSpec, candidates: CandidateSet, config: CriterionConfig,
                 references: CompoundReferences = None):
        self.model = model
        self.candidates = candidates
        self.config = config
        self.references = references or CompoundReferences()
        rows = candidates.model_matrix(model)
        self._outer = np.einsum("ki,kj->kij", rows, rows)
        self._weights = weight_vector(model, config.weights)
        self._reference_logs = {}
        if config.kind is CriterionKind.COMPOUND:
            self._prepare_compound()

    def _prepare_compound(self):
        for position, kind in ((0, "DP"), (1, "AP")):
            if self.config.kappa[position] == 0:
                continue
            reference = getattr(self.references, kind.lower())
            if reference is None:
                raise MissingReferenceError(f"Compound criterion needs a {kind}-optimal reference design.")
            value = _standard_value(reference, self.model, self.config.component(kind))
            if value <= 0:
                raise MissingReferenceError(f"The {kind} reference design scores zero.")
            self._reference_logs[kind] = math.log(value)

    def __call__(self, design: Design):
        """
        Exact value of a single design through the scalar evaluators.
        """
        return criterion_value(design, self.model, self.config, self.references)

    def _quantiles(self, df1, d):
        levels, inverse = np.unique(d.astype(int), return_inverse=True)
        table = np.array([
            f_quantile(1.0 - self.config.alpha, df1, int(level)) if level > 0 else np.nan for level in levels
        ])
        return table[inverse]

    def _log_dp(self, spectrum, d):
        q, power = _f_power(self.model.p, self.config.test_df_convention, self.config.f_exponent)
        with np.errstate(invalid="ignore"):
            logs = spectrum.logdet - power * np.log(self._quantiles(q, d))
        return np.where((d > 0) & ~spectrum.is_singular, logs, -np.inf)

    def _log_ap(self, spectrum, d):
        with np.errstate(invalid="ignore", divide="ignore"):
            trace = spectrum.inverse_diagonal @ self._weights
            logs = -np.log(self._quantiles(1, d)) - np.log(trace)
        return np.where((d > 0) & ~spectrum.is_singular, logs, -np.inf)

    def values(self, counts):
        """
        Raw criterion values for a ``(m, N)`` array of replicate counts.
        """
        counts = np.atleast_2d(np.asarray(counts, dtype=float))
        matrices = np.tensordot(counts, self._outer, axes=(1, 0))
        spectrum = linalg.batch_spectrum(matrices)
        n = counts.sum(axis=1)
        d = n - np.count_nonzero(counts, axis=1)
        kind = self.config.kind
        with np.errstate(divide="ignore", over="ignore"):
            if kind is CriterionKind.D:
                values = np.exp(spectrum.logdet)
            elif kind is CriterionKind.A:
                values = np.where(spectrum.is_singular, 0.0, 1.0 / (spectrum.inverse_diagonal @ self._weights))
            elif kind is CriterionKind.DP:
                values = np.exp(self._log_dp(spectrum, d))
            elif kind is CriterionKind.AP:
                values = np.exp(self._log_ap(spectrum, d))
            else:
                values = self._compound_values(spectrum, d, n)
        return np.where(spectrum.is_singular, 0.0, values)

    def _compound_values(self, spectrum, d, n):
        kappa = self.config.kappa
        logs = np.zeros(d.shape)
        if kappa[0] > 0:
            logs += kappa[0] * (self._log_dp(spectrum, d) - self._reference_logs["DP"]) / self.model.p
        if kappa[1] > 0:
            logs += kappa[1] * (self._log_ap(spectrum, d) - self._reference_logs["AP"])
        if kappa[2] > 0:
            logs += kappa[2] * np.log((n - d) / n)
        return np.exp(logs)
