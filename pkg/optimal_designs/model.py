"""
Factors, candidate design spaces and polynomial regression models.

A model is an ordered tuple of exponent vectors, one per regression function;
the first one is always the intercept. Builtin models follow the term order
intercept, linear, quadratic, then two-factor interactions in lexicographic
pair order.
"""
import itertools
import json
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from optimal_designs.exceptions import ModelSpecificationError, UnknownModelError

DEFAULT_LEVELS = (-1.0, 0.0, 1.0)
MAX_DEGREE = 2
BUILTIN_MODELS = ("M1", "M2", "M3", "M4")


@dataclass(frozen=True)
class FactorSpec:
    """
    Per-factor levels of the design space.
    """

    levels: Tuple[Tuple[float, ...], ...]

    def __post_init__(self):
        if not self.levels:
            raise ModelSpecificationError("At least one factor is required.")
        normalized = []
        for position, levels in enumerate(self.levels, start=1):
            levels = tuple(sorted(float(level) for level in levels))
            if len(set(levels)) < 2 or len(set(levels)) != len(levels):
                raise ModelSpecificationError(f"Factor x{position} needs at least two levels, all distinct.")
            if levels[0] < -1.0 or levels[-1] > 1.0:
                raise ModelSpecificationError(f"Levels of factor x{position} must lie within [-1, 1].")
            normalized.append(levels)
        object.__setattr__(self, "levels", tuple(normalized))

    @classmethod
    def uniform(cls, count=3, levels=DEFAULT_LEVELS):
        """
        ``count`` factors sharing the same levels.
        """
        return cls(tuple(tuple(levels) for _ in range(count)))

    @property
    def count(self):
        return len(self.levels)

    def to_dict(self):
        return {"factors": self.count, "levels": [list(levels) for levels in self.levels]}


@dataclass(frozen=True)
class ModelSpec:
    """
    Ordered regression functions given as exponent vectors.
    """

    terms: Tuple[Tuple[int, ...], ...]
    name: str = "custom"

    def __post_init__(self):
        terms = tuple(tuple(int(exponent) for exponent in term) for term in self.terms)
        if not terms:
            raise ModelSpecificationError("A model needs at least the intercept term.")
        width = len(terms[0])
        if any(len(term) != width for term in terms):
            raise ModelSpecificationError("All terms must have one exponent per factor.")
        if any(sum(term) for term in terms[:1]):
            raise ModelSpecificationError("The first term must be the intercept (all exponents zero).")
        if len(set(terms)) != len(terms):
            raise ModelSpecificationError("Model terms must be distinct.")
        if any(exponent < 0 or exponent > MAX_DEGREE for term in terms for exponent in term):
            raise ModelSpecificationError(f"Exponents must lie in 0..{MAX_DEGREE}.")
        object.__setattr__(self, "terms", terms)

    @property
    def p(self):
        return len(self.terms)

    @property
    def factor_count(self):
        return len(self.terms[0])

    @cached_property
    def exponents(self):
        return np.array(self.terms, dtype=float)

    def labels(self):
        """
        Readable label per term, e.g. ``1``, ``x1``, ``x2^2``, ``x1*x3``.
        """
        labels = []
        for term in self.terms:
            parts = []
            for position, exponent in enumerate(term, start=1):
                if exponent == 1:
                    parts.append(f"x{position}")
                elif exponent > 1:
                    parts.append(f"x{position}^{exponent}")
            labels.append("*".join(parts) or "1")
        return labels

    def to_dict(self):
        return {"name": self.name, "terms": [list(term) for term in self.terms]}


@dataclass(frozen=True)
class CandidateSet:
    """
    Every level combination of the design space, in lexicographic order.
    """

    factors: FactorSpec
    points: Tuple[Tuple[float, ...], ...]

    def __post_init__(self):
        if len(set(self.points)) != len(self.points):
            raise ModelSpecificationError("Candidate points must be distinct.")

    def __len__(self):
        return len(self.points)

    @cached_property
    def array(self):
        return np.array(self.points, dtype=float)

    @cached_property
    def _positions(self) -> Dict[Tuple[float, ...], int]:
        return {point: index for index, point in enumerate(self.points)}

    def index_of(self, point) -> Optional[int]:
        """
        Candidate index of ``point``, or ``None`` when it is not in the set.
        """
        return self._positions.get(tuple(float(value) for value in point))

    def model_matrix(self, model):
        """
        Model matrix row for every candidate point, shape ``(N, p)``.
        """
        return model_matrix(self.array, model)

    def subset(self, indices):
        """
        Candidate set restricted to ``indices`` (kept in the given order).
        """
        return CandidateSet(self.factors, tuple(self.points[index] for index in indices))


def _builtin_terms(name, count):
    intercept = [(0,) * count]
    linear = [tuple(int(k == j) for k in range(count)) for j in range(count)]
    quadratic = [tuple(2 * int(k == j) for k in range(count)) for j in range(count)]
    interactions = [
        tuple(int(k in pair) for k in range(count))
        for pair in itertools.combinations(range(count), 2)
    ]
    return {
        "M1": intercept + linear,
        "M2": intercept + linear + quadratic,
        "M3": intercept + linear + interactions,
        "M4": intercept + linear + quadratic + interactions,
    }[name]


def builtin_model(name, factor_count=3):
    """
    One of the builtin first and second order models ``M1`` .. ``M4``.

    Raises:
        UnknownModelError: for any other name.
    """
    key = str(name).upper()
    if key not in BUILTIN_MODELS:
        raise UnknownModelError(f"Unknown model {name!r}; expected one of {', '.join(BUILTIN_MODELS)}.")
    return ModelSpec(tuple(_builtin_terms(key, factor_count)), name=key)


def enumerate_candidates(factors: FactorSpec) -> CandidateSet:
    """
    Full factorial enumeration of ``factors`` with the last factor varying fastest.
    """
    return CandidateSet(factors, tuple(itertools.product(*factors.levels)))


def expand_row(point: Sequence[float], model: ModelSpec):
    """
    Regression functions of ``model`` evaluated at ``point``.
    """
    point = np.asarray(point, dtype=float)
    if point.shape != (model.factor_count,):
        raise ModelSpecificationError(
            f"Point has {point.size} coordinates but the model expects {model.factor_count}."
        )
    return np.prod(np.power(point[None, :], model.exponents), axis=1)


def model_matrix(points, model: ModelSpec):
    """
    Stack of ``expand_row`` over ``points``, shape ``(len(points), p)``.
    """
    points = np.asarray(points, dtype=float)
    if points.ndim != 2 or points.shape[1] != model.factor_count:
        raise ModelSpecificationError("Points do not match the model's factor count.")
    return np.prod(np.power(points[:, None, :], model.exponents[None, :, :]), axis=2)


def common_submodel(a: ModelSpec, b: ModelSpec) -> ModelSpec:
    """
    Terms shared by ``a`` and ``b``, in ``a``'s order.
    """
    if a.factor_count != b.factor_count:
        raise ModelSpecificationError("Models must be defined on the same factors.")
    shared = set(b.terms)
    terms = tuple(term for term in a.terms if term in shared)
    for name in BUILTIN_MODELS:
        if builtin_model(name, a.factor_count).terms == terms:
            return ModelSpec(terms, name=name)
    return ModelSpec(terms, name=f"{a.name}&{b.name}")


def load_model(source):
    """
    Resolve a builtin name, a model dict, or the path of a JSON model file.

    The JSON form is ``{"factors": k, "levels": [[...], ...], "terms": [[...], ...]}``;
    ``levels`` defaults to ``{-1, 0, 1}`` for every factor.

    Returns:
        tuple: ``(FactorSpec, ModelSpec)``.
    """
    if isinstance(source, ModelSpec):
        return FactorSpec.uniform(source.factor_count), source
    if isinstance(source, str) and source.upper() in BUILTIN_MODELS:
        return FactorSpec.uniform(3), builtin_model(source)
    if isinstance(source, (str, Path)):
        path = Path(source)
        if not path.exists():
            raise UnknownModelError(f"{source!r} is neither a builtin model nor an existing model file.")
        try:
            source = json.loads(path.read_text(encoding="utf8"))
        except json.JSONDecodeError as error:
            raise ModelSpecificationError(f"Model file {path} is not valid JSON: {error}") from error
        source.setdefault("name", path.stem)
    if not isinstance(source, dict):
        raise ModelSpecificationError("A model must be a builtin name, a dict or a JSON file path.")
    if not source.get("terms"):
        raise ModelSpecificationError("A model definition needs a non-empty \"terms\" list.")
    count = int(source.get("factors", len(source["terms"][0])))
    levels = source.get("levels") or [DEFAULT_LEVELS] * count
    if len(levels) != count:
        raise ModelSpecificationError(f"Expected levels for {count} factors, got {len(levels)}.")
    factors = FactorSpec(tuple(tuple(level) for level in levels))
    model = ModelSpec(tuple(tuple(term) for term in source["terms"]), name=source.get("name", "custom"))
    if model.factor_count != count:
        raise ModelSpecificationError("Term length does not match the number of factors.")
    return factors, model
