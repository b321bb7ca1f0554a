"""
Run configuration shared by the management commands.

Values are resolved in three layers: ``optimal_designs.conf`` settings, then
a JSON config file, then command-line flags. The JSON file mirrors
``RunConfig``; the criterion and search blocks may be nested:

    {
        "model": "M1",
        "criterion": {"kind": "Compound", "alpha": 0.05, "kappa": [0.8, 0, 0.2]},
        "search": {"n": 16, "restarts": 200, "seed": 1},
        "output": {"dir": "out", "format": "csv"}
    }
"""
import hashlib
import json
import logging
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from optimal_designs import __version__
from optimal_designs.conf import default_p_missing, get_setting
from optimal_designs.criteria import CriterionConfig
from optimal_designs.exceptions import ConfigurationError
from optimal_designs.model import enumerate_candidates, load_model
from optimal_designs.search import SearchConfig

log = logging.getLogger(__name__)

COMMANDS = ("search", "evaluate", "robustness", "reproduce")
OUTPUT_FORMATS = ("json", "csv")


@dataclass
class RunConfig:
    command: str
    model: str = "M1"
    criterion: str = "D"
    alpha: float = None
    kappa: Optional[Tuple[float, float, float]] = None
    weights: Optional[Tuple[float, ...]] = None
    test_df_convention: str = None
    f_exponent: str = None
    n: int = None
    restarts: int = None
    max_passes: int = None
    seed: int = None
    workers: int = None
    p_missing: Optional[float] = None
    reps: int = None
    design: Optional[str] = None
    references: Dict[str, str] = field(default_factory=dict)
    out: Optional[str] = None
    output_format: str = "csv"
    submodels: List[str] = field(default_factory=list)
    criteria: List[str] = field(default_factory=list)
    exact_bdp: bool = False
    p_missing_text: bool = False
    tables: List[str] = field(default_factory=list)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigurationError(f"Unknown command {self.command!r}.")
        defaults = {
            "alpha": "ALPHA",
            "test_df_convention": "TEST_DF_CONVENTION",
            "f_exponent": "F_EXPONENT",
            "n": "RUNS",
            "restarts": "RESTARTS",
            "max_passes": "MAX_PASSES",
            "seed": "SEED",
            "workers": "WORKERS",
            "reps": "REPS",
        }
        for name, setting in defaults.items():
            if getattr(self, name) is None:
                setattr(self, name, get_setting(setting))
        if self.output_format not in OUTPUT_FORMATS:
            raise ConfigurationError(f"format must be one of {', '.join(OUTPUT_FORMATS)}, got {self.output_format!r}.")
        if self.kappa is not None:
            self.kappa = tuple(float(value) for value in self.kappa)
        if self.weights is not None:
            self.weights = tuple(float(value) for value in self.weights)

    @classmethod
    def from_sources(cls, command, path=None, **flags):
        """
        Resolve a config from an optional JSON file and flag values; ``None`` flags are ignored.
        """
        values = read_config_file(path) if path else {}
        values.update({name: value for name, value in flags.items() if value is not None})
        known = {item.name for item in fields(cls)}
        unknown = sorted(set(values) - known)
        if unknown:
            raise ConfigurationError(f"Unknown configuration keys: {', '.join(unknown)}.")
        values["command"] = command
        return cls(**values)

    def resolve_model(self):
        """
        Returns:
            tuple: ``(FactorSpec, ModelSpec, CandidateSet)``.
        """
        factors, model = load_model(self.model)
        return factors, model, enumerate_candidates(factors)

    def criterion_config(self, name=None) -> CriterionConfig:
        """
        The configured criterion, or the named one sharing its constants.

        ``kappa`` only applies to the configured criterion itself.
        """
        name = name or self.criterion
        return CriterionConfig.named(
            name,
            alpha=self.alpha,
            kappa=self.kappa if name.upper() == str(self.criterion).upper() else None,
            weights=self.weights,
            test_df_convention=self.test_df_convention,
            f_exponent=self.f_exponent,
        )

    def search_config(self, candidates=None, n=None) -> SearchConfig:
        return SearchConfig(
            n=int(n or self.n),
            restarts=int(self.restarts),
            max_passes=int(self.max_passes),
            seed=int(self.seed),
            workers=int(self.workers),
            candidates=candidates,
        )

    def missing_probability(self, model_name):
        return float(self.p_missing) if self.p_missing is not None else default_p_missing(model_name)

    def to_dict(self):
        return asdict(self)

    def config_hash(self):
        """
        SHA-256 of the canonical JSON form of the config.
        """
        return hashlib.sha256(dumps(self.to_dict()).encode("utf8")).hexdigest()

    def envelope(self, result):
        """
        Output document wrapping ``result`` with the seed, config hash and version.
        """
        return {
            "command": self.command,
            "version": __version__,
            "seed": self.seed,
            "config_hash": self.config_hash(),
            "config": self.to_dict(),
            "result": result,
        }


def _flatten(document):
    values = dict(document)
    criterion = values.pop("criterion", None)
    if isinstance(criterion, dict):
        criterion = dict(criterion)
        if "kind" in criterion:
            values["criterion"] = criterion.pop("kind")
        if "W" in criterion:
            criterion["weights"] = criterion.pop("W")
        values.update(criterion)
    elif criterion is not None:
        values["criterion"] = criterion
    for block, renames in (("search", {}), ("output", {"dir": "out", "format": "output_format"})):
        nested = values.pop(block, None)
        if isinstance(nested, dict):
            values.update({renames.get(key, key): value for key, value in nested.items()})
    return values


def read_config_file(path):
    """
    Flattened values of a JSON config file.

    Raises:
        ConfigurationError: when the file is missing or not a JSON object.
    """
    path = Path(path)
    try:
        document = json.loads(path.read_text(encoding="utf8"))
    except OSError as error:
        raise ConfigurationError(f"Cannot read config file {path}: {error}") from error
    except json.JSONDecodeError as error:
        raise ConfigurationError(f"Config file {path} is not valid JSON: {error}") from error
    if not isinstance(document, dict):
        raise ConfigurationError(f"Config file {path} must hold a JSON object.")
    log.debug("Loaded config file %s", path)
    return _flatten(document)


def _native(value):
    if hasattr(value, "item"):
        return value.item()
    raise TypeError(f"{type(value).__name__} is not JSON serializable")


def dumps(document):
    return json.dumps(document, indent=2, sort_keys=True, default=_native)


def write_json(document, path):
    Path(path).write_text(dumps(document) + "\n", encoding="utf8")
    return path
