"""
Options, error mapping and output shared by the optimal_designs management commands.
"""
import logging
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from optimal_designs.config import RunConfig, dumps, write_json
from optimal_designs.criteria import CRITERION_NAMES
from optimal_designs.exceptions import (
    ConfigurationError,
    DesignFileError,
    DomainError,
    InfeasibleDesignError,
    MissingReferenceError,
    ModelSpecificationError,
    SingularMatrixError,
)

EXIT_CONFIGURATION = 2
EXIT_INFEASIBLE = 3
EXIT_IO = 4

# First match wins.
EXIT_CODES = (
    (DesignFileError, EXIT_IO),
    (OSError, EXIT_IO),
    (InfeasibleDesignError, EXIT_INFEASIBLE),
    (SingularMatrixError, EXIT_INFEASIBLE),
    (ConfigurationError, EXIT_CONFIGURATION),
    (ModelSpecificationError, EXIT_CONFIGURATION),
    (MissingReferenceError, EXIT_CONFIGURATION),
    (DomainError, EXIT_CONFIGURATION),
)

VERBOSITY_LEVELS = {0: logging.ERROR, 1: logging.WARNING, 2: logging.INFO, 3: logging.DEBUG}

CONFIG_OPTIONS = (
    "model", "criterion", "alpha", "kappa", "weights", "test_df_convention", "f_exponent", "n",
    "restarts", "max_passes", "seed", "workers", "p_missing", "reps", "design", "out", "output_format",
)


def exit_code(error):
    for error_class, code in EXIT_CODES:
        if isinstance(error, error_class):
            return code
    return 1


def float_list(value):
    """
    Parse ``"0.8,0,0.2"`` into a tuple of floats.
    """
    try:
        return tuple(float(item) for item in value.split(","))
    except ValueError as error:
        raise ConfigurationError(f"Expected comma separated numbers, got {value!r}.") from error


def name_list(value):
    return [item.strip() for item in value.split(",") if item.strip()]


class DesignCommand(BaseCommand):
    """
    Base class resolving a ``RunConfig`` from ``--config`` and flags before running the command.
    """

    command_name = None
    command_options = ()

    def add_arguments(self, parser):
        parser.add_argument("--config", help="JSON config file; flags override its values.")
        parser.add_argument("--model", help="Builtin model M1..M4 or a JSON model file.")
        parser.add_argument(
            "--criterion",
            help=f"One of {', '.join(CRITERION_NAMES)} or Compound (with --kappa).",
        )
        parser.add_argument("--alpha", type=float, help="Level of the F quantiles of DP and AP.")
        parser.add_argument("--kappa", type=float_list, help="Compound weights k1,k2,k3 summing to 1.")
        parser.add_argument("--weights", type=float_list, help="A and AP parameter weights, one per term.")
        parser.add_argument(
            "--test-df-convention",
            choices=("exclude_intercept", "include_intercept"),
            help="Numerator df of the F quantile in DP.",
        )
        parser.add_argument("--f-exponent", choices=("q", "p"), help="Power of the F quantile in DP.")
        parser.add_argument("--n", type=int, help="Number of runs.")
        parser.add_argument("--restarts", type=int, help="Random starts of the exchange search.")
        parser.add_argument("--max-passes", type=int, help="Exchange passes per restart.")
        parser.add_argument("--seed", type=int, help="Seed of every random stream.")
        parser.add_argument("--workers", type=int, help="Processes sharing the search restarts.")
        parser.add_argument("--p-missing", type=float, help="Probability that a run is missing.")
        parser.add_argument("--reps", type=int, help="Monte Carlo draws of the breakdown probability.")
        parser.add_argument("--design", help="Design file (CSV or JSON).")
        parser.add_argument("--out", help="Output directory.")
        parser.add_argument("--format", dest="output_format", choices=("json", "csv"), help="Design file format.")
        self.add_command_arguments(parser)

    def add_command_arguments(self, parser):
        """
        Hook for command specific options; their names go in ``command_options``.
        """

    def handle(self, *args, **options):
        logging.getLogger("optimal_designs").setLevel(VERBOSITY_LEVELS.get(options["verbosity"], logging.DEBUG))
        try:
            flags = {name: options.get(name) for name in CONFIG_OPTIONS + tuple(self.command_options)}
            config = RunConfig.from_sources(self.command_name, options.get("config"), **flags)
            self.run(config, **{key: value for key, value in options.items() if key != "config"})
        except CommandError:
            raise
        except tuple(error_class for error_class, _ in EXIT_CODES) as error:
            raise CommandError(str(error), returncode=exit_code(error)) from error

    def run(self, config, **options):
        raise NotImplementedError

    def output_dir(self, config):
        if not config.out:
            return None
        directory = Path(config.out)
        directory.mkdir(parents=True, exist_ok=True)
        return directory

    def emit(self, config, result):
        """
        Write the result envelope to ``<out>/<command>.json``, or to stdout without ``--out``.
        """
        document = config.envelope(result)
        directory = self.output_dir(config)
        if directory is None:
            self.stdout.write(dumps(document))
            return document
        path = write_json(document, directory / f"{self.command_name}.json")
        self.stdout.write(f"Wrote {path}")
        return document
