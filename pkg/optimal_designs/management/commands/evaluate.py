"""
Evaluate a design file under every named criterion.

    ./manage.py evaluate --model M3 --design design.csv --reference AP=ap.csv
"""
from optimal_designs.audit.context import AuditContext
from optimal_designs.criteria import CRITERION_NAMES, efficiency, evaluate
from optimal_designs.design import info_matrix, load_design, pure_error_df
from optimal_designs.exceptions import ConfigurationError, MissingReferenceError
from optimal_designs.linalg import logdet_spd
from optimal_designs.management.base import DesignCommand


def reference_option(value):
    name, separator, path = value.partition("=")
    if not separator or not path:
        raise ConfigurationError(f"Expected CRITERION=FILE, got {value!r}.")
    return name.strip().upper(), path.strip()


class Command(DesignCommand):
    help = "Report raw and display values, pedf and efficiencies of a design for all criteria."
    command_name = "evaluate"
    command_options = ("references",)

    def add_command_arguments(self, parser):
        parser.add_argument(
            "--reference",
            dest="reference_list",
            action="append",
            type=reference_option,
            metavar="CRITERION=FILE",
            help="Reference optimum for the efficiency under CRITERION; repeatable.",
        )
        parser.add_argument(
            "--no-search",
            action="store_true",
            help="Do not search compound reference optima that were not supplied.",
        )

    def run(self, config, **options):
        if not config.design:
            raise ConfigurationError("evaluate needs a design file (--design FILE).")
        _, model, candidates = config.resolve_model()
        design = load_design(config.design, candidates)
        references = dict(options.get("reference_list") or [])
        references.update({name.upper(): path for name, path in config.references.items()})
        context = AuditContext(
            criterion=config.criterion_config(),
            p_missing=config.missing_probability(model.name),
            reps=config.reps,
            seed=config.seed,
            search=None if options.get("no_search") else config.search_config(candidates, n=design.n),
        )
        loaded = {}
        for name, path in references.items():
            loaded[name] = load_design(path, candidates)
            context.remember(model, config.criterion_config(name), loaded[name])

        names = list(CRITERION_NAMES)
        if config.criterion.upper() not in names:
            names.append(config.criterion)
        rows = {}
        for name in names:
            criterion = config.criterion_config(name)
            try:
                compound = context.references(model, criterion, design.n)
                row = evaluate(design, model, criterion, compound).to_dict()
            except MissingReferenceError as error:
                rows[criterion.label] = {"raw_value": None, "scaled_value": None, "diagnostic": str(error)}
                continue
            if name.upper() in loaded:
                try:
                    row["efficiency"] = efficiency(design, model, criterion, loaded[name.upper()], compound)
                except MissingReferenceError as error:
                    row["efficiency"] = None
                    row["diagnostic"] = str(error)
            rows[criterion.label] = row

        self.emit(config, {
            "model": model.name,
            "n": design.n,
            "pedf": pure_error_df(design),
            "estimable": not logdet_spd(info_matrix(design, model)).is_singular,
            "criteria": rows,
        })
