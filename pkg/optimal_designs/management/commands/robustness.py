"""
Audit the robustness of a design through the configured audit pipeline.

    ./manage.py robustness --model M1 --design design.csv --p-missing 0.4 --criteria D,A,DP
"""
from django.core.management.base import CommandError

from optimal_designs.audit.context import AuditContext
from optimal_designs.audit.filters import RobustnessAuditRequested
from optimal_designs.conf import get_setting
from optimal_designs.design import load_design
from optimal_designs.exceptions import ConfigurationError
from optimal_designs.management.base import EXIT_INFEASIBLE, DesignCommand, name_list
from optimal_designs.model import load_model
from optimal_designs.robustness import RobustnessReport


class Command(DesignCommand):
    help = "Report breakdown numbers, breakdown probability, leverage variance and efficiency ratios."
    command_name = "robustness"
    command_options = ("submodels", "criteria", "exact_bdp")

    def add_command_arguments(self, parser):
        parser.add_argument("--submodels", type=name_list, help="Models to refit the design under, e.g. M1,M2.")
        parser.add_argument("--criteria", type=name_list, help="Criteria to rate the design under, e.g. D,A,DP.")
        parser.add_argument(
            "--exact-bdp",
            action="store_true",
            default=None,
            help="Also sum the breakdown probability over every missing pattern.",
        )

    def run(self, config, **options):
        if not config.design:
            raise ConfigurationError("robustness needs a design file (--design FILE).")
        _, model, candidates = config.resolve_model()
        design = load_design(config.design, candidates)
        p_missing = config.missing_probability(model.name)
        context = AuditContext(
            criterion=config.criterion_config(),
            p_missing=p_missing,
            reps=config.reps,
            seed=config.seed,
            search=config.search_config(candidates, n=design.n),
            submodels=[load_model(name)[1] for name in config.submodels],
            criteria=list(config.criteria),
            exact_bdp=config.exact_bdp,
            chunk_size=get_setting("MC_CHUNK_SIZE"),
        )
        report = RobustnessReport.for_design(design, model, p_missing, config.reps, config.seed)
        try:
            report = RobustnessAuditRequested.run_filter(design=design, model=model, report=report, context=context)
        except RobustnessAuditRequested.PreventAudit as error:
            raise CommandError(str(error), returncode=EXIT_INFEASIBLE) from error
        self.emit(config, report.to_dict())
