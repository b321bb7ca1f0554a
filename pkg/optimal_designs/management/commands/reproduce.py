"""
Regenerate the comparison tables against the published values.

    ./manage.py reproduce pedf --restarts 200 --out tables/
"""
from optimal_designs import published
from optimal_designs.management.base import DesignCommand
from optimal_designs.reproduction import TABLES, DesignCatalogue, build_table, render, status_counts


class Command(DesignCommand):
    help = "Compute the design, missing-observation and efficiency tables next to the published ones."
    command_name = "reproduce"
    command_options = ("tables", "p_missing_text", "exact_bdp")

    def add_command_arguments(self, parser):
        parser.add_argument(
            "tables",
            nargs="*",
            default="all",
            choices=TABLES + ("all",),
            help="Tables to build; all by default.",
        )
        parser.add_argument(
            "--p-missing-text",
            action="store_true",
            default=None,
            help="Use 0.40 for every model instead of the table caption's 0.40 / 0.20.",
        )
        parser.add_argument(
            "--exact-bdp",
            action="store_true",
            default=None,
            help="Add the exact breakdown probability to the missing table.",
        )

    def run(self, config, **options):
        requested = [config.tables] if isinstance(config.tables, str) else config.tables
        names = [name for name in requested if name != "all"] or list(TABLES)
        if config.p_missing is not None:
            p_missing = {"default": float(config.p_missing)}
        elif config.p_missing_text:
            p_missing = published.P_MISSING_TEXT
        else:
            p_missing = published.P_MISSING_CAPTION
        catalogue = DesignCatalogue(
            config.search_config(),
            alpha=config.alpha,
            test_df_convention=config.test_df_convention,
            f_exponent=config.f_exponent,
        )
        directory = self.output_dir(config)
        summary = {}
        for name in names:
            table = build_table(name, catalogue, config.reps, config.seed, p_missing, config.exact_bdp)
            text = render(table)
            self.stdout.write(f"== {name}\n{text}\n")
            if directory is not None:
                table.to_csv(directory / f"{name}.csv", index=False, lineterminator="\n")
                (directory / f"{name}.txt").write_text(text + "\n", encoding="utf8")
            summary[name] = status_counts(table)
        self.emit(config, {"tables": summary})
