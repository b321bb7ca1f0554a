"""
Search an exact optimal design.

    ./manage.py search --model M1 --criterion DP --n 16 --seed 1 --out results/
"""
from optimal_designs.design import save_design
from optimal_designs.management.base import DesignCommand
from optimal_designs.search import optimize


class Command(DesignCommand):
    help = "Search an exact n-run design maximizing the configured criterion."
    command_name = "search"

    def run(self, config, **options):
        _, model, candidates = config.resolve_model()
        result = optimize(model, config.criterion_config(), config.search_config(candidates))
        document = result.to_dict()
        directory = self.output_dir(config)
        if directory is not None:
            path = save_design(result.best_design, directory / f"design.{config.output_format}")
            document["design_file"] = str(path)
        self.emit(config, document)
