"""
Pipeline steps filling the robustness report of a design.

Every step receives ``design``, ``model``, ``report`` and ``context`` and
returns the updated report.
"""
import logging

from openedx_filters import PipelineStep

from optimal_designs import robustness
from optimal_designs.audit.filters import RobustnessAuditRequested
from optimal_designs.design import info_matrix
from optimal_designs.exceptions import MissingReferenceError, SingularDesignError
from optimal_designs.linalg import rank
from optimal_designs.model import common_submodel

log = logging.getLogger(__name__)


class StopSingularDesignAudit(PipelineStep):
    """
    Stop the audit of designs that cannot estimate the model at all.

    Example usage:

    Add the following configurations to your settings file:

        OPEN_EDX_FILTERS_CONFIG = {
            "optimal_designs.robustness.audit.requested.v1": {
                "fail_silently": False,
                "pipeline": [
                    "optimal_designs.audit.pipeline.StopSingularDesignAudit",
                    "optimal_designs.audit.pipeline.BreakdownNumberStep",
                ]
            }
        }
    """

    def run_filter(self, design, model, report, context):  # pylint: disable=arguments-differ
        if rank(info_matrix(design, model)) < model.p:
            raise RobustnessAuditRequested.PreventAudit(
                f"The design is singular under model {model.name}; nothing to audit."
            )
        return {"report": report}


class BreakdownNumberStep(PipelineStep):
    """
    Fill both breakdown numbers by exhaustive subset scan.

    Example usage:

    Add the following configurations to your settings file:

        OPEN_EDX_FILTERS_CONFIG = {
            "optimal_designs.robustness.audit.requested.v1": {
                "fail_silently": False,
                "pipeline": [
                    "optimal_designs.audit.pipeline.BreakdownNumberStep"
                ]
            }
        }
    """

    def run_filter(self, design, model, report, context):  # pylint: disable=arguments-differ
        exists = robustness.breakdown_number(design, model, robustness.BreakdownSemantics.EXISTS_MIN)
        report.bdn_exists = exists
        report.bdn_guaranteed = max(exists - 1, 0)
        return {"report": report}


class BreakdownProbabilityStep(PipelineStep):
    """
    Fill the Monte Carlo breakdown probability and, if requested, its exact value.

    Example usage:

    Add the following configurations to your settings file:

        OPEN_EDX_FILTERS_CONFIG = {
            "optimal_designs.robustness.audit.requested.v1": {
                "fail_silently": False,
                "pipeline": [
                    "optimal_designs.audit.pipeline.BreakdownProbabilityStep"
                ]
            }
        }
    """

    def run_filter(self, design, model, report, context):  # pylint: disable=arguments-differ
        estimate, stderr = robustness.breakdown_probability(
            design, model, context.p_missing, context.reps, context.seed, context.chunk_size,
        )
        report.bdp_estimate, report.bdp_mc_stderr = estimate, stderr
        if context.exact_bdp:
            report.bdp_exact = robustness.exact_breakdown_probability(design, model, context.p_missing)
        return {"report": report}


class LeverageVarianceStep(PipelineStep):
    """
    Fill the variance of the leverages; singular designs get a diagnostic instead.

    Example usage:

    Add the following configurations to your settings file:

        OPEN_EDX_FILTERS_CONFIG = {
            "optimal_designs.robustness.audit.requested.v1": {
                "fail_silently": False,
                "pipeline": [
                    "optimal_designs.audit.pipeline.LeverageVarianceStep"
                ]
            }
        }
    """

    def run_filter(self, design, model, report, context):  # pylint: disable=arguments-differ
        try:
            report.sigma2_v = robustness.leverage_variance(design, model)
        except SingularDesignError as error:
            log.warning("Leverage variance skipped: %s", error)
            report.diagnostics["sigma2_v"] = str(error)
        return {"report": report}


class ModelChangeStep(PipelineStep):
    """
    Fill model change robustness for every submodel listed in the context.

    Example usage:

    Add the following configurations to your settings file:

        OPEN_EDX_FILTERS_CONFIG = {
            "optimal_designs.robustness.audit.requested.v1": {
                "fail_silently": False,
                "pipeline": [
                    "optimal_designs.audit.pipeline.ModelChangeStep"
                ]
            }
        }
    """

    def run_filter(self, design, model, report, context):  # pylint: disable=arguments-differ
        config = context.criterion
        row = report.psi2.setdefault(config.label, {})
        for submodel in context.submodels:
            shared = common_submodel(model, submodel)
            try:
                reference = context.optimum(shared, config, design.n)
                references = context.references(shared, config, design.n)
            except MissingReferenceError as error:
                report.diagnostics[f"psi2:{shared.name}"] = str(error)
                continue
            row[shared.name] = robustness.psi2(config, design, model, shared, reference, references)
        return {"report": report}


class CriterionChangeStep(PipelineStep):
    """
    Fill criterion change robustness for every criterion named in the context.

    Example usage:

    Add the following configurations to your settings file:

        OPEN_EDX_FILTERS_CONFIG = {
            "optimal_designs.robustness.audit.requested.v1": {
                "fail_silently": False,
                "pipeline": [
                    "optimal_designs.audit.pipeline.CriterionChangeStep"
                ]
            }
        }
    """

    def run_filter(self, design, model, report, context):  # pylint: disable=arguments-differ
        for name in context.criteria:
            config = context.named(name)
            try:
                reference = context.optimum(model, config, design.n)
                references = context.references(model, config, design.n)
            except MissingReferenceError as error:
                report.diagnostics[f"psi3:{config.label}"] = str(error)
                continue
            report.psi3[config.label] = robustness.psi3(design, reference, config, model, references)
        return {"report": report}
