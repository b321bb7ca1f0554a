"""
Filter definition of the robustness audit.
"""
from openedx_filters.exceptions import OpenEdxFilterException
from openedx_filters.tooling import OpenEdxPublicFilter


class RobustnessAuditRequested(OpenEdxPublicFilter):
    """
    Custom class used to fill a robustness report through the configured pipeline steps.

    Example usage:

    Add the following configurations to your settings file:

        OPEN_EDX_FILTERS_CONFIG = {
            "optimal_designs.robustness.audit.requested.v1": {
                "fail_silently": False,
                "pipeline": [
                    "optimal_designs.audit.pipeline.BreakdownNumberStep",
                    "optimal_designs.audit.pipeline.BreakdownProbabilityStep",
                ]
            }
        }
    """

    filter_type = "optimal_designs.robustness.audit.requested.v1"

    class PreventAudit(OpenEdxFilterException):
        """
        Custom class used to stop the robustness audit.
        """

    @classmethod
    def run_filter(cls, design, model, report, context):  # pylint: disable=arguments-differ
        """
        Execute the filter with the signature specified.

        Arguments:
            design (Design): the audited design.
            model (ModelSpec): model the design is audited under.
            report (RobustnessReport): report the steps fill in.
            context (AuditContext): what to audit and reference optima.
        """
        data = super().run_pipeline(design=design, model=model, report=report, context=context)
        return data.get("report")
