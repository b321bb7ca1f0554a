"""
Computed-versus-published comparison tables for the builtin models.

Every table is a ``pandas.DataFrame`` with one row per compared cell and a
``status`` column:

    match        agrees to the published rounding
    tolerance    agrees within the wider tolerance of the measure
    discrepancy  known disagreement that is reported, not asserted
    mismatch     disagrees
    info         no published counterpart to compare against
"""
import logging

import pandas as pd

from optimal_designs import published, robustness
from optimal_designs.criteria import CompoundReferences, CriterionConfig, CriterionKind, evaluate
from optimal_designs.design import pure_error_df
from optimal_designs.exceptions import SingularDesignError
from optimal_designs.model import builtin_model, common_submodel
from optimal_designs.search import optimize

log = logging.getLogger(__name__)

MATCH = "match"
TOLERANCE = "tolerance"
DISCREPANCY = "discrepancy"
MISMATCH = "mismatch"
INFO = "info"

TABLES = ("pedf", "designs", "missing", "psi2", "psi3")


def cell_status(computed, reference, exact=0.0005, tolerance=0.005):
    """
    Status of one numeric cell; ``None`` on both sides (not evaluable) is a match.
    """
    if computed is None or reference is None:
        return MATCH if computed is None and reference is None else MISMATCH
    difference = abs(computed - reference)
    if difference <= exact:
        return MATCH
    if difference <= tolerance:
        return TOLERANCE
    return MISMATCH


def _rounded(value, digits=3):
    return None if value is None else round(float(value), digits)


def known(status, *cells):
    """
    ``status``, or a discrepancy for a mismatch touching an unreproduced ``(criterion, model)`` cell.
    """
    if status == MISMATCH and any(cell in published.UNREPRODUCED for cell in cells):
        return DISCREPANCY
    return status


def pedf_status(model_name, criterion_name, computed):
    expected = published.pedf(model_name, criterion_name)
    if computed == expected:
        return MATCH
    if published.PEDF_OF_DESIGNS.get((criterion_name, model_name)) == computed:
        return DISCREPANCY
    return known(MISMATCH, (criterion_name, model_name))


class DesignCatalogue:
    """
    Optimal designs of every builtin model and named criterion, searched once and memoized.

    Compound criteria reuse the catalogue's DP and AP optima as references.
    """

    def __init__(self, search_config, **criterion_options):
        self.search = search_config
        self.criterion_options = criterion_options
        self._results = {}

    def config(self, criterion_name) -> CriterionConfig:
        return CriterionConfig.named(criterion_name, **self.criterion_options)

    def references(self, model_name, config):
        if config.kind is not CriterionKind.COMPOUND:
            return CompoundReferences()
        found = {}
        for position, kind in ((0, "DP"), (1, "AP")):
            if config.kappa[position] > 0:
                found[kind.lower()] = self.optimum(model_name, kind).best_design
        return CompoundReferences(**found)

    def optimum(self, model_name, criterion_name):
        """
        Memoized ``SearchResult`` for one model and named criterion.
        """
        key = (model_name, criterion_name)
        if key not in self._results:
            config = self.config(criterion_name)
            log.info("Searching %s-optimal design for %s", criterion_name, model_name)
            self._results[key] = optimize(
                builtin_model(model_name), config, self.search, self.references(model_name, config),
            )
        return self._results[key]

    def design(self, model_name, criterion_name):
        return self.optimum(model_name, criterion_name).best_design


def pedf_table(catalogue: DesignCatalogue, models=published.MODELS):
    rows = []
    for criterion_name in published.CRITERIA:
        for model_name in models:
            computed = catalogue.optimum(model_name, criterion_name).pedf
            expected = published.pedf(model_name, criterion_name)
            rows.append({
                "criterion": criterion_name,
                "model": model_name,
                "computed": computed,
                "published": expected,
                "status": pedf_status(model_name, criterion_name, computed),
            })
    return pd.DataFrame(rows)


def designs_table(catalogue: DesignCatalogue, models=published.MODELS):
    """
    Display values of the searched optima next to the published values and published designs.

    Compound values are printed on an unstated scale in the published tables
    and are marked as a discrepancy.
    """
    rows = []
    for model_name in models:
        model = builtin_model(model_name)
        for criterion_name in published.CRITERIA:
            result = catalogue.optimum(model_name, criterion_name)
            config = result.criterion
            design = published.published_design(model_name, criterion_name, result.best_design.candidates)
            own = evaluate(design, model, config, catalogue.references(model_name, config))
            reference = published.CRITERION_VALUES[model_name][criterion_name]
            if config.kind is CriterionKind.COMPOUND:
                status = DISCREPANCY
            else:
                status = known(
                    cell_status(result.scaled_value, reference, exact=0.005, tolerance=0.02),
                    (criterion_name, model_name),
                )
            rows.append({
                "model": model_name,
                "criterion": criterion_name,
                "computed": _rounded(result.scaled_value, 4),
                "published": reference,
                "published_design": _rounded(own.scaled_value, 4),
                "pedf": result.pedf,
                "restarts_hitting_best": result.restarts_hitting_best,
                "status": status,
            })
    return pd.DataFrame(rows)


def missing_table(catalogue: DesignCatalogue, reps, seed, p_missing=None, exact=False):
    """
    Breakdown numbers, breakdown probabilities and leverage variances of every optimum.

    Published breakdown numbers are compared against both semantics; an
    agreement with neither is a known discrepancy. Published breakdown
    probabilities come from far fewer draws and only count as a tolerance match.
    """
    p_missing = p_missing or published.P_MISSING_CAPTION
    rows = []
    for model_name in published.MODELS:
        model = builtin_model(model_name)
        probability = p_missing.get(model_name, p_missing["default"])
        for criterion_name in published.CRITERIA:
            design = catalogue.design(model_name, criterion_name)
            bdp, bdn, sigma2 = published.MISSING[model_name][criterion_name]
            cell = (criterion_name, model_name)
            exists = robustness.breakdown_number(design, model, robustness.BreakdownSemantics.EXISTS_MIN)
            guaranteed = max(exists - 1, 0)
            estimate, stderr = robustness.breakdown_probability(design, model, probability, reps, seed)
            try:
                leverage = robustness.leverage_variance(design, model)
            except SingularDesignError:
                leverage = None
            row = {
                "model": model_name,
                "criterion": criterion_name,
                "p_missing": probability,
                "bdp": round(estimate, 4),
                "bdp_stderr": round(stderr, 4),
                "bdp_published": bdp,
                "bdp_status": known(cell_status(estimate, bdp, exact=0.0005, tolerance=0.01), cell),
                "bdn_exists": exists,
                "bdn_guaranteed": guaranteed,
                "bdn_published": bdn,
                "bdn_status": MATCH if bdn in (exists, guaranteed) else DISCREPANCY,
                "sigma2_v": _rounded(leverage, 4),
                "sigma2_v_published": sigma2,
                "sigma2_v_status": known(cell_status(leverage, sigma2), cell),
            }
            if exact:
                row["bdp_exact"] = round(robustness.exact_breakdown_probability(design, model, probability), 4)
            rows.append(row)
    return pd.DataFrame(rows)


def psi2_table(catalogue: DesignCatalogue):
    rows = []
    for (fitted_name, evaluated_name), expected in published.MODEL_CHANGE.items():
        fitted = builtin_model(fitted_name)
        shared = common_submodel(fitted, builtin_model(evaluated_name))
        for criterion_name in published.CRITERIA:
            config = catalogue.config(criterion_name)
            value = robustness.psi2(
                config,
                catalogue.design(fitted_name, criterion_name),
                fitted,
                shared,
                catalogue.design(shared.name, criterion_name),
                catalogue.references(shared.name, config),
            )
            rows.append({
                "fitted": fitted_name,
                "evaluated": evaluated_name,
                "criterion": criterion_name,
                "computed": _rounded(value),
                "published": expected[criterion_name],
                "status": known(
                    cell_status(value, expected[criterion_name]),
                    (criterion_name, fitted_name),
                    (criterion_name, shared.name),
                ),
            })
    return pd.DataFrame(rows)


def psi3_table(catalogue: DesignCatalogue, models=("M2", "M3", "M4")):
    rows = []
    for criterion_name in published.CRITERIA:
        for model_name in models:
            model = builtin_model(model_name)
            design = catalogue.design(model_name, criterion_name)
            expected = published.CRITERION_CHANGE.get((criterion_name, model_name))
            for other_name in published.CRITERIA:
                if other_name == criterion_name:
                    continue
                config = catalogue.config(other_name)
                value = robustness.psi3(
                    design,
                    catalogue.design(model_name, other_name),
                    config,
                    model,
                    catalogue.references(model_name, config),
                )
                reference = expected.get(other_name) if expected else None
                rows.append({
                    "design": criterion_name,
                    "model": model_name,
                    "criterion": other_name,
                    "pedf": pure_error_df(design),
                    "computed": _rounded(value),
                    "published": reference,
                    "status": known(
                        cell_status(value, reference), (criterion_name, model_name), (other_name, model_name),
                    ) if expected else INFO,
                })
    return pd.DataFrame(rows)


def build_table(name, catalogue, reps, seed, p_missing=None, exact=False):
    """
    One of ``TABLES`` by name.
    """
    if name == "pedf":
        return pedf_table(catalogue)
    if name == "designs":
        return designs_table(catalogue)
    if name == "missing":
        return missing_table(catalogue, reps, seed, p_missing, exact)
    if name == "psi2":
        return psi2_table(catalogue)
    if name == "psi3":
        return psi3_table(catalogue)
    raise ValueError(f"Unknown table {name!r}; expected one of {', '.join(TABLES)}.")


def render(table):
    """
    Aligned plain text rendering of a comparison table.
    """
    return table.to_string(index=False, na_rep="NA")


def status_counts(table):
    """
    Number of cells per status over every ``*status`` column.
    """
    columns = [column for column in table.columns if column.endswith("status")]
    return pd.concat([table[column] for column in columns]).value_counts().to_dict()
