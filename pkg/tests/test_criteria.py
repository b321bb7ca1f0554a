"""
Tests for the `optimal_designs` criteria module.
"""
import numpy as np
from django.test import SimpleTestCase

from optimal_designs import criteria
from optimal_designs.criteria import (
    CompoundReferences,
    Criterion,
    CriterionConfig,
    CriterionKind,
    compound_components,
    criterion_value,
    efficiency,
    evaluate,
    phi_A,
    phi_AP,
    phi_compound,
    phi_D,
    phi_DP,
    scaled_display,
)
from optimal_designs.design import Design
from optimal_designs.exceptions import ConfigurationError, MissingReferenceError
from optimal_designs.fdist import f_quantile
from optimal_designs.model import builtin_model
from test_utils import full_factorial, grid_candidates, half_fraction, published_design


class CriterionConfigTestCase(SimpleTestCase):

    def test_named_compounds(self):
        """
        Test that C1 and C2 carry their kappa weights.
        """
        self.assertEqual(CriterionConfig.named("C1").kappa, (0.8, 0.0, 0.2))
        self.assertEqual(CriterionConfig.named("c2").kappa, (0.0, 0.8, 0.2))
        self.assertIs(CriterionConfig.named("dp").kind, CriterionKind.DP)

    def test_invalid_configs(self):
        """
        Test that bad names, alphas and kappas are refused.
        """
        with self.assertRaises(ConfigurationError):
            CriterionConfig.named("E")
        with self.assertRaises(ConfigurationError):
            CriterionConfig(CriterionKind.D, alpha=1.5)
        with self.assertRaises(ConfigurationError):
            CriterionConfig(CriterionKind.COMPOUND, kappa=(0.5, 0.5, 0.5))
        with self.assertRaises(ConfigurationError):
            CriterionConfig(CriterionKind.DP, kappa=(1.0, 0.0, 0.0))

    def test_numerator_df(self):
        """
        Test both numerator df conventions.
        """
        self.assertEqual(criteria.test_df(4), 3)
        self.assertEqual(criteria.test_df(1), 1)
        self.assertEqual(criteria.test_df(4, criteria.TestDfConvention.INCLUDE_INTERCEPT), 4)


class PublishedValuesTestCase(SimpleTestCase):
    """
    Display values of designs whose information matrix is 16 times the identity.
    """

    def setUp(self):
        super().setUp()
        self.m1 = builtin_model("M1")
        self.m3 = builtin_model("M3")

    def display(self, kind, design, model):
        config = CriterionConfig(kind)
        return evaluate(design, model, config).scaled_value

    def test_standard_values(self):
        """
        Test D and A of the replicated factorial under M1 and M3.
        """
        design = full_factorial(2)

        self.assertAlmostEqual(phi_D(design, self.m1), 65536.0, places=6)
        self.assertAlmostEqual(phi_A(design, self.m1), 4.0, places=9)
        for model in (self.m1, self.m3):
            self.assertAlmostEqual(self.display(CriterionKind.D, design, model), 16.0, places=6)
            self.assertAlmostEqual(self.display(CriterionKind.A, design, model), 16.0, places=6)

    def test_modified_values(self):
        """
        Test DP and AP of the M1 half fraction and the M3 factorial.
        """
        self.assertAlmostEqual(self.display(CriterionKind.DP, half_fraction(4), self.m1), 4.58, delta=0.01)
        self.assertAlmostEqual(self.display(CriterionKind.AP, half_fraction(4), self.m1), 3.37, delta=0.01)
        self.assertAlmostEqual(self.display(CriterionKind.DP, full_factorial(2), self.m3), 4.47, delta=0.01)
        self.assertAlmostEqual(self.display(CriterionKind.AP, full_factorial(2), self.m3), 3.01, delta=0.01)

    def test_raw_dp(self):
        """
        Test that raw DP divides the determinant by the q-th power of the F quantile.
        """
        expected = 65536.0 / f_quantile(0.95, 3, 12) ** 3

        self.assertAlmostEqual(phi_DP(half_fraction(4), self.m1) / expected, 1.0, places=12)
        self.assertAlmostEqual(
            phi_DP(half_fraction(4), self.m1, f_exponent="p") / (65536.0 / f_quantile(0.95, 3, 12) ** 4),
            1.0,
            places=12,
        )

    def test_no_pure_error(self):
        """
        Test that modified criteria score zero and display as None without pure error.
        """
        design = full_factorial(1)

        self.assertEqual(phi_DP(design, self.m1), 0.0)
        self.assertEqual(phi_AP(design, self.m1), 0.0)
        self.assertIsNone(scaled_display(CriterionKind.DP, 0.0, 4, 0))
        self.assertGreater(phi_D(design, self.m1), 0.0)

    def test_singular_design(self):
        """
        Test that a design that cannot estimate the model scores zero everywhere.
        """
        design = Design(grid_candidates(), (26,) * 6)

        for kind in (CriterionKind.D, CriterionKind.A, CriterionKind.DP, CriterionKind.AP):
            self.assertEqual(criterion_value(design, self.m1, CriterionConfig(kind)), 0.0)
        self.assertFalse(evaluate(design, self.m1, CriterionConfig(CriterionKind.D)).estimable)


class EfficiencyTestCase(SimpleTestCase):

    def setUp(self):
        super().setUp()
        self.m1 = builtin_model("M1")
        self.dp = CriterionConfig(CriterionKind.DP)

    def test_factorial_against_half_fraction(self):
        """
        Test the DP efficiency of the replicated factorial, the F quantile ratio to the 3/4 power.
        """
        expected = (f_quantile(0.95, 3, 12) / f_quantile(0.95, 3, 8)) ** 0.75

        value = efficiency(full_factorial(2), self.m1, self.dp, half_fraction(4))

        self.assertAlmostEqual(value, expected, places=9)
        self.assertAlmostEqual(value, 0.893, delta=0.005)

    def test_not_available(self):
        """
        Test that a design without pure error has no DP efficiency but a zero D efficiency.
        """
        self.assertIsNone(efficiency(full_factorial(1), self.m1, self.dp, half_fraction(4)))
        singular = Design(grid_candidates(), (26,) * 4)
        self.assertEqual(efficiency(singular, self.m1, CriterionConfig(CriterionKind.D), half_fraction(4)), 0.0)

    def test_missing_reference(self):
        """
        Test that efficiencies need a reference design with a positive value.
        """
        with self.assertRaises(MissingReferenceError):
            efficiency(half_fraction(4), self.m1, self.dp, None)
        with self.assertRaises(MissingReferenceError):
            efficiency(half_fraction(4), self.m1, self.dp, full_factorial(1))


class CompoundTestCase(SimpleTestCase):

    def setUp(self):
        super().setUp()
        self.m1 = builtin_model("M1")
        self.references = CompoundReferences(dp=half_fraction(4), ap=half_fraction(4))

    def test_degenerate_weights(self):
        """
        Test that kappa = (1, 0, 0) reduces the compound criterion to the DP efficiency.
        """
        config = CriterionConfig(CriterionKind.COMPOUND, kappa=(1.0, 0.0, 0.0))

        value = phi_compound(full_factorial(2), self.m1, config, self.references)

        self.assertAlmostEqual(
            value, efficiency(full_factorial(2), self.m1, CriterionConfig(CriterionKind.DP), half_fraction(4)),
        )

    def test_components(self):
        """
        Test the components of C1 and that zero weights are skipped.
        """
        components = compound_components(full_factorial(2), self.m1, CriterionConfig.named("C1"), self.references)

        self.assertEqual(sorted(components), ["E_DF", "E_DP"])
        self.assertEqual(components["E_DF"], 0.5)

    def test_zero_component(self):
        """
        Test that a design without pure error scores zero under a compound criterion.
        """
        self.assertEqual(phi_compound(full_factorial(1), self.m1, CriterionConfig.named("C2"), self.references), 0.0)


class BatchedValuesTestCase(SimpleTestCase):
    """
    The batched evaluator agrees with the scalar one.
    """

    def test_values_match_scalar_path(self):
        """
        Test every criterion on the published designs of M2.
        """
        model = builtin_model("M2")
        candidates = grid_candidates()
        designs = [published_design("M2", name, candidates) for name in ("D", "A", "DP", "AP", "C1", "C2")]
        designs.append(Design(candidates, (26,) * 16))
        references = CompoundReferences(dp=designs[2], ap=designs[3])
        counts = np.stack([design.counts for design in designs])

        for name in ("D", "A", "DP", "AP", "C1", "C2"):
            criterion = Criterion(model, candidates, CriterionConfig.named(name), references)
            expected = [criterion(design) for design in designs]
            np.testing.assert_allclose(criterion.values(counts), expected, rtol=1e-8, atol=1e-300)

    def test_compound_needs_references(self):
        """
        Test that a compound criterion cannot be bound without its reference optima.
        """
        with self.assertRaises(MissingReferenceError):
            Criterion(builtin_model("M1"), grid_candidates(), CriterionConfig.named("C1"))
