"""
Tests for the `optimal_designs` search module.
"""
import itertools

import numpy as np
from django.test import SimpleTestCase

from optimal_designs.criteria import Criterion, CriterionConfig
from optimal_designs.design import Design
from optimal_designs.exceptions import ConfigurationError, InfeasibleDesignError
from optimal_designs.model import builtin_model
from optimal_designs.search import (
    SearchConfig,
    best_swap,
    exchange_pass,
    optimize,
    random_start,
    run_restarts,
    swap_counts,
)
from test_utils import grid_candidates, two_level_candidates


def exhaustive_best(model, candidates, config, n):
    """
    Best value over every multiset of ``n`` candidate points.
    """
    counts = np.array([
        np.bincount(runs, minlength=len(candidates))
        for runs in itertools.combinations_with_replacement(range(len(candidates)), n)
    ])
    return float(Criterion(model, candidates, config).values(counts).max())


class SearchConfigTestCase(SimpleTestCase):

    def test_invalid_budget(self):
        """
        Test that non-positive run counts and budgets are refused.
        """
        with self.assertRaises(ConfigurationError):
            SearchConfig(n=0)
        with self.assertRaises(ConfigurationError):
            SearchConfig(n=8, restarts=0)
        with self.assertRaises(ConfigurationError):
            SearchConfig(n=8, seed=-1)

    def test_default_candidates(self):
        """
        Test that the 3-level grid is used when no candidate set is given.
        """
        self.assertEqual(len(SearchConfig(n=8).candidate_set(builtin_model("M1"))), 27)


class ExchangeTestCase(SimpleTestCase):

    def setUp(self):
        super().setUp()
        self.model = builtin_model("M2")
        self.candidates = grid_candidates()
        self.criterion = Criterion(self.model, self.candidates, CriterionConfig.named("D"))

    def test_too_few_runs(self):
        """
        Test that fewer runs than parameters is infeasible.
        """
        with self.assertRaises(InfeasibleDesignError):
            optimize(builtin_model("M1"), CriterionConfig.named("D"), SearchConfig(n=3, restarts=2))

    def test_random_start_is_nonsingular(self):
        """
        Test that starts are nonsingular n-run designs.
        """
        rng = np.random.default_rng([0, 0])

        design = random_start(SearchConfig(n=10), self.model, rng, self.candidates)

        self.assertEqual(design.n, 10)
        self.assertGreater(self.criterion(design), 0.0)

    def test_swap_counts(self):
        """
        Test that row i * N + c moves run i to candidate c.
        """
        design = Design(self.candidates, (0, 5, 5))

        stack = swap_counts(design)

        self.assertEqual(stack.shape, (3 * 27, 27))
        np.testing.assert_array_equal(stack.sum(axis=1), 3)
        np.testing.assert_array_equal(stack[1 * 27 + 26], Design(self.candidates, (0, 26, 5)).counts)

    def test_passes_never_decrease(self):
        """
        Test that every exchange pass keeps or improves the value.
        """
        design = random_start(SearchConfig(n=12), self.model, np.random.default_rng([3, 0]), self.candidates)
        values = [self.criterion(design)]
        improved = True
        while improved:
            design, improved = exchange_pass(design, self.criterion)
            values.append(self.criterion(design))

        self.assertTrue(all(later >= earlier for earlier, later in zip(values, values[1:])))
        self.assertGreater(len(values), 1)

    def test_same_seed_same_result(self):
        """
        Test that a seed reproduces the search exactly.
        """
        config = SearchConfig(n=10, restarts=4, seed=7)

        first = optimize(self.model, CriterionConfig.named("A"), config)
        second = optimize(self.model, CriterionConfig.named("A"), config)

        self.assertEqual(first.best_design.runs, second.best_design.runs)
        self.assertEqual(first.trace, second.trace)
        self.assertEqual(first.to_dict(), second.to_dict())

    def test_lockstep_matches_single_restarts(self):
        """
        Test that a batch of restarts ends where each restart ends on its own.
        """
        config = SearchConfig(n=10, seed=5)
        arguments = (self.model, CriterionConfig.named("D"), None, config, self.candidates)

        batch = run_restarts(range(4), *arguments)
        alone = [run_restarts(range(index, index + 1), *arguments)[0] for index in range(4)]

        self.assertEqual([design.runs for design, _ in batch], [design.runs for design, _ in alone])
        self.assertEqual([value for _, value in batch], [value for _, value in alone])

    def test_workers_do_not_change_the_result(self):
        """
        Test that spreading restart batches over processes keeps the result and trace.
        """
        model = builtin_model("M1")

        sequential = optimize(model, CriterionConfig.named("D"), SearchConfig(n=8, restarts=20, seed=2))
        parallel = optimize(model, CriterionConfig.named("D"), SearchConfig(n=8, restarts=20, seed=2, workers=2))

        self.assertEqual(sequential.best_design.runs, parallel.best_design.runs)
        self.assertEqual(sequential.trace, parallel.trace)


class TieBreakTestCase(SimpleTestCase):

    def test_near_equal_values_tie(self):
        """
        Test that values within rounding noise of the best go to the lowest index.
        """
        values = np.array([1.0, 3.0, 3.0 * (1.0 + 1e-15), 2.0])

        self.assertEqual(best_swap(values, 1.0), 1)
        self.assertIsNone(best_swap(np.array([1.0, 1.0]), 1.0))

    def test_mirrored_corners_tie(self):
        """
        Test that of two mirror image swaps the lowest run position and candidate win.

        Six corners and two centre points miss the corners 0 and 26; moving a
        centre point to either gives designs equal under a sign flip.
        """
        candidates = grid_candidates()
        criterion = Criterion(builtin_model("M1"), candidates, CriterionConfig.named("D"))
        design = Design(candidates, (2, 6, 8, 13, 13, 18, 20, 24))

        swapped, improved = exchange_pass(design, criterion)

        self.assertTrue(improved)
        self.assertEqual(swapped.runs, (2, 6, 8, 0, 13, 18, 20, 24))


class ExhaustiveOracleTestCase(SimpleTestCase):
    """
    On the 8-point 2-level set the search finds the exhaustive optimum.
    """

    def setUp(self):
        super().setUp()
        self.model = builtin_model("M1")
        self.candidates = two_level_candidates()

    def test_small_designs(self):
        """
        Test D and DP for 4, 5 and 6 runs.
        """
        for name in ("D", "DP"):
            config = CriterionConfig.named(name)
            for n in (4, 5, 6):
                best = exhaustive_best(self.model, self.candidates, config, n)
                search = SearchConfig(n=n, restarts=50, seed=1, candidates=self.candidates)
                if best == 0.0:
                    with self.assertRaises(InfeasibleDesignError):
                        optimize(self.model, config, search)
                    continue
                result = optimize(self.model, config, search)
                self.assertAlmostEqual(result.best_value / best, 1.0, places=9, msg=f"{name}, n={n}")

    def test_no_pure_error_with_p_runs(self):
        """
        Test that with n = p no design has pure error, so DP is infeasible.
        """
        self.assertEqual(exhaustive_best(self.model, self.candidates, CriterionConfig.named("DP"), 4), 0.0)


class BuiltinOptimaTestCase(SimpleTestCase):
    """
    16-run optima of the first order and interaction models.
    """

    def test_m1_d(self):
        """
        Test the D display value of the M1 optimum.
        """
        result = optimize(builtin_model("M1"), CriterionConfig.named("D"), SearchConfig(n=16, restarts=50))

        self.assertAlmostEqual(result.scaled_value, 16.0, delta=0.005)
        self.assertGreaterEqual(result.restarts_hitting_best, 1)
        self.assertEqual(result.best_design.runs, tuple(sorted(result.best_design.runs)))

    def test_m1_dp(self):
        """
        Test the DP display value and pedf of the M1 optimum.
        """
        result = optimize(builtin_model("M1"), CriterionConfig.named("DP"), SearchConfig(n=16, restarts=200))

        self.assertAlmostEqual(result.scaled_value, 4.58, delta=0.01)
        self.assertEqual(result.pedf, 12)

    def test_m3_d(self):
        """
        Test the D display value of the M3 optimum.
        """
        result = optimize(builtin_model("M3"), CriterionConfig.named("D"), SearchConfig(n=16, restarts=50))

        self.assertAlmostEqual(result.scaled_value, 16.0, delta=0.005)
