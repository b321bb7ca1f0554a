"""
Tests for the `optimal_designs` management commands.
"""
import json
import tempfile
from io import StringIO
from pathlib import Path

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, override_settings

from optimal_designs.design import Design, save_design
from optimal_designs.management.base import EXIT_CONFIGURATION, EXIT_INFEASIBLE, EXIT_IO
from test_utils import full_factorial, grid_candidates, half_fraction, published_design


def run(*args):
    out = StringIO()
    call_command(*args, stdout=out)
    return out.getvalue()


class CommandTestCase(SimpleTestCase):

    def setUp(self):
        super().setUp()
        self.directory = tempfile.TemporaryDirectory()
        self.addCleanup(self.directory.cleanup)
        self.path = Path(self.directory.name)

    def design_file(self, design, name="design.csv"):
        return str(save_design(design, self.path / name))


class SearchCommandTestCase(CommandTestCase):

    def test_search_to_stdout(self):
        """
        Test that a search prints its result envelope and repeats bitwise.
        """
        args = ("search", "--model", "M1", "--criterion", "D", "--n", "8", "--restarts", "3", "--seed", "1")

        first = run(*args)
        second = run(*args)

        self.assertEqual(first, second)
        document = json.loads(first)
        self.assertEqual(document["command"], "search")
        self.assertEqual(document["seed"], 1)
        self.assertEqual(document["result"]["n"], 8)
        self.assertEqual(sum(row["reps"] for row in document["result"]["design"]), 8)

    def test_search_to_directory(self):
        """
        Test that --out writes the envelope and the design file.
        """
        run("search", "--model", "M1", "--n", "6", "--restarts", "2", "--out", str(self.path), "--format", "json")

        document = json.loads((self.path / "search.json").read_text())
        self.assertTrue((self.path / "design.json").exists())
        self.assertEqual(document["result"]["design_file"], str(self.path / "design.json"))

    def test_infeasible(self):
        """
        Test that fewer runs than parameters exits with the infeasible code.
        """
        with self.assertRaises(CommandError) as context:
            run("search", "--model", "M1", "--n", "3")

        self.assertEqual(context.exception.returncode, EXIT_INFEASIBLE)

    def test_unknown_model(self):
        """
        Test that an unknown model exits with the configuration code.
        """
        with self.assertRaises(CommandError) as context:
            run("search", "--model", "M9")

        self.assertEqual(context.exception.returncode, EXIT_CONFIGURATION)


class EvaluateCommandTestCase(CommandTestCase):

    def test_evaluate_with_reference(self):
        """
        Test that a supplied DP optimum yields the DP efficiency and serves as the C1 reference.
        """
        path = self.design_file(half_fraction(4))

        document = json.loads(run(
            "evaluate", "--model", "M1", "--design", path, "--reference", f"DP={path}", "--no-search",
        ))

        criteria = document["result"]["criteria"]
        self.assertEqual(document["result"]["pedf"], 12)
        self.assertAlmostEqual(criteria["DP"]["scaled_value"], 4.58, delta=0.01)
        self.assertAlmostEqual(criteria["DP"]["efficiency"], 1.0)
        self.assertAlmostEqual(criteria["C1"]["components"]["E_DP"], 1.0)
        self.assertIn("diagnostic", criteria["C2"])

    def test_evaluate_searched_design(self):
        """
        Test that evaluating a searched design gives the search's value bit for bit.
        """
        run("search", "--model", "M1", "--criterion", "A", "--n", "8", "--restarts", "3", "--out", str(self.path))
        searched = json.loads((self.path / "search.json").read_text())["result"]

        document = json.loads(run(
            "evaluate", "--model", "M1", "--criterion", "A", "--design", str(self.path / "design.csv"), "--no-search",
        ))

        self.assertEqual(document["result"]["criteria"]["A"]["raw_value"], searched["best_value"])

    def test_singular_design(self):
        """
        Test that a two-level design cannot estimate the quadratic model.
        """
        path = self.design_file(half_fraction(4))

        document = json.loads(run("evaluate", "--model", "M2", "--design", path, "--no-search"))

        self.assertFalse(document["result"]["estimable"])
        self.assertEqual(document["result"]["criteria"]["D"]["raw_value"], 0.0)

    def test_zero_scoring_reference(self):
        """
        Test that a D reference scoring zero leaves a diagnostic next to the D value.
        """
        path = self.design_file(full_factorial(2))
        reference = self.design_file(Design(grid_candidates(), (26,) * 6), name="reference.csv")

        document = json.loads(run(
            "evaluate", "--model", "M1", "--design", path, "--reference", f"D={reference}", "--no-search",
        ))

        result = document["result"]
        self.assertEqual(result["pedf"], 8)
        self.assertTrue(result["estimable"])
        self.assertIsNone(result["criteria"]["D"]["efficiency"])
        self.assertIn("diagnostic", result["criteria"]["D"])
        self.assertGreater(result["criteria"]["D"]["raw_value"], 0.0)

    def test_empty_design_file(self):
        """
        Test that a design file without runs exits with the I/O code.
        """
        path = self.path / "design.csv"
        path.write_text("x1,x2,x3,reps\n")

        with self.assertRaises(CommandError) as context:
            run("evaluate", "--model", "M1", "--design", str(path))

        self.assertEqual(context.exception.returncode, EXIT_IO)

    def test_missing_design_file(self):
        """
        Test that an unreadable design file exits with the I/O code.
        """
        with self.assertRaises(CommandError) as context:
            run("evaluate", "--model", "M1", "--design", str(self.path / "missing.csv"))

        self.assertEqual(context.exception.returncode, EXIT_IO)

    def test_design_required(self):
        """
        Test that evaluate without a design exits with the configuration code.
        """
        with self.assertRaises(CommandError) as context:
            run("evaluate", "--model", "M1")

        self.assertEqual(context.exception.returncode, EXIT_CONFIGURATION)


class RobustnessCommandTestCase(CommandTestCase):

    def test_robustness_report(self):
        """
        Test the report of the replicated factorial under M1.
        """
        path = self.design_file(published_design("M1", "D"))

        document = json.loads(run(
            "robustness", "--model", "M1", "--design", path, "--p-missing", "0.4", "--reps", "2000", "--exact-bdp",
        ))

        report = document["result"]
        self.assertEqual(report["bdn_exists"], 8)
        self.assertEqual(report["bdn_guaranteed"], 7)
        self.assertAlmostEqual(report["sigma2_v"], 0.0, delta=1e-12)
        self.assertLess(abs(report["bdp_estimate"] - report["bdp_exact"]), 0.01)
        self.assertEqual(report["p_missing"], 0.4)

    @override_settings(
        OPEN_EDX_FILTERS_CONFIG={
            "optimal_designs.robustness.audit.requested.v1": {
                "fail_silently": False,
                "pipeline": [
                    "optimal_designs.audit.pipeline.StopSingularDesignAudit",
                    "optimal_designs.audit.pipeline.BreakdownNumberStep",
                ]
            }
        }
    )
    def test_singular_design_stops_audit(self):
        """
        Test that a singular design exits with the infeasible code.
        """
        path = self.design_file(Design(grid_candidates(), (26,) * 6))

        with self.assertRaises(CommandError) as context:
            run("robustness", "--model", "M1", "--design", path)

        self.assertEqual(context.exception.returncode, EXIT_INFEASIBLE)


class ReproduceCommandTestCase(CommandTestCase):

    def test_reproduce_pedf(self):
        """
        Test that the pedf table is written next to its status summary.
        """
        output = run("reproduce", "pedf", "--restarts", "2", "--out", str(self.path))

        self.assertIn("== pedf", output)
        document = json.loads((self.path / "reproduce.json").read_text())
        self.assertEqual(sum(document["result"]["tables"]["pedf"].values()), 24)
        self.assertTrue((self.path / "pedf.csv").exists())
        self.assertTrue((self.path / "pedf.txt").exists())
