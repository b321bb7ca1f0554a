"""
Tests for the `optimal_designs` conf and config modules.
"""
import json
import tempfile
from pathlib import Path

from django.test import SimpleTestCase, override_settings

from optimal_designs.conf import default_p_missing, get_setting
from optimal_designs.config import RunConfig
from optimal_designs.criteria import CriterionKind
from optimal_designs.exceptions import ConfigurationError


class SettingsTestCase(SimpleTestCase):

    @override_settings(OPTIMAL_DESIGNS={"RESTARTS": 7})
    def test_override(self):
        """
        Test that the Django setting overrides a default and leaves the others.
        """
        self.assertEqual(get_setting("RESTARTS"), 7)
        self.assertEqual(get_setting("MAX_PASSES"), 50)

    def test_missing_probability(self):
        """
        Test the per-model missing probabilities.
        """
        self.assertEqual(default_p_missing("M1"), 0.40)
        self.assertEqual(default_p_missing("M3"), 0.20)

    def test_unknown_setting(self):
        """
        Test that unknown setting names raise.
        """
        with self.assertRaises(KeyError):
            get_setting("PASSES")


class RunConfigTestCase(SimpleTestCase):

    def write_config(self, directory, document):
        path = Path(directory) / "config.json"
        path.write_text(json.dumps(document))
        return str(path)

    def test_nested_file_and_flags(self):
        """
        Test that nested blocks flatten and flags win over the file.
        """
        document = {
            "model": "M3",
            "criterion": {"kind": "Compound", "alpha": 0.1, "kappa": [0.5, 0.3, 0.2]},
            "search": {"n": 12, "restarts": 9},
            "output": {"dir": "out", "format": "json"},
        }
        with tempfile.TemporaryDirectory() as directory:
            config = RunConfig.from_sources("search", self.write_config(directory, document), restarts=3, seed=None)

        self.assertEqual(config.model, "M3")
        self.assertEqual(config.n, 12)
        self.assertEqual(config.restarts, 3)
        self.assertEqual(config.output_format, "json")
        self.assertEqual(config.criterion_config().kind, CriterionKind.COMPOUND)
        self.assertEqual(config.criterion_config().kappa, (0.5, 0.3, 0.2))
        self.assertIsNone(config.criterion_config("DP").kappa)

    def test_defaults_from_settings(self):
        """
        Test that unset values come from the settings.
        """
        config = RunConfig.from_sources("search")

        self.assertEqual(config.n, 16)
        self.assertEqual(config.restarts, get_setting("RESTARTS"))
        self.assertEqual(config.missing_probability("M1"), 0.40)
        self.assertEqual(config.search_config().workers, 1)

    def test_workers(self):
        """
        Test that the worker count reaches the search config.
        """
        self.assertEqual(RunConfig.from_sources("search", workers=3).search_config().workers, 3)
        with self.assertRaises(ConfigurationError):
            RunConfig.from_sources("search", workers=0).search_config()

    def test_unknown_key(self):
        """
        Test that unknown config keys are refused.
        """
        with tempfile.TemporaryDirectory() as directory:
            path = self.write_config(directory, {"runs": 16})
            with self.assertRaises(ConfigurationError):
                RunConfig.from_sources("search", path)

    def test_invalid_file(self):
        """
        Test that missing and malformed config files are refused.
        """
        with self.assertRaises(ConfigurationError):
            RunConfig.from_sources("search", "no-such-config.json")

    def test_envelope(self):
        """
        Test that equal configs hash equally and the envelope carries the seed.
        """
        first = RunConfig.from_sources("search", seed=3)
        second = RunConfig.from_sources("search", seed=3)

        self.assertEqual(first.config_hash(), second.config_hash())
        self.assertNotEqual(first.config_hash(), RunConfig.from_sources("search", seed=4).config_hash())
        self.assertEqual(first.envelope({"x": 1})["seed"], 3)
