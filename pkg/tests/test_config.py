# tests/test_config.py
"""
Tests for settings loading, validators, helpers and table emitters.
"""

import json
import os
import tempfile
import unittest
from pathlib import Path
from unittest.mock import patch

import numpy as np

from src.core.errors import ConfigError, DomainError, LeakageError
from src.main.config import load_config
from src.utils import validators
from src.utils.helpers import parse_scalar, safe_load_json, safe_write_json
from src.utils.tables import read_table, write_matrix, write_table


@patch("src.main.config.load_dotenv")
class TestSettings(unittest.TestCase):

    def test_defaults(self, _dotenv):
        with patch.dict(os.environ, {}, clear=True):
            settings = load_config()
        self.assertEqual(settings["threads"], 1)
        self.assertEqual(settings["log_level"], "INFO")
        self.assertEqual(settings["output_dir"], "results")

    def test_environment_overrides(self, _dotenv):
        env = {"CATSIM_THREADS": "4", "CATSIM_OUTPUT_DIR": "/tmp/cats", "CATSIM_LOG_LEVEL": "debug"}
        with patch.dict(os.environ, env, clear=True):
            settings = load_config()
        self.assertEqual(settings["threads"], 4)
        self.assertEqual(settings["output_dir"], "/tmp/cats")
        self.assertEqual(settings["log_level"], "DEBUG")

    def test_non_integer_threads(self, _dotenv):
        with patch.dict(os.environ, {"CATSIM_THREADS": "many"}, clear=True):
            with self.assertRaises(ConfigError):
                load_config()

    def test_zero_threads_rejected_by_schema(self, _dotenv):
        with patch.dict(os.environ, {"CATSIM_THREADS": "0"}, clear=True):
            with self.assertRaises(ConfigError):
                load_config()

    def test_unknown_log_level_rejected(self, _dotenv):
        with patch.dict(os.environ, {"CATSIM_LOG_LEVEL": "chatty"}, clear=True):
            with self.assertRaises(ConfigError):
                load_config()

    def test_app_settings_are_layered_over_defaults(self, _dotenv):
        with tempfile.TemporaryDirectory() as tmp:
            user_file = Path(tmp) / "app_settings.json"
            user_file.write_text(json.dumps({"threads": 3}), encoding="utf-8")
            with patch("src.main.config.APP_SETTINGS_FILE", user_file):
                with patch.dict(os.environ, {}, clear=True):
                    settings = load_config()
        self.assertEqual(settings["threads"], 3)
        self.assertEqual(settings["log_level"], "INFO")


class TestValidators(unittest.TestCase):

    def test_ratio(self):
        self.assertTrue(validators.is_admissible_ratio(1.999))
        self.assertFalse(validators.is_admissible_ratio(-2.0))
        self.assertFalse(validators.is_admissible_ratio(float("nan")))
        self.assertFalse(validators.is_admissible_ratio("0.5"))
        with self.assertRaises(DomainError):
            validators.require_ratio(2.0)

    def test_dimension(self):
        self.assertTrue(validators.is_valid_dimension(2))
        self.assertFalse(validators.is_valid_dimension(1))
        self.assertFalse(validators.is_valid_dimension(True))
        self.assertFalse(validators.is_valid_dimension(10.0))
        with self.assertRaises(ConfigError):
            validators.require_dimension(0, "mech_dim")

    def test_grid(self):
        validators.require_grid({"x_min": -1.0, "x_max": 1.0, "x_points": 3}, "x")
        with self.assertRaises(ConfigError):
            validators.require_grid({"x_min": -1.0, "x_max": 1.0, "x_points": 1}, "x")

    def test_displacement_guard(self):
        # 3^2 + 6*3 + 10 = 37
        self.assertTrue(validators.fits_displacement(3.0, 37))
        self.assertFalse(validators.fits_displacement(3.0, 36))
        with self.assertRaises(LeakageError):
            validators.require_displacement_fits(3.0, 36, "alpha")


class TestHelpers(unittest.TestCase):

    def test_parse_scalar(self):
        self.assertEqual(parse_scalar("60"), 60)
        self.assertIsInstance(parse_scalar("60"), int)
        self.assertEqual(parse_scalar(" 1e5 "), 1.0e5)
        self.assertEqual(parse_scalar("-0.71"), -0.71)
        self.assertEqual(parse_scalar("+"), "+")
        self.assertEqual(parse_scalar("four"), "four")
        self.assertIsNone(parse_scalar("null"))

    def test_json_round_trip(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "nested" / "doc.json"
            self.assertTrue(safe_write_json(path, {"b": [1, 2.5], "a": "x"}))
            self.assertEqual(safe_load_json(path), {"a": "x", "b": [1, 2.5]})
            self.assertEqual(safe_load_json(Path(tmp) / "missing.json", {"d": 1}), {"d": 1})


class TestTables(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.dir = Path(self.tmp.name)

    def test_write_table_from_columns(self):
        path = write_table(self.dir / "t.csv", ["a", "b"], {"a": [0.0, 1.0], "b": [2.0, -3.5]})
        lines = path.read_text(encoding="utf-8").splitlines()
        self.assertEqual(lines[0], "a,b")
        self.assertEqual(lines[2], "1.00000000000e+00,-3.50000000000e+00")
        header, data = read_table(path)
        self.assertEqual(header, ["a", "b"])
        np.testing.assert_array_equal(data, [[0.0, 2.0], [1.0, -3.5]])

    def test_column_count_checked(self):
        with self.assertRaises(ValueError):
            write_table(self.dir / "t.csv", ["a", "b", "c"], np.zeros((2, 2)))

    def test_write_matrix_layout(self):
        values = np.arange(6.0).reshape(2, 3)
        path = write_matrix(self.dir / "w.csv", [-1.0, 1.0], [0.0, 0.5, 1.0], values)
        header, data = read_table(path)
        self.assertEqual(header[0], "x\\y")
        self.assertEqual(len(header), 4)
        np.testing.assert_array_equal(data[:, 0], [-1.0, 1.0])
        np.testing.assert_array_equal(data[:, 1:], values)


if __name__ == "__main__":
    unittest.main()
