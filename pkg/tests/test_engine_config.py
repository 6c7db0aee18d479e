import json
import os
import sys
import tempfile
import unittest
from pathlib import Path

PLUGIN_ROOT = Path(__file__).resolve().parents[1]
if str(PLUGIN_ROOT) not in sys.path:
    sys.path.insert(0, str(PLUGIN_ROOT))

from engine_config import ConfigError, EngineConfig, load_config, schema_defaults


class EngineConfigTests(unittest.TestCase):
    def write_config(self, text):
        handle = tempfile.NamedTemporaryFile("w", suffix=".json", delete=False, encoding="utf-8")
        with handle:
            handle.write(text)
        self.addCleanup(os.unlink, handle.name)
        return handle.name

    def test_schema_defaults_match_dataclass(self):
        defaults = schema_defaults()
        self.assertEqual(defaults["max_degree"], 4)
        self.assertEqual(defaults["oracle_degree"], EngineConfig().oracle_degree)
        self.assertEqual(defaults["defaults"], {"n": 1, "signature": [1, 0]})
        config = load_config()
        self.assertEqual(config.max_degree, EngineConfig().max_degree)
        self.assertEqual(config.signature, (1, 0))
        self.assertEqual(config.context(), {"n": 1, "signature": [1, 0], "max_degree": 4})

    def test_file_overrides(self):
        path = self.write_config(json.dumps({"max_degree": 3, "output_format": "markdown", "defaults": {"n": 2}}))
        config = load_config(path)
        self.assertEqual(config.max_degree, 3)
        self.assertEqual(config.output_format, "markdown")
        self.assertEqual(config.n, 2)
        self.assertEqual(config.signature, (2, 0), msg="signature follows n when not given")
        self.assertEqual(config.jacobi_degree, 3, msg="untouched keys keep their defaults")

    def test_signature_override(self):
        path = self.write_config(json.dumps({"defaults": {"n": 2, "signature": [1, 1]}}))
        self.assertEqual(load_config(path).signature, (1, 1))

    def test_invalid_json(self):
        path = self.write_config('{"max_degree": ')
        with self.assertRaises(ConfigError):
            load_config(path)

    def test_missing_file(self):
        with self.assertRaises(ConfigError):
            load_config("/nonexistent/engine.json")

    def test_out_of_range_values(self):
        for config in (
            {"max_degree": 1},
            {"max_workers": 0},
            {"oracle_degree": -1},
            {"output_format": "yaml"},
            {"defaults": {"n": 2, "signature": [1, 0]}},
        ):
            with self.assertRaises(ConfigError, msg=f"{config} should be rejected"):
                EngineConfig.from_dict(config)


if __name__ == "__main__":
    unittest.main()
