import json
import os
import sys
import tempfile
import unittest
from pathlib import Path
from unittest.mock import patch

PLUGIN_ROOT = Path(__file__).resolve().parents[1]
if str(PLUGIN_ROOT) not in sys.path:
    sys.path.insert(0, str(PLUGIN_ROOT))

import cli
from regression import RegressionResult, RegressionSummary


class CliTests(unittest.TestCase):
    def run_cli(self, *argv):
        with patch("cli.write_output") as write_output:
            code = cli.main(list(argv))
        text = "".join(call.args[0] for call in write_output.call_args_list)
        return code, text

    def test_bracket_text(self):
        code, text = self.run_cli("bracket", "[z,zb]", "--n", "1")
        self.assertEqual(code, cli.EXIT_OK)
        self.assertEqual(text, "-1/2*i*T\n")

    def test_bracket_json(self):
        code, text = self.run_cli("bracket", "[z^2,zb]", "--format", "json")
        self.assertEqual(code, cli.EXIT_OK)
        document = json.loads(text)
        self.assertEqual(document["result"], "-i*z")
        self.assertEqual(document["degree"], -1)

    def test_malformed_expression(self):
        code, text = self.run_cli("bracket", "z+*zb")
        self.assertEqual(code, cli.EXIT_MALFORMED)
        self.assertEqual(text, "")

    def test_signature_must_fit(self):
        code, _ = self.run_cli("contact-table", "--n", "2", "--sgn", "2,1")
        self.assertEqual(code, cli.EXIT_MALFORMED)
        code, _ = self.run_cli("contact-table", "--max-degree", "1")
        self.assertEqual(code, cli.EXIT_MALFORMED)

    def test_contact_table(self):
        code, text = self.run_cli("contact-table", "--n", "1", "--max-degree", "2", "--format", "json")
        self.assertEqual(code, cli.EXIT_OK)
        document = json.loads(text)
        self.assertEqual(document["dims"]["0"], 4)
        self.assertIn("-1/2*i*T", [entry["bracket"] for entry in document["brackets"]])

    def test_classify(self):
        code, text = self.run_cli("classify", "--sgn", "1,1", "--format", "json")
        self.assertEqual(code, cli.EXIT_OK)
        self.assertEqual(json.loads(text)["admissible_classes_total"], 5)
        code, text = self.run_cli("classify", "--format", "markdown")
        self.assertEqual(code, cli.EXIT_OK)
        self.assertIn("Admissible classes in total: 7", text)
        code, _ = self.run_cli("classify", "--sgn", "0,2")
        self.assertEqual(code, cli.EXIT_MALFORMED)

    def test_verify_builtin_model(self):
        code, text = self.run_cli("verify-model", "so32", "--format", "json")
        self.assertEqual(code, cli.EXIT_OK)
        document = json.loads(text)
        self.assertTrue(document["passed"])
        self.assertEqual(document["k"], 2)

    def test_verify_failing_model(self):
        from builtin_models import truncated_contact_model

        with patch("cli.builtin_models", return_value={"truncated": None}), patch(
            "cli.get_model", return_value=truncated_contact_model()
        ):
            code, text = self.run_cli("verify-model", "truncated", "--format", "json")
        self.assertEqual(code, cli.EXIT_FAILED)
        self.assertFalse(json.loads(text)["passed"])

    def test_unknown_model(self):
        code, _ = self.run_cli("verify-model", "no_such_model")
        self.assertEqual(code, cli.EXIT_MALFORMED)

    def test_invalid_model_document(self):
        handle = tempfile.NamedTemporaryFile("w", suffix=".json", delete=False, encoding="utf-8")
        with handle:
            handle.write('{"kind": "contact",\n  "name": }')
        self.addCleanup(os.unlink, handle.name)
        code, _ = self.run_cli("verify-model", handle.name)
        self.assertEqual(code, cli.EXIT_MALFORMED)

    def test_search_uses_max_degree(self):
        code, text = self.run_cli("search-3nondeg", "--max-degree", "3", "--format", "json")
        self.assertEqual(code, cli.EXIT_OK)
        document = json.loads(text)
        self.assertTrue(document["passed"])
        self.assertEqual(document["prolongation_dims"], {"2": 0, "3": 0})
        code, _ = self.run_cli("search-3nondeg", "--max-degree", "1")
        self.assertEqual(code, cli.EXIT_MALFORMED)

    def test_regress_exit_code(self):
        summary = RegressionSummary([RegressionResult("broken", False, error="boom")])
        with patch("cli.run_regression", return_value=summary):
            code, text = self.run_cli("regress", "--format", "json")
        self.assertEqual(code, cli.EXIT_FAILED)
        self.assertFalse(json.loads(text)["passed"])

    def test_usage_errors(self):
        code, _ = self.run_cli()
        self.assertEqual(code, cli.EXIT_MALFORMED)
        code, _ = self.run_cli("bracket", "z", "--sgn", "x")
        self.assertEqual(code, cli.EXIT_MALFORMED)


if __name__ == "__main__":
    unittest.main()
