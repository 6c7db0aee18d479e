import sys
import unittest
from pathlib import Path
from unittest.mock import patch

PLUGIN_ROOT = Path(__file__).resolve().parents[1]
if str(PLUGIN_ROOT) not in sys.path:
    sys.path.insert(0, str(PLUGIN_ROOT))

from engine_config import EngineConfig
from regression import (
    RegressionItem,
    jacobi_checks,
    normalization_checks,
    oracle_checks,
    regression_items,
    run_regression,
)
from reports import CheckList


def passing():
    checks = CheckList()
    checks.add("ok", True)
    return checks


def failing():
    checks = CheckList()
    checks.add("broken", False, "expected failure")
    return checks


def raising():
    raise RuntimeError("boom")


class RegressionRunnerTests(unittest.TestCase):
    def test_failures_do_not_stop_the_batch(self):
        items = [
            RegressionItem("passing", passing),
            RegressionItem("failing", failing),
            RegressionItem("raising", raising),
        ]
        with self.assertLogs("regression", level="ERROR"):
            summary = run_regression(EngineConfig(max_workers=2), items)
        self.assertFalse(summary.passed)
        results = {result.name: result for result in summary.results}
        self.assertTrue(results["passing"].success)
        self.assertFalse(results["failing"].success)
        self.assertEqual(results["raising"].error, "boom")
        document = summary.to_dict()
        self.assertEqual([item["name"] for item in document["items"]], ["passing", "failing", "raising"])

    def test_all_passing(self):
        summary = run_regression(EngineConfig(max_workers=1), [RegressionItem("passing", passing)])
        self.assertTrue(summary.passed)

    def test_item_list(self):
        names = [item.name for item in regression_items(EngineConfig())]
        self.assertIn("classification", names)
        self.assertIn("model_three_nondeg", names)
        self.assertEqual(len(names), len(set(names)))


class RegressionCheckTests(unittest.TestCase):
    def test_normalization(self):
        checks = normalization_checks()
        self.assertTrue(checks.passed, msg=f"failed: {[c.name for c in checks.failures()]}")

    def test_oracle_small(self):
        self.assertTrue(oracle_checks(1, 1).passed)

    def test_jacobi_covers_every_degree_triple(self):
        checks = jacobi_checks(1, 2)
        self.assertTrue(checks.passed, msg=f"failed: {[c.name for c in checks.failures()]}")
        names = {check.name for check in checks.checks}
        self.assertIn("jacobi_n1_2_2_2", names)
        self.assertIn("jacobi_n1_-2_-1_-1", names)

    def test_items_use_configured_degrees(self):
        items = {item.name: item for item in regression_items(EngineConfig(oracle_degree=2, jacobi_degree=1))}
        with patch("regression.oracle_checks", return_value=CheckList()) as oracle:
            items["oracle_n2"].runner()
        oracle.assert_called_once_with(2, 2)
        with patch("regression.jacobi_checks", return_value=CheckList()) as jacobi:
            items["jacobi_n2"].runner()
        jacobi.assert_called_once_with(2, 1)


if __name__ == "__main__":
    unittest.main()
