import sys
import unittest
from pathlib import Path

PLUGIN_ROOT = Path(__file__).resolve().parents[1]
if str(PLUGIN_ROOT) not in sys.path:
    sys.path.insert(0, str(PLUGIN_ROOT))

from builtin_models import builtin_models, get_model, so32_model, truncated_contact_model
from models import (
    PresentationError,
    bounded_prolongation_check,
    load_model_document,
    verify_model,
)
from reports import MaximalityStatus


class RegistryTests(unittest.TestCase):
    def test_entries(self):
        entries = builtin_models()
        self.assertEqual(len(entries), 10)
        self.assertIn("three_nondeg", entries)
        self.assertEqual(entries["sl4"].expected_total, 15)

    def test_unknown_model(self):
        with self.assertRaises(KeyError):
            get_model("not_a_model")

    def test_models_are_cached(self):
        self.assertIs(get_model("so32"), get_model("so32"))


class VerifyModelTests(unittest.TestCase):
    def test_so32(self):
        report = verify_model(get_model("so32"))
        self.assertTrue(report.passed, msg=f"failed: {[c.name for c in report.checks.failures()]}")
        self.assertEqual(list(report.graded_dims.values()), [1, 2, 4, 2, 1])
        self.assertEqual(report.nondegeneracy_order, 2)
        self.assertTrue(report.property_j)

    def test_three_nondegenerate(self):
        report = verify_model(get_model("three_nondeg"))
        self.assertTrue(report.passed, msg=f"failed: {[c.name for c in report.checks.failures()]}")
        self.assertFalse(report.property_j, msg="J is not in the degree-0 part")
        self.assertEqual(report.nondegeneracy_order, 3)
        self.assertEqual(report.freeman.dims, [4, 3, 2, 1])
        self.assertEqual(report.total_dim, 8)
        self.assertTrue(report.freeman_consistent)

    def test_matrix_presentation(self):
        candidate = get_model("sl4")
        report = verify_model(candidate)
        self.assertTrue(report.passed, msg=f"failed: {[c.name for c in report.checks.failures()]}")
        self.assertEqual(list(report.graded_dims.values()), [1, 4, 5, 4, 1])
        self.assertEqual(report.nondegeneracy_order, 2)

    def test_null_stabilizer_model(self):
        candidate = get_model("stab_11_null")
        algebra = candidate.algebra
        bracket = algebra.bracket(candidate.labels["P"], candidate.labels["Pbar"])
        self.assertTrue(bracket.is_zero(), msg="P spans a null line")
        self.assertEqual(list(candidate.dims().values()), [1, 4, 6])
        self.assertTrue(verify_model(candidate).passed)

    def test_truncated_contact_algebra_is_not_a_model(self):
        report = verify_model(truncated_contact_model())
        self.assertFalse(report.passed)
        self.assertFalse(report.checks.get("extremal_projection_1").passed)

    def test_report_document(self):
        document = verify_model(get_model("so32")).to_dict()
        self.assertEqual(document["k"], 2)
        self.assertEqual(document["graded_dims"]["2"], 1)
        self.assertTrue(all(check["status"] == "passed" for check in document["checks"]))


class ModelDocumentTests(unittest.TestCase):
    def test_contact_document(self):
        original = get_model("so32")
        loaded = load_model_document(original.to_document())
        self.assertEqual(loaded.dims(), original.dims())
        self.assertEqual(loaded.core, original.core)

    def test_negative_part_is_implied(self):
        document = {
            "kind": "contact",
            "name": "partial",
            "context": {"n": 1},
            "components": {"0": ["z^2", "z*zb", "zb^2", "mu^0[T]"]},
            "core": {"0": ["z^2"]},
        }
        candidate = load_model_document(document)
        self.assertEqual(candidate.dims()[-1], 2)
        self.assertEqual(candidate.dims()[0], 4)

    def test_unknown_kind(self):
        with self.assertRaises(PresentationError):
            load_model_document({"kind": "tensor"})


class MaximalityTests(unittest.TestCase):
    def test_maximal_model(self):
        report = bounded_prolongation_check(get_model("so32"), 3)
        self.assertIs(report.status, MaximalityStatus.NO_EXTENSION_UP_TO_DEGREE)
        self.assertEqual(report.extension_dims, {})

    def test_truncated_model_extends(self):
        report = bounded_prolongation_check(so32_model(drop_top=True), 3)
        self.assertIs(report.status, MaximalityStatus.EXTENSION_FOUND)
        self.assertEqual(report.extension_dims.get(2), 1)

    def test_stabilizer_models_stay_open(self):
        for name in ("stab_20_z1z1", "stab_11_z1z1", "stab_11_z2z2", "stab_11_null"):
            report = bounded_prolongation_check(get_model(name), 3)
            self.assertIs(report.status, MaximalityStatus.UNKNOWN_BEYOND_DEGREE, msg=name)
            self.assertEqual(report.extension_dims, {}, msg=name)

    def test_three_nondegenerate_model_is_maximal(self):
        report = bounded_prolongation_check(get_model("three_nondeg"), 2)
        self.assertIs(report.status, MaximalityStatus.NO_EXTENSION_UP_TO_DEGREE)


if __name__ == "__main__":
    unittest.main()
