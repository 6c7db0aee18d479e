import sys
import unittest
from itertools import combinations
from pathlib import Path
from unittest.mock import patch

PLUGIN_ROOT = Path(__file__).resolve().parents[1]
if str(PLUGIN_ROOT) not in sys.path:
    sys.path.insert(0, str(PLUGIN_ROOT))

from sympy.polys.domains import QQ, QQ_I

from classify7 import (
    CoreLineRep,
    DegenerateParameterError,
    OrbitInvariants,
    StabilizerTag,
    ZeroVectorError,
    canonical_form,
    classify_polynomial,
    enumerate_tables,
    eps_from_polynomial,
    orbit_invariants,
    polynomial_from_eps,
    s1_action,
    s1_action_oracle,
    sample_group_element,
    stabilizer_algebra,
    table_representatives,
    tables_to_markdown,
    witt_to_symplectic,
)
from exactla import norm_squared
from regression import CIRCLE_GRID, PARAMETER_GRID


class EpsDictionaryTests(unittest.TestCase):
    def test_round_trip(self):
        polynomials = [
            {(2, 0): QQ_I(1, 0)},
            {(1, 1): QQ_I(1, 0)},
            {(2, 0): QQ_I(1, 0), (1, 1): QQ_I(0, -2), (0, 2): QQ_I(-1, 0)},
            {(2, 0): QQ_I(QQ(3, 2), 0), (0, 2): QQ_I(QQ(1, 2), 1)},
        ]
        for signature in ((2, 0), (1, 1)):
            for poly in polynomials:
                eps = eps_from_polynomial(signature, poly)
                self.assertEqual(polynomial_from_eps(signature, eps), poly, msg=f"{signature}: {poly}")

    def test_zero_vector(self):
        with self.assertRaises(ZeroVectorError):
            CoreLineRep.from_polynomial((2, 0), {})

    def test_witt_substitution(self):
        # z1*z2 -> (z1 + z2)(z1 - z2)
        self.assertEqual(
            witt_to_symplectic({(1, 1): 1}),
            {(2, 0): QQ_I(1, 0), (0, 2): QQ_I(-1, 0)},
        )


class StabilizerTests(unittest.TestCase):
    def tag(self, signature, poly):
        return stabilizer_algebra(CoreLineRep.from_polynomial(signature, poly)).tag

    def test_definite_signature(self):
        self.assertIs(self.tag((2, 0), {(2, 0): 1}), StabilizerTag.COMPACT)
        self.assertIs(self.tag((2, 0), {(2, 0): 1, (0, 2): 1}), StabilizerTag.COMPACT)
        self.assertIs(self.tag((2, 0), {(2, 0): QQ(3, 2), (0, 2): QQ(1, 2)}), StabilizerTag.SCALARS)

    def test_indefinite_signature(self):
        self.assertIs(self.tag((1, 1), {(1, 1): 1}), StabilizerTag.COMPACT)
        self.assertIs(self.tag((1, 1), {(2, 0): 1, (0, 2): -1}), StabilizerTag.SPLIT)
        self.assertIs(
            self.tag((1, 1), {(2, 0): 1, (0, 2): -1, (1, 1): QQ_I(0, -2)}),
            StabilizerTag.SOLVABLE,
        )

    def test_real_dimension(self):
        rep = CoreLineRep.from_polynomial((2, 0), {(2, 0): QQ(3, 2), (0, 2): QQ(1, 2)})
        self.assertEqual(stabilizer_algebra(rep).real_dim, 2)
        rep = CoreLineRep.from_polynomial((1, 1), {(2, 0): 1, (0, 2): -1, (1, 1): QQ_I(0, -2)})
        self.assertEqual(stabilizer_algebra(rep).real_dim, 4)


class CanonicalFormTests(unittest.TestCase):
    def test_families(self):
        self.assertEqual(classify_polynomial((1, 1), {(1, 1): 1}).family, "m_<0")
        null = classify_polynomial((1, 1), {(2, 0): 1, (0, 2): -1, (1, 1): QQ_I(0, -2)})
        self.assertEqual(null.family, "m_null")
        self.assertTrue(null.admissible)
        split = classify_polynomial((1, 1), {(2, 0): 1, (0, 2): -1})
        self.assertEqual((split.family, split.parameter), ("m_t", 0))
        generic = classify_polynomial((2, 0), {(2, 0): QQ(3, 2), (0, 2): QQ(1, 2)})
        self.assertEqual(generic.family, "m_t")
        self.assertFalse(generic.admissible)

    def test_invariance_under_group(self):
        for signature in ((2, 0), (1, 1)):
            for family, rep in table_representatives(signature):
                label = canonical_form(rep)
                self.assertEqual(label.family, family, msg=f"{signature} {rep.z}")
                for seed in range(4):
                    g = sample_group_element(signature, seed)
                    self.assertTrue(g.preserves_metric())
                    moved = canonical_form(g.apply(rep))
                    self.assertTrue(label.same_orbit(moved), msg=f"{label.name}, seed {seed}")
                    self.assertEqual(moved.stabilizer, label.stabilizer)

    def test_lorentzian_invariant_stays_below_one(self):
        seen = 0
        for _, rep in table_representatives((1, 1)):
            invariants = orbit_invariants(rep)
            if invariants.gram_sign < 0:
                seen += 1
                self.assertEqual(invariants.h * invariants.h - norm_squared(invariants.q), 4 * invariants.gram)
                self.assertLess(abs(invariants.invariant), 1)
        self.assertGreater(seen, 0)
        rep = table_representatives((1, 1))[0][1]
        degenerate = OrbitInvariants((1, 1), QQ_I(1, 0), QQ(1), QQ(-1), (QQ(1), QQ(0), QQ(0)))
        with patch("classify7.orbit_invariants", return_value=degenerate):
            with self.assertRaises(DegenerateParameterError):
                canonical_form(rep)

    def test_representatives_are_separated(self):
        for signature in ((2, 0), (1, 1)):
            labels = [canonical_form(rep) for _, rep in table_representatives(signature)]
            for a, b in combinations(labels, 2):
                self.assertFalse(a.same_orbit(b), msg=f"{a.name} and {b.name}")


class CircleActionTests(unittest.TestCase):
    def test_closed_form_matches_oracle(self):
        for signature in ((2, 0), (1, 1)):
            compared = 0
            for point in CIRCLE_GRID:
                for params in PARAMETER_GRID:
                    t1, t2 = s1_action(point, params)
                    o1, o2 = s1_action_oracle(point, params, signature)
                    self.assertEqual(t1, o1, msg=f"{point} {params}")
                    self.assertEqual(t2 * t2, o2, msg=f"{point} {params}")
                    compared += 1
            self.assertGreaterEqual(compared, 20)

    def test_identity_point(self):
        self.assertEqual(s1_action(("1", "0"), ("1/2", "1/3")), (QQ(1, 2), QQ(1, 3)))

    def test_point_off_circle(self):
        with self.assertRaises(DegenerateParameterError):
            s1_action(("1", "1"), ("0", "1"))


class TableTests(unittest.TestCase):
    def test_counts(self):
        document = enumerate_tables()
        self.assertEqual(document["admissible_classes_total"], 7)
        tables = {tuple(table["signature"]): table for table in document["tables"]}
        self.assertEqual(tables[(2, 0)]["admissible_classes"], 2)
        self.assertEqual(tables[(1, 1)]["families"], 5)
        self.assertEqual(tables[(1, 1)]["admissible_classes"], 5)
        self.assertEqual(sum(row["admissible"] for row in tables[(1, 1)]["rows"]), 4)
        for table in document["tables"]:
            for row in table["rows"]:
                self.assertTrue(row["verified"], msg=f"{table['signature']} {row['family']} {row['parameter']}")

    def test_markdown(self):
        text = tables_to_markdown(enumerate_tables([(2, 0)]))
        self.assertIn("### Signature (2,0)", text)
        self.assertIn("Admissible classes in total: 2", text)


if __name__ == "__main__":
    unittest.main()
