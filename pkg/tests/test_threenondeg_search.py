import sys
import unittest
from pathlib import Path
from unittest.mock import patch

PLUGIN_ROOT = Path(__file__).resolve().parents[1]
if str(PLUGIN_ROOT) not in sys.path:
    sys.path.insert(0, str(PLUGIN_ROOT))

from sympy import I, Rational, div, expand, groebner
from sympy.polys.domains import QQ_I

from builtin_models import get_model
from contact import SymplecticSpace, get_contact_algebra
from exactla import ContactEngineError, determinant
from graded import span_elements
from threenondeg_search import (
    ALPHA,
    ALPHA_BAR,
    DISPLAYED_SYSTEM,
    beta_relation,
    borel_closes,
    borel_condition,
    borel_subalgebra,
    bracket_2m_nbar,
    closure_system,
    degree_two_candidates,
    degree_two_conditions,
    degree_two_family,
    degree_two_square_system,
    displayed_bracket_2m_nbar,
    prolong_degree,
    prolongation_degree_one,
    prolongations,
    rotation_moves_borel,
    same_ideal,
    search_3nondeg_models,
)


class DegreeZeroTests(unittest.TestCase):
    def setUp(self):
        self.algebra = get_contact_algebra(SymplecticSpace.complex_symplectic(1))

    def test_condition_is_unit_circle(self):
        condition = borel_condition(self.algebra)
        quotient, remainder = div(condition, ALPHA * ALPHA_BAR - 1, ALPHA, ALPHA_BAR)
        self.assertEqual(remainder, 0)
        self.assertFalse(quotient.free_symbols, msg=f"condition {condition}")
        self.assertNotEqual(quotient, 0)

    def test_exact_closure(self):
        self.assertTrue(borel_closes(self.algebra, "3/5+4/5*i"))
        self.assertTrue(borel_closes(self.algebra, "-1"))
        self.assertFalse(borel_closes(self.algebra, "2"))
        self.assertFalse(borel_closes(self.algebra, 0))

    def test_rotation(self):
        self.assertTrue(rotation_moves_borel(self.algebra, "5/13+12/13*i"))


class DegreeOneTests(unittest.TestCase):
    def setUp(self):
        self.algebra = get_contact_algebra(SymplecticSpace.complex_symplectic(1))

    def test_prolongation_dimension(self):
        self.assertEqual(prolongation_degree_one(self.algebra).dim, 4)

    def test_beta_relation(self):
        betas = beta_relation(self.algebra)
        self.assertEqual(len(betas), 1)
        self.assertEqual(expand(betas[0] - Rational(5, 2) * I * ALPHA), 0)

    def test_bracket_with_beta_eliminated(self):
        beta = Rational(5, 2) * I * ALPHA
        self.assertEqual(bracket_2m_nbar(self.algebra, beta), displayed_bracket_2m_nbar(self.algebra))

    def test_nonlinear_system(self):
        system = closure_system(self.algebra, Rational(5, 2) * I * ALPHA)
        self.assertTrue(same_ideal(system, DISPLAYED_SYSTEM))
        basis = groebner(system, ALPHA, ALPHA_BAR, order="lex")
        self.assertEqual(list(basis.exprs), [ALPHA, ALPHA_BAR])


class DegreeTwoTests(unittest.TestCase):
    def setUp(self):
        self.algebra = get_contact_algebra(SymplecticSpace.complex_symplectic(1))
        g0 = span_elements(self.algebra, borel_subalgebra(self.algebra, 1), 0)
        self.candidates = degree_two_candidates(self.algebra, g0)
        self.g1 = get_model("three_nondeg").components[1]

    def test_candidates_are_the_six_parameter_family(self):
        self.assertEqual(self.candidates.dim, 6)
        self.assertEqual(self.candidates, span_elements(self.algebra, degree_two_family(self.algebra), 2))

    def test_fixed_six_conditions_are_nonsingular(self):
        square, system_rank = degree_two_square_system(self.algebra)
        self.assertEqual(len(square), 6)
        self.assertTrue(all(len(row) == 6 for row in square))
        self.assertEqual(system_rank, 6)
        self.assertNotEqual(determinant(square), QQ_I(0, 0))
        self.assertEqual(len(degree_two_conditions(self.algebra)), 8)

    def test_nothing_survives_in_degree_two(self):
        self.assertEqual(prolong_degree(self.algebra, self.candidates, 2, self.g1).dim, 0)

    def test_higher_degrees_vanish(self):
        tilde = prolongations(self.algebra, self.candidates, self.g1, 4)
        self.assertEqual({p: s.dim for p, s in tilde.items()}, {2: 0, 3: 0, 4: 0})


class SearchTests(unittest.TestCase):
    def test_unique_model(self):
        report = search_3nondeg_models()
        self.assertTrue(report.passed, msg=f"failed: {[c.name for c in report.checks.failures()]}")
        self.assertEqual(report.g1_tilde_dim, 4)
        self.assertEqual(report.g2_candidates_dim, 6)
        self.assertEqual(report.g2_tilde_dim, 0)
        self.assertEqual(report.g2_system_rank, 6)
        self.assertNotEqual(report.determinant, "0")
        self.assertEqual(report.vanishing_degree, 2)
        self.assertEqual(report.solutions, [{"alpha": "0", "alphabar": "0"}])
        self.assertEqual(report.model.name, "three_nondeg")
        self.assertEqual(report.to_dict()["groebner_basis"], ["alpha", "alphabar"])

    def test_max_degree_extends_the_check(self):
        report = search_3nondeg_models(max_degree=4)
        self.assertTrue(report.passed)
        self.assertEqual(report.to_dict()["prolongation_dims"], {"2": 0, "3": 0, "4": 0})

    def test_inconclusive_at_budget(self):
        with patch("threenondeg_search.prolong_degree", side_effect=lambda algebra, candidates, p, previous: candidates):
            report = search_3nondeg_models(max_degree=3)
        self.assertFalse(report.passed)
        self.assertIsNone(report.vanishing_degree)
        failures = {check.name: check for check in report.checks.failures()}
        self.assertIn("prolongation_vanishes", failures)
        self.assertIn("inconclusive at budget 3", failures["prolongation_vanishes"].detail)

    def test_needs_degree_two(self):
        with self.assertRaises(ContactEngineError):
            search_3nondeg_models(max_degree=1)


if __name__ == "__main__":
    unittest.main()
