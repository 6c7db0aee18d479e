import sys
import unittest
from pathlib import Path

PLUGIN_ROOT = Path(__file__).resolve().parents[1]
if str(PLUGIN_ROOT) not in sys.path:
    sys.path.insert(0, str(PLUGIN_ROOT))

from sympy.polys.domains import QQ, QQ_I

from exactla import (
    AmbientMismatchError,
    ContactEngineError,
    InjectiveSolver,
    Subspace,
    determinant,
    format_scalar,
    hermitian_signature,
    nullspace,
    parse_scalar,
    rank,
    solve_linear,
    subspace_from_constraints,
)


class ScalarTextTests(unittest.TestCase):
    def test_canonical_printing(self):
        cases = {
            QQ_I(3, 0): "3",
            QQ_I(QQ(-1, 2), 0): "-1/2",
            QQ_I(0, 1): "i",
            QQ_I(0, -1): "-i",
            QQ_I(0, QQ(-3, 4)): "-3/4*i",
            QQ_I(QQ(1, 2), QQ(3, 4)): "1/2+3/4*i",
            QQ_I(QQ(1, 2), QQ(-3, 4)): "1/2-3/4*i",
            QQ_I(0, 0): "0",
        }
        for value, text in cases.items():
            self.assertEqual(format_scalar(value), text, msg=f"printing {value}")
            self.assertEqual(parse_scalar(text), value, msg=f"parsing {text}")

    def test_parse_accepts_parentheses_and_lowest_terms(self):
        self.assertEqual(parse_scalar("(2/4 + 1/2*i)"), QQ_I(QQ(1, 2), QQ(1, 2)))
        self.assertEqual(parse_scalar("2*i"), QQ_I(0, 2))

    def test_malformed_scalars_rejected(self):
        for text in ("2i", "", "1/0", "i+1", "abc"):
            with self.assertRaises(ContactEngineError, msg=f"{text!r} should be rejected"):
                parse_scalar(text)


class LinearAlgebraTests(unittest.TestCase):
    def test_unique_solution(self):
        solution = solve_linear([[1, 1], [1, -1]], [2, 0])
        self.assertTrue(solution.is_unique)
        self.assertEqual(solution.particular, {0: QQ_I(1, 0), 1: QQ_I(1, 0)})

    def test_inconsistent_system_is_marked(self):
        solution = solve_linear([[1, 1], [2, 2]], [1, 3])
        self.assertFalse(solution.consistent)

    def test_kernel_of_underdetermined_system(self):
        solution = solve_linear([[1, "i", 0]], [0])
        self.assertTrue(solution.consistent)
        self.assertEqual(len(solution.kernel), 2)

    def test_rank_and_nullspace(self):
        rows = [{0: QQ_I(1, 0), 1: QQ_I(1, 0)}, {0: QQ_I(2, 0), 1: QQ_I(2, 0)}]
        self.assertEqual(rank(rows, 3), 1)
        self.assertEqual(len(nullspace(rows, 3)), 2)

    def test_determinant(self):
        self.assertEqual(determinant([[1, "i"], ["-i", 2]]), QQ_I(1, 0))
        self.assertEqual(determinant([]), QQ_I(1, 0))


class SubspaceTests(unittest.TestCase):
    ambient = ("test", 3)

    def span(self, *vectors):
        return Subspace.span([{k: QQ_I(v, 0) for k, v in vector.items()} for vector in vectors], self.ambient)

    def test_equality_is_basis_independent(self):
        self.assertEqual(self.span({0: 1, 1: 1}, {1: 1}), self.span({0: 1}, {1: 2}))

    def test_intersection_and_sum(self):
        a = self.span({0: 1}, {1: 1})
        b = self.span({1: 1}, {2: 1})
        self.assertEqual(a.intersect(b), self.span({1: 1}))
        self.assertEqual((a + b).dim, 3)
        self.assertTrue(a.intersect(b).is_subspace_of(a))

    def test_ambient_mismatch(self):
        other = Subspace.full(("other", 3))
        with self.assertRaises(AmbientMismatchError):
            self.span({0: 1}).intersect(other)

    def test_constraints(self):
        full = Subspace.full(self.ambient)
        # f(b_k) = 1 for every basis vector: kernel of x0 + x1 + x2
        constrained = subspace_from_constraints(full, [{0: QQ_I(1, 0), 1: QQ_I(1, 0), 2: QQ_I(1, 0)}])
        self.assertEqual(constrained.dim, 2)
        self.assertFalse(constrained.contains({0: QQ_I(1, 0)}))


class InjectiveSolverTests(unittest.TestCase):
    def test_solve_and_reject(self):
        solver = InjectiveSolver([{0: QQ_I(1, 0)}, {0: QQ_I(1, 0), 1: QQ_I(1, 0)}], 3)
        self.assertEqual(solver.solve({0: QQ_I(2, 0), 1: QQ_I(1, 0)}), {0: QQ_I(1, 0), 1: QQ_I(1, 0)})
        self.assertIsNone(solver.solve({2: QQ_I(1, 0)}))

    def test_non_injective_map(self):
        with self.assertRaises(ContactEngineError):
            InjectiveSolver([{0: QQ_I(1, 0)}, {0: QQ_I(2, 0)}], 2)


class HermitianSignatureTests(unittest.TestCase):
    def test_split_form_without_diagonal(self):
        self.assertEqual(hermitian_signature([[0, 1], [1, 0]]), (1, 1, 0))

    def test_degenerate_form(self):
        self.assertEqual(hermitian_signature([[1, "i"], ["-i", 1]]), (1, 0, 1))

    def test_rejects_non_hermitian(self):
        with self.assertRaises(ContactEngineError):
            hermitian_signature([[1, "i"], ["i", 1]])


if __name__ == "__main__":
    unittest.main()
