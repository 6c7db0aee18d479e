import sys
import unittest
from pathlib import Path

PLUGIN_ROOT = Path(__file__).resolve().parents[1]
if str(PLUGIN_ROOT) not in sys.path:
    sys.path.insert(0, str(PLUGIN_ROOT))

from sympy.polys.domains import QQ, QQ_I

from contact import (
    Component,
    DegreeMismatchError,
    IndexRangeError,
    InvalidSpaceError,
    InvalidTargetError,
    NotRealizableError,
    SpaceMismatchError,
    SymplecticSpace,
    get_contact_algebra,
)
from element_syntax import ElementSyntaxError, format_element, parse_element


def algebra_for(n=1, signature=None):
    return get_contact_algebra(SymplecticSpace.complex_symplectic(n, signature))


class SymplecticSpaceTests(unittest.TestCase):
    def test_gram_normalization(self):
        gram = SymplecticSpace.complex_symplectic(1).gram()
        self.assertEqual(gram[0][1], QQ_I(0, QQ(-1, 2)), msg="B(z, zb) = -i/2")
        self.assertEqual(gram[1][0], QQ_I(0, QQ(1, 2)))

    def test_signatures(self):
        for signature in ((2, 0), (1, 1), (0, 2)):
            space = SymplecticSpace.complex_symplectic(2, signature)
            self.assertEqual(space.signature, signature)
        self.assertEqual(SymplecticSpace.complex_witt().signature, (1, 1))

    def test_invalid_spaces(self):
        with self.assertRaises(InvalidSpaceError):
            SymplecticSpace.complex_symplectic(2, (2, 1))
        with self.assertRaises(InvalidSpaceError):
            # J = Id does not square to -Id
            SymplecticSpace.from_matrices([[0, 1], [-1, 0]], [[1, 0], [0, 1]], (1, 0))
        with self.assertRaises(InvalidSpaceError):
            SymplecticSpace.from_matrices([[0, 1], [-1, 0]], [[0, 1], [-1, 0]], (0, 1))


class ContactAlgebraTests(unittest.TestCase):
    def setUp(self):
        self.algebra = algebra_for(1)
        self.z = self.algebra.variable(0)
        self.zb = self.algebra.variable(1)

    def test_component_dimensions(self):
        dims = [self.algebra.dim(p) for p in range(-2, 4)]
        self.assertEqual(dims, [1, 2, 4, 6, 9, 12])
        self.assertEqual(algebra_for(2).dim(2), 46, msg="35 + 10 + 1")

    def test_normalization_anchors(self):
        algebra = self.algebra
        self.assertEqual(algebra.bracket(self.z, self.zb), algebra.T * QQ_I(0, QQ(-1, 2)))
        self.assertEqual(format_element(algebra.bracket(self.z, self.zb)), "-1/2*i*T")
        jay = algebra.complex_structure_element()
        self.assertEqual(jay, algebra.element(0, {(-1, (1, 1)): 2}), msg="J = 2*z*zb")
        self.assertEqual(algebra.bracket(jay, self.z), self.z * QQ_I(0, 1))
        self.assertEqual(algebra.bracket(jay, self.zb), self.zb * QQ_I(0, -1))
        self.assertEqual(algebra.grading_element(), algebra.mu(0, algebra.T) * -2)

    def test_grading_element_eigenvalues(self):
        algebra = self.algebra
        grading = algebra.grading_element()
        for p in range(-2, 3):
            for x in algebra.basis_elements(p):
                self.assertEqual(algebra.bracket(grading, x), x * p, msg=f"[E, {format_element(x)}]")

    def test_central_element_kills_polynomial_part(self):
        algebra = self.algebra
        cubic = parse_element("z^2*zb", algebra)
        self.assertTrue(algebra.bracket(cubic, algebra.T).is_zero())
        lifted = algebra.mu(2, parse_element("z*zb", algebra))
        self.assertEqual(algebra.bracket(lifted, algebra.T), parse_element("z*zb", algebra), msg="one layer down")

    def test_closed_form_matches_oracle(self):
        for n, top in ((1, 2), (2, 1)):
            algebra = algebra_for(n)
            for p in range(-2, top + 1):
                for q in range(-2, top + 1):
                    for x in algebra.basis_elements(p):
                        for y in algebra.basis_elements(q):
                            self.assertEqual(
                                algebra.bracket(x, y),
                                algebra.recursive_bracket(x, y),
                                msg=f"n={n}: [{format_element(x)}, {format_element(y)}]",
                            )

    def test_antisymmetry_and_jacobi(self):
        algebra = self.algebra
        elements = [x for p in range(-2, 2) for x in algebra.basis_elements(p)]
        for x in elements:
            for y in elements:
                self.assertEqual(algebra.bracket(x, y), -algebra.bracket(y, x))
        for x in algebra.basis_elements(-1):
            for y in algebra.basis_elements(0):
                for w in algebra.basis_elements(1):
                    total = (
                        algebra.bracket(x, algebra.bracket(y, w))
                        + algebra.bracket(y, algebra.bracket(w, x))
                        + algebra.bracket(w, algebra.bracket(x, y))
                    )
                    self.assertTrue(total.is_zero(), msg="Jacobi identity")

    def test_transitivity_recovers_element(self):
        algebra = self.algebra
        x = parse_element("z^4+(1/2+i)*mu^2[z*zb]-3*mu^2[mu^0[T]]", algebra)
        actions = [algebra.bracket(x, algebra.variable(var)) for var in range(algebra.nvars)]
        self.assertEqual(algebra.solve_from_action(2, actions), x)

    def test_unrealizable_action(self):
        algebra = self.algebra
        with self.assertRaises(NotRealizableError):
            algebra.solve_from_action(1, [parse_element("z^2", algebra), algebra.zero(0)])

    def test_conjugation_and_weights(self):
        algebra = self.algebra
        x = parse_element("i*z^2*zb", algebra)
        self.assertEqual(algebra.conjugate(x), parse_element("-i*z*zb^2", algebra))
        parts = algebra.ad_J_eigendecompose(parse_element("z^3+z*zb^2", algebra))
        self.assertEqual(sorted(parts), [-1, 3])

    def test_projection_targets(self):
        algebra = self.algebra
        x = parse_element("z^4+mu^2[z*zb]", algebra)
        self.assertEqual(algebra.project(x, Component.K), parse_element("z^4", algebra))
        self.assertEqual(algebra.project(x, Component.XI), parse_element("mu^2[z*zb]", algebra))
        with self.assertRaises(InvalidTargetError):
            algebra.project(algebra.T, Component.XI)

    def test_closed_form_coefficients(self):
        algebra = self.algebra
        self.assertEqual(algebra.closed_form_coeffs(0, 0, 0, 0), (QQ(0), QQ(2)))
        with self.assertRaises(IndexRangeError):
            algebra.closed_form_coeffs(2, 2, 0, 0)

    def test_errors(self):
        algebra = self.algebra
        with self.assertRaises(DegreeMismatchError):
            algebra.mu(2, self.z)
        with self.assertRaises(DegreeMismatchError):
            self.z + algebra.T
        with self.assertRaises(SpaceMismatchError):
            self.z + algebra_for(2).variable(0)


class ElementSyntaxTests(unittest.TestCase):
    def test_round_trip(self):
        for n in (1, 2):
            algebra = algebra_for(n)
            for p in range(-2, 3):
                for x in algebra.basis_elements(p):
                    text = format_element(x)
                    self.assertEqual(parse_element(text, algebra), x, msg=text)
        algebra = algebra_for(2, (1, 1))
        x = parse_element("(1/2-i)*z1^2*zb2+mu^1[z2]-2/3*i*mu^1[zb1]", algebra)
        self.assertEqual(parse_element(format_element(x), algebra), x)

    def test_bracket_syntax(self):
        algebra = algebra_for(1)
        self.assertEqual(format_element(parse_element("[z,zb]", algebra)), "-1/2*i*T")
        self.assertEqual(parse_element("0", algebra, degree=1), algebra.zero(1))

    def test_error_position(self):
        algebra = algebra_for(1)
        with self.assertRaises(ElementSyntaxError) as context:
            parse_element("z+*zb", algebra)
        self.assertEqual((context.exception.line, context.exception.column), (1, 3))
        with self.assertRaises(ElementSyntaxError) as context:
            parse_element("z+\nw", algebra)
        self.assertEqual((context.exception.line, context.exception.column), (2, 1))
        with self.assertRaises(ElementSyntaxError):
            parse_element("z", algebra, degree=0)


if __name__ == "__main__":
    unittest.main()
