import sys
import unittest
from pathlib import Path

PLUGIN_ROOT = Path(__file__).resolve().parents[1]
if str(PLUGIN_ROOT) not in sys.path:
    sys.path.insert(0, str(PLUGIN_ROOT))

from sympy.polys.domains import QQ_I

from abscore import (
    AbstractCore,
    Automorphism,
    AutomorphismError,
    apply_automorphism,
    dimension_bound,
    isomorphic,
    validate,
)
from contact import SymplecticSpace, get_contact_algebra
from cralg import levi_maps
from element_syntax import format_element, parse_element


def core_from_text(algebra, generators):
    return AbstractCore.from_generators(
        algebra, {p: [parse_element(text, algebra, p) for text in texts] for p, texts in generators.items()}
    )


class CoreValidationTests(unittest.TestCase):
    def setUp(self):
        self.algebra = get_contact_algebra(SymplecticSpace.complex_symplectic(1))

    def test_height_one_core(self):
        core = core_from_text(self.algebra, {0: ["z^2"], 1: ["z^3"]})
        report = validate(core)
        self.assertTrue(report.valid, msg=f"violations: {report.violations()}")
        self.assertEqual(core.height, 1)
        self.assertEqual(core.nondegeneracy_order, 3)
        self.assertEqual(core.real_dim, 7)
        self.assertTrue(dimension_bound(core))

    def test_missing_lower_component(self):
        report = validate(core_from_text(self.algebra, {1: ["z^3"]}))
        self.assertFalse(report.valid)
        self.assertIn("levi_containment_1", report.violations())

    def test_non_extremal_generator(self):
        report = validate(core_from_text(self.algebra, {0: ["z*zb"]}))
        self.assertIn("extremal_containment_0", report.violations())

    def test_heisenberg_core(self):
        core = AbstractCore.heisenberg(self.algebra)
        self.assertEqual(core.height, -1)
        self.assertEqual(core.nondegeneracy_order, 1)
        self.assertTrue(validate(core).valid)

    def test_document_round_trip(self):
        core = core_from_text(self.algebra, {0: ["z^2"], 1: ["z^3"]})
        self.assertEqual(AbstractCore.from_document(core.to_dict()), core)


class LeviMapTests(unittest.TestCase):
    def test_immersion_inverts_levi_maps(self):
        cases = [
            ((1, None), {0: ["z^2"], 1: ["z^3"]}),
            ((2, (1, 1)), {0: ["z1*z2"]}),
            ((2, (2, 0)), {0: ["z1^2", "z2^2"]}),
        ]
        for (n, signature), generators in cases:
            algebra = get_contact_algebra(SymplecticSpace.complex_symplectic(n, signature))
            core = core_from_text(algebra, generators)
            rebuilt = AbstractCore.from_levi_maps(algebra, levi_maps(core))
            self.assertEqual(rebuilt, core, msg=f"generators {generators}")

    def test_levi_map_values(self):
        algebra = get_contact_algebra(SymplecticSpace.complex_symplectic(1))
        maps = levi_maps(core_from_text(algebra, {0: ["z^2"]}))
        # [z^2, zb] = -i z: coordinate -i on the single holomorphic variable
        self.assertEqual(format_element(algebra.bracket(parse_element("z^2", algebra), algebra.variable(1))), "-i*z")
        self.assertEqual(len(maps[0]), 1)
        self.assertEqual(maps[0][0][0], {0: QQ_I(0, -1)})


class AutomorphismTests(unittest.TestCase):
    def setUp(self):
        self.algebra = get_contact_algebra(SymplecticSpace.complex_symplectic(1))

    def assert_homomorphism(self, g):
        algebra = self.algebra
        elements = [x for p in range(-2, 2) for x in algebra.basis_elements(p)]
        for x in elements:
            for y in elements:
                self.assertEqual(
                    g.apply(algebra.bracket(x, y)),
                    algebra.bracket(g.apply(x), g.apply(y)),
                    msg=f"[{format_element(x)}, {format_element(y)}]",
                )

    def test_rotation_is_unitary(self):
        g = Automorphism.rotation(self.algebra, "3/5+4/5*i")
        self.assertEqual(g.conformal, QQ_I(1, 0))
        self.assert_homomorphism(g)

    def test_dilation_scales_layers(self):
        g = Automorphism.from_unitary(self.algebra, [[2]])
        self.assertEqual(int(g.conformal.x), 4)
        self.assert_homomorphism(g)
        self.assertEqual(g.apply(self.algebra.T), self.algebra.T * 4)

    def test_rejects_maps_mixing_types(self):
        with self.assertRaises(AutomorphismError):
            Automorphism(self.algebra, [[1, 1], [0, 1]])

    def test_core_orbit(self):
        algebra = get_contact_algebra(SymplecticSpace.complex_symplectic(2, (2, 0)))
        core = core_from_text(algebra, {0: ["z1^2"]})
        g = Automorphism.from_unitary(algebra, [["3/5", "-4/5"], ["4/5", "3/5"]])
        moved = apply_automorphism(g, core)
        self.assertNotEqual(moved, core)
        self.assertTrue(isomorphic(core, moved))
        self.assertFalse(isomorphic(core, core_from_text(algebra, {0: ["z1^2+z2^2"]})))


if __name__ == "__main__":
    unittest.main()
