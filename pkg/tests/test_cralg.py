import sys
import unittest
from pathlib import Path

PLUGIN_ROOT = Path(__file__).resolve().parents[1]
if str(PLUGIN_ROOT) not in sys.path:
    sys.path.insert(0, str(PLUGIN_ROOT))

from abscore import AbstractCore
from builtin_models import get_model
from contact import SymplecticSpace, get_contact_algebra
from cralg import (
    CRAlgebraPair,
    build_universal_u,
    model_freeman_terms,
    extract_core,
    freeman_sequence,
    tanaka_sequence,
    universal_freeman_terms,
)
from graded import extremal_component, project_extremal, universal_component
from models import model_to_cralgebra
from reports import ChainStatus


class UniversalPairTests(unittest.TestCase):
    def setUp(self):
        self.algebra = get_contact_algebra(SymplecticSpace.complex_symplectic(1))

    def test_axioms_hold(self):
        pair = build_universal_u(self.algebra, 3)
        checks = pair.check()
        self.assertTrue(checks.passed, msg=f"failed: {[c.name for c in checks.failures()]}")
        self.assertEqual(pair.dims()["q"][-2], 0, msg="T is not holomorphic")
        self.assertEqual(pair.dims()["q"][-1], 1)

    def test_freeman_terms_follow_closed_form(self):
        pair = build_universal_u(self.algebra, 3)
        chain = freeman_sequence(pair, 2)
        closed = universal_freeman_terms(self.algebra, 3, len(chain.terms))
        self.assertEqual(chain.terms, closed)

    def test_universal_core_is_extremal(self):
        for p in range(0, 3):
            projected = project_extremal(self.algebra, universal_component(self.algebra, p), p)
            self.assertEqual(projected, extremal_component(self.algebra, p), msg=f"degree {p}")
            self.assertEqual(projected.dim, 1)

    def test_two_variables_closed(self):
        algebra = get_contact_algebra(SymplecticSpace.complex_symplectic(2, (1, 1)))
        self.assertTrue(build_universal_u(algebra, 2).check_closure().passed)


class LeviNondegeneratePairTests(unittest.TestCase):
    document = {
        "name": "heisenberg_with_grading",
        "context": {"n": 1, "max_degree": 2},
        "g": ["T", "z", "zb", "E"],
        "q": ["z", "E"],
    }

    def test_from_document_and_checks(self):
        pair = CRAlgebraPair.from_document(self.document)
        self.assertEqual(pair.name, "heisenberg_with_grading")
        self.assertTrue(pair.check().passed)
        self.assertEqual(pair.dims()["g_total"], 4)

    def test_freeman_and_core(self):
        pair = CRAlgebraPair.from_document(self.document)
        chain = freeman_sequence(pair)
        self.assertIs(chain.status, ChainStatus.CERTIFIED_UP_TO_BUDGET)
        self.assertEqual(chain.nondegeneracy_order, 1)
        self.assertEqual(chain.dims, [2, 1])
        core = extract_core(pair, chain)
        self.assertEqual(core, AbstractCore.heisenberg(pair.algebra))

    def test_hypersurface_type_detected(self):
        document = dict(self.document, q=["z"])
        checks = CRAlgebraPair.from_document(document).check()
        self.assertFalse(checks.get("hypersurface_type").passed)
        self.assertTrue(checks.get("q_closed").passed)


class ThreeNondegeneratePairTests(unittest.TestCase):
    def setUp(self):
        self.model = get_model("three_nondeg")
        self.pair = model_to_cralgebra(self.model)

    def test_freeman_chain(self):
        chain = freeman_sequence(self.pair)
        self.assertIs(chain.status, ChainStatus.CERTIFIED_UP_TO_BUDGET)
        self.assertEqual(chain.nondegeneracy_order, 3)
        self.assertEqual(chain.dims, [4, 3, 2, 1])
        self.assertEqual(chain.terms, model_freeman_terms(self.pair, len(chain.terms)))

    def test_core_recovered(self):
        self.assertEqual(extract_core(self.pair), self.model.core)

    def test_tanaka_symbol(self):
        tanaka = tanaka_sequence(self.pair)
        self.assertTrue(tanaka.reaches_g)
        self.assertEqual(tanaka.depth, 2)
        self.assertEqual(tanaka.symbol_dims, {-1: 2, -2: 1})


if __name__ == "__main__":
    unittest.main()
