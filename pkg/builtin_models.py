"""
Builtin Model Registry

Models verified by the regression run, each with the graded dimensions and
nondegeneracy order it is expected to produce.

Key Features:
- The three simple models as 4x4 matrix algebras, embedded by transitivity
- Nonsemisimple models built from line stabilizers of 7-dimensional cores
- The 3-nondegenerate model with core z^2, z^3 (n = 1)
- The conformal unitary family (prolongation of ℂE ⊕ S^{1,1}) and the
  so(3,2) grading for n = 1
- Candidates are built lazily and cached behind a lock
"""

import logging
import threading
from dataclasses import dataclass
from typing import Callable, Dict, List, Sequence, Tuple

from abscore import AbstractCore
from contact import SymplecticSpace, get_contact_algebra
from element_syntax import parse_element
from graded import component_elements, filtered_component, full_component, span_elements
from models import (
    MatrixAlgebraPresentation,
    MatrixElement,
    ModelCandidate,
    line_stabilizer,
    negative_part,
    prolong_within_contact,
    prolongation_embed,
    unit_matrix,
)

logger = logging.getLogger(__name__)

Entries = Sequence[Tuple[int, int, str]]


@dataclass(frozen=True)
class ModelEntry:
    """Registry row: how to build a model and what it should look like."""

    name: str
    description: str
    builder: Callable[[], ModelCandidate]
    expected_dims: Tuple[int, ...]
    expected_k: int
    property_j: bool
    kind: str = "contact"

    @property
    def expected_total(self) -> int:
        return sum(self.expected_dims)


# ---------------------------------------------------------------------------
# Simple models
# ---------------------------------------------------------------------------

# identification of the negative part, shared by the three presentations
_IDENTIFICATION = {
    "e_2": "T",
    "e1_10": "z1",
    "e2_10": "z2",
    "e1_01": "zb1",
    "e2_01": "zb2",
}


def _presentation(name: str, context: Dict, rows: Sequence[Tuple[str, int, Entries]]) -> MatrixAlgebraPresentation:
    elements = [MatrixElement(label, degree, unit_matrix(4, entries)) for label, degree, entries in rows]
    return MatrixAlgebraPresentation(
        name, context, 4, elements, dict(_IDENTIFICATION), {0: ["z1*z2"]}
    )


def sl4_presentation() -> MatrixAlgebraPresentation:
    """sl(4, R) with the degree -1 part in the complex-Witt basis."""
    half = "1/2"
    return _presentation(
        "sl4",
        {"n": 2, "signature": [1, 1], "basis_kind": "complex-witt"},
        [
            ("E2", 2, [(3, 4, "-4")]),
            ("E1_10", 1, [(1, 4, "i"), (2, 4, "1")]),
            ("E2_10", 1, [(3, 1, "i"), (3, 2, "1")]),
            ("E1_01", 1, [(1, 4, "-i"), (2, 4, "1")]),
            ("E2_01", 1, [(3, 1, "-i"), (3, 2, "1")]),
            ("E", 0, [(3, 3, "1"), (4, 4, "-1")]),
            ("J", 0, [(1, 2, "-1"), (2, 1, "1")]),
            ("H", 0, [(1, 1, half), (2, 2, half), (3, 3, "-" + half), (4, 4, "-" + half)]),
            ("e0_10", 0, [(1, 1, "1"), (1, 2, "-i"), (2, 1, "-i"), (2, 2, "-1")]),
            ("e0_01", 0, [(1, 1, "1"), (1, 2, "i"), (2, 1, "i"), (2, 2, "-1")]),
            ("e1_10", -1, [(1, 3, "i"), (2, 3, "1")]),
            ("e1_01", -1, [(1, 3, "-i"), (2, 3, "1")]),
            ("e2_10", -1, [(4, 1, "-1"), (4, 2, "i")]),
            ("e2_01", -1, [(4, 1, "-1"), (4, 2, "-i")]),
            ("e_2", -2, [(4, 3, "-4")]),
        ],
    )


def su13_presentation() -> MatrixAlgebraPresentation:
    return _presentation(
        "su13",
        {"n": 2, "signature": [1, 1]},
        [
            ("E2", 2, [(1, 1, "2*i"), (1, 2, "-2*i"), (2, 1, "2*i"), (2, 2, "-2*i")]),
            ("E1_10", 1, [(3, 1, "1"), (3, 2, "-1")]),
            ("E2_10", 1, [(1, 4, "1"), (2, 4, "1")]),
            ("E1_01", 1, [(1, 3, "1"), (2, 3, "1")]),
            ("E2_01", 1, [(4, 1, "1"), (4, 2, "-1")]),
            ("E", 0, [(1, 2, "1"), (2, 1, "1")]),
            ("J", 0, [(3, 3, "i"), (4, 4, "-i")]),
            ("H", 0, [(1, 1, "1/2*i"), (2, 2, "1/2*i"), (3, 3, "-1/2*i"), (4, 4, "-1/2*i")]),
            ("e0_10", 0, [(3, 4, "1")]),
            ("e0_01", 0, [(4, 3, "-1")]),
            ("e1_10", -1, [(1, 4, "1"), (2, 4, "-1")]),
            ("e1_01", -1, [(4, 1, "1"), (4, 2, "1")]),
            ("e2_10", -1, [(3, 1, "1"), (3, 2, "1")]),
            ("e2_01", -1, [(1, 3, "1"), (2, 3, "-1")]),
            ("e_2", -2, [(1, 1, "2*i"), (1, 2, "2*i"), (2, 1, "-2*i"), (2, 2, "-2*i")]),
        ],
    )


def su22_presentation() -> MatrixAlgebraPresentation:
    return _presentation(
        "su22",
        {"n": 2, "signature": [2, 0]},
        [
            ("E2", 2, [(1, 1, "2*i"), (1, 3, "-2*i"), (3, 1, "2*i"), (3, 3, "-2*i")]),
            ("E1_10", 1, [(2, 1, "1"), (2, 3, "-1")]),
            ("E2_10", 1, [(1, 4, "1"), (3, 4, "1")]),
            ("E1_01", 1, [(1, 2, "-1"), (3, 2, "-1")]),
            ("E2_01", 1, [(4, 1, "1"), (4, 3, "-1")]),
            ("E", 0, [(1, 3, "1"), (3, 1, "1")]),
            ("J", 0, [(2, 2, "i"), (4, 4, "-i")]),
            ("H", 0, [(1, 1, "1/2*i"), (2, 2, "-1/2*i"), (3, 3, "1/2*i"), (4, 4, "-1/2*i")]),
            ("e0_10", 0, [(2, 4, "1")]),
            ("e0_01", 0, [(4, 2, "1")]),
            ("e1_10", -1, [(1, 4, "1"), (3, 4, "-1")]),
            ("e1_01", -1, [(4, 1, "1"), (4, 3, "1")]),
            ("e2_10", -1, [(2, 1, "1"), (2, 3, "1")]),
            ("e2_01", -1, [(1, 2, "-1"), (3, 2, "1")]),
            ("e_2", -2, [(1, 1, "2*i"), (1, 3, "2*i"), (3, 1, "-2*i"), (3, 3, "-2*i")]),
        ],
    )


# ---------------------------------------------------------------------------
# Models built inside c
# ---------------------------------------------------------------------------


def stabilizer_model(name: str, signature: Sequence[int], generator: str) -> ModelCandidate:
    """Model ĝ_- ⊕ ĝ^0 with ĝ^0 the stabilizer of the line through ``generator``."""
    algebra = get_contact_algebra(SymplecticSpace.complex_symplectic(2, tuple(signature)))
    P = parse_element(generator, algebra, 0)
    g0 = line_stabilizer(algebra, P)
    core = AbstractCore.from_generators(algebra, {0: [P]})
    return ModelCandidate.from_elements(
        algebra,
        negative_part(algebra) + component_elements(algebra, g0, 0),
        core,
        name,
        {"P": P, "Pbar": algebra.conjugate(P)},
        maximality_known=False,
    )


def three_nondegenerate_model() -> ModelCandidate:
    """The 8-dimensional model of the core spanned by z^2 and z^3."""
    algebra = get_contact_algebra(SymplecticSpace.complex_symplectic(1))
    labels = {
        "E": algebra.grading_element(),
        "M": parse_element("z^2+z*zb", algebra, 0),
        "N": parse_element("z^3+2*z^2*zb+z*zb^2-3*i*mu^1[z]-3*i*mu^1[zb]", algebra, 1),
    }
    labels["Mbar"] = algebra.conjugate(labels["M"])
    labels["Nbar"] = algebra.conjugate(labels["N"])
    core = AbstractCore.from_generators(
        algebra, {0: [parse_element("z^2", algebra, 0)], 1: [parse_element("z^3", algebra, 1)]}
    )
    return ModelCandidate.from_elements(
        algebra, negative_part(algebra) + list(labels.values()), core, "three_nondeg", labels
    )


def so32_model(drop_top: bool = False) -> ModelCandidate:
    """n = 1: c^0 ⊕ mu^1(c^-1) ⊕ mu^2(mu^0(T)), the so(3,2) grading.

    ``drop_top`` leaves out the degree-2 part (a model that is not maximal).
    """
    algebra = get_contact_algebra(SymplecticSpace.complex_symplectic(1))
    elements = negative_part(algebra) + algebra.basis_elements(0)
    elements += [algebra.mu(1, w) for w in algebra.basis_elements(-1)]
    if not drop_top:
        elements.append(algebra.mu(2, algebra.mu(0, algebra.T)))
    core = AbstractCore.from_generators(algebra, {0: [parse_element("z^2", algebra, 0)]})
    name = "so32_truncated" if drop_top else "so32"
    return ModelCandidate.from_elements(algebra, elements, core, name)


def hyperquadric_model(n: int = 3, signature: Sequence[int] = (3, 0), top: int = 2) -> ModelCandidate:
    """Prolongation of ℂE ⊕ S^{1,1}: the conformal unitary algebra, empty core."""
    algebra = get_contact_algebra(SymplecticSpace.complex_symplectic(n, tuple(signature)))
    g0 = filtered_component(
        algebra, 0, lambda key: key[0] == 0 or (key[0] == -1 and algebra.weight(key) == 0)
    )
    components = prolong_within_contact(algebra, g0, top)
    name = f"hyperquadric_{n}_{signature[0]}{signature[1]}"
    return ModelCandidate.from_components(
        algebra, components, AbstractCore.heisenberg(algebra), name
    )


def truncated_contact_model(n: int = 1, top: int = 2) -> ModelCandidate:
    """c itself up to degree ``top`` against the core z^2 (not a model)."""
    algebra = get_contact_algebra(SymplecticSpace.complex_symplectic(n))
    components = {p: full_component(algebra, p) for p in range(-2, top + 1)}
    z = algebra.variable(0)
    core = AbstractCore(algebra, {0: span_elements(algebra, [algebra.symmetric_product(z, z)], 0)})
    return ModelCandidate.from_components(algebra, components, core, "truncated_contact")


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------


def _entries() -> List[ModelEntry]:
    return [
        ModelEntry("sl4", "sl(4,R), complex-Witt basis", lambda: prolongation_embed(sl4_presentation()), (1, 4, 5, 4, 1), 2, True, "matrix"),
        ModelEntry("su13", "su(1,3)", lambda: prolongation_embed(su13_presentation()), (1, 4, 5, 4, 1), 2, True, "matrix"),
        ModelEntry("su22", "su(2,2)", lambda: prolongation_embed(su22_presentation()), (1, 4, 5, 4, 1), 2, True, "matrix"),
        ModelEntry("stab_20_z1z1", "signature (2,0), core z1^2", lambda: stabilizer_model("stab_20_z1z1", (2, 0), "z1^2"), (1, 4, 5), 2, True),
        ModelEntry("stab_11_z1z1", "signature (1,1), core z1^2", lambda: stabilizer_model("stab_11_z1z1", (1, 1), "z1^2"), (1, 4, 5), 2, True),
        ModelEntry("stab_11_z2z2", "signature (1,1), core z2^2", lambda: stabilizer_model("stab_11_z2z2", (1, 1), "z2^2"), (1, 4, 5), 2, True),
        ModelEntry("stab_11_null", "signature (1,1), null core", lambda: stabilizer_model("stab_11_null", (1, 1), "z1^2-z2^2-2*i*z1*z2"), (1, 4, 6), 2, True),
        ModelEntry("three_nondeg", "3-nondegenerate, core z^2 + z^3", three_nondegenerate_model, (1, 2, 3, 2), 3, False),
        ModelEntry("so32", "so(3,2) grading, n = 1", so32_model, (1, 2, 4, 2, 1), 2, True),
        ModelEntry("hyperquadric", "su(4,1), n = 3", hyperquadric_model, (1, 6, 10, 6, 1), 1, True),
    ]


_registry: Dict[str, ModelEntry] = {}
_candidates: Dict[str, ModelCandidate] = {}
_registry_lock = threading.Lock()


def builtin_models() -> Dict[str, ModelEntry]:
    with _registry_lock:
        if not _registry:
            _registry.update({entry.name: entry for entry in _entries()})
        return dict(_registry)


def get_model(name: str) -> ModelCandidate:
    """Build (once) and return a builtin model candidate."""
    entries = builtin_models()
    if name not in entries:
        raise KeyError(f"unknown builtin model {name!r}; known: {sorted(entries)}")
    with _registry_lock:
        candidate = _candidates.get(name)
    if candidate is None:
        logger.debug(f"Building builtin model {name}")
        candidate = entries[name].builder()
        with _registry_lock:
            candidate = _candidates.setdefault(name, candidate)
    return candidate
