"""
CR Algebras inside the Contact Algebra

A CR algebra pair (g, q) is stored through the complexification of g (a
conjugation-stable graded subspace of the complexified contact algebra) and a
complex graded subalgebra q of it, both truncated at ``max_degree``.

Key Features:
- Validation of the CR algebra axioms (closure, q inside g, conjugation)
- Freeman sequence with an explicit status under the degree budget
- Tanaka sequence with the graded dimensions of its symbol
- The universal pair (c, u) and core extraction into the universal core
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Optional

from abscore import AbstractCore
from contact import ContactAlgebra, algebra_from_context
from element_syntax import parse_element
from exactla import ContactEngineError, InjectiveSolver, SparseVector, Subspace
from graded import (
    GradedSubspace,
    bracket_span,
    bracket_violations,
    component_elements,
    conjugate_graded,
    full_component,
    graded_dims,
    graded_intersect,
    graded_span,
    graded_sum,
    is_graded_subspace,
    project_extremal,
    subspace_with_bracket_condition,
    total_dim,
    universal_component,
)
from reports import ChainStatus, CheckList

logger = logging.getLogger(__name__)


class DegeneratePairError(ContactEngineError):
    """The Freeman chain does not reach q ∩ q̄; the pair is not finitely nondegenerate."""


@dataclass
class CRAlgebraPair:
    """A CR algebra (g, q), truncated at ``max_degree``."""

    algebra: ContactAlgebra
    max_degree: int
    g: GradedSubspace
    q: GradedSubspace
    name: str = ""

    @classmethod
    def from_elements(cls, algebra: ContactAlgebra, g_elements, q_elements, max_degree: int, name: str = "") -> "CRAlgebraPair":
        return cls(
            algebra,
            max_degree,
            graded_span(algebra, g_elements, max_degree),
            graded_span(algebra, q_elements, max_degree),
            name,
        )

    @classmethod
    def from_document(cls, document: Mapping[str, Any]) -> "CRAlgebraPair":
        """Load a pair from a JSON-compatible document.

        Expected keys: ``context`` ({n, signature, basis_kind, max_degree}),
        ``g`` and ``q`` (lists of element expressions), optional ``name``.
        """
        algebra, max_degree = algebra_from_context(document.get("context", {}))
        g_elements = [parse_element(text, algebra) for text in document.get("g", [])]
        q_elements = [parse_element(text, algebra) for text in document.get("q", [])]
        return cls.from_elements(algebra, g_elements, q_elements, max_degree, document.get("name", ""))

    @property
    def q_bar(self) -> GradedSubspace:
        return conjugate_graded(self.algebra, self.q)

    def isotropy(self) -> GradedSubspace:
        """q ∩ q̄, the complexified isotropy algebra."""
        return graded_intersect(self.q, self.q_bar)

    def dims(self) -> Dict[str, Any]:
        return {
            "g": graded_dims(self.g),
            "q": graded_dims(self.q),
            "g_total": total_dim(self.g),
            "q_total": total_dim(self.q),
        }

    def check_closure(self) -> CheckList:
        checks = CheckList()
        algebra, top = self.algebra, self.max_degree
        bad_g = bracket_violations(algebra, self.g, self.g, self.g, top)
        checks.add("g_closed", not bad_g, f"bracket leaves g in degrees {bad_g}" if bad_g else "")
        bad_q = bracket_violations(algebra, self.q, self.q, self.q, top)
        checks.add("q_closed", not bad_q, f"bracket leaves q in degrees {bad_q}" if bad_q else "")
        return checks

    def check(self) -> CheckList:
        """Exact checks of the CR algebra axioms up to the truncation degree."""
        checks = self.check_closure()
        algebra = self.algebra
        checks.add("q_in_g", is_graded_subspace(self.q, self.g))
        checks.add("g_conjugation_stable", conjugate_graded(algebra, self.g) == self.g)
        spanned = graded_sum(self.q, self.q_bar)
        codimension = total_dim(self.g) - total_dim(spanned)
        checks.add(
            "hypersurface_type",
            is_graded_subspace(spanned, self.g) and codimension == 1,
            f"codimension of q + q̄ in g is {codimension}",
        )
        return checks


# ---------------------------------------------------------------------------
# The universal pair
# ---------------------------------------------------------------------------


def universal_graded(algebra: ContactAlgebra, max_degree: int, conjugate: bool = False) -> GradedSubspace:
    return {
        p: universal_component(algebra, p, conjugate) for p in range(-2, max_degree + 1)
    }


def build_universal_u(algebra: ContactAlgebra, max_degree: int) -> CRAlgebraPair:
    """The pair (c, u), truncated at ``max_degree``."""
    if max_degree < 0:
        raise ContactEngineError("the universal pair needs max_degree >= 0")
    g = {p: full_component(algebra, p) for p in range(-2, max_degree + 1)}
    return CRAlgebraPair(algebra, max_degree, g, universal_graded(algebra, max_degree), "universal")


def universal_freeman_terms(algebra: ContactAlgebra, max_degree: int, steps: int) -> List[GradedSubspace]:
    """Closed-form Freeman terms u_{-1}, u_0, ..., u_{steps-2} of the universal pair."""
    u = universal_graded(algebra, max_degree)
    u_bar = universal_graded(algebra, max_degree, conjugate=True)
    both = graded_intersect(u, u_bar)
    terms = [u]
    for p in range(0, steps - 1):
        term = {}
        for j in range(-2, max_degree + 1):
            if j < 0:
                term[j] = both[j]
            elif j <= p - 1:
                term[j] = both[j]
            else:
                term[j] = u[j]
        terms.append(term)
    return terms


# ---------------------------------------------------------------------------
# Freeman and Tanaka sequences
# ---------------------------------------------------------------------------


@dataclass
class FreemanChain:
    """q_{-1} ⊇ q_0 ⊇ q_1 ⊇ ... with its stabilization data."""

    terms: List[GradedSubspace]
    status: ChainStatus
    nondegeneracy_order: Optional[int] = None
    truncated: bool = False
    steps_used: int = 0

    @property
    def dims(self) -> List[int]:
        return [total_dim(term) for term in self.terms]

    @property
    def stabilization_index(self) -> int:
        """Index p of the first term q_p equal to all later ones."""
        return len(self.terms) - 2

    def term(self, p: int) -> GradedSubspace:
        """q_p for p >= -1 (constant after stabilization)."""
        return self.terms[min(p + 1, len(self.terms) - 1)]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "status": self.status.value,
            "dims": self.dims,
            "graded_dims": [
                {str(p): d for p, d in graded_dims(term).items() if d} for term in self.terms
            ],
            "k": self.nondegeneracy_order,
            "truncated": self.truncated,
        }


def freeman_sequence(pair: CRAlgebraPair, extra_steps: int = 2) -> FreemanChain:
    """Iterate q_p = {Z in q_{p-1} : [Z, q̄] ⊂ q_{p-1} + q̄} until it stabilizes.

    Conditions whose bracket would land above the truncation degree are not
    imposed; the result is then certified up to the budget only.
    """
    algebra, top = pair.algebra, pair.max_degree
    q_bar = pair.q_bar
    partners = {e: component_elements(algebra, q_bar[e], e) for e in q_bar if q_bar[e].dim}
    isotropy = graded_intersect(pair.q, q_bar)
    budget = top + extra_steps
    terms = [pair.q]
    truncated = False
    stabilized = False
    previous = pair.q
    for step in range(budget):
        target = graded_sum(previous, q_bar)
        current = {}
        for d, candidates in previous.items():
            for e, ys in partners.items():
                total = d + e
                if total < -2:
                    continue
                if total > top:
                    if candidates.dim:
                        truncated = True
                    continue
                candidates = subspace_with_bracket_condition(algebra, candidates, d, ys, target[total])
            current[d] = candidates
        if current == previous:
            stabilized = True
            break
        terms.append(current)
        previous = current
        logger.debug(f"Freeman term q_{step} of {pair.name or 'pair'}: dim {total_dim(current)}")

    if not stabilized:
        logger.warning(f"Freeman chain of {pair.name or 'pair'} did not stabilize in {budget} steps")
        return FreemanChain(terms, ChainStatus.INCONCLUSIVE, None, truncated, budget)
    if previous != isotropy:
        return FreemanChain(terms, ChainStatus.DEGENERATE, None, truncated, len(terms))
    order = next(index for index, term in enumerate(terms) if term == isotropy)
    return FreemanChain(terms, ChainStatus.CERTIFIED_UP_TO_BUDGET, order, truncated, len(terms))


def model_freeman_terms(pair: CRAlgebraPair, count: int) -> List[GradedSubspace]:
    """Freeman terms predicted for a model pair: q_r = ⊕_{p>=r} q^p ⊕ ⊕_{0<=p<r} q^p ∩ q̄^p."""
    isotropy = pair.isotropy()
    terms = [pair.q]
    for r in range(0, count - 1):
        term = {}
        for p, component in pair.q.items():
            if p < 0:
                term[p] = isotropy[p]
            elif p < r:
                term[p] = isotropy[p]
            else:
                term[p] = component
        terms.append(term)
    return terms


@dataclass
class TanakaChain:
    """g_{-1} ⊆ g_{-2} ⊆ ... generated by g_{-1} = q + q̄."""

    terms: List[GradedSubspace]
    reaches_g: bool
    symbol_dims: Dict[int, int] = field(default_factory=dict)

    @property
    def depth(self) -> int:
        return len(self.terms)

    @property
    def dims(self) -> List[int]:
        return [total_dim(term) for term in self.terms]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "depth": self.depth,
            "dims": self.dims,
            "reaches_g": self.reaches_g,
            "symbol_dims": {str(p): d for p, d in sorted(self.symbol_dims.items(), reverse=True)},
        }


def tanaka_sequence(pair: CRAlgebraPair) -> TanakaChain:
    """g_p = g_{p+1} + [g_{-1}, g_{p+1}], starting from g_{-1} = q + q̄."""
    algebra, top = pair.algebra, pair.max_degree
    first = graded_sum(pair.q, pair.q_bar)
    terms = [first]
    current = first
    while True:
        grown = dict(current)
        for p, u in first.items():
            if not u.dim:
                continue
            for q, v in current.items():
                total = p + q
                if not v.dim or total < -2 or total > top:
                    continue
                grown[total] = grown[total] + bracket_span(algebra, u, p, v, q)
        if grown == current:
            break
        terms.append(grown)
        current = grown
    # symbol in degree -j: the degree -j part of g_{-j} modulo that of g_{-j+1}
    symbol = {}
    for j in (1, 2):
        if j > len(terms):
            break
        below = terms[j - 2][-j].dim if j > 1 else 0
        symbol[-j] = terms[j - 1][-j].dim - below
    return TanakaChain(terms, current == pair.g, symbol)


# ---------------------------------------------------------------------------
# Core extraction
# ---------------------------------------------------------------------------


def extract_core(pair: CRAlgebraPair, chain: Optional[FreemanChain] = None) -> AbstractCore:
    """Core of a finitely nondegenerate pair, realized inside the universal core.

    The holomorphic component in degree p is the extremal projection of the
    degree-p part of the Freeman term q_p.
    """
    chain = chain or freeman_sequence(pair)
    if chain.status is not ChainStatus.CERTIFIED_UP_TO_BUDGET:
        raise DegeneratePairError(
            f"{pair.name or 'pair'} is not finitely nondegenerate (Freeman status {chain.status.value})"
        )
    algebra = pair.algebra
    components: Dict[int, Subspace] = {}
    for p in range(0, pair.max_degree + 1):
        term = chain.term(p)
        components[p] = project_extremal(algebra, term[p], p)
    return AbstractCore(algebra, components)


def levi_maps(core: AbstractCore) -> Dict[int, List[List[SparseVector]]]:
    """Higher Levi maps of a core, in the format read by ``AbstractCore.from_levi_maps``.

    ``maps[p][k][a]`` holds the coordinates of [v_k, zb_a] in the basis of
    m^{(p-1)(10)} (the holomorphic variables when p = 0).
    """
    algebra, n = core.algebra, core.algebra.n
    antiholomorphic = [algebra.variable(n + a) for a in range(n)]
    maps: Dict[int, List[List[SparseVector]]] = {}
    previous = [algebra.variable(a) for a in range(n)]
    for p in range(0, core.height + 1):
        generators = core.generators(p)
        solver = InjectiveSolver([algebra.to_vector(x) for x in previous], algebra.dim(p - 1))
        rows = []
        for x in generators:
            row = []
            for zb in antiholomorphic:
                coords = solver.solve(algebra.to_vector(algebra.bracket(x, zb)))
                if coords is None:
                    raise ContactEngineError(f"Levi map leaves the core in degree {p - 1}")
                row.append(coords)
            rows.append(row)
        maps[p] = rows
        previous = generators
    return maps
