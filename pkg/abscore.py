"""
Abstract Cores

Cores are stored in their normal form inside the universal core: the negative
part is the whole of c^{-2} ⊕ c^{-1}, and each component of degree p >= 0 is
given by its holomorphic part, a subspace of the extremal eigenspace S^{p+2,0}
of the complexified contact algebra.

Key Features:
- Exact validation of the core axioms, as a report
- Binomial dimension bound for the holomorphic components
- Immersion of abstractly presented cores from their higher Levi maps
- Automorphisms of (c, J), prolonged to every degree, acting on cores
"""

import logging
from dataclasses import dataclass, field
from itertools import permutations, product
from math import comb
from typing import Any, Dict, List, Mapping, Optional, Sequence

from sympy.polys.domains import QQ_I
from sympy.polys.matrices import DomainMatrix

from contact import ContactAlgebra, ContactElement, Exponents, algebra_from_context, poly_product
from classify7 import label_for_core
from element_syntax import format_element, parse_element
from exactla import (
    ONE,
    ZERO,
    ContactEngineError,
    InjectiveSolver,
    Scalar,
    SparseVector,
    Subspace,
    as_scalar,
    conj,
    rank,
)
from graded import (
    component_elements,
    extremal_component,
    span_elements,
    zero_component,
)
from reports import CheckList

logger = logging.getLogger(__name__)


class AutomorphismError(ContactEngineError):
    """A degree-0 map is not in Aut(c, J)."""


@dataclass
class CoreReport:
    """Outcome of :func:`validate`."""

    checks: CheckList
    height: int

    @property
    def valid(self) -> bool:
        return self.checks.passed

    def violations(self) -> List[str]:
        return [result.name for result in self.checks.failures()]

    def to_dict(self) -> Dict[str, Any]:
        return {"valid": self.valid, "height": self.height, "checks": self.checks.to_list()}


@dataclass
class AbstractCore:
    """A core realized inside the universal core.

    ``components[p]`` is the holomorphic part m^{p(10)} for p >= 0; missing
    degrees are zero.
    """

    algebra: ContactAlgebra
    components: Dict[int, Subspace] = field(default_factory=dict)

    def __post_init__(self):
        self.components = {p: s for p, s in sorted(self.components.items()) if s.dim}

    def __eq__(self, other) -> bool:
        if not isinstance(other, AbstractCore):
            return NotImplemented
        return self.algebra.space == other.algebra.space and self.components == other.components

    @classmethod
    def from_generators(cls, algebra: ContactAlgebra, generators: Mapping[int, Sequence[ContactElement]]) -> "AbstractCore":
        return cls(algebra, {p: span_elements(algebra, xs, p) for p, xs in generators.items()})

    @classmethod
    def from_document(cls, document: Mapping[str, Any]) -> "AbstractCore":
        """Core document: ``context`` plus ``components`` {degree: [expressions]}."""
        algebra, _ = algebra_from_context(document.get("context", {}))
        generators = {
            int(p): [parse_element(text, algebra, int(p)) for text in texts]
            for p, texts in document.get("components", {}).items()
        }
        return cls.from_generators(algebra, generators)

    @classmethod
    def heisenberg(cls, algebra: ContactAlgebra) -> "AbstractCore":
        """The core with no nonnegative part (Levi-nondegenerate type)."""
        return cls(algebra, {})

    @classmethod
    def from_levi_maps(cls, algebra: ContactAlgebra, maps: Mapping[int, Sequence[Sequence[SparseVector]]]) -> "AbstractCore":
        """Immerse an abstractly presented core into the universal core.

        ``maps[p][k][a]`` gives L^{p+2}(v_k) evaluated on the a-th antiholomorphic
        generator, as coordinates in the basis of m^{(p-1)(10)} (for p = 0, the
        holomorphic generators). The image of v_k is the unique element of
        S^{p+2,0} with the same brackets.
        """
        n = algebra.n
        previous = [algebra.variable(a) for a in range(n)]
        components = {}
        for p in range(0, max(maps, default=-1) + 1):
            images = []
            vectors = maps.get(p, [])
            if vectors:
                solver, monomials = _levi_solver(algebra, p)
                size = algebra.dim(p - 1)
                for k, values in enumerate(vectors):
                    target: SparseVector = {}
                    for a, coords in enumerate(values):
                        image = algebra.zero(p - 1)
                        for index, value in coords.items():
                            image = image + previous[index].scale(value)
                        for idx, value in algebra.to_vector(image).items():
                            target[a * size + idx] = value
                    solution = solver.solve(target)
                    if solution is None:
                        raise ContactEngineError(
                            f"Levi map of generator {k} in degree {p} is not realized in the universal core"
                        )
                    images.append(
                        algebra.element(p, {monomials[m]: v for m, v in solution.items()})
                    )
            components[p] = span_elements(algebra, images, p)
            previous = images
        return cls(algebra, components)

    # -- data -----------------------------------------------------------------

    @property
    def height(self) -> int:
        return max(self.components, default=-1)

    @property
    def nondegeneracy_order(self) -> int:
        return self.height + 2

    @property
    def real_dim(self) -> int:
        return 1 + 2 * self.algebra.n + 2 * sum(s.dim for s in self.components.values())

    def holomorphic(self, p: int) -> Subspace:
        if p < 0:
            return extremal_component(self.algebra, p)
        return self.components.get(p, zero_component(self.algebra, p))

    def generators(self, p: int) -> List[ContactElement]:
        return component_elements(self.algebra, self.holomorphic(p), p)

    def levi_rank(self, p: int) -> int:
        """Rank of v ↦ ([v, zb_a])_a on m^{p(10)}."""
        algebra = self.algebra
        size = algebra.dim(p - 1)
        rows = []
        for x in self.generators(p):
            row: SparseVector = {}
            for a in range(algebra.n):
                zb = algebra.variable(algebra.n + a)
                for idx, value in algebra.to_vector(algebra.bracket(x, zb)).items():
                    row[a * size + idx] = value
            rows.append(row)
        return rank(rows, algebra.n * size) if rows else 0

    def fingerprint(self) -> Dict[str, Any]:
        return {
            "signature": list(self.algebra.space.signature),
            "height": self.height,
            "real_dim": self.real_dim,
            "dims": {str(p): s.dim for p, s in self.components.items()},
            "levi_ranks": {str(p): self.levi_rank(p) for p in self.components},
        }

    def to_dict(self) -> Dict[str, Any]:
        return {
            "context": self.algebra.space.describe(),
            "components": {
                str(p): [format_element(x) for x in self.generators(p)] for p in self.components
            },
            "height": self.height,
            "k": self.nondegeneracy_order,
        }


def _levi_solver(algebra: ContactAlgebra, p: int):
    monomials = [key for key in algebra.basis(p) if key[0] == -1 and algebra.weight(key) == p + 2]
    size = algebra.dim(p - 1)
    columns = []
    for key in monomials:
        x = algebra.basis_element(p, key)
        column: SparseVector = {}
        for a in range(algebra.n):
            zb = algebra.variable(algebra.n + a)
            for idx, value in algebra.to_vector(algebra.bracket(x, zb)).items():
                column[a * size + idx] = value
        columns.append(column)
    return InjectiveSolver(columns, algebra.n * size), monomials


def dimension_bound(core: AbstractCore) -> bool:
    """dim m^{p(10)} <= C(n+p+1, p+2) in every degree."""
    n = core.algebra.n
    return all(s.dim <= comb(n + p + 1, p + 2) for p, s in core.components.items())


def validate(core: AbstractCore, symmetry_degree: int = 2) -> CoreReport:
    """Check the core axioms exactly and collect violations."""
    algebra = core.algebra
    n = algebra.n
    checks = CheckList()

    jay = algebra.complex_structure_element()
    generators = [algebra.variable(a) for a in range(2 * n)]
    rotated = [algebra.bracket(jay, v) for v in generators]
    compatible = all(
        algebra.bracket(rotated[a], rotated[b]) == algebra.bracket(generators[a], generators[b])
        for a in range(2 * n)
        for b in range(a + 1, 2 * n)
    )
    checks.add("j_compatible", compatible, "[Jv, Jw] = [v, w] on degree -1")
    gram_rows = [
        {b: value for b, value in enumerate(row) if value} for row in algebra.gram
    ]
    checks.add("negative_part_nondegenerate", rank(gram_rows, 2 * n) == 2 * n)

    for p, component in core.components.items():
        extremal = extremal_component(algebra, p)
        checks.add(
            f"extremal_containment_{p}",
            component.is_subspace_of(extremal),
            f"m^{p}(10) must lie in S^{p + 2},0",
        )
        previous = core.holomorphic(p - 1)
        inside = all(
            previous.contains(algebra.to_vector(algebra.bracket(x, algebra.variable(n + a))))
            for x in core.generators(p)
            for a in range(n)
        )
        checks.add(
            f"levi_containment_{p}",
            inside,
            f"[m^{p}(10), c^-1(01)] must lie in m^{p - 1}(10)",
        )
        checks.add(f"levi_injective_{p}", core.levi_rank(p) == component.dim)
        if p <= symmetry_degree:
            checks.add(f"levi_symmetric_{p}", _levi_symmetric(algebra, core.generators(p), p))

    checks.add("dimension_bound", dimension_bound(core))
    report = CoreReport(checks, core.height)
    if not report.valid:
        logger.info(f"Core validation failed: {report.violations()}")
    return report


def _levi_symmetric(algebra: ContactAlgebra, generators: List[ContactElement], p: int) -> bool:
    """Iterated brackets with p+2 antiholomorphic generators are symmetric."""
    n = algebra.n
    antiholomorphic = [algebra.variable(n + a) for a in range(n)]
    for x in generators:
        values = {}
        for word in product(range(n), repeat=p + 2):
            value = x
            for a in word:
                value = algebra.bracket(value, antiholomorphic[a])
            values[word] = value
        for word, value in values.items():
            if any(values[other] != value for other in set(permutations(word))):
                return False
    return True


# ---------------------------------------------------------------------------
# Automorphisms of (c, J)
# ---------------------------------------------------------------------------


def _power(value: Scalar, exponent: int) -> Scalar:
    base = value if exponent >= 0 else ONE / value
    result = ONE
    for _ in range(abs(exponent)):
        result = result * base
    return result


class Automorphism:
    """A graded automorphism of c commuting with ad(J), given on degree -1.

    ``matrix`` has one column per generator w_b (z's then zb's) holding the
    coordinates of its image; ``conformal`` is the real factor λ with
    B(gv, gw) = λ B(v, w). The prolongation substitutes generators and scales
    layer i of degree p by λ^{i-p}.
    """

    def __init__(self, algebra: ContactAlgebra, matrix: Sequence[Sequence[Any]]):
        self.algebra = algebra
        self.logger = logger
        size = 2 * algebra.n
        self.matrix = tuple(tuple(as_scalar(v) for v in row) for row in matrix)
        if len(self.matrix) != size or any(len(row) != size for row in self.matrix):
            raise AutomorphismError(f"expected a {size}x{size} matrix")
        self.conformal = self._check()
        self._images: Dict[Exponents, Dict[Exponents, Scalar]] = {}

    def _check(self) -> Scalar:
        algebra, n = self.algebra, self.algebra.n
        s = self.matrix
        for a in range(n):
            for b in range(n):
                if s[n + a][b] or s[a][n + b]:
                    raise AutomorphismError("map does not commute with J")
                if s[n + a][n + b] != conj(s[a][b]):
                    raise AutomorphismError("map is not real")
        g = algebra.gram
        size = 2 * n
        factor: Optional[Scalar] = None
        for a in range(size):
            for b in range(size):
                value = ZERO
                for c in range(size):
                    for d in range(size):
                        if g[c][d]:
                            value += s[c][a] * g[c][d] * s[d][b]
                if g[a][b]:
                    ratio = value / g[a][b]
                    if factor is None:
                        factor = ratio
                    elif ratio != factor:
                        raise AutomorphismError("map is not conformally symplectic")
                elif value:
                    raise AutomorphismError("map is not conformally symplectic")
        if factor is None or not factor or factor.y:
            raise AutomorphismError("conformal factor must be a nonzero real number")
        return factor

    @classmethod
    def identity(cls, algebra: ContactAlgebra) -> "Automorphism":
        size = 2 * algebra.n
        return cls(algebra, [[ONE if r == c else ZERO for c in range(size)] for r in range(size)])

    @classmethod
    def from_unitary(cls, algebra: ContactAlgebra, unitary: Sequence[Sequence[Any]]) -> "Automorphism":
        """g(z_b) = Σ_a U[a][b] z_a, extended by conjugation."""
        n = algebra.n
        u = [[as_scalar(v) for v in row] for row in unitary]
        matrix = [[ZERO] * (2 * n) for _ in range(2 * n)]
        for a in range(n):
            for b in range(n):
                matrix[a][b] = u[a][b]
                matrix[n + a][n + b] = conj(u[a][b])
        return cls(algebra, matrix)

    @classmethod
    def from_real_matrix(cls, algebra: ContactAlgebra, real: Sequence[Sequence[Any]]) -> "Automorphism":
        """From a real matrix acting on e_1..e_{2n} (columns are images)."""
        space = algebra.space
        size = space.size
        m = [[as_scalar(v) for v in row] for row in real]
        if any(v.y for row in m for v in row):
            raise AutomorphismError("matrix must be real")
        w = DomainMatrix([list(row) for row in space.variable_vectors()], (size, size), QQ_I)
        e = DomainMatrix([list(row) for row in space.e_basis_in_variables()], (size, size), QQ_I)
        converted = e * DomainMatrix(m, (size, size), QQ_I) * w
        return cls(algebra, converted.to_list())

    @classmethod
    def rotation(cls, algebra: ContactAlgebra, w: Any) -> "Automorphism":
        """z ↦ w·z for a unit Gaussian rational w (n = 1)."""
        if algebra.n != 1:
            raise AutomorphismError("rotation is defined for n = 1")
        return cls.from_unitary(algebra, [[w]])

    def _substitute(self, exps: Exponents) -> Dict[Exponents, Scalar]:
        cached = self._images.get(exps)
        if cached is not None:
            return cached
        size = 2 * self.algebra.n
        result: Dict[Exponents, Scalar] = {(0,) * size: ONE}
        for b, power in enumerate(exps):
            image = {
                tuple(1 if k == a else 0 for k in range(size)): self.matrix[a][b]
                for a in range(size)
                if self.matrix[a][b]
            }
            for _ in range(power):
                result = poly_product(result, image)
        self._images[exps] = result
        return result

    def apply(self, x: ContactElement) -> ContactElement:
        if x.space != self.algebra.space:
            raise AutomorphismError("element belongs to a different space")
        terms: Dict = {}
        for (layer, exps), value in x.terms.items():
            factor = value * _power(self.conformal, layer - x.degree)
            for image, coeff in self._substitute(exps).items():
                key = (layer, image)
                updated = terms.get(key, ZERO) + factor * coeff
                if updated:
                    terms[key] = updated
                else:
                    terms.pop(key, None)
        return ContactElement(x.space, x.degree, terms)

    def apply_subspace(self, subspace: Subspace, p: int) -> Subspace:
        algebra = self.algebra
        return span_elements(algebra, (self.apply(x) for x in component_elements(algebra, subspace, p)), p)


def apply_automorphism(g: Automorphism, core: AbstractCore) -> AbstractCore:
    """g·m, componentwise."""
    if g.algebra.space != core.algebra.space:
        raise AutomorphismError("automorphism and core live over different spaces")
    return AbstractCore(
        core.algebra, {p: g.apply_subspace(s, p) for p, s in core.components.items()}
    )


def isomorphic(first: AbstractCore, second: AbstractCore) -> Optional[bool]:
    """Decide isomorphism of 7-dimensional cores; None when no procedure applies."""
    if first.algebra.space.signature != second.algebra.space.signature:
        return False
    if first.fingerprint() != second.fingerprint():
        return False
    if first.real_dim != 7 or first.algebra.n != 2:
        return None
    return label_for_core(first).same_orbit(label_for_core(second))
