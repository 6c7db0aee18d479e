"""
Graded Contact Algebra Engine

The contact algebra of a symplectic space with compatible complex structure,
realized over the Gaussian rationals. Every graded component is stored in its
canonical decomposition into layers:

- layer -1: the polynomial part S^{p+2} (degree p + 2 in the 2n variables)
- layer i >= 0: the image of the iterated mu-maps, carrying a polynomial of
  degree p - 2i

The variables are the holomorphic generators z_a = (e_a - i J e_a)/2 and their
conjugates zb_a. The constant in layer -1 at degree -2 is the central element T.

Key Features:
- Closed-form brackets between basis elements, with a recursive oracle built
  from the two defining relations of the mu-maps
- mu-maps, projections onto layers / bidegrees / extremal eigenspaces
- ad(J) eigen-decomposition and conjugation
- Transitivity solver recovering an element from its action on degree -1
- Thread-safe memo tables, shared per symplectic space
"""

import logging
import threading
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations_with_replacement
from math import comb
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from sympy.polys.domains import QQ, QQ_I
from sympy.polys.matrices import DomainMatrix

from exactla import (
    I_UNIT,
    ONE,
    ZERO,
    ContactEngineError,
    InjectiveSolver,
    Scalar,
    SparseVector,
    as_scalar,
    conj,
    hermitian_signature,
)

logger = logging.getLogger(__name__)

Exponents = Tuple[int, ...]
Key = Tuple[int, Exponents]
Terms = Dict[Key, Scalar]
Polynomial = Dict[Exponents, Scalar]


class InvalidSpaceError(ContactEngineError):
    """B/J data violate the symplectic-space axioms."""


class SpaceMismatchError(ContactEngineError):
    """Elements over different symplectic spaces were combined."""


class DegreeMismatchError(ContactEngineError):
    """An element of the wrong degree was supplied."""


class InvalidTargetError(ContactEngineError):
    """A projection target does not exist in the element's degree."""


class IndexRangeError(ContactEngineError):
    """Layer indices outside their admissible range."""


class NotRealizableError(ContactEngineError):
    """A prescribed action on degree -1 is not the action of any element."""


class BasisKind(Enum):
    """Normalized real bases of the degree -1 component."""

    COMPLEX_SYMPLECTIC = "complex-symplectic"
    COMPLEX_WITT = "complex-witt"


class Component(Enum):
    """Projection targets inside a graded component."""

    K = "k"
    XI = "xi"
    LAYER = "layer"
    BIDEGREE = "bidegree"
    M10 = "M10"
    M01 = "M01"


# ---------------------------------------------------------------------------
# Symplectic space
# ---------------------------------------------------------------------------

Matrix = Tuple[Tuple[Scalar, ...], ...]


def _matrix(rows: Sequence[Sequence[object]]) -> Matrix:
    return tuple(tuple(as_scalar(v) for v in row) for row in rows)


def _matmul(a: Matrix, b: Matrix) -> Matrix:
    inner = len(b)
    cols = len(b[0]) if b else 0
    return tuple(
        tuple(sum((row[k] * b[k][c] for k in range(inner)), ZERO) for c in range(cols))
        for row in a
    )


def _transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a)) if a else ()


@dataclass(frozen=True)
class SymplecticSpace:
    """Real symplectic space (R^{2n}, B) with a B-compatible complex structure J.

    ``B[i][j] = B(e_i, e_j)``; the columns of ``J`` are the images ``J e_i``.
    """

    n: int
    signature: Tuple[int, int]
    basis_kind: BasisKind
    B: Matrix
    J: Matrix

    @classmethod
    def complex_symplectic(cls, n: int, signature: Optional[Tuple[int, int]] = None) -> "SymplecticSpace":
        r, s = signature if signature is not None else (n, 0)
        if n < 1 or r < 0 or s < 0 or r + s != n:
            raise InvalidSpaceError(f"invalid signature {signature} for n={n}")
        size = 2 * n
        b = [[0] * size for _ in range(size)]
        j = [[0] * size for _ in range(size)]
        for i in range(n):
            b[i][i + n] = 1
            b[i + n][i] = -1
            if i < r:
                j[i + n][i] = -1  # J e_i = -e_{i+n}
                j[i][i + n] = 1  # J e_{i+n} = e_i
            else:
                j[i + n][i] = 1
                j[i][i + n] = -1
        space = cls(n, (r, s), BasisKind.COMPLEX_SYMPLECTIC, _matrix(b), _matrix(j))
        space.validate()
        return space

    @classmethod
    def complex_witt(cls) -> "SymplecticSpace":
        b = [[0] * 4 for _ in range(4)]
        j = [[0] * 4 for _ in range(4)]
        b[0][2], b[2][0], b[1][3], b[3][1] = 1, -1, 1, -1
        j[3][0] = -1  # J e1 = -e4
        j[0][3] = 1  # J e4 = e1
        j[2][1] = -1  # J e2 = -e3
        j[1][2] = 1  # J e3 = e2
        space = cls(2, (1, 1), BasisKind.COMPLEX_WITT, _matrix(b), _matrix(j))
        space.validate()
        return space

    @classmethod
    def from_matrices(cls, B, J, signature: Tuple[int, int], basis_kind: BasisKind = BasisKind.COMPLEX_SYMPLECTIC) -> "SymplecticSpace":
        size = len(B)
        if size % 2 or len(J) != size:
            raise InvalidSpaceError("B and J must be square of even size")
        space = cls(size // 2, tuple(signature), basis_kind, _matrix(B), _matrix(J))
        space.validate()
        return space

    @property
    def size(self) -> int:
        return 2 * self.n

    def validate(self) -> None:
        size = self.size
        if len(self.B) != size or len(self.J) != size:
            raise InvalidSpaceError("B and J must be 2n x 2n")
        for row in self.B + self.J:
            if len(row) != size or any(v.y for v in row):
                raise InvalidSpaceError("B and J must be real 2n x 2n matrices")
        if self.B != tuple(tuple(-v for v in row) for row in _transpose(self.B)):
            raise InvalidSpaceError("B is not skew-symmetric")
        if not DomainMatrix([list(r) for r in self.B], (size, size), QQ_I).det():
            raise InvalidSpaceError("B is degenerate")
        minus_identity = tuple(
            tuple(-ONE if r == c else ZERO for c in range(size)) for r in range(size)
        )
        if _matmul(self.J, self.J) != minus_identity:
            raise InvalidSpaceError("J does not square to -Id")
        if _matmul(_matmul(_transpose(self.J), self.B), self.J) != self.B:
            raise InvalidSpaceError("B(Jv, Jw) != B(v, w)")
        positive, negative, _ = hermitian_signature(self.hermitian_form())
        if (positive, negative) != tuple(self.signature):
            raise InvalidSpaceError(
                f"Hermitian form has signature {(positive, negative)}, declared {self.signature}"
            )

    def variable_vectors(self) -> Matrix:
        """Columns are z_1..z_n, zb_1..zb_n in e-coordinates."""
        size, n = self.size, self.n
        half = QQ_I(QQ(1, 2), 0)
        columns = []
        for a in range(n):
            column = [
                half * ((ONE if k == a else ZERO) - I_UNIT * self.J[k][a]) for k in range(size)
            ]
            columns.append(column)
        columns += [[conj(v) for v in column] for column in list(columns)]
        return tuple(tuple(columns[c][r] for c in range(size)) for r in range(size))

    def gram(self) -> Matrix:
        """G[a][b] = B(w_a, w_b) on the complex generators."""
        w = self.variable_vectors()
        return _matmul(_matmul(_transpose(w), self.B), w)

    def e_basis_in_variables(self) -> Matrix:
        """Columns express e_1..e_{2n} in the generators z, zb."""
        w = self.variable_vectors()
        size = self.size
        inverse = DomainMatrix([list(r) for r in w], (size, size), QQ_I).inv().to_list()
        return tuple(tuple(row) for row in inverse)

    def hermitian_form(self) -> Matrix:
        """H[a][b] = 2i B(z_a, zb_b); positive on z_1..z_r for the standard bases."""
        g = self.gram()
        n = self.n
        two_i = QQ_I(0, 2)
        return tuple(tuple(two_i * g[a][n + b] for b in range(n)) for a in range(n))

    def variable_names(self) -> List[str]:
        return [f"z{a + 1}" for a in range(self.n)] + [f"zb{a + 1}" for a in range(self.n)]

    def describe(self) -> Dict[str, object]:
        return {
            "n": self.n,
            "signature": list(self.signature),
            "basis_kind": self.basis_kind.value,
        }


# ---------------------------------------------------------------------------
# Polynomial helpers
# ---------------------------------------------------------------------------


def monomials(nvars: int, degree: int) -> List[Exponents]:
    """All exponent vectors of the given total degree, z1^d first."""
    if degree < 0:
        return []
    result = []
    for word in combinations_with_replacement(range(nvars), degree):
        exps = [0] * nvars
        for var in word:
            exps[var] += 1
        result.append(tuple(exps))
    return result


def _add_term(target: Dict, key, value: Scalar) -> None:
    updated = target.get(key, ZERO) + value
    if updated:
        target[key] = updated
    else:
        target.pop(key, None)


def poly_product(p: Polynomial, q: Polynomial) -> Polynomial:
    result: Polynomial = {}
    for ep, cp in p.items():
        for eq, cq in q.items():
            _add_term(result, tuple(a + b for a, b in zip(ep, eq)), cp * cq)
    return result


def poisson(p: Polynomial, q: Polynomial, gram: Matrix) -> Polynomial:
    """{P, Q} = sum_{a,b} G[a][b] dP/dw_a dQ/dw_b."""
    result: Polynomial = {}
    for ep, cp in p.items():
        for eq, cq in q.items():
            for a, pa in enumerate(ep):
                if not pa:
                    continue
                row = gram[a]
                for b, qb in enumerate(eq):
                    if not qb or not row[b]:
                        continue
                    exps = list(a_ + b_ for a_, b_ in zip(ep, eq))
                    exps[a] -= 1
                    exps[b] -= 1
                    _add_term(result, tuple(exps), row[b] * cp * cq * (pa * qb))
    return result


def _binom(top: int, k: int) -> int:
    if top < 0:
        return 1 if k == 0 else 0
    return comb(top, k)


# ---------------------------------------------------------------------------
# Elements
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ContactElement:
    """Homogeneous element of the complexified contact algebra."""

    space: SymplecticSpace
    degree: int
    terms: Mapping[Key, Scalar] = field(default_factory=dict)

    __hash__ = None  # terms is a dict

    def _check(self, other: "ContactElement") -> None:
        if not isinstance(other, ContactElement):
            raise TypeError(f"cannot combine ContactElement with {type(other).__name__}")
        if other.space != self.space:
            raise SpaceMismatchError("elements live over different symplectic spaces")
        if other.degree != self.degree:
            raise DegreeMismatchError(
                f"cannot add elements of degrees {self.degree} and {other.degree}"
            )

    def __add__(self, other: "ContactElement") -> "ContactElement":
        self._check(other)
        terms = dict(self.terms)
        for key, value in other.terms.items():
            _add_term(terms, key, value)
        return ContactElement(self.space, self.degree, terms)

    def __neg__(self) -> "ContactElement":
        return ContactElement(self.space, self.degree, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other: "ContactElement") -> "ContactElement":
        return self + (-other)

    def scale(self, factor) -> "ContactElement":
        factor = as_scalar(factor)
        if not factor:
            return ContactElement(self.space, self.degree, {})
        return ContactElement(self.space, self.degree, {k: factor * v for k, v in self.terms.items()})

    def __mul__(self, factor) -> "ContactElement":
        if isinstance(factor, ContactElement):
            return NotImplemented
        return self.scale(factor)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not self.terms

    def __str__(self) -> str:
        from element_syntax import format_element

        return format_element(self)


# ---------------------------------------------------------------------------
# The algebra
# ---------------------------------------------------------------------------


class ContactAlgebra:
    """Bracket engine for the contact algebra of one symplectic space."""

    def __init__(self, space: SymplecticSpace):
        self.space = space
        self.n = space.n
        self.nvars = 2 * space.n
        self.gram = space.gram()
        self.logger = logger
        self._lock = threading.RLock()
        self._basis: Dict[int, List[Key]] = {}
        self._index: Dict[int, Dict[Key, int]] = {}
        self._closed: Dict[Tuple[int, Key, int, Key], Terms] = {}
        self._oracle: Dict[Tuple[int, Key, int, Key], Terms] = {}
        self._actions: Dict[Tuple[int, Key, int], Terms] = {}
        self._solvers: Dict[int, InjectiveSolver] = {}
        self._special: Dict[str, ContactElement] = {}

    # -- basis -------------------------------------------------------------

    def basis(self, p: int) -> List[Key]:
        if p < -2:
            raise DegreeMismatchError(f"no component in degree {p}")
        with self._lock:
            if p not in self._basis:
                keys = [(-1, m) for m in monomials(self.nvars, p + 2)]
                for layer in range(0, p // 2 + 1) if p >= 0 else ():
                    keys += [(layer, m) for m in monomials(self.nvars, p - 2 * layer)]
                self._basis[p] = keys
                self._index[p] = {key: idx for idx, key in enumerate(keys)}
            return self._basis[p]

    def dim(self, p: int) -> int:
        return len(self.basis(p))

    def index(self, p: int) -> Dict[Key, int]:
        self.basis(p)
        return self._index[p]

    def ambient(self, p: int) -> Tuple[Tuple, int]:
        """Subspace ambient descriptor for degree p."""
        return (("c", self.n, self.space.signature, self.space.basis_kind.value, p), self.dim(p))

    def is_valid_key(self, p: int, key: Key) -> bool:
        layer, exps = key
        if len(exps) != self.nvars or any(e < 0 for e in exps):
            return False
        if layer == -1:
            return sum(exps) == p + 2
        return p >= 0 and 0 <= layer <= p // 2 and sum(exps) == p - 2 * layer

    # -- element construction ----------------------------------------------

    def element(self, p: int, terms: Mapping[Key, object]) -> ContactElement:
        clean: Terms = {}
        for key, value in terms.items():
            if not self.is_valid_key(p, key):
                raise DegreeMismatchError(f"term {key} does not belong to degree {p}")
            value = as_scalar(value)
            if value:
                clean[key] = value
        return ContactElement(self.space, p, clean)

    def zero(self, p: int) -> ContactElement:
        return ContactElement(self.space, p, {})

    def unit_exponents(self, var: int) -> Exponents:
        return tuple(1 if k == var else 0 for k in range(self.nvars))

    @property
    def T(self) -> ContactElement:
        return self.element(-2, {(-1, (0,) * self.nvars): ONE})

    def variable(self, var: int) -> ContactElement:
        """Degree -1 generator w_var (z's first, then zb's)."""
        return self.element(-1, {(-1, self.unit_exponents(var)): ONE})

    def polynomial(self, poly: Mapping[Exponents, object]) -> ContactElement:
        """Layer -1 element from a homogeneous polynomial in the generators."""
        degrees = {sum(e) for e in poly}
        if len(degrees) > 1:
            raise DegreeMismatchError("polynomial is not homogeneous")
        degree = degrees.pop() if degrees else 2
        return self.element(degree - 2, {(-1, e): v for e, v in poly.items()})

    def basis_element(self, p: int, key: Key) -> ContactElement:
        return self.element(p, {key: ONE})

    def basis_elements(self, p: int) -> List[ContactElement]:
        return [self.basis_element(p, key) for key in self.basis(p)]

    def to_vector(self, x: ContactElement) -> SparseVector:
        self._require_space(x)
        index = self.index(x.degree)
        return {index[key]: value for key, value in x.terms.items()}

    def from_vector(self, p: int, vector: Mapping[int, Scalar]) -> ContactElement:
        keys = self.basis(p)
        return ContactElement(
            self.space, p, {keys[k]: v for k, v in vector.items() if v}
        )

    def _require_space(self, *elements: ContactElement) -> None:
        for x in elements:
            if x.space != self.space:
                raise SpaceMismatchError("element belongs to a different symplectic space")

    # -- structural operations ---------------------------------------------

    def symmetric_product(self, x: ContactElement, y: ContactElement) -> ContactElement:
        """Commutative product of two polynomial (layer -1) elements."""
        self._require_space(x, y)
        if any(k[0] != -1 for k in list(x.terms) + list(y.terms)):
            raise InvalidTargetError("symmetric product is defined on polynomial parts only")
        product = poly_product(
            {k[1]: v for k, v in x.terms.items()}, {k[1]: v for k, v in y.terms.items()}
        )
        return self.element(x.degree + y.degree + 2, {(-1, e): v for e, v in product.items()})

    def mu(self, p: int, x: ContactElement) -> ContactElement:
        """mu^p: degree p-2 -> degree p, shifting every layer up by one."""
        self._require_space(x)
        if p < 0:
            raise DegreeMismatchError("mu^p needs p >= 0 (mu^-1 is the zero map)")
        if x.degree != p - 2:
            raise DegreeMismatchError(f"mu^{p} expects degree {p - 2}, got {x.degree}")
        return ContactElement(self.space, p, {(k[0] + 1, k[1]): v for k, v in x.terms.items()})

    def grading_element(self) -> ContactElement:
        return self.element(0, {(0, (0,) * self.nvars): QQ_I(-2, 0)})

    def complex_structure_element(self) -> ContactElement:
        """The degree-0 element acting as J on degree -1."""
        with self._lock:
            if "J" not in self._special:
                n = self.n
                actions = []
                for var in range(self.nvars):
                    eigen = I_UNIT if var < n else -I_UNIT
                    actions.append({(-1, self.unit_exponents(var)): eigen})
                self._special["J"] = self.from_action(0, actions)
            return self._special["J"]

    def weight(self, key: Key) -> int:
        """ad(J) eigenvalue of a basis element is i * weight."""
        exps = key[1]
        return sum(exps[: self.n]) - sum(exps[self.n:])

    def conjugate(self, x: ContactElement) -> ContactElement:
        self._require_space(x)
        n = self.n
        return ContactElement(
            self.space,
            x.degree,
            {(k[0], k[1][n:] + k[1][:n]): conj(v) for k, v in x.terms.items()},
        )

    def ad_J_eigendecompose(self, x: ContactElement) -> Dict[int, ContactElement]:
        """Split x into ad(J)-eigencomponents, keyed by k for eigenvalue i*k."""
        self._require_space(x)
        parts: Dict[int, Terms] = {}
        for key, value in x.terms.items():
            parts.setdefault(self.weight(key), {})[key] = value
        return {w: ContactElement(self.space, x.degree, t) for w, t in sorted(parts.items())}

    def project(self, x: ContactElement, target: Component, layer: Optional[int] = None, bidegree: Optional[Tuple[int, int]] = None) -> ContactElement:
        """Projection onto a summand of the canonical decomposition."""
        self._require_space(x)
        p = x.degree
        n = self.n
        if target is Component.K:
            keep = lambda k: k[0] == -1
        elif target is Component.XI:
            if p < 0:
                raise InvalidTargetError(f"xi has no component in degree {p}")
            keep = lambda k: k[0] >= 0
        elif target is Component.LAYER:
            if layer is None or layer < -1 or (layer >= 0 and (p < 0 or layer > p // 2)):
                raise InvalidTargetError(f"layer {layer} does not exist in degree {p}")
            keep = lambda k: k[0] == layer
        elif target is Component.BIDEGREE:
            if bidegree is None:
                raise InvalidTargetError("bidegree target needs (l, m)")
            l, m = bidegree
            total = l + m
            if l < 0 or m < 0 or total > p + 2 or (p + 2 - total) % 2:
                raise InvalidTargetError(f"S^{{{l},{m}}} does not occur in degree {p}")
            wanted_layer = -1 if total == p + 2 else (p - total) // 2
            keep = lambda k: (
                k[0] == wanted_layer and sum(k[1][:n]) == l and sum(k[1][n:]) == m
            )
        elif target in (Component.M10, Component.M01):
            if p < -1:
                raise InvalidTargetError("extremal eigenspaces start in degree -1")
            holomorphic = target is Component.M10
            keep = lambda k: k[0] == -1 and (
                sum(k[1][n:]) == 0 if holomorphic else sum(k[1][:n]) == 0
            )
        else:
            raise InvalidTargetError(f"unknown target {target}")
        return ContactElement(self.space, p, {k: v for k, v in x.terms.items() if keep(k)})

    # -- brackets: closed form ---------------------------------------------

    @staticmethod
    def closed_form_coeffs(p: int, i: int, q: int, j: int) -> Tuple[object, object]:
        """(alpha, beta) for the bracket of layer i at degree p with layer j at degree q."""
        if p < 0 or q < 0 or not 0 <= i <= p // 2 or not 0 <= j <= q // 2:
            raise IndexRangeError(f"indices out of range: p={p}, i={i}, q={q}, j={j}")
        first = sum(_binom(i + k - 1, k) * (j + 1 - k) for k in range(j + 1))
        second = sum(_binom(j + k - 1, k) * (i + 1 - k) for k in range(i + 1))
        alpha = QQ(p - 2 * i - 2, 2) * first - QQ(q - 2 * j - 2, 2) * second
        return alpha, QQ(first + second)

    def _poly(self, exps: Exponents) -> Polynomial:
        return {exps: ONE}

    def _k_xi(self, p: int, x_exps: Exponents, q: int, j: int, y_exps: Exponents) -> Terms:
        """[X, mu^{q|q-2j}(Y)] for X in the polynomial part of degree p."""
        result: Terms = {}
        if p == -2:
            # [T, Z] = -(Z with its layer lowered)
            result[(j - 1, y_exps)] = -ONE
            return result
        if p:
            product = tuple(a + b for a, b in zip(x_exps, y_exps))
            _add_term(result, (j - 1, product), QQ_I(QQ(p, 2), 0))
        for exps, value in poisson(self._poly(x_exps), self._poly(y_exps), self.gram).items():
            _add_term(result, (j, exps), value)
        return result

    def _basis_bracket(self, p: int, k1: Key, q: int, k2: Key) -> Terms:
        i, x = k1
        j, y = k2
        if i == -1 and j == -1:
            return {(-1, e): v for e, v in poisson(self._poly(x), self._poly(y), self.gram).items()}
        if i == -1:
            return self._k_xi(p, x, q, j, y)
        if j == -1:
            return {k: -v for k, v in self._k_xi(q, y, p, i, x).items()}
        alpha, beta = self.closed_form_coeffs(p, i, q, j)
        result: Terms = {}
        if alpha:
            product = tuple(a + b for a, b in zip(x, y))
            _add_term(result, (i + j, product), QQ_I(alpha, 0))
        if beta:
            for exps, value in poisson(self._poly(x), self._poly(y), self.gram).items():
                _add_term(result, (i + j + 1, exps), QQ_I(beta, 0) * value)
        return result

    def bracket_basis(self, p: int, k1: Key, q: int, k2: Key) -> Terms:
        cache_key = (p, k1, q, k2)
        with self._lock:
            cached = self._closed.get(cache_key)
            if cached is None:
                cached = self._basis_bracket(p, k1, q, k2)
                self._closed[cache_key] = cached
            return cached

    def _bilinear(self, x: ContactElement, y: ContactElement, basis_bracket) -> ContactElement:
        self._require_space(x, y)
        result: Terms = {}
        for k1, v1 in x.terms.items():
            for k2, v2 in y.terms.items():
                factor = v1 * v2
                for key, value in basis_bracket(x.degree, k1, y.degree, k2).items():
                    _add_term(result, key, factor * value)
        return ContactElement(self.space, x.degree + y.degree, result)

    def bracket(self, x: ContactElement, y: ContactElement) -> ContactElement:
        """Lie bracket via the closed-form structure constants."""
        return self._bilinear(x, y, self.bracket_basis)

    # -- brackets: recursive oracle ----------------------------------------

    def act_on_T(self, p: int, key: Key) -> Terms:
        """[basis element, T]: the polynomial part dies, other layers drop by one."""
        layer, exps = key
        if layer == -1:
            return {}
        return {(layer - 1, exps): ONE}

    def act_on_generator(self, p: int, key: Key, var: int) -> Terms:
        """[basis element, w_var] from the defining relations of the mu-maps."""
        cache_key = (p, key, var)
        with self._lock:
            cached = self._actions.get(cache_key)
            if cached is not None:
                return cached
            layer, exps = key
            unit = self.unit_exponents(var)
            if layer == -1:
                result = {
                    (-1, e): v
                    for e, v in poisson(self._poly(exps), self._poly(unit), self.gram).items()
                }
            else:
                result = {}
                if p - 1 >= 0:
                    # mu^{p-1}([X', w]) with X' the same polynomial one layer down
                    inner = self.act_on_generator(p - 2, (layer - 1, exps), var)
                    result = {(k[0] + 1, k[1]): v for k, v in inner.items()}
                if layer == 0:
                    product = tuple(a + b for a, b in zip(exps, unit))
                    _add_term(result, (-1, product), QQ_I(QQ(1, 2), 0))
            self._actions[cache_key] = result
            return result

    def _action_solver(self, p: int) -> InjectiveSolver:
        with self._lock:
            solver = self._solvers.get(p)
            if solver is None:
                index = self.index(p - 1)
                size = len(index)
                columns = []
                for key in self.basis(p):
                    column: SparseVector = {}
                    for var in range(self.nvars):
                        for k, v in self.act_on_generator(p, key, var).items():
                            column[var * size + index[k]] = v
                    columns.append(column)
                self.logger.debug(
                    f"Building action solver in degree {p}: {len(columns)} unknowns, "
                    f"{self.nvars * size} equations"
                )
                solver = InjectiveSolver(columns, self.nvars * size)
                self._solvers[p] = solver
            return solver

    def from_action(self, p: int, actions: Sequence[Mapping[Key, Scalar]]) -> ContactElement:
        """The unique degree-p element (p >= 0) whose bracket with w_var is actions[var]."""
        if p < 0:
            raise DegreeMismatchError("transitivity recovery needs p >= 0")
        if len(actions) != self.nvars:
            raise DegreeMismatchError(f"expected {self.nvars} action values")
        index = self.index(p - 1)
        size = len(index)
        target: SparseVector = {}
        for var, action in enumerate(actions):
            for key, value in action.items():
                if key not in index:
                    raise NotRealizableError(f"action value {key} is not of degree {p - 1}")
                if value:
                    target[var * size + index[key]] = value
        solution = self._action_solver(p).solve(target)
        if solution is None:
            raise NotRealizableError(f"action is not realized by any element of degree {p}")
        return self.from_vector(p, solution)

    def solve_from_action(self, p: int, actions: Sequence[ContactElement]) -> ContactElement:
        """Element-level wrapper of :meth:`from_action`."""
        for action in actions:
            self._require_space(action)
            if action.degree != p - 1:
                raise DegreeMismatchError(f"action values must have degree {p - 1}")
        return self.from_action(p, [a.terms for a in actions])

    def _oracle_basis(self, p: int, k1: Key, q: int, k2: Key) -> Terms:
        cache_key = (p, k1, q, k2)
        with self._lock:
            cached = self._oracle.get(cache_key)
            if cached is not None:
                return cached
            if q == -2:
                result = self.act_on_T(p, k1) if p > -2 else {}
            elif p == -2:
                result = {k: -v for k, v in self.act_on_T(q, k2).items()}
            elif q == -1:
                result = self.act_on_generator(p, k1, k2[1].index(1))
            elif p == -1:
                result = {
                    k: -v for k, v in self.act_on_generator(q, k2, k1[1].index(1)).items()
                }
            else:
                x = self.basis_element(p, k1)
                y = self.basis_element(q, k2)
                actions = []
                for var in range(self.nvars):
                    y_w = ContactElement(self.space, q - 1, self.act_on_generator(q, k2, var))
                    x_w = ContactElement(self.space, p - 1, self.act_on_generator(p, k1, var))
                    value = self.recursive_bracket(x, y_w) - self.recursive_bracket(y, x_w)
                    actions.append(value.terms)
                result = dict(self.from_action(p + q, actions).terms)
            self._oracle[cache_key] = result
            return result

    def recursive_bracket(self, x: ContactElement, y: ContactElement) -> ContactElement:
        """Lie bracket computed only from the mu-relations and transitivity."""
        return self._bilinear(x, y, self._oracle_basis)


_algebras: Dict[SymplecticSpace, ContactAlgebra] = {}
_algebra_lock = threading.Lock()


def get_contact_algebra(space: SymplecticSpace) -> ContactAlgebra:
    """Shared algebra instance (and memo tables) for a symplectic space."""
    with _algebra_lock:
        algebra = _algebras.get(space)
        if algebra is None:
            algebra = ContactAlgebra(space)
            _algebras[space] = algebra
        return algebra


def standard_space(n: int = 1, signature: Optional[Iterable[int]] = None) -> SymplecticSpace:
    sig = tuple(signature) if signature is not None else (n, 0)
    return SymplecticSpace.complex_symplectic(n, sig)


def algebra_from_context(context: Mapping[str, object]) -> Tuple[ContactAlgebra, int]:
    """Contact algebra and truncation degree described by a document context.

    Recognized keys: ``n``, ``signature``, ``basis_kind`` and ``max_degree``.
    """
    n = int(context.get("n", 1))
    signature = tuple(context.get("signature", (n, 0)))
    kind = context.get("basis_kind", BasisKind.COMPLEX_SYMPLECTIC.value)
    if kind == BasisKind.COMPLEX_WITT.value:
        space = SymplecticSpace.complex_witt()
    elif kind == BasisKind.COMPLEX_SYMPLECTIC.value:
        space = SymplecticSpace.complex_symplectic(n, signature)
    else:
        raise InvalidSpaceError(f"unknown basis kind {kind!r}")
    return get_contact_algebra(space), int(context.get("max_degree", 4))
