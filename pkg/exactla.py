"""
Exact Linear Algebra over the Gaussian Rationals

Scalar and linear-algebra substrate used by every other module. Scalars are
elements of sympy's ``QQ_I`` domain; vectors are sparse ``{index: scalar}``
dicts; matrices are handed to sympy's ``DomainMatrix`` for elimination.

Key Features:
- Canonical scalar printing ("a/b", "a/b+c/d*i") and parsing
- Subspaces stored in reduced row echelon form, so equality is exact
- Intersections, sums, membership and annihilators
- Linear solves with explicit inconsistency markers
- Precomputed solvers for injective maps (used by transitivity arguments)
- Hermitian signatures by congruence, without square roots
"""

import logging
import re
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from sympy.polys.domains import QQ, QQ_I
from sympy.polys.matrices import DomainMatrix

logger = logging.getLogger(__name__)

Scalar = Any
SparseVector = Dict[int, Scalar]

ZERO = QQ_I.zero
ONE = QQ_I.one
I_UNIT = QQ_I(0, 1)


class ContactEngineError(ValueError):
    """Base class for every error raised by the engine."""


class DimensionMismatchError(ContactEngineError):
    """Matrix, vector or subspace sizes do not agree."""


class AmbientMismatchError(ContactEngineError):
    """Two subspaces live in different ambient components."""


# ---------------------------------------------------------------------------
# Scalars
# ---------------------------------------------------------------------------


def gaussian(re_part: Any = 0, im_part: Any = 0) -> Scalar:
    """Build a Gaussian rational from ints, QQ elements or strings."""
    if isinstance(re_part, str):
        value = parse_scalar(re_part)
        if im_part:
            value = value + gaussian(im_part) * I_UNIT
        return value
    if isinstance(im_part, str):
        return gaussian(re_part) + parse_scalar(im_part) * I_UNIT
    return QQ_I(re_part, im_part)


def as_scalar(value: Any) -> Scalar:
    """Coerce ints, rationals and strings into ``QQ_I``; pass QQ_I through."""
    if isinstance(value, QQ_I.dtype):
        return value
    if isinstance(value, str):
        return parse_scalar(value)
    return QQ_I(value, 0)


def conj(a: Scalar) -> Scalar:
    return QQ_I(a.x, -a.y)


def is_real(a: Scalar) -> bool:
    return not a.y


def real_part(a: Scalar):
    return a.x


def imag_part(a: Scalar):
    return a.y


def norm_squared(a: Scalar):
    """|a|² as a QQ element."""
    return a.x * a.x + a.y * a.y


def rational(p: int, q: int = 1):
    return QQ(p, q)


def format_rational(q) -> str:
    num, den = int(q.numerator), int(q.denominator)
    if den == 1:
        return str(num)
    return f"{num}/{den}"


def format_scalar(a: Scalar) -> str:
    """Canonical text: "3", "-1/2", "i", "-3/4*i", "1/2+3/4*i"."""
    a = as_scalar(a)
    re_text = format_rational(a.x) if a.x else ""
    if not a.y:
        return re_text or "0"
    if a.y == 1:
        im_text = "i"
    elif a.y == -1:
        im_text = "-i"
    else:
        im_text = f"{format_rational(a.y)}*i"
    if not re_text:
        return im_text
    if im_text.startswith("-"):
        return f"{re_text}{im_text}"
    return f"{re_text}+{im_text}"


_RATIONAL = r"\d+(?:/\d+)?"
_SCALAR_RE = re.compile(
    rf"^(?P<re>[+-]?{_RATIONAL})?"
    rf"(?P<im>[+-]?(?:{_RATIONAL}\*?)?i)?$"
)


def _parse_rational(text: str):
    sign = -1 if text.startswith("-") else 1
    text = text.lstrip("+-")
    if "/" in text:
        num, den = text.split("/")
        if int(den) == 0:
            raise ContactEngineError("zero denominator in scalar")
        return QQ(sign * int(num), int(den))
    return QQ(sign * int(text))


def parse_scalar(text: str) -> Scalar:
    """Parse the canonical scalar syntax (extra parentheses and spaces allowed)."""
    compact = text.replace(" ", "")
    while compact.startswith("(") and compact.endswith(")"):
        compact = compact[1:-1]
    match = _SCALAR_RE.match(compact)
    if not compact or not match or not (match.group("re") or match.group("im")):
        raise ContactEngineError(f"not a Gaussian rational: {text!r}")
    re_text, im_text = match.group("re"), match.group("im")
    if re_text and im_text and im_text[0] not in "+-":
        raise ContactEngineError(f"not a Gaussian rational: {text!r}")
    re_value = _parse_rational(re_text) if re_text else QQ(0)
    im_value = QQ(0)
    if im_text:
        body = im_text[:-1].rstrip("*")
        if body in ("", "+"):
            im_value = QQ(1)
        elif body == "-":
            im_value = QQ(-1)
        else:
            im_value = _parse_rational(body)
    return QQ_I(re_value, im_value)


# ---------------------------------------------------------------------------
# Sparse vectors and matrices
# ---------------------------------------------------------------------------


def sparse(values: Iterable[Any]) -> SparseVector:
    """Dense sequence -> sparse vector (zeros dropped)."""
    result = {}
    for index, value in enumerate(values):
        value = as_scalar(value)
        if value:
            result[index] = value
    return result


def dense(vector: SparseVector, size: int) -> List[Scalar]:
    return [vector.get(index, ZERO) for index in range(size)]


def add_into(target: SparseVector, vector: SparseVector, factor: Scalar = ONE) -> None:
    """target += factor * vector, in place, keeping the dict free of zeros."""
    for index, value in vector.items():
        updated = target.get(index, ZERO) + factor * value
        if updated:
            target[index] = updated
        else:
            target.pop(index, None)


def combine(pairs: Iterable[Tuple[Scalar, SparseVector]]) -> SparseVector:
    result: SparseVector = {}
    for factor, vector in pairs:
        if factor:
            add_into(result, vector, factor)
    return result


def dot(f: SparseVector, v: SparseVector) -> Scalar:
    if len(f) > len(v):
        f, v = v, f
    total = ZERO
    for index, value in f.items():
        other = v.get(index)
        if other is not None:
            total += value * other
    return total


def _check_indices(vectors: Sequence[SparseVector], ncols: int) -> None:
    for vector in vectors:
        for index in vector:
            if not 0 <= index < ncols:
                raise DimensionMismatchError(
                    f"coordinate {index} outside ambient dimension {ncols}"
                )


def _to_domain_matrix(rows: Sequence[SparseVector], ncols: int) -> DomainMatrix:
    dod = {r: dict(row) for r, row in enumerate(rows) if row}
    return DomainMatrix.from_dod(dod, (len(rows), ncols), QQ_I)


def rref(rows: Sequence[SparseVector], ncols: int) -> Tuple[List[SparseVector], Tuple[int, ...]]:
    """Reduced row echelon form of the matrix with the given sparse rows.

    Returns:
        (nonzero rows ordered by pivot, pivot columns)
    """
    rows = [row for row in rows if row]
    if not rows:
        return [], ()
    _check_indices(rows, ncols)
    reduced, pivots = _to_domain_matrix(rows, ncols).rref()
    dod = reduced.to_dod()
    result = [dict(dod.get(r, {})) for r in range(len(pivots))]
    return result, tuple(pivots)


def nullspace(rows: Sequence[SparseVector], ncols: int) -> List[SparseVector]:
    """Basis of {x : row·x = 0 for every row}."""
    reduced, pivots = rref(rows, ncols)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vector = {free: ONE}
        for row, pivot in zip(reduced, pivots):
            value = row.get(free)
            if value:
                vector[pivot] = -value
        basis.append(vector)
    return basis


def rank(rows: Sequence[SparseVector], ncols: int) -> int:
    return len(rref(rows, ncols)[1])


def mat_vec(rows: Sequence[SparseVector], vector: SparseVector) -> List[Scalar]:
    return [dot(row, vector) for row in rows]


def determinant(matrix: Sequence[Sequence[Any]]) -> Scalar:
    size = len(matrix)
    if any(len(row) != size for row in matrix):
        raise DimensionMismatchError("determinant needs a square matrix")
    if size == 0:
        return ONE
    rows = [[as_scalar(value) for value in row] for row in matrix]
    return DomainMatrix(rows, (size, size), QQ_I).det()


def transpose(columns: Sequence[SparseVector]) -> Dict[int, SparseVector]:
    """Column list -> row dict (row index -> sparse row over column positions)."""
    rows: Dict[int, SparseVector] = {}
    for col, column in enumerate(columns):
        for row, value in column.items():
            rows.setdefault(row, {})[col] = value
    return rows


# ---------------------------------------------------------------------------
# Linear systems
# ---------------------------------------------------------------------------


@dataclass
class LinearSolution:
    """Solution set of A·x = b: ``particular + span(kernel)`` or inconsistent."""

    consistent: bool
    particular: Optional[SparseVector] = None
    kernel: List[SparseVector] = field(default_factory=list)

    @property
    def is_unique(self) -> bool:
        return self.consistent and not self.kernel


def solve_linear(matrix: Sequence[Any], rhs: Sequence[Any], ncols: Optional[int] = None) -> LinearSolution:
    """Exact solution set of ``matrix · x = rhs``.

    Args:
        matrix: rows, either dense sequences or sparse dicts
        rhs: right-hand side, one scalar per row
        ncols: number of unknowns (required when rows are sparse)

    Returns:
        LinearSolution with ``consistent=False`` when the system has no solution
    """
    if len(matrix) != len(rhs):
        raise DimensionMismatchError(
            f"{len(matrix)} equations but right-hand side of length {len(rhs)}"
        )
    rows: List[SparseVector] = []
    for row in matrix:
        if isinstance(row, dict):
            rows.append({k: as_scalar(v) for k, v in row.items() if v})
        else:
            if ncols is None:
                ncols = len(row)
            elif len(row) != ncols:
                raise DimensionMismatchError("ragged coefficient matrix")
            rows.append(sparse(row))
    if ncols is None:
        raise DimensionMismatchError("cannot infer the number of unknowns")

    augmented = []
    for row, value in zip(rows, rhs):
        extended = dict(row)
        value = as_scalar(value)
        if value:
            extended[ncols] = value
        augmented.append(extended)
    reduced, pivots = rref(augmented, ncols + 1)
    if ncols in pivots:
        return LinearSolution(consistent=False)
    particular = {}
    for row, pivot in zip(reduced, pivots):
        value = row.get(ncols)
        if value:
            particular[pivot] = value
    return LinearSolution(consistent=True, particular=particular, kernel=nullspace(rows, ncols))


class InjectiveSolver:
    """Solves M·x = y for an injective M given by its sparse columns.

    A set of independent rows is chosen once and inverted; each solve is then a
    small product followed by an exact check that y lies in the image.
    """

    def __init__(self, columns: Sequence[SparseVector], nrows: int):
        self.columns = [dict(column) for column in columns]
        self.nrows = nrows
        self.ncols = len(self.columns)
        _check_indices(self.columns, nrows)
        # independent rows of M are the pivot columns of rref(M^T)
        _, row_pivots = rref(self.columns, nrows)
        if len(row_pivots) != self.ncols:
            raise ContactEngineError(
                f"map is not injective: rank {len(row_pivots)} < {self.ncols}"
            )
        self.pivot_rows = row_pivots
        if self.ncols:
            square = [
                [column.get(row, ZERO) for column in self.columns] for row in row_pivots
            ]
            inverse = DomainMatrix(square, (self.ncols, self.ncols), QQ_I).inv()
            self._inverse = [sparse_row for sparse_row in (
                {c: v for c, v in enumerate(row) if v} for row in inverse.to_list()
            )]
        else:
            self._inverse = []

    def apply(self, x: SparseVector) -> SparseVector:
        return combine((value, self.columns[index]) for index, value in x.items())

    def solve(self, y: SparseVector) -> Optional[SparseVector]:
        """Unique preimage of y, or None when y is not in the image."""
        picked = {k: y[row] for k, row in enumerate(self.pivot_rows) if row in y}
        x = {}
        for index, row in enumerate(self._inverse):
            value = dot(row, picked)
            if value:
                x[index] = value
        return x if self.apply(x) == y else None


# ---------------------------------------------------------------------------
# Subspaces
# ---------------------------------------------------------------------------


def _freeze(vector: SparseVector) -> Tuple[Tuple[int, Scalar], ...]:
    return tuple(sorted(vector.items()))


@dataclass(frozen=True)
class Subspace:
    """A subspace of an ambient coordinate space, in canonical RREF.

    ``ambient`` is a (label, dimension) descriptor, e.g. (("c", 2), 46) for
    the degree-2 component of the complexified contact algebra with n = 2.
    """

    ambient: Tuple[Any, int]
    rows: Tuple[Tuple[Tuple[int, Scalar], ...], ...] = ()
    pivots: Tuple[int, ...] = ()

    @classmethod
    def span(cls, vectors: Iterable[SparseVector], ambient: Tuple[Any, int]) -> "Subspace":
        reduced, pivots = rref([dict(v) for v in vectors], ambient[1])
        return cls(ambient, tuple(_freeze(row) for row in reduced), pivots)

    @classmethod
    def zero(cls, ambient: Tuple[Any, int]) -> "Subspace":
        return cls(ambient)

    @classmethod
    def full(cls, ambient: Tuple[Any, int]) -> "Subspace":
        size = ambient[1]
        return cls(ambient, tuple(((k, ONE),) for k in range(size)), tuple(range(size)))

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def basis(self) -> List[SparseVector]:
        return [dict(row) for row in self.rows]

    def _require_same_ambient(self, other: "Subspace") -> None:
        if self.ambient != other.ambient:
            raise AmbientMismatchError(f"{self.ambient} vs {other.ambient}")

    def coordinates(self, vector: SparseVector) -> Optional[List[Scalar]]:
        """Coefficients of vector in the RREF basis, or None if not contained."""
        coeffs = [vector.get(pivot, ZERO) for pivot in self.pivots]
        rebuilt = combine(zip(coeffs, self.basis))
        return coeffs if rebuilt == {k: v for k, v in vector.items() if v} else None

    def contains(self, vector: SparseVector) -> bool:
        return self.coordinates(vector) is not None

    def __contains__(self, vector: SparseVector) -> bool:
        return self.contains(vector)

    def is_subspace_of(self, other: "Subspace") -> bool:
        self._require_same_ambient(other)
        return all(other.contains(v) for v in self.basis)

    def __add__(self, other: "Subspace") -> "Subspace":
        self._require_same_ambient(other)
        if not other.rows:
            return self
        if not self.rows:
            return other
        return Subspace.span(self.basis + other.basis, self.ambient)

    def annihilator(self) -> List[SparseVector]:
        """Linear forms vanishing on the subspace."""
        return nullspace(self.basis, self.ambient[1])

    def intersect(self, other: "Subspace") -> "Subspace":
        self._require_same_ambient(other)
        if not self.rows or not other.rows:
            return Subspace.zero(self.ambient)
        equations = other.annihilator()
        if not equations:
            return self
        basis = self.basis
        # a·U lies in other iff (a·U)·f = 0 for every annihilating form f
        columns = [[dot(f, u) for u in basis] for f in equations]
        kernel = nullspace([sparse(c) for c in columns], len(basis))
        return Subspace.span(
            (combine((a[k], basis[k]) for k in a) for a in kernel), self.ambient
        )

    def map(self, function, ambient: Optional[Tuple[Any, int]] = None) -> "Subspace":
        """Image of the subspace under a linear function on sparse vectors."""
        return Subspace.span((function(v) for v in self.basis), ambient or self.ambient)

    def complement_basis(self) -> List[SparseVector]:
        """Standard unit vectors completing the RREF basis."""
        taken = set(self.pivots)
        return [{k: ONE} for k in range(self.ambient[1]) if k not in taken]


def subspace_from_constraints(
    candidates: Subspace, forms: Iterable[Sequence[SparseVector]]
) -> Subspace:
    """Largest subspace of ``candidates`` killed by the given linear conditions.

    Each entry of ``forms`` is evaluated on the candidate basis: it is a list of
    values ``[f(b_0), f(b_1), ...]`` stored sparsely as {basis index: value}.
    """
    basis = candidates.basis
    rows = [row for row in forms if row]
    if not rows:
        return candidates
    kernel = nullspace(rows, len(basis))
    return Subspace.span(
        (combine((a[k], basis[k]) for k in a) for a in kernel), candidates.ambient
    )


# ---------------------------------------------------------------------------
# Hermitian forms
# ---------------------------------------------------------------------------


def hermitian_signature(matrix: Sequence[Sequence[Any]]) -> Tuple[int, int, int]:
    """(positive, negative, zero) inertia of a Hermitian matrix by congruence.

    Uses symmetric elimination over QQ_I: every pivot is a real rational, so no
    square roots appear.
    """
    size = len(matrix)
    h = [[as_scalar(v) for v in row] for row in matrix]
    for r in range(size):
        for c in range(size):
            if h[r][c] != conj(h[c][r]):
                raise ContactEngineError("matrix is not Hermitian")
    positive = negative = 0
    active = list(range(size))
    while active:
        pivot = next((k for k in active if h[k][k]), None)
        if pivot is None:
            pair = next(
                ((a, b) for a in active for b in active if a != b and h[a][b]), None
            )
            if pair is None:
                break
            a, b = pair
            # replace e_a by e_a + c e_b with c in {1, i} so that h(a, a) != 0
            factor = ONE if (h[a][b] + conj(h[a][b])) else I_UNIT
            for k in range(size):
                h[a][k] = h[a][k] + conj(factor) * h[b][k]
            for k in range(size):
                h[k][a] = h[k][a] + factor * h[k][b]
            pivot = a
        d = h[pivot][pivot]
        if d.x > 0:
            positive += 1
        else:
            negative += 1
        active.remove(pivot)
        for k in active:
            if not h[k][pivot]:
                continue
            ratio = h[k][pivot] / d
            for m in range(size):
                h[k][m] = h[k][m] - ratio * h[pivot][m]
            for m in range(size):
                h[m][k] = h[m][k] - conj(ratio) * h[m][pivot]
    return positive, negative, size - positive - negative
