"""
Seven-Dimensional Core Classification

A core of height zero over a 4-dimensional degree -1 component is fixed by the
complex line m^{0(10)} inside S^{2,0} = S^2 C^2. Its isomorphism class is the
orbit of that line under K# = C^x . K, where K = SO(3) for signature (2, 0) and
K = SO+(2, 1) for signature (1, 1). Lines are handled in the fixed basis
eps_1, eps_2, eps_3 of V = C^3, on which K acts through its natural real
representation extended C-linearly.

Key Features:
- eps-coordinates of quadratic polynomials and back, plus the complex-Witt change
- Stabilizer algebras from an exact real linear system
- Orbit invariants and canonical forms with exact (possibly algebraic) parameters
- The circle action on the two-parameter family, with a direct-action oracle
- Tables of canonical forms in JSON and Markdown
"""

import logging
import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from sympy import Integer, Symbol, minimal_polynomial, radsimp, sqrt
from sympy.polys.domains import QQ, QQ_I
from sympy.polys.matrices import DomainMatrix

from contact import BasisKind, SymplecticSpace, get_contact_algebra, poly_product
from element_syntax import format_element
from exactla import (
    I_UNIT,
    ONE,
    ZERO,
    ContactEngineError,
    Scalar,
    as_scalar,
    norm_squared,
    nullspace,
)

logger = logging.getLogger(__name__)

Signature = Tuple[int, int]
EpsVector = Tuple[Scalar, Scalar, Scalar]
QuadraticPolynomial = Dict[Tuple[int, int], Scalar]

SIGNATURES: Tuple[Signature, ...] = ((2, 0), (1, 1))

_T = Symbol("t")
_HALF = QQ_I(QQ(1, 2), 0)


class ZeroVectorError(ContactEngineError):
    """The zero vector does not span a line."""


class DegenerateParameterError(ContactEngineError):
    """A parameter formula was evaluated on its excluded locus."""


class StabilizerTag(Enum):
    """Isomorphism type of the stabilizer algebra n# inside C + k."""

    SCALARS = "C"
    COMPACT = "C+so2"
    SPLIT = "C+so(1,1)"
    NULL_ROTATION = "C+R"
    SOLVABLE = "C+(R⋉R)"
    FULL = "C+k"


def _check_signature(signature: Sequence[int]) -> Signature:
    signature = tuple(int(v) for v in signature)
    if signature not in SIGNATURES:
        raise ContactEngineError(f"signature {signature} is not classified here; use (2,0) or (1,1)")
    return signature


def _metric(signature: Signature) -> Tuple[Any, Any, Any]:
    return (QQ(1), QQ(1), QQ(1)) if signature == (2, 0) else (QQ(1), QQ(1), QQ(-1))


def _pair(u: Sequence[Any], v: Sequence[Any], metric: Sequence[Any]) -> Any:
    """Bilinear (not sesquilinear) pairing with a diagonal metric."""
    total = u[0] * v[0] * metric[0]
    for k in (1, 2):
        total = total + u[k] * v[k] * metric[k]
    return total


def _sign(value) -> int:
    return (value > 0) - (value < 0)


def _as_rational(value: Any):
    scalar = as_scalar(value)
    if scalar.y:
        raise ContactEngineError(f"expected a rational number, got {value!r}")
    return scalar.x


# ---------------------------------------------------------------------------
# Lines and the eps-dictionary
# ---------------------------------------------------------------------------


def eps_from_polynomial(signature: Sequence[int], poly: Mapping[Tuple[int, int], Any]) -> EpsVector:
    """eps-coordinates of p11 z1^2 + p12 z1 z2 + p22 z2^2."""
    signature = _check_signature(signature)
    p11 = as_scalar(poly.get((2, 0), 0))
    p12 = as_scalar(poly.get((1, 1), 0))
    p22 = as_scalar(poly.get((0, 2), 0))
    if signature == (2, 0):
        return (-(p11 + p22), I_UNIT * (p22 - p11), I_UNIT * p12)
    return (p11 - p22, I_UNIT * (p11 + p22), I_UNIT * p12)


def polynomial_from_eps(signature: Sequence[int], z: Sequence[Any]) -> QuadraticPolynomial:
    """Inverse of :func:`eps_from_polynomial`."""
    signature = _check_signature(signature)
    x1, x2, x3 = (as_scalar(v) for v in z)
    if signature == (2, 0):
        p11 = _HALF * (-x1 + I_UNIT * x2)
    else:
        p11 = _HALF * (x1 - I_UNIT * x2)
    p22 = _HALF * (-x1 - I_UNIT * x2)
    p12 = -I_UNIT * x3
    return {exps: v for exps, v in (((2, 0), p11), ((1, 1), p12), ((0, 2), p22)) if v}


_WITT_SUBSTITUTION = (
    {(1, 0): ONE, (0, 1): ONE},
    {(1, 0): ONE, (0, 1): -ONE},
)


def witt_to_symplectic(poly: Mapping[Tuple[int, int], Any]) -> QuadraticPolynomial:
    """Rewrite a holomorphic polynomial from complex-Witt variables to complex-symplectic ones.

    The symplectic variables are z1' = (z1 + z2)/sqrt(2), z2' = (z1 - z2)/sqrt(2);
    the global factor 2^{-d/2} is dropped, which leaves the line unchanged.
    """
    result: QuadraticPolynomial = {}
    for exps, value in poly.items():
        term = {(0, 0): as_scalar(value)}
        for var, power in enumerate(exps):
            for _ in range(power):
                term = poly_product(term, _WITT_SUBSTITUTION[var])
        for key, coeff in term.items():
            updated = result.get(key, ZERO) + coeff
            if updated:
                result[key] = updated
            else:
                result.pop(key, None)
    return result


@dataclass(frozen=True)
class CoreLineRep:
    """A nonzero vector z = x + iy of V, standing for the line it spans."""

    signature: Signature
    z: EpsVector
    provenance: str = "direct"

    def __post_init__(self):
        object.__setattr__(self, "signature", _check_signature(self.signature))
        values = tuple(as_scalar(v) for v in self.z)
        if len(values) != 3:
            raise ContactEngineError("a line in V needs three eps-coordinates")
        if not any(values):
            raise ZeroVectorError("z = 0 does not define a core")
        object.__setattr__(self, "z", values)

    @classmethod
    def from_polynomial(cls, signature: Sequence[int], poly: Mapping[Tuple[int, int], Any], provenance: str = "polynomial") -> "CoreLineRep":
        return cls(_check_signature(signature), eps_from_polynomial(signature, poly), provenance)

    @property
    def x(self) -> Tuple[Any, Any, Any]:
        return tuple(v.x for v in self.z)

    @property
    def y(self) -> Tuple[Any, Any, Any]:
        return tuple(v.y for v in self.z)

    def polynomial(self) -> QuadraticPolynomial:
        return polynomial_from_eps(self.signature, self.z)

    def generator_text(self) -> str:
        """The generator of m^{0(10)} in the element syntax of the n = 2 algebra."""
        algebra = get_contact_algebra(SymplecticSpace.complex_symplectic(2, self.signature))
        element = algebra.polynomial({(a, b, 0, 0): v for (a, b), v in self.polynomial().items()})
        return format_element(element)


# ---------------------------------------------------------------------------
# Stabilizers
# ---------------------------------------------------------------------------


def k_basis(signature: Sequence[int]) -> List[List[List[int]]]:
    """Basis of k = so(3) or so(2,1), as matrices on eps_1, eps_2, eps_3."""
    rotation_12 = [[0, -1, 0], [1, 0, 0], [0, 0, 0]]
    if _check_signature(signature) == (2, 0):
        return [
            rotation_12,
            [[0, 0, -1], [0, 0, 0], [1, 0, 0]],
            [[0, 0, 0], [0, 0, -1], [0, 1, 0]],
        ]
    return [
        rotation_12,
        [[0, 0, 1], [0, 0, 0], [1, 0, 0]],
        [[0, 0, 0], [0, 0, 1], [0, 1, 0]],
    ]


@dataclass(frozen=True)
class StabilizerAlgebra:
    """n# = C + {A in k : Az in Cz}; ``kernel`` holds coordinates over :func:`k_basis`."""

    signature: Signature
    tag: StabilizerTag
    kernel: Tuple[Tuple[Any, Any, Any], ...] = ()

    @property
    def real_dim(self) -> int:
        return 2 + len(self.kernel)

    def matrices(self) -> List[DomainMatrix]:
        basis = k_basis(self.signature)
        result = []
        for coords in self.kernel:
            rows = [
                [sum((c * QQ(basis[k][r][s]) for k, c in enumerate(coords)), QQ(0)) for s in range(3)]
                for r in range(3)
            ]
            result.append(DomainMatrix(rows, (3, 3), QQ))
        return result

    def to_dict(self) -> Dict[str, Any]:
        return {"tag": self.tag.value, "real_dim": self.real_dim}


def _stabilizer_tag(matrices: List[DomainMatrix]) -> StabilizerTag:
    if not matrices:
        return StabilizerTag.SCALARS
    if len(matrices) == 1:
        # charpoly is x^3 + c x: compact for c > 0, split for c < 0, nilpotent for c = 0
        coefficients = matrices[0].charpoly()
        c = coefficients[2]
        if c > 0:
            return StabilizerTag.COMPACT
        if c < 0:
            return StabilizerTag.SPLIT
        return StabilizerTag.NULL_ROTATION
    if len(matrices) == 2:
        a, b = matrices
        if a * b - b * a != DomainMatrix.zeros((3, 3), QQ):
            return StabilizerTag.SOLVABLE
        logger.warning("Abelian 2-dimensional stabilizer part; tagging as the full algebra")
    return StabilizerTag.FULL


def stabilizer_algebra(rep: CoreLineRep) -> StabilizerAlgebra:
    """Solve {A in k, lambda in C : Az = lambda z} over the reals."""
    basis = k_basis(rep.signature)
    z = rep.z
    images = [
        [sum((QQ_I(matrix[m][k], 0) * z[k] for k in range(3)), ZERO) for m in range(3)]
        for matrix in basis
    ]
    rows = []
    for m in range(3):
        re_row = {j: QQ_I(images[j][m].x, 0) for j in range(3)}
        re_row[3] = QQ_I(-z[m].x, 0)
        re_row[4] = QQ_I(z[m].y, 0)
        im_row = {j: QQ_I(images[j][m].y, 0) for j in range(3)}
        im_row[3] = QQ_I(-z[m].y, 0)
        im_row[4] = QQ_I(-z[m].x, 0)
        rows.append({k: v for k, v in re_row.items() if v})
        rows.append({k: v for k, v in im_row.items() if v})
    # lambda is fixed by A since z != 0, so the projection to the A-part is injective
    kernel = tuple(
        tuple(vector.get(j, ZERO).x for j in range(3)) for vector in nullspace(rows, 5)
    )
    algebra = StabilizerAlgebra(rep.signature, StabilizerTag.SCALARS, kernel)
    return StabilizerAlgebra(rep.signature, _stabilizer_tag(algebra.matrices()), kernel)


# ---------------------------------------------------------------------------
# Invariants and canonical forms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OrbitInvariants:
    """Exact invariants of z = x + iy.

    q = <z, z> scales by c^2, h = <x, x> + <y, y> by |c|^2, and the cross
    product w = x × y is K-equivariant and unchanged by unit scalars.
    """

    signature: Signature
    q: Scalar
    h: Any
    gram: Any
    cross: Tuple[Any, Any, Any]

    @property
    def dependent(self) -> bool:
        """x and y are linearly dependent over R."""
        return not any(self.cross)

    @property
    def gram_sign(self) -> int:
        return _sign(self.gram)

    @property
    def invariant(self):
        """|q|^2/h^2, or the signed h|h|/|q|^2 when the plane of x, y is Lorentzian."""
        if self.gram < 0:
            return self.h * abs(self.h) / norm_squared(self.q)
        if self.h:
            return norm_squared(self.q) / (self.h * self.h)
        return None

    @property
    def orientation(self) -> int:
        """Time orientation of a timelike or null w (signature (1,1) only)."""
        if self.signature != (1, 1) or self.dependent or self.gram < 0:
            return 0
        return -_sign(self.cross[2])

    @property
    def causal(self) -> int:
        """Causal character of the real line through z when x, y are dependent."""
        return _sign(self.h) if self.dependent else 0

    def key(self) -> Tuple:
        return (self.signature, self.gram_sign, self.dependent, self.invariant, self.orientation, self.causal)

    def to_dict(self) -> Dict[str, Any]:
        invariant = self.invariant
        return {
            "q": str(QQ_I.to_sympy(self.q)),
            "h": str(QQ.to_sympy(self.h)),
            "gram_sign": self.gram_sign,
            "dependent": self.dependent,
            "invariant": None if invariant is None else str(QQ.to_sympy(invariant)),
            "orientation": self.orientation,
            "causal": self.causal,
        }


def orbit_invariants(rep: CoreLineRep) -> OrbitInvariants:
    metric = _metric(rep.signature)
    x, y = rep.x, rep.y
    q = _pair(rep.z, rep.z, [QQ_I(m, 0) for m in metric])
    xx, yy, xy = _pair(x, x, metric), _pair(y, y, metric), _pair(x, y, metric)
    euclidean = (
        x[1] * y[2] - x[2] * y[1],
        x[2] * y[0] - x[0] * y[2],
        x[0] * y[1] - x[1] * y[0],
    )
    cross = tuple(metric[k] * euclidean[k] for k in range(3))
    return OrbitInvariants(rep.signature, q, xx + yy, xx * yy - xy * xy, cross)


@dataclass(frozen=True)
class OrbitLabel:
    """Canonical form of a K#-orbit: family, exact parameter and stabilizer type."""

    signature: Signature
    family: str
    name: str
    parameter: Any = None
    defining_polynomial: Optional[str] = None
    stabilizer: StabilizerTag = StabilizerTag.SCALARS
    admissible: bool = False
    key: Tuple = field(default=(), repr=False)

    def same_orbit(self, other: "OrbitLabel") -> bool:
        return self.signature == other.signature and self.key == other.key

    def to_dict(self) -> Dict[str, Any]:
        return {
            "signature": list(self.signature),
            "family": self.family,
            "name": self.name,
            "parameter": None if self.parameter is None else str(self.parameter),
            "defining_polynomial": self.defining_polynomial,
            "stabilizer": self.stabilizer.value,
            "admissible": self.admissible,
        }


def _root_parameter(square) -> Any:
    """sqrt((1 - s)/(1 + s)) for s = sqrt(square), simplified."""
    s = sqrt(QQ.to_sympy(square))
    return sqrt(radsimp((1 - s) / (1 + s)))


def canonical_form(rep: CoreLineRep) -> OrbitLabel:
    """Family and parameter of the canonical form in the orbit of ``rep``."""
    invariants = orbit_invariants(rep)
    stabilizer = stabilizer_algebra(rep)
    parameter = None
    if rep.signature == (2, 0):
        family = "m_t"
        parameter = _root_parameter(invariants.invariant)
    elif invariants.dependent:
        if invariants.causal > 0:
            family, parameter = "m_t", Integer(0)
        elif invariants.causal < 0:
            family = "m_<0"
        else:
            family = "m_null"
    elif invariants.gram_sign > 0:
        family = "m_t"
        parameter = invariants.orientation * _root_parameter(invariants.invariant)
    elif invariants.gram_sign < 0:
        family = "m~_t"
        signed = QQ.to_sympy(invariants.invariant)
        ratio = abs(signed)
        # h^2 - |q|^2 = 4*gram < 0 here, so ratio < 1 for every actual z
        if ratio >= 1:
            raise DegenerateParameterError(f"Lorentzian invariant {signed} is off the range (-1, 1)")
        parameter = _sign(invariants.invariant) * sqrt(ratio / (1 - ratio))
    else:
        family, parameter = "m_pm", Integer(invariants.orientation)

    if family == "m_pm":
        name = "m_+" if parameter > 0 else "m_-"
    elif parameter is not None:
        name = f"{family[:-2]}_{parameter}"
    else:
        name = family
    polynomial = None
    if parameter is not None:
        polynomial = str(minimal_polynomial(parameter, _T))
    label = OrbitLabel(
        rep.signature,
        family,
        name,
        parameter,
        polynomial,
        stabilizer.tag,
        stabilizer.tag is not StabilizerTag.SCALARS,
        invariants.key(),
    )
    logger.debug(f"Canonical form of {rep.z}: {label.name} ({label.stabilizer.value})")
    return label


def classify_polynomial(signature: Sequence[int], poly: Mapping[Tuple[int, int], Any]) -> OrbitLabel:
    return canonical_form(CoreLineRep.from_polynomial(signature, poly))


def label_for_core(core) -> OrbitLabel:
    """Orbit label of a 7-dimensional core given in normal form."""
    space = core.algebra.space
    if space.n != 2 or core.height != 0 or core.holomorphic(0).dim != 1:
        raise ContactEngineError("only 7-dimensional cores of height zero are classified")
    generator = core.generators(0)[0]
    poly: QuadraticPolynomial = {}
    for (layer, exps), value in generator.terms.items():
        if layer != -1 or any(exps[2:]):
            raise ContactEngineError("core generator is not in S^{2,0}")
        poly[exps[:2]] = value
    if space.basis_kind is BasisKind.COMPLEX_WITT:
        poly = witt_to_symplectic(poly)
    return canonical_form(CoreLineRep.from_polynomial(space.signature, poly, provenance="core"))


# ---------------------------------------------------------------------------
# Circle action on the two-parameter family
# ---------------------------------------------------------------------------


def _circle_point(point: Sequence[Any]):
    a, b = (_as_rational(v) for v in point)
    if a * a + b * b != QQ(1):
        raise DegenerateParameterError(f"({a}, {b}) is not on the unit circle")
    return a, b


def s1_action(point: Sequence[Any], params: Sequence[Any]) -> Tuple[Any, Any]:
    """e^{i theta} . (t1, t2) for cos theta = a, sin theta = b.

    The family is z = (1 + i t1) eps_1 + i t2 eps_2 in either signature.
    """
    a, b = _circle_point(point)
    t1, t2 = (_as_rational(v) for v in params)
    denominator = (a - t1 * b) * (a - t1 * b) + t2 * t2 * b * b
    if not denominator:
        raise DegenerateParameterError(f"circle action undefined at (t1, t2) = ({t1}, {t2})")
    numerator = t1 * (a * a - b * b) + (1 - t1 * t1 - t2 * t2) * a * b
    return numerator / denominator, t2 / denominator


def s1_action_oracle(point: Sequence[Any], params: Sequence[Any], signature: Sequence[int] = (2, 0)) -> Tuple[Any, Any]:
    """(t1', t2'^2) obtained by multiplying z by a + ib and re-extracting the parameters."""
    signature = _check_signature(signature)
    a, b = _circle_point(point)
    t1, t2 = (_as_rational(v) for v in params)
    metric = _metric(signature)
    z = (QQ_I(1, t1), QQ_I(0, t2), ZERO)
    rotated = CoreLineRep(signature, tuple(QQ_I(a, b) * v for v in z), "oracle")
    x, y = rotated.x, rotated.y
    xx = _pair(x, x, metric)
    if not xx:
        raise DegenerateParameterError("real part is null; parameters cannot be extracted")
    s1 = _pair(x, y, metric) / xx
    rest = tuple(y[k] - s1 * x[k] for k in range(3))
    return s1, _pair(rest, rest, metric) / xx


# ---------------------------------------------------------------------------
# Random group elements
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GroupElement:
    """(c, A) in C^x x K, acting by z -> c . Az."""

    signature: Signature
    scalar: Scalar
    matrix: DomainMatrix

    def apply(self, rep: CoreLineRep) -> CoreLineRep:
        if rep.signature != self.signature:
            raise ContactEngineError("group element and line have different signatures")
        rows = self.matrix.to_list()
        image = tuple(
            self.scalar * sum((QQ_I(rows[m][k], 0) * rep.z[k] for k in range(3)), ZERO)
            for m in range(3)
        )
        return CoreLineRep(rep.signature, image, "group")

    def preserves_metric(self) -> bool:
        metric = _metric(self.signature)
        eta = DomainMatrix.diag(list(metric), QQ).to_dense()
        return self.matrix.transpose() * eta * self.matrix == eta and self.matrix.det() == QQ(1)


def _plane_matrix(i: int, j: int, cos, sin, hyperbolic: bool) -> DomainMatrix:
    rows = [[QQ(1) if r == c else QQ(0) for c in range(3)] for r in range(3)]
    rows[i][i], rows[j][j] = cos, cos
    rows[i][j] = sin if hyperbolic else -sin
    rows[j][i] = sin
    return DomainMatrix(rows, (3, 3), QQ)


def _rotation(s, i: int, j: int) -> DomainMatrix:
    denominator = 1 + s * s
    return _plane_matrix(i, j, (1 - s * s) / denominator, 2 * s / denominator, False)


def _boost(s, i: int, j: int) -> DomainMatrix:
    denominator = 1 - s * s
    return _plane_matrix(i, j, (1 + s * s) / denominator, 2 * s / denominator, True)


def sample_group_element(signature: Sequence[int], seed: int = 0) -> GroupElement:
    """A rational element of C^x x K, for invariance checks.

    Rotations and boosts use rational half-angle parametrizations, so every
    entry stays in Q and boosts keep the time orientation.
    """
    signature = _check_signature(signature)
    rng = random.Random(seed)

    def slope(bound: int) -> Any:
        return QQ(rng.randint(-bound, bound), bound + 1)

    if signature == (2, 0):
        matrix = _rotation(slope(5), 0, 1) * _rotation(slope(5), 1, 2) * _rotation(slope(5), 0, 2)
    else:
        matrix = _rotation(slope(5), 0, 1) * _boost(slope(4), 0, 2) * _boost(slope(4), 1, 2)
    scalar = ZERO
    while not scalar:
        scalar = QQ_I(QQ(rng.randint(-4, 4), rng.randint(1, 3)), QQ(rng.randint(-4, 4), rng.randint(1, 3)))
    return GroupElement(signature, scalar, matrix)


# ---------------------------------------------------------------------------
# Tables of canonical forms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _TableRow:
    family: str
    parameter: str
    generator: str
    canonical: str
    classes: str
    samples: Tuple[Optional[str], ...]
    declared: StabilizerTag


def _compact_family(t) -> QuadraticPolynomial:
    return {(2, 0): 1 + t, (0, 2): 1 - t}


def _split_family(t) -> QuadraticPolynomial:
    return {(2, 0): 1 + t, (0, 2): t - 1}


def _lorentzian_family(t) -> QuadraticPolynomial:
    return {
        (2, 0): QQ_I(1, 1 + t),
        (0, 2): QQ_I(-1, -1 - t),
        (1, 1): QQ_I(2 * (t - 1), -2),
    }


def _null_pair_family(t) -> QuadraticPolynomial:
    return {(2, 0): 1 + t, (0, 2): t - 1, (1, 1): QQ_I(0, -2)}


_GENERATORS = {
    ((2, 0), "m_t"): _compact_family,
    ((1, 1), "m_t"): _split_family,
    ((1, 1), "m~_t"): _lorentzian_family,
    ((1, 1), "m_pm"): _null_pair_family,
    ((1, 1), "m_<0"): lambda t: {(1, 1): ONE},
    ((1, 1), "m_null"): lambda t: {(2, 0): ONE, (0, 2): -ONE, (1, 1): QQ_I(0, -2)},
}

_TABLES: Dict[Signature, Tuple[_TableRow, ...]] = {
    (2, 0): (
        _TableRow("m_t", "t=0,1", "(1+t)*z1^2+(1-t)*z2^2", "e1+i*t*e2", "2", ("0", "1"), StabilizerTag.COMPACT),
        _TableRow("m_t", "t in (0,1)", "(1+t)*z1^2+(1-t)*z2^2", "e1+i*t*e2", "continuum", ("1/2", "1/3"), StabilizerTag.SCALARS),
    ),
    (1, 1): (
        _TableRow("m_t", "t=±1", "(1+t)*z1^2+(t-1)*z2^2", "e1+i*t*e2", "2", ("1", "-1"), StabilizerTag.COMPACT),
        _TableRow("m_t", "t=0", "(1+t)*z1^2+(t-1)*z2^2", "e1", "1", ("0",), StabilizerTag.SPLIT),
        _TableRow("m_t", "t in [-1,1], t≠0,±1", "(1+t)*z1^2+(t-1)*z2^2", "e1+i*t*e2", "continuum", ("1/2", "-1/3"), StabilizerTag.SCALARS),
        _TableRow(
            "m~_t",
            "t in R",
            "z1^2-z2^2+2*(t-1)*z1*z2+i*((1+t)*z1^2-(1+t)*z2^2-2*z1*z2)",
            "e1+e3+i*(t*(e1+e3)+(e1-e3))",
            "continuum",
            ("0", "2"),
            StabilizerTag.SCALARS,
        ),
        _TableRow("m_pm", "t=±1", "(1+t)*z1^2+(t-1)*z2^2-2*i*z1*z2", "e1+e3±i*e2", "2", ("1", "-1"), StabilizerTag.SCALARS),
        _TableRow("m_<0", "", "z1*z2", "e3", "1", (None,), StabilizerTag.COMPACT),
        _TableRow("m_null", "", "z1^2-z2^2-2*i*z1*z2", "e1+e3", "1", (None,), StabilizerTag.SOLVABLE),
    ),
}


def table_representatives(signature: Sequence[int]) -> List[Tuple[str, CoreLineRep]]:
    """(family, line) pairs for every sample of every table row."""
    signature = _check_signature(signature)
    result = []
    for row in _TABLES[signature]:
        generator = _GENERATORS[(signature, row.family)]
        for sample in row.samples:
            t = _as_rational(sample) if sample is not None else QQ(0)
            poly = {exps: as_scalar(v) for exps, v in generator(t).items()}
            result.append((row.family, CoreLineRep.from_polynomial(signature, poly, "table")))
    return result


def _admissible_classes(row: Dict[str, Any]) -> int:
    return int(row["classes"]) if row["admissible"] and row["classes"].isdigit() else 0


def enumerate_tables(signatures: Sequence[Sequence[int]] = SIGNATURES) -> Dict[str, Any]:
    """Canonical families with generators, stabilizer tags and admissibility."""
    tables = []
    for signature in signatures:
        signature = _check_signature(signature)
        rows = []
        for row in _TABLES[signature]:
            generator = _GENERATORS[(signature, row.family)]
            tags = set()
            representatives = []
            for sample in row.samples:
                t = _as_rational(sample) if sample is not None else QQ(0)
                rep = CoreLineRep.from_polynomial(signature, generator(t), "table")
                tags.add(stabilizer_algebra(rep).tag)
                representatives.append(rep.generator_text())
            verified = tags == {row.declared}
            if not verified:
                logger.error(f"Stabilizer of {row.family} ({row.parameter}) computed as {tags}, expected {row.declared}")
            rows.append(
                {
                    "family": row.family,
                    "parameter": row.parameter,
                    "generator": row.generator,
                    "canonical": row.canonical,
                    "stabilizer": row.declared.value,
                    "admissible": row.declared is not StabilizerTag.SCALARS,
                    "classes": row.classes,
                    "representatives": representatives,
                    "verified": verified,
                }
            )
        tables.append(
            {
                "signature": list(signature),
                "families": len({row["family"] for row in rows}),
                "admissible_classes": sum(_admissible_classes(row) for row in rows),
                "rows": rows,
            }
        )
    return {
        "tables": tables,
        "admissible_classes_total": sum(table["admissible_classes"] for table in tables),
    }


def tables_to_markdown(document: Mapping[str, Any]) -> str:
    lines = []
    for table in document["tables"]:
        r, s = table["signature"]
        lines.append(f"### Signature ({r},{s})")
        lines.append("")
        lines.append("| family | parameter | generator | stabilizer | admissible |")
        lines.append("|---|---|---|---|---|")
        for row in table["rows"]:
            admissible = "yes" if row["admissible"] else "no"
            lines.append(
                f"| {row['family']} | {row['parameter']} | {row['generator']} | {row['stabilizer']} | {admissible} |"
            )
        lines.append("")
        lines.append(f"Admissible classes: {table['admissible_classes']}")
        lines.append("")
    lines.append(f"Admissible classes in total: {document['admissible_classes_total']}")
    return "\n".join(lines) + "\n"
