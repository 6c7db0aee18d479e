"""
Uniqueness of the 3-nondegenerate Model (n = 1)

Rebuilds the model of the core spanned by z^2 and z^3 from scratch and shows
it is the only one, in three steps:

1. degree 0: the Borel subalgebras ⟨E, z^2 + α z zb, zb^2 + ᾱ z zb⟩ close
   exactly when αᾱ = 1, and the rotations z ↦ w z move them into each other
2. degree 1: the prolongation of the degree-0 part is 4-dimensional, spanned
   by N, N̄, V, W; the height and closure conditions reduce the free
   parameters of N_{αβ} = N + ᾱ V + β̄ W to a polynomial system whose only
   solution is α = β = 0
3. degree 2: the candidates allowed by the T-bracket are killed by a
   nonsingular linear system, so nothing survives in degree 2; the
   prolongation is then recomputed degree by degree up to the requested one

Parameters are sympy symbols; ᾱ and β̄ are independent symbols standing for
the conjugates, and every bracket is expanded bilinearly over exact elements.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from sympy import Expr, I, Poly, Rational, div, expand, groebner, solve, symbols
from sympy.polys.domains import QQ_I

from abscore import Automorphism
from builtin_models import three_nondegenerate_model
from contact import ContactAlgebra, ContactElement, Key, SymplecticSpace, get_contact_algebra
from element_syntax import format_key, parse_element
from exactla import ContactEngineError, as_scalar, determinant, format_scalar, gaussian, norm_squared, rank
from graded import full_component, span_elements, subspace_with_bracket_condition, universal_component
from models import ModelCandidate
from reports import CheckList

logger = logging.getLogger(__name__)

ALPHA, ALPHA_BAR, BETA, BETA_BAR = symbols("alpha alphabar beta betabar")
GAMMA, DELTA = symbols("gamma delta")

SymbolicElement = Dict[Key, Expr]
Combination = Sequence[Tuple[Any, ContactElement]]

# rational points of the unit circle, plus a few points off it
CIRCLE_POINTS = [
    ("1", "0"), ("0", "1"), ("3/5", "4/5"), ("-3/5", "4/5"), ("5/13", "12/13"),
    ("8/17", "-15/17"), ("7/25", "24/25"), ("20/29", "21/29"),
]
OFF_CIRCLE_POINTS = [("2", "0"), ("1", "1"), ("1/2", "0"), ("3/5", "3/5")]

DISPLAYED_SYSTEM = [
    2 * ALPHA + ALPHA_BAR + ALPHA * ALPHA_BAR,
    2 * ALPHA + 6 * ALPHA_BAR + 6 * ALPHA * ALPHA_BAR,
    2 * ALPHA - 4 * ALPHA_BAR - 4 * ALPHA * ALPHA_BAR,
]


# ---------------------------------------------------------------------------
# Symbolic combinations
# ---------------------------------------------------------------------------


def _sym(value) -> Expr:
    return QQ_I.to_sympy(value)


def combine(terms: Combination) -> SymbolicElement:
    """Σ coeff·element with sympy coefficients."""
    result: Dict[Key, Any] = {}
    for coeff, element in terms:
        for key, value in element.terms.items():
            result[key] = result.get(key, 0) + coeff * _sym(value)
    expanded = {key: expand(value) for key, value in result.items()}
    return {key: value for key, value in expanded.items() if value != 0}


def symbolic_bracket(algebra: ContactAlgebra, left: Combination, right: Combination) -> SymbolicElement:
    return combine([(a * b, algebra.bracket(x, y)) for a, x in left for b, y in right])


def _subtract(v: SymbolicElement, factor: Expr, w: SymbolicElement) -> SymbolicElement:
    result = dict(v)
    for key, value in w.items():
        result[key] = expand(result.get(key, 0) - factor * value)
    return {key: value for key, value in result.items() if value != 0}


def _normalize(equation: Expr) -> Expr:
    """Scale a polynomial equation in α, ᾱ to leading coefficient 1."""
    lead = Poly(equation, ALPHA, ALPHA_BAR).coeffs()[0]
    return expand(equation / lead)


def _text(algebra: ContactAlgebra, p: int, v: SymbolicElement) -> Dict[str, str]:
    index = algebra.index(p)
    return {format_key(algebra, p, key): str(v[key]) for key in sorted(v, key=index.__getitem__)}


class _Elements:
    """The named elements of the n = 1 computation."""

    def __init__(self, algebra: ContactAlgebra):
        def parse(text: str, p: int) -> ContactElement:
            return parse_element(text, algebra, p)

        self.E = algebra.grading_element()
        self.z2, self.zzb, self.zb2 = parse("z^2", 0), parse("z*zb", 0), parse("zb^2", 0)
        self.M = self.z2 + self.zzb
        self.Mbar = algebra.conjugate(self.M)
        self.N = parse("z^3+2*z^2*zb+z*zb^2-3*i*mu^1[z]-3*i*mu^1[zb]", 1)
        self.Nbar = algebra.conjugate(self.N)
        self.V = parse("z^2*zb+z*zb^2+1/2*i*mu^1[z]-1/2*i*mu^1[zb]", 1)
        self.W = parse("mu^1[z]+mu^1[zb]", 1)
        self.z3, self.z2zb = parse("z^3", 1), parse("z^2*zb", 1)
        self.zzb2, self.zb3 = parse("z*zb^2", 1), parse("zb^3", 1)
        self.mu_z, self.mu_zb = parse("mu^1[z]", 1), parse("mu^1[zb]", 1)
        self.z4 = parse("z^4", 2)


# ---------------------------------------------------------------------------
# Step 1: degree 0
# ---------------------------------------------------------------------------


def borel_condition(algebra: ContactAlgebra) -> Expr:
    """Obstruction to ⟨E, z^2 + α z zb, zb^2 + ᾱ z zb⟩ being closed.

    E is the only layer-0 element and z^2, zb^2 occur in one generator each,
    so membership reduces to the z zb coefficient.
    """
    x = _Elements(algebra)
    value = symbolic_bracket(
        algebra, [(1, x.z2), (ALPHA, x.zzb)], [(1, x.zb2), (ALPHA_BAR, x.zzb)]
    )
    key_of = {name: next(iter(e.terms)) for name, e in (("z2", x.z2), ("zzb", x.zzb), ("zb2", x.zb2))}
    residual = (
        value.get(key_of["zzb"], 0)
        - value.get(key_of["z2"], 0) * ALPHA
        - value.get(key_of["zb2"], 0) * ALPHA_BAR
    )
    return expand(residual)


def borel_subalgebra(algebra: ContactAlgebra, alpha) -> List[ContactElement]:
    x = _Elements(algebra)
    alpha = as_scalar(alpha)
    M = x.z2 + x.zzb.scale(alpha)
    return [x.E, M, algebra.conjugate(M)]


def borel_closes(algebra: ContactAlgebra, alpha) -> bool:
    """Exact closure test for one Gaussian rational α."""
    basis = borel_subalgebra(algebra, alpha)
    span = span_elements(algebra, basis, 0)
    return all(
        span.contains(algebra.to_vector(algebra.bracket(a, b)))
        for a in basis
        for b in basis
    )


def rotation_moves_borel(algebra: ContactAlgebra, w) -> bool:
    """z ↦ w z maps the α = 1 subalgebra onto the one with α = w̄^2."""
    w = as_scalar(w)
    rotation = Automorphism.rotation(algebra, w)
    start = span_elements(algebra, borel_subalgebra(algebra, 1), 0)
    w_bar = gaussian(w.x, -w.y)
    target = span_elements(algebra, borel_subalgebra(algebra, w_bar * w_bar), 0)
    return rotation.apply_subspace(start, 0) == target


# ---------------------------------------------------------------------------
# Step 2: degree 1
# ---------------------------------------------------------------------------


def prolongation_degree_one(algebra: ContactAlgebra):
    """{X in c^1 : [X, c^-1] inside the α = 1 Borel subalgebra}."""
    b0 = span_elements(algebra, borel_subalgebra(algebra, 1), 0)
    variables = [algebra.variable(var) for var in range(algebra.nvars)]
    return subspace_with_bracket_condition(algebra, full_component(algebra, 1), 1, variables, b0)


def height_projection(algebra: ContactAlgebra) -> Tuple[Expr, Expr]:
    """z^4 coefficients of [N_{αβ}, γV + δW] and of [N_{αβ}, N̄_{αβ}]."""
    x = _Elements(algebra)
    key = next(iter(x.z4.terms))
    n_ab = [(1, x.N), (ALPHA_BAR, x.V), (BETA_BAR, x.W)]
    n_bar_ab = [(1, x.Nbar), (ALPHA, x.V), (BETA, x.W)]
    general = symbolic_bracket(algebra, n_ab, [(GAMMA, x.V), (DELTA, x.W)]).get(key, 0)
    own = symbolic_bracket(algebra, n_ab, n_bar_ab).get(key, 0)
    return expand(general), expand(own)


def beta_relation(algebra: ContactAlgebra) -> List[Expr]:
    """Solutions for β of π[N_{αβ}, N̄_{αβ}] = 0."""
    _, own = height_projection(algebra)
    return solve(own, BETA)


def _parameters(beta: Expr) -> Dict[Any, Expr]:
    beta_bar = expand(beta.subs(ALPHA, ALPHA_BAR).subs(I, -I))
    return {BETA: beta, BETA_BAR: beta_bar}


def bracket_2m_nbar(algebra: ContactAlgebra, beta: Expr) -> SymbolicElement:
    """[2M, N̄_{αβ}] with β eliminated."""
    x = _Elements(algebra)
    value = symbolic_bracket(algebra, [(2, x.M)], [(1, x.Nbar), (ALPHA, x.V), (BETA, x.W)])
    subs = _parameters(beta)
    result = {key: expand(v.subs(subs)) for key, v in value.items()}
    return {key: v for key, v in result.items() if v != 0}


def displayed_bracket_2m_nbar(algebra: ContactAlgebra) -> SymbolicElement:
    x = _Elements(algebra)
    a = ALPHA
    return combine([
        (-2 * I * (1 + a), x.z3),
        (-I * (7 + 3 * a), x.z2zb),
        (-I * (8 + a), x.zzb2),
        (-3 * I, x.zb3),
        (3 + a, x.mu_z),
        (3 + 2 * a, x.mu_zb),
    ])


def closure_system(algebra: ContactAlgebra, beta: Expr) -> List[Expr]:
    """Equations for [2M, N̄_{αβ}] to lie in ⟨N_{αβ}, N̄_{αβ}⟩.

    z^3 occurs only in N_{αβ} and zb^3 only in N̄_{αβ}, which fixes the two
    coefficients; the rest of the residual must vanish.
    """
    x = _Elements(algebra)
    subs = _parameters(beta)
    n_ab = combine([(1, x.N), (ALPHA_BAR, x.V), (subs[BETA_BAR], x.W)])
    n_bar_ab = combine([(1, x.Nbar), (ALPHA, x.V), (subs[BETA], x.W)])
    value = bracket_2m_nbar(algebra, beta)
    c_n = value.get(next(iter(x.z3.terms)), 0)
    c_n_bar = value.get(next(iter(x.zb3.terms)), 0)
    residual = _subtract(_subtract(value, c_n, n_ab), c_n_bar, n_bar_ab)
    equations = []
    for equation in residual.values():
        equation = _normalize(equation)
        if equation not in equations:
            equations.append(equation)
    return equations


def same_ideal(first: Sequence[Expr], second: Sequence[Expr]) -> bool:
    a = groebner(list(first), ALPHA, ALPHA_BAR, order="lex")
    b = groebner(list(second), ALPHA, ALPHA_BAR, order="lex")
    return list(a.exprs) == list(b.exprs)


# ---------------------------------------------------------------------------
# Step 3: degree 2
# ---------------------------------------------------------------------------


def degree_two_family(algebra: ContactAlgebra) -> List[ContactElement]:
    return [
        parse_element(text, algebra, 2)
        for text in (
            "z^3*zb",
            "z^2*zb^2",
            "z*zb^3",
            "mu^2[z^2]+mu^2[z*zb]",
            "mu^2[z*zb]+mu^2[zb^2]",
            "mu^2[mu^0[T]]",
        )
    ]


def degree_two_candidates(algebra: ContactAlgebra, g0):
    """{X in u^2 ∩ ū^2 : [X, T] in g0}."""
    both = universal_component(algebra, 2).intersect(universal_component(algebra, 2, conjugate=True))
    return subspace_with_bracket_condition(algebra, both, 2, [algebra.T], g0)


def degree_two_conditions(algebra: ContactAlgebra) -> Dict[Tuple[str, Key], Dict[int, Any]]:
    """The conditions [X, z] ∈ ℂN and [X, zb] ∈ ℂN̄ on the family, one per coefficient.

    The multiple of N is read off the z^3 coefficient (zb^3 for N̄); every other
    coefficient of c^1 gives a linear form in the six family coordinates.
    """
    x = _Elements(algebra)
    family = degree_two_family(algebra)
    index = algebra.index(1)
    zero = as_scalar(0)
    conditions: Dict[Tuple[str, Key], Dict[int, Any]] = {}
    for side, w, target, lead in (
        ("z", algebra.variable(0), x.N, x.z3),
        ("zb", algebra.variable(1), x.Nbar, x.zb3),
    ):
        images = [algebra.to_vector(algebra.bracket(X, w)) for X in family]
        goal = algebra.to_vector(target)
        lead_index = index[next(iter(lead.terms))]
        scale = goal[lead_index]
        for key in algebra.basis(1):
            k = index[key]
            if k == lead_index:
                continue
            row = {}
            for j, image in enumerate(images):
                value = scale * image.get(k, zero) - image.get(lead_index, zero) * goal.get(k, zero)
                if value:
                    row[j] = value
            if row:
                conditions[(side, key)] = row
    return conditions


def degree_two_square_system(algebra: ContactAlgebra) -> Tuple[List[List[Any]], int]:
    """The 6×6 matrix of six fixed conditions, and the rank of all of them.

    The [X, z] conditions on z zb^2 and mu^1[zb] are left out: they follow from
    the other six through the two relations tying the [X, z] and [X, zb] rows.
    """
    x = _Elements(algebra)
    conditions = degree_two_conditions(algebra)
    chosen = [("z", x.z2zb), ("z", x.mu_z), ("zb", x.z2zb), ("zb", x.zzb2), ("zb", x.mu_z), ("zb", x.mu_zb)]
    size = len(degree_two_family(algebra))
    square = []
    for side, element in chosen:
        row = conditions.get((side, next(iter(element.terms))), {})
        square.append([row.get(k, as_scalar(0)) for k in range(size)])
    return square, rank(list(conditions.values()), size)


def prolong_degree(algebra: ContactAlgebra, candidates, p: int, previous):
    """{X in candidates : [X, c^-1] inside ``previous``}, ``previous`` living in degree p - 1."""
    variables = [algebra.variable(var) for var in range(algebra.nvars)]
    return subspace_with_bracket_condition(algebra, candidates, p, variables, previous)


def prolongations(algebra: ContactAlgebra, g2_candidates, g1, max_degree: int) -> Dict[int, Any]:
    """g̃^p for 2 <= p <= max_degree, each one prolonging the one below it."""
    result = {2: prolong_degree(algebra, g2_candidates, 2, g1)}
    for p in range(3, max_degree + 1):
        both = universal_component(algebra, p).intersect(universal_component(algebra, p, conjugate=True))
        result[p] = prolong_degree(algebra, both, p, result[p - 1])
    return result


# ---------------------------------------------------------------------------
# Driver
# ---------------------------------------------------------------------------


@dataclass
class SearchReport:
    checks: CheckList
    borel_condition: str
    borel_grid: List[Dict[str, Any]]
    g1_tilde_dim: int
    beta_relation: List[str]
    bracket_2m_nbar: Dict[str, str]
    nonlinear_system: List[str]
    groebner_basis: List[str]
    solutions: List[Dict[str, str]]
    g2_candidates_dim: int
    g2_tilde_dim: int
    g2_system_rank: int
    determinant: str
    prolongation_dims: Dict[int, int]
    vanishing_degree: Optional[int]
    model: ModelCandidate = field(repr=False, default=None)

    @property
    def passed(self) -> bool:
        return self.checks.passed

    def to_dict(self) -> Dict[str, Any]:
        return {
            "passed": self.passed,
            "borel_condition": self.borel_condition,
            "borel_grid": self.borel_grid,
            "g1_tilde_dim": self.g1_tilde_dim,
            "beta_relation": self.beta_relation,
            "bracket_2M_Nbar": self.bracket_2m_nbar,
            "nonlinear_system": self.nonlinear_system,
            "groebner_basis": self.groebner_basis,
            "solutions": self.solutions,
            "g2_candidates_dim": self.g2_candidates_dim,
            "g2_tilde_dim": self.g2_tilde_dim,
            "g2_system_rank": self.g2_system_rank,
            "determinant": self.determinant,
            "prolongation_dims": {str(p): d for p, d in sorted(self.prolongation_dims.items())},
            "vanishing_degree": self.vanishing_degree,
            "model": self.model.name if self.model else None,
            "checks": self.checks.to_list(),
        }


def search_3nondeg_models(max_degree: int = 2) -> SearchReport:
    """Run the three steps and return the unique model with the evidence."""
    if max_degree < 2:
        raise ContactEngineError(f"the search needs max_degree >= 2, got {max_degree}")
    algebra = get_contact_algebra(SymplecticSpace.complex_symplectic(1))
    x = _Elements(algebra)
    checks = CheckList()

    # step 1
    condition = borel_condition(algebra)
    quotient, remainder = div(condition, ALPHA * ALPHA_BAR - 1, ALPHA, ALPHA_BAR)
    checks.add(
        "borel_condition",
        condition != 0 and remainder == 0 and not quotient.free_symbols,
        str(condition),
    )
    grid = []
    for re_text, im_text in CIRCLE_POINTS + OFF_CIRCLE_POINTS:
        w = gaussian(re_text, im_text)
        on_circle = norm_squared(w) == 1
        row = {
            "alpha": format_scalar(w),
            "unit": on_circle,
            "closes": borel_closes(algebra, w),
        }
        if on_circle:
            row["rotation"] = rotation_moves_borel(algebra, w)
        grid.append(row)
    checks.add("borel_grid", all(row["closes"] == row["unit"] for row in grid))
    checks.add("borel_rotations", all(row.get("rotation", True) for row in grid))

    # step 2
    g1_tilde = prolongation_degree_one(algebra)
    checks.add("g1_tilde_dim", g1_tilde.dim == 4, f"dim {g1_tilde.dim}")
    checks.add(
        "g1_tilde_basis",
        span_elements(algebra, [x.N, x.Nbar, x.V, x.W], 1) == g1_tilde,
    )
    general, _ = height_projection(algebra)
    checks.add(
        "height_projection",
        expand(general - (DELTA / 2 - Rational(5, 4) * I * GAMMA)) == 0,
        str(general),
    )
    betas = beta_relation(algebra)
    checks.add(
        "beta_relation",
        len(betas) == 1 and expand(betas[0] - Rational(5, 2) * I * ALPHA) == 0,
        str(betas),
    )
    beta = betas[0] if betas else Rational(5, 2) * I * ALPHA
    bracket = bracket_2m_nbar(algebra, beta)
    checks.add("bracket_2M_Nbar", bracket == displayed_bracket_2m_nbar(algebra))
    system = closure_system(algebra, beta)
    basis = groebner(system, ALPHA, ALPHA_BAR, order="lex") if system else None
    checks.add("same_ideal", bool(system) and same_ideal(system, DISPLAYED_SYSTEM))
    solutions = solve(system, [ALPHA, ALPHA_BAR], dict=True) if system else []
    checks.add(
        "unique_solution",
        solutions == [{ALPHA: 0, ALPHA_BAR: 0}],
        str(solutions),
    )
    at_one = [equation.subs({ALPHA: 1, ALPHA_BAR: 1}) for equation in system]
    checks.add("alpha_one_inconsistent", any(value != 0 for value in at_one))

    # step 3
    g0 = span_elements(algebra, borel_subalgebra(algebra, 1), 0)
    candidates = degree_two_candidates(algebra, g0)
    checks.add(
        "g2_candidates",
        candidates == span_elements(algebra, degree_two_family(algebra), 2),
        f"dim {candidates.dim}",
    )
    square, system_rank = degree_two_square_system(algebra)
    det = determinant(square)
    checks.add("g2_system_rank", system_rank == 6, f"rank {system_rank}")
    checks.add("g2_system_nonsingular", bool(det), format_scalar(det))
    g1 = span_elements(algebra, [x.N, x.Nbar], 1)
    tilde = prolongations(algebra, candidates, g1, max_degree)
    checks.add("g2_tilde_zero", tilde[2].dim == 0, f"dim {tilde[2].dim}")
    dims = {p: s.dim for p, s in tilde.items()}
    vanishing = next((p for p in sorted(dims) if dims[p] == 0), None)
    checks.add(
        "prolongation_vanishes",
        vanishing is not None,
        f"vanishes from degree {vanishing}" if vanishing is not None else f"inconclusive at budget {max_degree}",
    )

    model = three_nondegenerate_model()
    checks.add("model_degree_0", model.components[0] == g0)
    checks.add("model_degree_1", model.components[1] == g1)
    checks.add("model_degree_2", model.components[2].dim == 0)

    if checks.passed:
        logger.info("3-nondegenerate search: unique model recovered")
    else:
        logger.warning(f"3-nondegenerate search failed: {[c.name for c in checks.failures()]}")
    return SearchReport(
        checks,
        str(condition),
        grid,
        g1_tilde.dim,
        [str(b) for b in betas],
        _text(algebra, 1, bracket),
        [str(e) for e in system],
        [str(e) for e in basis.exprs] if basis is not None else [],
        [{str(k): str(v) for k, v in s.items()} for s in solutions],
        candidates.dim,
        tilde[2].dim,
        system_rank,
        format_scalar(det),
        dims,
        vanishing,
        model,
    )
