"""
Graded subspaces of the complexified contact algebra.

A graded subspace is a ``{degree: Subspace}`` dict covering every degree from
-2 up to a truncation degree; each component lives in the coordinate space of
the corresponding contact algebra component.
"""

import logging
from typing import Callable, Dict, Iterable, List, Optional, Tuple

from contact import ContactAlgebra, ContactElement, Key
from exactla import ONE, Subspace, dot, subspace_from_constraints

logger = logging.getLogger(__name__)

GradedSubspace = Dict[int, Subspace]


def span_elements(algebra: ContactAlgebra, elements: Iterable[ContactElement], p: int) -> Subspace:
    return Subspace.span((algebra.to_vector(x) for x in elements), algebra.ambient(p))


def component_elements(algebra: ContactAlgebra, subspace: Subspace, p: int) -> List[ContactElement]:
    return [algebra.from_vector(p, vector) for vector in subspace.basis]


def zero_component(algebra: ContactAlgebra, p: int) -> Subspace:
    return Subspace.zero(algebra.ambient(p))


def full_component(algebra: ContactAlgebra, p: int) -> Subspace:
    return Subspace.full(algebra.ambient(p))


def filtered_component(algebra: ContactAlgebra, p: int, keep: Callable[[Key], bool]) -> Subspace:
    """Span of the basis elements of degree p whose key satisfies ``keep``."""
    return Subspace.span(
        ({k: ONE} for k, key in enumerate(algebra.basis(p)) if keep(key)), algebra.ambient(p)
    )


def graded_span(algebra: ContactAlgebra, elements: Iterable[ContactElement], max_degree: int) -> GradedSubspace:
    """Graded span of homogeneous elements, zero in unrepresented degrees."""
    by_degree: Dict[int, List[ContactElement]] = {}
    for x in elements:
        if x.degree > max_degree:
            logger.warning(f"Dropping element of degree {x.degree} above truncation {max_degree}")
            continue
        by_degree.setdefault(x.degree, []).append(x)
    return {
        p: span_elements(algebra, by_degree.get(p, []), p) for p in range(-2, max_degree + 1)
    }


def graded_elements(algebra: ContactAlgebra, graded: GradedSubspace) -> List[ContactElement]:
    result = []
    for p in sorted(graded):
        result += component_elements(algebra, graded[p], p)
    return result


def graded_sum(a: GradedSubspace, b: GradedSubspace) -> GradedSubspace:
    return {p: a[p] + b[p] for p in a if p in b}


def graded_intersect(a: GradedSubspace, b: GradedSubspace) -> GradedSubspace:
    return {p: a[p].intersect(b[p]) for p in a if p in b}


def graded_dims(graded: GradedSubspace) -> Dict[int, int]:
    return {p: graded[p].dim for p in sorted(graded)}


def total_dim(graded: GradedSubspace) -> int:
    return sum(component.dim for component in graded.values())


def is_graded_subspace(a: GradedSubspace, b: GradedSubspace) -> bool:
    return all(a[p].is_subspace_of(b[p]) for p in a if p in b)


def conjugate_component(algebra: ContactAlgebra, subspace: Subspace, p: int) -> Subspace:
    return span_elements(
        algebra, (algebra.conjugate(x) for x in component_elements(algebra, subspace, p)), p
    )


def conjugate_graded(algebra: ContactAlgebra, graded: GradedSubspace) -> GradedSubspace:
    return {p: conjugate_component(algebra, graded[p], p) for p in graded}


def is_conjugation_stable(algebra: ContactAlgebra, graded: GradedSubspace) -> bool:
    return conjugate_graded(algebra, graded) == graded


def universal_component(algebra: ContactAlgebra, p: int, conjugate: bool = False) -> Subspace:
    """u^p (or its conjugate): every ad(J)-eigenspace but the minimal (maximal) one."""
    excluded = (p + 2) if conjugate else -(p + 2)
    return filtered_component(
        algebra, p, lambda key: not (key[0] == -1 and algebra.weight(key) == excluded)
    )


def extremal_component(algebra: ContactAlgebra, p: int, holomorphic: bool = True) -> Subspace:
    """The eigenspace of eigenvalue i(p+2) (or -i(p+2)), i.e. S^{p+2,0} (S^{0,p+2})."""
    wanted = (p + 2) if holomorphic else -(p + 2)
    return filtered_component(
        algebra, p, lambda key: key[0] == -1 and algebra.weight(key) == wanted
    )


def project_extremal(algebra: ContactAlgebra, subspace: Subspace, p: int) -> Subspace:
    """Image of a component under the projection onto S^{p+2,0}."""
    wanted = p + 2
    keys = algebra.basis(p)

    def projection(vector):
        return {
            k: v for k, v in vector.items() if keys[k][0] == -1 and algebra.weight(keys[k]) == wanted
        }

    return subspace.map(projection)


def bracket_span(algebra: ContactAlgebra, u: Subspace, p: int, v: Subspace, q: int) -> Subspace:
    """Span of [U, V] inside degree p + q."""
    left = component_elements(algebra, u, p)
    right = component_elements(algebra, v, q)
    return span_elements(
        algebra, (algebra.bracket(x, y) for x in left for y in right), p + q
    )


def bracket_violations(
    algebra: ContactAlgebra,
    first: GradedSubspace,
    second: GradedSubspace,
    target: GradedSubspace,
    max_degree: int,
    min_total: int = -2,
) -> List[Tuple[int, int]]:
    """Degree pairs (p, q) where [first^p, second^q] is not inside target^{p+q}.

    Pairs whose bracket lands above ``max_degree`` are not examined.
    """
    bad = []
    for p, u in sorted(first.items()):
        if not u.dim:
            continue
        for q, v in sorted(second.items()):
            total = p + q
            if not v.dim or total < max(min_total, -2) or total > max_degree:
                continue
            if total not in target:
                continue
            goal = target[total]
            for x in component_elements(algebra, u, p):
                if any(
                    not goal.contains(algebra.to_vector(algebra.bracket(x, y)))
                    for y in component_elements(algebra, v, q)
                ):
                    bad.append((p, q))
                    break
    return bad


def subspace_with_bracket_condition(
    algebra: ContactAlgebra,
    candidates: Subspace,
    p: int,
    partners: List[ContactElement],
    target: Subspace,
) -> Subspace:
    """{Z in candidates : [Z, Y] in target for every partner Y}.

    Every partner must have the same degree q, and ``target`` lives in degree p + q.
    """
    if not partners or not candidates.dim:
        return candidates
    forms = target.annihilator()
    if not forms:
        return candidates
    basis = component_elements(algebra, candidates, p)
    rows = []
    for y in partners:
        images = [algebra.to_vector(algebra.bracket(x, y)) for x in basis]
        for form in forms:
            row = {}
            for k, image in enumerate(images):
                value = dot(form, image)
                if value:
                    row[k] = value
            if row:
                rows.append(row)
    return subspace_from_constraints(candidates, rows)


def first_nonzero_degree(graded: GradedSubspace, reverse: bool = False) -> Optional[int]:
    degrees = sorted((p for p, s in graded.items() if s.dim), reverse=reverse)
    return degrees[0] if degrees else None
