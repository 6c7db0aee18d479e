"""
Models of Abstract Cores

A model is a conjugation-stable graded subalgebra of the complexified contact
algebra that contains the whole negative part and the grading element, splits
along the universal pair in every nonnegative degree, and projects onto the
holomorphic part of a given core.

Key Features:
- Model candidates from contact elements, JSON documents or matrix algebras
- Embedding of a matrix-presented graded algebra into c by transitivity
- Exact model verification as a report, with the Freeman chain and the core
  recovered from the associated CR algebra
- Prolongation inside c and line stabilizers, used to build model families
- Bounded search for graded extensions (maximality evidence up to a degree)
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Optional, Sequence

from sympy.polys.domains import QQ_I
from sympy.polys.matrices import DomainMatrix

from abscore import AbstractCore, validate
from contact import ContactAlgebra, ContactElement, DegreeMismatchError, NotRealizableError, algebra_from_context
from cralg import CRAlgebraPair, FreemanChain, model_freeman_terms, extract_core, freeman_sequence
from element_syntax import format_element, parse_element
from exactla import (
    ONE,
    ContactEngineError,
    InjectiveSolver,
    SparseVector,
    Subspace,
    as_scalar,
    hermitian_signature,
)
from graded import (
    GradedSubspace,
    bracket_violations,
    component_elements,
    filtered_component,
    first_nonzero_degree,
    full_component,
    graded_dims,
    graded_elements,
    graded_span,
    is_conjugation_stable,
    project_extremal,
    span_elements,
    subspace_with_bracket_condition,
    total_dim,
    universal_component,
    zero_component,
)
from reports import ChainStatus, CheckList, MaximalityStatus

logger = logging.getLogger(__name__)


class PresentationError(ContactEngineError):
    """A matrix presentation cannot be embedded into the contact algebra."""


def negative_part(algebra: ContactAlgebra) -> List[ContactElement]:
    """Basis of c^{-2} ⊕ c^{-1}."""
    return algebra.basis_elements(-2) + algebra.basis_elements(-1)


def _pad(algebra: ContactAlgebra, components: Mapping[int, Subspace], max_degree: int) -> GradedSubspace:
    return {
        p: components.get(p, zero_component(algebra, p)) for p in range(-2, max_degree + 1)
    }


@dataclass
class ModelCandidate:
    """Graded subspace ĝ of the complexified contact algebra with its target core.

    ``components`` covers every degree from -2 to ``max_degree``; the truncation
    is at least twice the top nonzero degree, so closure is checked exactly.
    """

    algebra: ContactAlgebra
    components: GradedSubspace
    core: AbstractCore
    name: str = ""
    labels: Dict[str, ContactElement] = field(default_factory=dict)
    maximality_known: bool = True
    presentation_checks: CheckList = field(default_factory=CheckList)

    @classmethod
    def from_elements(
        cls,
        algebra: ContactAlgebra,
        elements: Sequence[ContactElement],
        core: AbstractCore,
        name: str = "",
        labels: Optional[Mapping[str, ContactElement]] = None,
        maximality_known: bool = True,
    ) -> "ModelCandidate":
        elements = list(elements)
        top = max((x.degree for x in elements), default=0)
        components = graded_span(algebra, elements, max(2 * top, 2))
        return cls(algebra, components, core, name, dict(labels or {}), maximality_known)

    @classmethod
    def from_components(
        cls,
        algebra: ContactAlgebra,
        components: Mapping[int, Subspace],
        core: AbstractCore,
        name: str = "",
        maximality_known: bool = True,
    ) -> "ModelCandidate":
        top = max((p for p, s in components.items() if s.dim), default=0)
        return cls(algebra, _pad(algebra, components, max(2 * top, 2)), core, name, {}, maximality_known)

    @classmethod
    def from_document(cls, document: Mapping[str, Any]) -> "ModelCandidate":
        """Contact-presented model: generator expressions per degree.

        Missing degrees -2 and -1 stand for the whole negative part.
        """
        algebra, _ = algebra_from_context(document.get("context", {}))
        given = {int(p): texts for p, texts in document.get("components", {}).items()}
        elements: List[ContactElement] = []
        for p in (-2, -1):
            if p not in given:
                elements += algebra.basis_elements(p)
        for p, texts in sorted(given.items()):
            elements += [parse_element(text, algebra, p) for text in texts]
        core = AbstractCore.from_generators(
            algebra,
            {
                int(p): [parse_element(text, algebra, int(p)) for text in texts]
                for p, texts in document.get("core", {}).items()
            },
        )
        return cls.from_elements(
            algebra,
            elements,
            core,
            document.get("name", ""),
            maximality_known=bool(document.get("maximality_known", True)),
        )

    @property
    def max_degree(self) -> int:
        return max(self.components)

    @property
    def height(self) -> int:
        top = first_nonzero_degree(self.components, reverse=True)
        return -2 if top is None else top

    def dims(self) -> Dict[int, int]:
        """Graded dimensions from degree -2 to the top nonzero degree."""
        return {p: d for p, d in graded_dims(self.components).items() if p <= self.height}

    @property
    def total_dim(self) -> int:
        return total_dim(self.components)

    def elements(self) -> List[ContactElement]:
        return graded_elements(self.algebra, self.components)

    def to_document(self) -> Dict[str, Any]:
        algebra = self.algebra
        return {
            "kind": "contact",
            "name": self.name,
            "context": algebra.space.describe(),
            "components": {
                str(p): [format_element(x) for x in component_elements(algebra, s, p)]
                for p, s in sorted(self.components.items())
                if s.dim
            },
            "core": self.core.to_dict()["components"],
            "maximality_known": self.maximality_known,
        }


# ---------------------------------------------------------------------------
# Matrix presentations
# ---------------------------------------------------------------------------


@dataclass
class MatrixElement:
    name: str
    degree: int
    matrix: DomainMatrix


def unit_matrix(size: int, entries: Sequence[Sequence[Any]]) -> DomainMatrix:
    """Sum of c·E_ij for (i, j, c) in entries, with 1-based indices."""
    dod: Dict[int, Dict[int, Any]] = {}
    for row, col, value in entries:
        if not (1 <= row <= size and 1 <= col <= size):
            raise PresentationError(f"entry E{row}{col} outside a {size}x{size} matrix")
        value = as_scalar(value)
        updated = dod.setdefault(row - 1, {}).get(col - 1, QQ_I.zero) + value
        dod[row - 1][col - 1] = updated
    dod = {r: {c: v for c, v in cols.items() if v} for r, cols in dod.items()}
    return DomainMatrix.from_dod({r: cols for r, cols in dod.items() if cols}, (size, size), QQ_I)


@dataclass
class MatrixAlgebraPresentation:
    """A graded matrix Lie algebra with its degree -2/-1 part identified with c_-.

    ``identification`` maps the names of the negative-degree elements to
    contact element expressions; ``grading`` and ``complex_structure`` name
    the elements expected to become E and J.
    """

    name: str
    context: Dict[str, Any]
    size: int
    elements: List[MatrixElement]
    identification: Dict[str, str]
    core: Dict[int, List[str]] = field(default_factory=dict)
    grading: str = "E"
    complex_structure: Optional[str] = "J"

    @classmethod
    def from_document(cls, document: Mapping[str, Any]) -> "MatrixAlgebraPresentation":
        size = int(document.get("size", 0))
        if size < 1:
            raise PresentationError("matrix presentation needs a positive size")
        elements = [
            MatrixElement(
                entry["name"], int(entry["degree"]), unit_matrix(size, entry.get("entries", []))
            )
            for entry in document.get("elements", [])
        ]
        return cls(
            document.get("name", ""),
            dict(document.get("context", {})),
            size,
            elements,
            dict(document.get("identification", {})),
            {int(p): list(texts) for p, texts in document.get("core", {}).items()},
            document.get("grading", "E"),
            document.get("complex_structure", "J"),
        )

    def by_degree(self) -> Dict[int, List[MatrixElement]]:
        result: Dict[int, List[MatrixElement]] = {}
        for element in self.elements:
            result.setdefault(element.degree, []).append(element)
        return dict(sorted(result.items()))

    def element(self, name: str) -> MatrixElement:
        for element in self.elements:
            if element.name == name:
                return element
        raise PresentationError(f"{self.name or 'presentation'} has no element {name!r}")


def _flatten(matrix: DomainMatrix, size: int) -> SparseVector:
    return {
        r * size + c: v for r, cols in matrix.to_dod().items() for c, v in cols.items() if v
    }


def _commutator(a: DomainMatrix, b: DomainMatrix) -> DomainMatrix:
    return a * b - b * a


class _Embedding:
    """Degree-by-degree images of a matrix presentation inside c."""

    def __init__(self, presentation: MatrixAlgebraPresentation, algebra: ContactAlgebra):
        self.presentation = presentation
        self.algebra = algebra
        self.size = presentation.size
        self.by_degree = presentation.by_degree()
        self.images: Dict[str, ContactElement] = {}
        self.solvers: Dict[int, InjectiveSolver] = {}
        for p, members in self.by_degree.items():
            if p < -2:
                raise PresentationError(f"element {members[0].name} has degree {p} < -2")
            try:
                self.solvers[p] = InjectiveSolver(
                    [_flatten(m.matrix, self.size) for m in members], self.size * self.size
                )
            except ContactEngineError:
                raise PresentationError(f"degree {p} elements are linearly dependent")

    def image(self, matrix: DomainMatrix, p: int) -> Optional[ContactElement]:
        """Image of a matrix known to lie in degree p, or None if it lies outside."""
        vector = _flatten(matrix, self.size)
        if not vector:
            return self.algebra.zero(p) if p >= -2 else None
        if p not in self.solvers:
            return None
        coords = self.solvers[p].solve(vector)
        if coords is None:
            return None
        result = self.algebra.zero(p)
        for k, value in coords.items():
            result = result + self.images[self.by_degree[p][k].name].scale(value)
        return result

    def generator_matrices(self) -> List[DomainMatrix]:
        """Matrices mapped to the generators w_var."""
        algebra = self.algebra
        negative = self.by_degree[-1]
        if len(negative) != algebra.nvars:
            raise PresentationError(
                f"degree -1 has {len(negative)} elements, expected {algebra.nvars}"
            )
        try:
            solver = InjectiveSolver(
                [algebra.to_vector(self.images[m.name]) for m in negative], algebra.dim(-1)
            )
        except ContactEngineError:
            raise PresentationError("identification of degree -1 is not injective")
        index = algebra.index(-1)
        result = []
        for var in range(algebra.nvars):
            coords = solver.solve({index[(-1, algebra.unit_exponents(var))]: ONE})
            if coords is None:
                raise PresentationError("identification of degree -1 is not onto c^-1")
            total = DomainMatrix.zeros((self.size, self.size), QQ_I)
            for k, value in coords.items():
                total = total + negative[k].matrix * value
            result.append(total)
        return result


def prolongation_embed(presentation: MatrixAlgebraPresentation) -> ModelCandidate:
    """Embed a transitive matrix presentation into c.

    Degree by degree, each element X of degree p >= 0 goes to the unique
    element of c^p whose brackets with the generators match the images of the
    commutators [X, W_var].
    """
    algebra, _ = algebra_from_context(presentation.context)
    name = presentation.name or "presentation"
    embedding = _Embedding(presentation, algebra)
    for p in (-2, -1):
        if p not in embedding.by_degree:
            raise PresentationError(f"{name} has no elements of degree {p}")
        for element in embedding.by_degree[p]:
            text = presentation.identification.get(element.name)
            if text is None:
                raise PresentationError(f"no identification given for {element.name}")
            embedding.images[element.name] = parse_element(text, algebra, p)
    generators = embedding.generator_matrices()

    for p, members in embedding.by_degree.items():
        if p < 0:
            continue
        for element in members:
            actions = []
            for w in generators:
                action = embedding.image(_commutator(element.matrix, w), p - 1)
                if action is None:
                    raise PresentationError(
                        f"[{element.name}, c^-1] leaves the degree {p - 1} span of {name}"
                    )
                actions.append(action)
            try:
                embedding.images[element.name] = algebra.solve_from_action(p, actions)
            except NotRealizableError as e:
                raise PresentationError(f"{element.name} is not realizable in c^{p}: {e}")
        images = [embedding.images[m.name] for m in members]
        if span_elements(algebra, images, p).dim != len(images):
            raise PresentationError(f"{name} is not transitive in degree {p}")
        logger.debug(f"Embedded degree {p} of {name}: {len(images)} elements")

    checks = _presentation_checks(presentation, embedding)
    core = AbstractCore.from_generators(
        algebra,
        {p: [parse_element(text, algebra, p) for text in texts] for p, texts in presentation.core.items()},
    )
    candidate = ModelCandidate.from_elements(
        algebra, list(embedding.images.values()), core, presentation.name, embedding.images
    )
    candidate.presentation_checks = checks
    return candidate


def _presentation_checks(presentation: MatrixAlgebraPresentation, embedding: _Embedding) -> CheckList:
    algebra = embedding.algebra
    checks = CheckList()
    elements = presentation.elements
    mismatches = []
    for a in range(len(elements)):
        for b in range(a + 1, len(elements)):
            x, y = elements[a], elements[b]
            total = x.degree + y.degree
            commutator = _commutator(x.matrix, y.matrix)
            if total < -2:
                if _flatten(commutator, presentation.size):
                    mismatches.append(f"[{x.name},{y.name}]")
                continue
            got = embedding.image(commutator, total)
            expected = algebra.bracket(embedding.images[x.name], embedding.images[y.name])
            if got is None or got != expected:
                mismatches.append(f"[{x.name},{y.name}]")
    checks.add(
        "bracket_table",
        not mismatches,
        f"{len(mismatches)} mismatches, first {mismatches[:3]}" if mismatches else "",
    )

    grading = presentation.element(presentation.grading)
    size = presentation.size
    off_grade = [
        x.name
        for x in elements
        if _flatten(_commutator(grading.matrix, x.matrix), size)
        != _flatten(x.matrix * as_scalar(x.degree), size)
    ]
    checks.add("matrix_grading", not off_grade, f"off grade: {off_grade}" if off_grade else "")
    checks.add(
        "grading_element_image",
        embedding.images[grading.name] == algebra.grading_element(),
    )
    if presentation.complex_structure:
        jay = presentation.element(presentation.complex_structure)
        checks.add(
            "complex_structure_image",
            embedding.images[jay.name] == algebra.complex_structure_element(),
        )
    positive, negative, _ = hermitian_signature(algebra.space.hermitian_form())
    expected = tuple(presentation.context.get("signature", (algebra.n, 0)))
    checks.add(
        "j_signature",
        (positive, negative) == expected,
        f"Hermitian form on c^-1 has signature {(positive, negative)}",
    )
    return checks


def load_model_document(document: Mapping[str, Any]) -> ModelCandidate:
    kind = document.get("kind", "contact")
    if kind == "matrix":
        return prolongation_embed(MatrixAlgebraPresentation.from_document(document))
    if kind == "contact":
        return ModelCandidate.from_document(document)
    raise PresentationError(f"unknown model document kind {kind!r}")


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------


@dataclass
class ModelReport:
    """Outcome of verifying a candidate against a core."""

    name: str
    checks: CheckList
    property_j: bool
    graded_dims: Dict[int, int]
    total_dim: int
    freeman: Optional[FreemanChain] = None
    core: Optional[AbstractCore] = None
    freeman_consistent: Optional[bool] = None

    @property
    def passed(self) -> bool:
        return self.checks.passed

    @property
    def nondegeneracy_order(self) -> Optional[int]:
        return self.freeman.nondegeneracy_order if self.freeman else None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "passed": self.passed,
            "graded_dims": {str(p): d for p, d in self.graded_dims.items()},
            "total_dim": self.total_dim,
            "property_j": self.property_j,
            "k": self.nondegeneracy_order,
            "freeman": self.freeman.to_dict() if self.freeman else None,
            "freeman_consistent": self.freeman_consistent,
            "core": self.core.fingerprint() if self.core else None,
            "checks": self.checks.to_list(),
        }


def model_to_cralgebra(candidate: ModelCandidate) -> CRAlgebraPair:
    """The pair (ĝ, ĝ ∩ u)."""
    algebra = candidate.algebra
    q = {
        p: component.intersect(universal_component(algebra, p))
        for p, component in candidate.components.items()
    }
    return CRAlgebraPair(algebra, candidate.max_degree, candidate.components, q, candidate.name)


def verify_model(
    candidate: ModelCandidate, core: Optional[AbstractCore] = None, extra_steps: int = 2
) -> ModelReport:
    """Check the model axioms exactly and recover the Freeman chain and core."""
    core = core or candidate.core
    algebra, g, top = candidate.algebra, candidate.components, candidate.max_degree
    checks = CheckList()
    checks.extend(candidate.presentation_checks.checks)

    bad = bracket_violations(algebra, g, g, g, top)
    checks.add("closed", not bad, f"bracket leaves the candidate in degrees {bad}" if bad else "")
    checks.add(
        "negative_complete",
        all(g[p] == full_component(algebra, p) for p in (-2, -1)),
    )
    checks.add("grading_element", g[0].contains(algebra.to_vector(algebra.grading_element())))
    checks.add("conjugation_stable", is_conjugation_stable(algebra, g))
    checks.add(
        "core_within_truncation",
        core.height <= top,
        f"core height {core.height}, truncation {top}",
    )
    for p in range(0, top + 1):
        holomorphic = g[p].intersect(universal_component(algebra, p))
        if g[p].dim:
            antiholomorphic = g[p].intersect(universal_component(algebra, p, conjugate=True))
            checks.add(f"splitting_{p}", holomorphic + antiholomorphic == g[p])
        projected = project_extremal(algebra, holomorphic, p)
        expected = core.holomorphic(p)
        checks.add(
            f"extremal_projection_{p}",
            projected == expected,
            f"projection has dim {projected.dim}, core component has dim {expected.dim}",
        )
    core_report = validate(core)
    checks.add("core_valid", core_report.valid, "; ".join(core_report.violations()))

    property_j = g[0].contains(algebra.to_vector(algebra.complex_structure_element()))
    report = ModelReport(
        candidate.name, checks, property_j, candidate.dims(), candidate.total_dim
    )

    pair = model_to_cralgebra(candidate)
    chain = freeman_sequence(pair, extra_steps)
    report.freeman = chain
    report.freeman_consistent = chain.terms == model_freeman_terms(pair, len(chain.terms))
    checks.add("freeman_closed_form", report.freeman_consistent)
    certified = chain.status is ChainStatus.CERTIFIED_UP_TO_BUDGET
    checks.add("freeman_certified", certified, chain.status.value)
    if certified:
        extracted = extract_core(pair, chain)
        report.core = extracted
        checks.add("core_extracted", extracted == core)
        checks.add(
            "nondegeneracy_order",
            chain.nondegeneracy_order == core.nondegeneracy_order,
            f"k = {chain.nondegeneracy_order}, core height {core.height}",
        )

    if report.passed:
        logger.info(f"Model {candidate.name or 'candidate'} verified: dim {candidate.total_dim}, k = {chain.nondegeneracy_order}")
    else:
        logger.info(
            f"Model {candidate.name or 'candidate'} failed: {[c.name for c in checks.failures()]}"
        )
    return report


# ---------------------------------------------------------------------------
# Constructions inside c
# ---------------------------------------------------------------------------


def prolong_within_contact(algebra: ContactAlgebra, g0: Subspace, top: int) -> GradedSubspace:
    """Maximal graded prolongation of c_- ⊕ g0 inside c, up to degree ``top``."""
    variables = [algebra.variable(var) for var in range(algebra.nvars)]
    components: GradedSubspace = {
        -2: full_component(algebra, -2),
        -1: full_component(algebra, -1),
        0: g0,
    }
    for p in range(1, top + 1):
        if not components[p - 1].dim:
            components[p] = zero_component(algebra, p)
            continue
        components[p] = subspace_with_bracket_condition(
            algebra, full_component(algebra, p), p, variables, components[p - 1]
        )
        logger.debug(f"Prolongation degree {p}: dim {components[p].dim}")
    return components


def line_stabilizer(algebra: ContactAlgebra, generator: ContactElement) -> Subspace:
    """Elements of ℂE ⊕ S^{1,1} preserving ℂP and ℂP̄, plus P and P̄ themselves."""
    if generator.degree != 0:
        raise DegreeMismatchError("line stabilizer needs a degree-0 generator")
    conjugate = algebra.conjugate(generator)
    candidates = filtered_component(
        algebra, 0, lambda key: key[0] == 0 or (key[0] == -1 and algebra.weight(key) == 0)
    )
    line = span_elements(algebra, [generator], 0)
    conjugate_line = span_elements(algebra, [conjugate], 0)
    stabilizer = subspace_with_bracket_condition(algebra, candidates, 0, [generator], line)
    stabilizer = subspace_with_bracket_condition(algebra, stabilizer, 0, [conjugate], conjugate_line)
    return stabilizer + line + conjugate_line


# ---------------------------------------------------------------------------
# Bounded maximality
# ---------------------------------------------------------------------------


@dataclass
class MaximalityReport:
    name: str
    status: MaximalityStatus
    degree: int
    extension_dims: Dict[int, int] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "status": self.status.value,
            "degree": self.degree,
            "extension_dims": {str(p): d for p, d in self.extension_dims.items()},
        }


def bounded_prolongation_check(candidate: ModelCandidate, degree: int) -> MaximalityReport:
    """Search for a strictly larger model with the same core in degrees <= ``degree``.

    Degrees up to the core height are held fixed. Above it, a model with the
    same core lives in u ∩ ū, so the search starts from the prolongation there
    and shrinks it until it is closed under brackets with every lower degree.
    """
    algebra = candidate.algebra
    fixed = max(candidate.core.height, 0)
    g = candidate.components
    variables = [algebra.variable(var) for var in range(algebra.nvars)]
    extension: GradedSubspace = {
        p: g.get(p, zero_component(algebra, p)) for p in range(-2, max(degree, fixed) + 1)
    }
    for p in range(fixed + 1, degree + 1):
        both = universal_component(algebra, p).intersect(
            universal_component(algebra, p, conjugate=True)
        )
        extension[p] = subspace_with_bracket_condition(algebra, both, p, variables, extension[p - 1])

    changed = True
    while changed:
        changed = False
        for p in range(fixed + 1, degree + 1):
            current = extension[p]
            # q < 0 keeps [extension^p, c^-1] inside extension^{p-1} as that one shrinks
            for q in range(-2, degree - p + 1):
                partners = component_elements(algebra, extension[q], q)
                current = subspace_with_bracket_condition(algebra, current, p, partners, extension[p + q])
            if current != extension[p]:
                extension[p] = current
                changed = True

    grown = {}
    for p in range(fixed + 1, degree + 1):
        own = g.get(p, zero_component(algebra, p))
        if not own.is_subspace_of(extension[p]):
            logger.warning(f"{candidate.name or 'candidate'} degree {p} is not inside its own prolongation")
        if extension[p].dim > own.dim:
            grown[p] = extension[p].dim - own.dim

    if grown:
        status = MaximalityStatus.EXTENSION_FOUND
    elif candidate.maximality_known:
        status = MaximalityStatus.NO_EXTENSION_UP_TO_DEGREE
    else:
        status = MaximalityStatus.UNKNOWN_BEYOND_DEGREE
    if status is not MaximalityStatus.NO_EXTENSION_UP_TO_DEGREE:
        logger.warning(f"Maximality of {candidate.name or 'candidate'} up to degree {degree}: {status.value}")
    return MaximalityReport(candidate.name, status, degree, grown)
