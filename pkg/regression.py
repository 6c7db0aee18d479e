"""
Regression Runner

Exact end-to-end checks of the engine: normalization anchors, closed-form
brackets against the recursive oracle, Jacobi identity, the universal pair,
the classification tables, every builtin model and the uniqueness search.

Key Features:
- Each item returns a CheckList; items run on a thread pool
- A failing or raising item is logged and recorded, the batch continues
- JSON-ready summary with one row per check
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Callable, Dict, List, Optional, Tuple

from sympy.polys.domains import QQ, QQ_I

from builtin_models import builtin_models, get_model
from classify7 import (
    DegenerateParameterError,
    enumerate_tables,
    s1_action,
    s1_action_oracle,
)
from contact import ContactAlgebra, SymplecticSpace, get_contact_algebra
from cralg import build_universal_u, freeman_sequence, universal_freeman_terms
from engine_config import EngineConfig
from exactla import rank
from graded import extremal_component, project_extremal, universal_component
from models import bounded_prolongation_check, verify_model
from reports import CheckList, MaximalityStatus
from threenondeg_search import search_3nondeg_models

logger = logging.getLogger(__name__)

CIRCLE_GRID = (
    ("1", "0"),
    ("0", "1"),
    ("3/5", "4/5"),
    ("4/5", "3/5"),
    ("-3/5", "4/5"),
    ("5/13", "12/13"),
    ("-12/13", "-5/13"),
    ("8/17", "15/17"),
)
PARAMETER_GRID = (("1/2", "1/3"), ("2", "1"), ("-1", "1/2"), ("1/3", "3/2"))


@dataclass
class RegressionItem:
    name: str
    runner: Callable[[], CheckList]


@dataclass
class RegressionResult:
    name: str
    success: bool
    checks: CheckList = field(default_factory=CheckList)
    error: Optional[str] = None
    elapsed: float = 0.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "passed": self.success,
            "error": self.error,
            "elapsed": round(self.elapsed, 3),
            "checks": self.checks.to_list(),
        }


@dataclass
class RegressionSummary:
    results: List[RegressionResult]

    @property
    def passed(self) -> bool:
        return all(result.success for result in self.results)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "passed": self.passed,
            "items": [result.to_dict() for result in self.results],
        }


def _algebra(n: int) -> ContactAlgebra:
    return get_contact_algebra(SymplecticSpace.complex_symplectic(n))


# ---------------------------------------------------------------------------
# Items
# ---------------------------------------------------------------------------


def normalization_checks(top: int = 3) -> CheckList:
    algebra = _algebra(1)
    checks = CheckList()
    z, zb = algebra.variable(0), algebra.variable(1)
    half_i = QQ_I(0, QQ(-1, 2))
    checks.add("bracket_z_zb", algebra.bracket(z, zb) == algebra.T * half_i, "[z, zb] = -1/2*i*T")
    checks.add(
        "complex_structure",
        algebra.complex_structure_element() == algebra.element(0, {(-1, (1, 1)): 2}),
        "J = 2*z*zb",
    )
    checks.add("grading_element", algebra.grading_element() == algebra.mu(0, algebra.T) * -2)
    grading = algebra.grading_element()
    wrong = [
        (p, key)
        for p in range(-2, top + 1)
        for key in algebra.basis(p)
        if algebra.bracket(grading, algebra.basis_element(p, key)) != algebra.basis_element(p, key) * p
    ]
    checks.add("grading_eigenvalues", not wrong, f"[E, X] != pX for {wrong[:3]}")
    return checks


def oracle_checks(n: int, top: int) -> CheckList:
    """Closed-form brackets against the recursive oracle on all basis pairs."""
    algebra = _algebra(n)
    checks = CheckList()
    for p in range(-2, top + 1):
        for q in range(p, top + 1):
            mismatches = 0
            for x in algebra.basis_elements(p):
                for y in algebra.basis_elements(q):
                    if algebra.bracket(x, y) != algebra.recursive_bracket(x, y):
                        mismatches += 1
            checks.add(f"oracle_n{n}_{p}_{q}", not mismatches, f"{mismatches} mismatching pairs")
    return checks


def jacobi_checks(n: int, top: int) -> CheckList:
    """Jacobi identity on every triple of distinct basis elements of degree in [-2, top].

    The Jacobiator is alternating, so ordered triples and repeated elements add nothing.
    """
    algebra = _algebra(n)
    checks = CheckList()
    elements = [(p, x) for p in range(-2, top + 1) for x in algebra.basis_elements(p)]
    pairs = {}
    for i, j in combinations(range(len(elements)), 2):
        pairs[i, j] = algebra.bracket(elements[i][1], elements[j][1])
    counts: Dict[Tuple[int, int, int], List[int]] = {}
    for i, j, k in combinations(range(len(elements)), 3):
        x, y, w = elements[i][1], elements[j][1], elements[k][1]
        total = algebra.bracket(x, pairs[j, k]) - algebra.bracket(y, pairs[i, k]) + algebra.bracket(w, pairs[i, j])
        tally = counts.setdefault((elements[i][0], elements[j][0], elements[k][0]), [0, 0])
        tally[0] += 1
        if not total.is_zero():
            tally[1] += 1
    for (p, q, r), (triples, failures) in sorted(counts.items()):
        checks.add(f"jacobi_n{n}_{p}_{q}_{r}", not failures, f"{failures} of {triples} triples fail")
    return checks


def central_element_checks(n: int, top: int) -> CheckList:
    """ad(T) maps degree p onto degree p - 2 with the polynomial part as kernel."""
    algebra = _algebra(n)
    checks = CheckList()
    for p in range(0, top + 1):
        images = [algebra.to_vector(algebra.bracket(x, algebra.T)) for x in algebra.basis_elements(p)]
        image_rank = rank(images, algebra.dim(p - 2))
        polynomial_part = sum(1 for key in algebra.basis(p) if key[0] == -1)
        checks.add(f"ad_T_surjective_n{n}_{p}", image_rank == algebra.dim(p - 2))
        checks.add(f"ad_T_kernel_n{n}_{p}", algebra.dim(p) - image_rank == polynomial_part)
    return checks


def universal_checks(n: int, top: int, extra_steps: int) -> CheckList:
    algebra = _algebra(n)
    pair = build_universal_u(algebra, top)
    checks = pair.check_closure()
    chain = freeman_sequence(pair, extra_steps)
    closed = universal_freeman_terms(algebra, top, len(chain.terms))
    checks.add("freeman_closed_form", chain.terms == closed, f"chain dims {chain.dims}")
    for p in range(0, top + 1):
        projected = project_extremal(algebra, universal_component(algebra, p), p)
        checks.add(f"universal_core_{p}", projected == extremal_component(algebra, p))
    return checks


def classification_checks() -> CheckList:
    checks = CheckList()
    document = enumerate_tables()
    tables = {tuple(table["signature"]): table for table in document["tables"]}
    checks.add("tables_verified", all(row["verified"] for t in tables.values() for row in t["rows"]))
    checks.add(
        "admissible_total",
        document["admissible_classes_total"] == 7,
        f"got {document['admissible_classes_total']}",
    )
    checks.add("families_11", tables[(1, 1)]["families"] == 5, f"got {tables[(1, 1)]['families']}")
    admissible_rows = sum(1 for row in tables[(1, 1)]["rows"] if row["admissible"])
    checks.add("admissible_rows_11", admissible_rows == 4, f"got {admissible_rows}")
    for signature, expected in (((2, 0), 2), ((1, 1), 5)):
        found = tables[signature]["admissible_classes"]
        checks.add(f"admissible_{signature[0]}{signature[1]}", found == expected, f"got {found}")
    for signature in ((2, 0), (1, 1)):
        compared = 0
        mismatches = []
        for point in CIRCLE_GRID:
            for params in PARAMETER_GRID:
                try:
                    s1, s2 = s1_action(point, params)
                    o1, o2 = s1_action_oracle(point, params, signature)
                except DegenerateParameterError:
                    continue
                compared += 1
                if s1 != o1 or s2 * s2 != o2:
                    mismatches.append((point, params))
        r, s = signature
        checks.add(
            f"circle_action_{r}{s}",
            compared >= 20 and not mismatches,
            f"{compared} points compared, mismatches at {mismatches[:3]}",
        )
    return checks


def model_checks(name: str, extra_steps: int) -> CheckList:
    entry = builtin_models()[name]
    report = verify_model(get_model(name), extra_steps=extra_steps)
    checks = CheckList()
    checks.extend(report.checks.checks)
    dims = tuple(report.graded_dims[p] for p in sorted(report.graded_dims))
    checks.add("expected_dims", dims == entry.expected_dims, f"dims {dims}, expected {entry.expected_dims}")
    checks.add("expected_k", report.nondegeneracy_order == entry.expected_k, f"k = {report.nondegeneracy_order}")
    checks.add("expected_property_j", report.property_j == entry.property_j)
    return checks


def maximality_checks(degree: int) -> CheckList:
    checks = CheckList()
    expected = [("so32", degree, MaximalityStatus.NO_EXTENSION_UP_TO_DEGREE)]
    expected += [
        (name, degree, MaximalityStatus.UNKNOWN_BEYOND_DEGREE)
        for name in ("stab_20_z1z1", "stab_11_z1z1", "stab_11_z2z2", "stab_11_null")
    ]
    expected.append(("three_nondeg", 2, MaximalityStatus.NO_EXTENSION_UP_TO_DEGREE))
    for name, top, status in expected:
        report = bounded_prolongation_check(get_model(name), top)
        checks.add(
            f"maximality_{name}",
            report.status is status,
            f"{report.status.value} up to degree {top}, extension {report.extension_dims}",
        )
    return checks


def regression_items(config: EngineConfig) -> List[RegressionItem]:
    top = config.jacobi_degree
    oracle_top = config.oracle_degree
    steps = config.freeman_extra_steps
    items = [
        RegressionItem("normalization", lambda: normalization_checks(top)),
        RegressionItem("oracle_n1", lambda: oracle_checks(1, oracle_top)),
        RegressionItem("oracle_n2", lambda: oracle_checks(2, oracle_top)),
        RegressionItem("jacobi_n1", lambda: jacobi_checks(1, top)),
        RegressionItem("jacobi_n2", lambda: jacobi_checks(2, top)),
        RegressionItem("central_element_n1", lambda: central_element_checks(1, config.max_degree)),
        RegressionItem("central_element_n2", lambda: central_element_checks(2, config.max_degree)),
        RegressionItem("universal_n1", lambda: universal_checks(1, config.max_degree, steps)),
        RegressionItem("universal_n2", lambda: universal_checks(2, config.max_degree, steps)),
        RegressionItem("classification", classification_checks),
        RegressionItem("maximality", lambda: maximality_checks(config.bounded_check_degree)),
        RegressionItem("search_3nondeg", lambda: search_3nondeg_models(config.max_degree).checks),
    ]
    for name in builtin_models():
        items.append(RegressionItem(f"model_{name}", lambda name=name: model_checks(name, steps)))
    return items


# ---------------------------------------------------------------------------
# Runner
# ---------------------------------------------------------------------------


def _run_item(item: RegressionItem) -> RegressionResult:
    start_time = time.time()
    try:
        checks = item.runner()
        result = RegressionResult(item.name, checks.passed, checks)
        if not result.success:
            logger.error(f"Regression {item.name} failed: {[c.name for c in checks.failures()]}")
    except Exception as e:
        logger.error(f"Regression {item.name} raised: {e}")
        result = RegressionResult(item.name, False, error=str(e))
    result.elapsed = time.time() - start_time
    logger.debug(f"Regression {item.name} finished in {result.elapsed:.2f}s")
    return result


def run_regression(
    config: Optional[EngineConfig] = None, items: Optional[List[RegressionItem]] = None
) -> RegressionSummary:
    config = config or EngineConfig()
    items = items if items is not None else regression_items(config)
    logger.info(f"Running {len(items)} regression items on {config.max_workers} workers")
    with ThreadPoolExecutor(max_workers=config.max_workers, thread_name_prefix="regress") as executor:
        results = list(executor.map(_run_item, items))
    summary = RegressionSummary(results)
    failed = [result.name for result in results if not result.success]
    if failed:
        logger.warning(f"Regression finished with {len(failed)} failing items: {failed}")
    else:
        logger.info("Regression finished, all items passed")
    return summary
