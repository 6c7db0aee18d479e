"""
Report types shared by the verification modules.

Checks never raise on failure: they produce ``CheckResult`` rows collected in
reports, and every report can be turned into a JSON-compatible dict with stable
key order.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List

logger = logging.getLogger(__name__)


class CheckStatus(Enum):
    """Outcome of a single exact check."""

    PASSED = "passed"
    FAILED = "failed"


class ChainStatus(Enum):
    """Outcome of a Freeman chain computation under a degree budget."""

    CERTIFIED_UP_TO_BUDGET = "certified_up_to_budget"
    DEGENERATE = "degenerate"
    INCONCLUSIVE = "inconclusive"


class MaximalityStatus(Enum):
    """Outcome of a bounded search for graded extensions of a model."""

    NO_EXTENSION_UP_TO_DEGREE = "no_extension_up_to_degree"
    EXTENSION_FOUND = "extension_found"
    UNKNOWN_BEYOND_DEGREE = "unknown_beyond_degree"


@dataclass
class CheckResult:
    """One named check with its status and a human-readable detail."""

    name: str
    status: CheckStatus
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status is CheckStatus.PASSED

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "status": self.status.value, "detail": self.detail}


def check(name: str, condition: bool, detail: str = "") -> CheckResult:
    return CheckResult(name, CheckStatus.PASSED if condition else CheckStatus.FAILED, detail)


@dataclass
class CheckList:
    """Ordered collection of checks."""

    checks: List[CheckResult] = field(default_factory=list)

    def add(self, name: str, condition: bool, detail: str = "") -> CheckResult:
        result = check(name, condition, detail)
        if not result.passed:
            logger.debug(f"Check {name} failed: {detail}")
        self.checks.append(result)
        return result

    def extend(self, results: List[CheckResult]) -> None:
        self.checks.extend(results)

    @property
    def passed(self) -> bool:
        return all(result.passed for result in self.checks)

    def failures(self) -> List[CheckResult]:
        return [result for result in self.checks if not result.passed]

    def get(self, name: str) -> CheckResult:
        for result in self.checks:
            if result.name == name:
                return result
        raise KeyError(name)

    def to_list(self) -> List[Dict[str, Any]]:
        return [result.to_dict() for result in self.checks]
