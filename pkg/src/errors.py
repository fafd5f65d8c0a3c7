# src/errors.py
from dataclasses import dataclass
from typing import List, Optional, Sequence


class LinkModelError(Exception):
    """Base class for every error raised by the link analysis package"""


@dataclass(frozen=True)
class ScenarioIssue:
    """One violated invariant: which field, and what bound it broke"""
    field: str
    message: str

    def __str__(self):
        return f"{self.field}: {self.message}"


class ScenarioValidationError(LinkModelError):
    """Raised with the full list of violated scenario invariants"""

    def __init__(self, errors: Sequence[ScenarioIssue]):
        self.errors: List[ScenarioIssue] = list(errors)
        super().__init__("; ".join(str(e) for e in self.errors) or "invalid scenario")


class ConfigError(ScenarioValidationError):
    """Config file problems: unknown key, wrong type, unreadable file"""


class NumericalConvergenceError(LinkModelError):
    """Power iteration hit its cap; carries the last iterate"""

    def __init__(self, last_iterate, iterations: int, delta: float):
        self.last_iterate = last_iterate
        self.iterations = iterations
        self.delta = delta
        super().__init__(
            f"stationary distribution did not converge after {iterations} iterations "
            f"(last L-inf change {delta:.3e})"
        )


class ConsistencyError(LinkModelError):
    """Derived P6 disagrees with 1 - P4 - P5"""


@dataclass(frozen=True)
class AcceptanceFailure:
    check: str
    observed: float
    expected: float
    tolerance: str

    def __str__(self):
        return f"{self.check}: observed {self.observed:.6f}, expected {self.expected:.6f} ({self.tolerance})"


class AcceptanceError(LinkModelError):
    """Model and simulator disagree beyond the documented tolerances"""

    def __init__(self, failures: Sequence[AcceptanceFailure]):
        self.failures = list(failures)
        super().__init__("; ".join(str(f) for f in self.failures))


class SweepPointError(LinkModelError):
    """A model error raised at one sweep grid point, with the scenario attached"""

    def __init__(self, scenario, swept_param: str, value: float, cause: Optional[Exception] = None):
        self.scenario = scenario
        self.swept_param = swept_param
        self.value = value
        self.cause = cause
        super().__init__(f"model failed at {swept_param}={value}: {cause}")
