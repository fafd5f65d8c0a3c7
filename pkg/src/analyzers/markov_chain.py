# src/analyzers/markov_chain.py
import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ..errors import NumericalConvergenceError
from .link_probabilities import TransactionProbabilities

logger = logging.getLogger(__name__)

STATES = ("success", "fail_open", "fail_close")
SUCCESS, FAIL_OPEN, FAIL_CLOSE = range(3)
DEFAULT_TOL = 1e-12
MAX_ITERATIONS = 1_000_000


@dataclass(frozen=True, eq=False)
class TransitionMatrix:
    """3x3 row-stochastic matrix over (success, fail open, fail close)"""
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def row_sums(self) -> np.ndarray:
        return self.values.sum(axis=1)


@dataclass(frozen=True, eq=False)
class StationaryDistribution:
    weights: np.ndarray
    iterations: int
    converged: bool
    method: str = "power"

    @property
    def success(self) -> float:
        return float(self.weights[SUCCESS])

    @property
    def fail_open(self) -> float:
        return float(self.weights[FAIL_OPEN])

    @property
    def fail_close(self) -> float:
        return float(self.weights[FAIL_CLOSE])

    def normalized(self) -> np.ndarray:
        return self.weights / self.weights.sum()


def transition_matrix(probs: TransactionProbabilities, x: int) -> TransitionMatrix:
    """
    Rows 1 and 3 restart with a normal transaction; row 2 mixes a normal
    transaction (weight 1/x) with a retransmission (weight 1 - 1/x).
    """
    if x < 1:
        raise ValueError("x must be at least 1")
    normal = np.array(probs.normal, dtype=float)
    retrans = np.array(probs.retransmission, dtype=float)
    w = 1.0 / x
    open_row = w * normal + (1.0 - w) * retrans
    return TransitionMatrix(np.vstack([normal, open_row, normal]))


def _as_start(pi0: Optional[Sequence[float]]) -> np.ndarray:
    start = np.array([1.0, 0.0, 0.0] if pi0 is None else pi0, dtype=float)
    if start.shape != (3,):
        raise ValueError("initial distribution must have three components")
    if np.any(start < 0) or not np.all(np.isfinite(start)):
        raise ValueError("initial distribution must be finite and non-negative")
    if start.sum() <= 0:
        raise ValueError("initial distribution must have positive mass")
    return start


def stationary_distribution(
    A: TransitionMatrix,
    pi0: Optional[Sequence[float]] = None,
    tol: float = DEFAULT_TOL,
    max_iterations: int = MAX_ITERATIONS,
) -> StationaryDistribution:
    """
    Power iteration pi <- pi A until the L-inf change is <= tol.
    The component sum of pi0 is carried through unchanged (pi0 need not be normalized).
    """
    pi = _as_start(pi0)
    P = A.values
    delta = np.inf
    for iteration in range(1, max_iterations + 1):
        nxt = pi @ P
        delta = float(np.max(np.abs(nxt - pi)))
        pi = nxt
        if delta <= tol:
            return StationaryDistribution(weights=pi, iterations=iteration, converged=True)
    logger.error(f"Power iteration stopped at the {max_iterations}-iteration cap, last change {delta:.3e}")
    raise NumericalConvergenceError(pi, max_iterations, delta)


def solve_stationary(A: TransitionMatrix, total: float = 1.0) -> StationaryDistribution:
    """Direct solve of pi = pi A with sum(pi) = total (reference path for the power iteration)"""
    P = A.values
    n = P.shape[0]
    system = np.vstack([P.T - np.eye(n), np.ones((1, n))])
    rhs = np.zeros(n + 1)
    rhs[-1] = total
    pi, *_ = np.linalg.lstsq(system, rhs, rcond=None)
    pi = np.clip(pi, 0.0, None)
    pi *= total / pi.sum()
    return StationaryDistribution(weights=pi, iterations=0, converged=True, method="linear")
