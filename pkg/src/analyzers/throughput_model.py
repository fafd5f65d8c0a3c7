# src/analyzers/throughput_model.py
import logging
from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np

from ..collectors.scenario import Scenario, VictimConfig
from .link_probabilities import TransactionProbabilities, transaction_probs
from .markov_chain import (
    DEFAULT_TOL,
    StationaryDistribution,
    TransitionMatrix,
    solve_stationary,
    stationary_distribution,
    transition_matrix,
)

THROUGHPUT_MODES = ("payload", "on_air", "bidirectional")


def tsr(pi: StationaryDistribution) -> float:
    """Transmission success ratio: success weight over total weight"""
    total = float(pi.weights.sum())
    if total <= 0:
        raise ValueError("stationary distribution has no mass")
    return min(1.0, max(0.0, pi.success / total))


def throughput_ideal(payload_bytes: float, x: int, ci: float) -> float:
    """PL * 8 * x / CI in bits/s, CI in seconds"""
    if ci <= 0:
        raise ValueError("connection interval must be positive")
    return payload_bytes * 8 * x / ci


def throughput_real(tsr_value: float, ideal: float) -> float:
    if not 0.0 <= tsr_value <= 1.0:
        raise ValueError("TSR must lie in [0, 1]")
    return tsr_value * ideal


def bytes_per_transaction(victim: VictimConfig, mode: str = "payload") -> float:
    """PL used by the ideal-throughput formula for a given accounting mode"""
    if mode == "payload":
        return victim.packet_cp.payload_bytes
    if mode == "on_air":
        return victim.packet_cp.total_bits / 8
    if mode == "bidirectional":
        return victim.packet_cp.payload_bytes + victim.packet_pc.payload_bytes
    raise ValueError(f"unknown throughput mode '{mode}', expected one of {THROUGHPUT_MODES}")


@dataclass(frozen=True)
class ModelOutputs:
    tsr: float
    throughput_ideal: float
    throughput_real: float
    probs: Optional[TransactionProbabilities] = None
    iterations: int = 0
    converged: bool = True
    solver_gap: float = 0.0
    throughput_mode: str = "payload"
    p_tf: Optional[float] = None
    reliability: Optional[float] = None
    extras: Dict[str, float] = field(default_factory=dict)

    def as_row(self) -> Dict[str, Optional[float]]:
        return {
            "tsr": self.tsr,
            "throughput_ideal_bps": self.throughput_ideal,
            "throughput_real_bps": self.throughput_real,
            "p_tf": self.p_tf,
            "reliability": self.reliability,
        }


class ThroughputModel:
    """Closed-form throughput pipeline: P1-P6 -> A -> stationary pi -> TSR -> throughput"""

    def __init__(self, tol: float = DEFAULT_TOL, throughput_mode: str = "payload", pi0=None):
        if throughput_mode not in THROUGHPUT_MODES:
            raise ValueError(f"unknown throughput mode '{throughput_mode}'")
        self.tol = tol
        self.throughput_mode = throughput_mode
        self.pi0 = pi0
        self.logger = logging.getLogger(__name__)

    def chain(self, scenario: Scenario) -> TransitionMatrix:
        victim = scenario.victim
        probs = transaction_probs(scenario.channel.ber, victim.packet_cp.total_bits, victim.packet_pc.total_bits)
        return transition_matrix(probs, victim.x)

    def evaluate(self, scenario: Scenario) -> ModelOutputs:
        victim = scenario.victim
        probs = transaction_probs(scenario.channel.ber, victim.packet_cp.total_bits, victim.packet_pc.total_bits)
        A = transition_matrix(probs, victim.x)

        try:
            pi = stationary_distribution(A, self.pi0, tol=self.tol)
        except Exception as e:
            self.logger.error(f"Stationary distribution failed for ber={scenario.channel.ber}, x={victim.x}: {e}")
            raise
        reference = solve_stationary(A, total=float(pi.weights.sum()))
        solver_gap = float(np.max(np.abs(pi.normalized() - reference.normalized())))

        tsr_value = tsr(pi)
        ideal = throughput_ideal(bytes_per_transaction(victim, self.throughput_mode), victim.x, victim.ci / 1e6)
        real = throughput_real(tsr_value, ideal)

        self.logger.info(
            f"ber={scenario.channel.ber:.3e} payload={victim.packet_cp.payload_bytes}B x={victim.x}: "
            f"TSR={tsr_value:.6f} ideal={ideal:.1f} real={real:.1f} bps ({pi.iterations} iterations)"
        )
        return ModelOutputs(
            tsr=tsr_value,
            throughput_ideal=ideal,
            throughput_real=real,
            probs=probs,
            iterations=pi.iterations,
            converged=pi.converged,
            solver_gap=solver_gap,
            throughput_mode=self.throughput_mode,
            extras={"p6_check_gap": probs.p6_check_gap},
        )


def evaluate_throughput(scenario: Scenario, throughput_mode: str = "payload") -> ModelOutputs:
    return ThroughputModel(throughput_mode=throughput_mode).evaluate(scenario)
