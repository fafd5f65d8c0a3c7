# src/analyzers/reliability_model.py
import logging
from dataclasses import dataclass
from typing import Dict, Tuple

from ..collectors.scenario import IFS_US, MIN_CI_US, Scenario
from ..errors import ScenarioIssue, ScenarioValidationError
from .link_probabilities import failure_prob

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ReliabilityInputs:
    """
    Victim (V) under a disturber (D).
    l_v: single-direction bit length (pre-averaged if the two directions differ)
    m, n: packets per event on V and D; pt_v, pt_d, ci_d, ifs in microseconds
    """
    ber_v: float
    l_v: float
    m: int
    n: int
    pt_v: float
    pt_d: float
    ci_d: float
    ifs: float = IFS_US

    def __post_init__(self):
        if not 0.0 <= self.ber_v <= 1.0:
            raise ValueError("ber_v must lie in [0, 1]")
        if self.l_v <= 0:
            raise ValueError("l_v must be positive")
        if self.m < 1:
            raise ValueError("m must be at least 1")
        if self.n < 1:
            raise ValueError("n must be at least 1; the model presumes an active disturber")
        if self.pt_v <= 0 or self.pt_d <= 0:
            raise ValueError("packet transmission times must be positive")
        if self.ci_d < MIN_CI_US:
            raise ValueError(f"ci_d below {MIN_CI_US} us")
        if self.ifs != IFS_US:
            raise ValueError(f"IFS is fixed at {IFS_US} us")
        if self.m % 2:
            logger.warning(f"m={self.m} is odd; a victim event normally carries 2x packets")


def reliability_inputs_from_scenario(scenario: Scenario) -> ReliabilityInputs:
    if scenario.disturber is None:
        raise ScenarioValidationError([ScenarioIssue("n", "reliability needs a disturber (payload_d_bytes, n, ci_d_us)")])
    victim, disturber = scenario.victim, scenario.disturber
    return ReliabilityInputs(
        ber_v=scenario.channel.ber,
        l_v=victim.mean_bits,
        m=victim.m,
        n=disturber.n,
        pt_v=victim.mean_airtime,
        pt_d=disturber.packet.airtime,
        ci_d=disturber.ci_d,
        ifs=scenario.ifs,
    )


def reliability_terms(inputs: ReliabilityInputs) -> Tuple[float, float, float]:
    """(bit-error term, saturated busy-time ratio, gap term)"""
    bit_error = failure_prob(inputs.ber_v, 2 * inputs.l_v)
    busy = (inputs.m * (inputs.pt_v + inputs.ifs) + inputs.n * (inputs.pt_d + inputs.ifs)) / inputs.ci_d
    busy = min(1.0, busy)
    gap_ratio = max(0.0, (inputs.ifs - inputs.pt_v) / (inputs.pt_d + inputs.ifs))
    gap = 1.0 - gap_ratio ** inputs.m
    return bit_error, busy, gap


def p_tf(inputs: ReliabilityInputs) -> float:
    """Probability of a transmission failure on the victim connection"""
    bit_error, busy, gap = reliability_terms(inputs)
    return min(1.0, max(0.0, bit_error * busy * gap))


def reliability(inputs: ReliabilityInputs) -> float:
    return 1.0 - p_tf(inputs)


class ReliabilityAssessor:
    """Reliability of a victim connection under a disturber connection"""

    def __init__(self):
        self.logger = logging.getLogger(__name__)

    def assess(self, scenario: Scenario) -> Dict[str, float]:
        inputs = reliability_inputs_from_scenario(scenario)
        bit_error, busy, gap = reliability_terms(inputs)
        failure = p_tf(inputs)
        self.logger.info(
            f"P_TF={failure:.6f} (bit errors {bit_error:.6f} x busy {busy:.6f} x gap {gap:.6f}) "
            f"m={inputs.m} n={inputs.n}"
        )
        return {
            "p_tf": failure,
            "reliability": 1.0 - failure,
            "bit_error_term": bit_error,
            "busy_term": busy,
            "gap_term": gap,
        }
