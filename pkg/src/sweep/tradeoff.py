# src/sweep/tradeoff.py
import logging
import math
from typing import List, Sequence, Tuple

from ..analyzers.analysis_orchestrator import AnalysisOrchestrator
from ..analyzers.reliability_model import ReliabilityInputs, reliability_inputs_from_scenario, reliability_terms
from ..analyzers.throughput_model import ModelOutputs
from ..collectors.scenario import Scenario, validate_scenario

logger = logging.getLogger(__name__)


def ber_for_reliability(target_reliability: float, inputs: ReliabilityInputs) -> float:
    """
    BER at which the victim reaches `target_reliability`, everything else in `inputs` fixed.
    Raises ValueError when the target is out of reach (collisions alone would need p_tf > 1).
    """
    if not 0.0 <= target_reliability <= 1.0:
        raise ValueError("target reliability must lie in [0, 1]")
    failure = 1.0 - target_reliability
    if failure == 0.0:
        return 0.0
    _, busy, gap = reliability_terms(inputs)
    exposure = busy * gap
    if exposure <= 0.0:
        raise ValueError("victim never overlaps the disturber; every reliability target below 1 is unreachable")
    ratio = failure / exposure
    if ratio >= 1.0:
        raise ValueError(
            f"reliability {target_reliability} is unreachable: the overlap terms cap the failure "
            f"probability at {exposure:.6f}"
        )
    return -math.expm1(math.log1p(-ratio) / (2 * inputs.l_v))


def throughput_for_reliability(scenario: Scenario, target_reliability: float,
                               throughput_mode: str = "payload") -> ModelOutputs:
    """Throughput pipeline evaluated at the BER implied by a reliability target"""
    ber = ber_for_reliability(target_reliability, reliability_inputs_from_scenario(scenario))
    logger.info(f"reliability {target_reliability} -> ber {ber:.6e}")
    raw = scenario.to_raw()
    raw["ber"] = ber
    return AnalysisOrchestrator(throughput_mode).analyze(validate_scenario(raw))


def reliability_throughput_frontier(scenario: Scenario, targets: Sequence[float],
                                    throughput_mode: str = "payload") -> List[Tuple[float, ModelOutputs]]:
    """(target, outputs) for every reachable target; unreachable ones are skipped with a warning"""
    frontier = []
    for target in sorted(targets):
        try:
            frontier.append((target, throughput_for_reliability(scenario, target, throughput_mode)))
        except ValueError as e:
            logger.warning(f"skipping reliability target {target}: {e}")
    return frontier
