# src/analyzers/analysis_orchestrator.py
from dataclasses import replace
import logging

from ..collectors.scenario import Scenario
from .reliability_model import ReliabilityAssessor
from .throughput_model import ModelOutputs, ThroughputModel


class AnalysisOrchestrator:
    """Main orchestrator that combines the throughput and reliability models"""

    def __init__(self, throughput_mode: str = "payload"):
        self.throughput_model = ThroughputModel(throughput_mode=throughput_mode)
        self.reliability_assessor = ReliabilityAssessor()
        self.logger = logging.getLogger(__name__)

    def analyze(self, scenario: Scenario) -> ModelOutputs:
        """Throughput for every scenario; P_TF and reliability when a disturber is configured"""
        try:
            outputs = self.throughput_model.evaluate(scenario)
            if scenario.disturber is None:
                return outputs

            risk = self.reliability_assessor.assess(scenario)
            extras = dict(outputs.extras)
            extras.update({k: risk[k] for k in ("bit_error_term", "busy_term", "gap_term")})
            return replace(outputs, p_tf=risk["p_tf"], reliability=risk["reliability"], extras=extras)

        except Exception as e:
            self.logger.error(f"Link analysis error for {scenario.to_raw()}: {e}")
            raise
