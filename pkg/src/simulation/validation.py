# src/simulation/validation.py
import logging
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional

from ..analyzers.analysis_orchestrator import AnalysisOrchestrator
from ..analyzers.throughput_model import ModelOutputs
from ..collectors.scenario import Scenario
from ..errors import AcceptanceError, AcceptanceFailure
from .coexistence_engine import simulate_coexistence
from .protocol import DATA_CHANNELS, SimProtocol, SimResult
from .transaction_engine import simulate_connection

logger = logging.getLogger(__name__)

TSR_ABS_TOL_SINGLE = 0.005
TSR_REL_TOL_MULTI = 0.05
PTF_REL_TOL = 0.15
PTF_REL_TOL_HOPPING = 0.20
SIGMA_BAND = 4.0


@dataclass(frozen=True)
class ValidationCheck:
    name: str
    observed: float
    expected: float
    tolerance: float
    rule: str

    @property
    def gap(self) -> float:
        return abs(self.observed - self.expected)

    @property
    def passed(self) -> bool:
        return self.gap <= self.tolerance

    def as_failure(self) -> AcceptanceFailure:
        return AcceptanceFailure(self.name, self.observed, self.expected, f"{self.rule}, band {self.tolerance:.6f}")


@dataclass(frozen=True)
class ValidationReport:
    scenario: Scenario
    model: ModelOutputs
    checks: List[ValidationCheck]
    simulations: Dict[str, SimResult] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> List[AcceptanceFailure]:
        return [c.as_failure() for c in self.checks if not c.passed]

    def raise_for_failures(self):
        if not self.passed:
            raise AcceptanceError(self.failures())

    def as_rows(self) -> List[Dict[str, object]]:
        return [
            {
                "check": c.name,
                "observed": c.observed,
                "expected": c.expected,
                "gap": c.gap,
                "tolerance": c.tolerance,
                "rule": c.rule,
                "passed": c.passed,
            }
            for c in self.checks
        ]


def tsr_check(model: ModelOutputs, sim: SimResult, x: int) -> ValidationCheck:
    sigma_band = SIGMA_BAND * (sim.tsr_standard_error or 0.0)
    if x == 1:
        return ValidationCheck("tsr", sim.empirical_tsr, model.tsr,
                               max(TSR_ABS_TOL_SINGLE, sigma_band), "absolute 0.005 or 4 sigma")
    return ValidationCheck("tsr", sim.empirical_tsr, model.tsr,
                           max(TSR_REL_TOL_MULTI * model.tsr, sigma_band), "relative 5% or 4 sigma")


def ptf_check(model: ModelOutputs, sim: SimResult, channel_mode: str) -> ValidationCheck:
    if channel_mode == "disjoint":
        return ValidationCheck("p_tf", sim.empirical_ptf, 0.0, 0.0, "exactly 0")
    sigma_band = SIGMA_BAND * (sim.ptf_standard_error or 0.0)
    if channel_mode == "uniform-37":
        expected = model.p_tf / DATA_CHANNELS
        return ValidationCheck("p_tf", sim.empirical_ptf, expected,
                               max(PTF_REL_TOL_HOPPING * expected, sigma_band), "relative 20% of P_TF/37 or 4 sigma")
    return ValidationCheck("p_tf", sim.empirical_ptf, model.p_tf,
                           max(PTF_REL_TOL * model.p_tf, sigma_band), "relative 15% or 4 sigma")


def run_validation(scenario: Scenario, protocol: SimProtocol,
                   orchestrator: Optional[AnalysisOrchestrator] = None) -> ValidationReport:
    """Closed-form models against the Monte Carlo simulator for one scenario"""
    orchestrator = orchestrator or AnalysisOrchestrator(protocol.throughput_mode)
    model = orchestrator.analyze(scenario)

    simulations = {"transaction": simulate_connection(scenario, replace(protocol, mode="transaction"))}
    checks = [tsr_check(model, simulations["transaction"], scenario.victim.x)]

    if scenario.disturber is not None:
        coexistence = simulate_coexistence(scenario.victim, scenario.disturber, scenario.channel.ber,
                                           replace(protocol, mode="coexistence"))
        simulations["coexistence"] = coexistence
        checks.append(ptf_check(model, coexistence, protocol.channel_mode))

    for check in checks:
        level = logging.INFO if check.passed else logging.WARNING
        logger.log(level, f"{check.name}: sim {check.observed:.6f} vs model {check.expected:.6f} "
                          f"(gap {check.gap:.6f}, band {check.tolerance:.6f})")
    return ValidationReport(scenario=scenario, model=model, checks=checks, simulations=simulations)
