# src/analysis_pipeline.py
from datetime import datetime
from typing import Any, Dict, List, Optional

from .analyzers.analysis_orchestrator import AnalysisOrchestrator
from .analyzers.throughput_model import ModelOutputs, bytes_per_transaction, throughput_ideal
from .collectors.config_loader import PRESETS, ConfigDocument, preset_document
from .collectors.scenario import Scenario
from .database import ResultStore
from .errors import ScenarioIssue, ScenarioValidationError
from .simulation.coexistence_engine import simulate_coexistence
from .simulation.protocol import SimProtocol, SimResult
from .simulation.transaction_engine import simulate_connection
from .simulation.validation import ValidationReport, run_validation
from .sweep.pareto import ParetoCurve, ParetoSweeper
from .visualizer import SimpleVisualizer


def simulation_row(result: SimResult, scenario: Scenario, throughput_mode: str = "payload") -> Dict[str, Any]:
    """Simulated estimates in the seven standard result columns, plus counts and standard errors"""
    victim = scenario.victim
    ideal = throughput_ideal(bytes_per_transaction(victim, throughput_mode), victim.x, victim.ci / 1e6)
    ptf = result.empirical_ptf
    row = {
        "swept_param": "none",
        "value": None,
        "tsr": result.empirical_tsr,
        "throughput_ideal_bps": ideal,
        "throughput_real_bps": result.empirical_throughput,
        "p_tf": ptf,
        "reliability": None if ptf is None else 1.0 - ptf,
        "tsr_se": result.tsr_standard_error,
        "throughput_se_bps": result.throughput_standard_error,
        "ptf_se": result.ptf_standard_error,
        "overlap_frequency": result.overlap_frequency,
        "attempts": result.attempts,
        "successes": result.successes,
        "fail_open": result.fail_open,
        "fail_close": result.fail_close,
        "retransmission_attempts": result.retransmission_attempts,
        "deferred_retransmissions": result.deferred_retransmissions,
        "victim_packets": result.victim_packets,
        "failed_packets": result.failed_packets,
        "mode": result.mode,
        "channel_mode": result.channel_mode,
        "runs": result.runs,
        "intervals_per_run": result.intervals_per_run,
        "seed": result.master_seed,
    }
    return row


class LinkAnalysisPipeline:
    """Complete analysis pipeline combining models, sweeps, simulator and result store"""

    def __init__(self, throughput_mode: str = "payload", store: Optional[ResultStore] = None):
        self.throughput_mode = throughput_mode
        self.orchestrator = AnalysisOrchestrator(throughput_mode)
        self.sweeper = ParetoSweeper(throughput_mode)
        self.visualizer = SimpleVisualizer()
        self._store = store

        self.analysis_results: Dict[str, Any] = {}

    @property
    def store(self) -> ResultStore:
        if self._store is None:
            self._store = ResultStore()
        return self._store

    def analyze_scenario(self, scenario: Scenario, name: str = "scenario") -> ModelOutputs:
        print(f"\n🔍 Analyzing {name}...")
        outputs = self.orchestrator.analyze(scenario)
        print(f"  ✅ TSR {outputs.tsr:.6f}, real throughput {outputs.throughput_real:.1f} bps")
        if outputs.reliability is not None:
            print(f"     Reliability {outputs.reliability:.6f}")
        self.analysis_results[name] = outputs
        return outputs

    def run_sweep(self, document: ConfigDocument) -> List[ParetoCurve]:
        if document.sweep is None:
            raise ScenarioValidationError([ScenarioIssue("sweep", f"config '{document.name}' defines no sweep")])
        spec = document.sweep
        members = len(spec.members())
        print(f"\n📈 Sweeping {spec.swept_param} over {len(spec.values)} points ({members} curve(s)) for {document.name}")
        curves = self.sweeper.run(spec)
        self.analysis_results[document.name] = curves
        return curves

    def simulate(self, scenario: Scenario, protocol: SimProtocol) -> SimResult:
        print(f"\n🎲 Simulating {protocol.runs} runs x {protocol.intervals_per_run} intervals ({protocol.mode})")
        if protocol.mode == "coexistence":
            if scenario.disturber is None:
                raise ScenarioValidationError(
                    [ScenarioIssue("n", "coexistence simulation needs a disturber (payload_d_bytes, n, ci_d_us)")]
                )
            return simulate_coexistence(scenario.victim, scenario.disturber, scenario.channel.ber, protocol)
        return simulate_connection(scenario, protocol)

    def validate(self, scenario: Scenario, protocol: SimProtocol) -> ValidationReport:
        print(f"\n🔬 Validating models against {protocol.runs} x {protocol.intervals_per_run} simulated intervals")
        report = run_validation(scenario, protocol, self.orchestrator)
        self.visualizer.validation_report(report)
        return report

    def run_preset(self, name: str, save: bool = True) -> Any:
        """Model (or sweep) one preset and optionally store the table under data/results"""
        document = preset_document(name)
        if document.sweep is not None:
            results = self.run_sweep(document)
            self.visualizer.summary_dashboard(results)
        else:
            results = self.analyze_scenario(document.scenario, name)
        if save:
            self.store.save(name, results)
        return results

    def run_all_presets(self, save: bool = True) -> Dict[str, Any]:
        started = datetime.now()
        print(f"🚀 Running {len(PRESETS)} presets at {started.isoformat(timespec='seconds')}")
        results = {}
        for name in PRESETS:
            try:
                results[name] = self.run_preset(name, save=save)
            except Exception as e:
                print(f"  ❌ Preset {name} failed: {e}")
                raise
        elapsed = (datetime.now() - started).total_seconds()
        print(f"\n✅ All presets completed in {elapsed:.1f}s")
        return results
