# tests/test_validation.py
import pytest

from conftest import make_scenario
from src.analyzers.analysis_orchestrator import AnalysisOrchestrator
from src.errors import AcceptanceError
from src.simulation.protocol import SimProtocol, SimResult
from src.simulation.validation import ValidationCheck, ValidationReport, ptf_check, run_validation, tsr_check


def fake_result(**fields):
    base = dict(mode="transaction", runs=1, intervals_per_run=1, master_seed=0)
    base.update(fields)
    return SimResult(**base)


class TestChecks:

    def test_single_transaction_absolute_band(self, base_scenario):
        model = AnalysisOrchestrator().analyze(base_scenario)
        check = tsr_check(model, fake_result(empirical_tsr=0.362, tsr_standard_error=1e-4), 1)
        assert check.tolerance == 0.005
        assert check.passed

    def test_multi_transaction_relative_band(self):
        model = AnalysisOrchestrator().analyze(make_scenario(x=2))
        check = tsr_check(model, fake_result(empirical_tsr=0.26, tsr_standard_error=1e-4), 2)
        assert check.tolerance == pytest.approx(0.05 * 0.284572, abs=1e-6)
        assert not check.passed

    def test_noisy_estimate_widens_band(self, base_scenario):
        model = AnalysisOrchestrator().analyze(base_scenario)
        check = tsr_check(model, fake_result(empirical_tsr=0.37, tsr_standard_error=0.004), 1)
        assert check.tolerance == pytest.approx(0.016)
        assert check.passed

    def test_disjoint_channels_need_exact_zero(self, saturated_scenario):
        model = AnalysisOrchestrator().analyze(saturated_scenario)
        assert ptf_check(model, fake_result(mode="coexistence", empirical_ptf=0.0), "disjoint").passed
        assert not ptf_check(model, fake_result(mode="coexistence", empirical_ptf=1e-4), "disjoint").passed

    def test_hopping_expects_a_37th(self, saturated_scenario):
        model = AnalysisOrchestrator().analyze(saturated_scenario)
        check = ptf_check(model, fake_result(mode="coexistence", empirical_ptf=0.0176, ptf_standard_error=1e-4),
                          "uniform-37")
        assert check.expected == pytest.approx(model.p_tf / 37)
        assert check.passed

    def test_failure_record(self):
        check = ValidationCheck("tsr", 0.2, 0.3, 0.01, "relative 5% or 4 sigma")
        failure = check.as_failure()
        assert (failure.check, failure.observed, failure.expected) == ("tsr", 0.2, 0.3)
        assert "relative 5%" in failure.tolerance


class TestRunValidation:

    def test_single_transaction_agrees(self, base_scenario):
        report = run_validation(base_scenario, SimProtocol(runs=20, intervals_per_run=500))
        assert [c.name for c in report.checks] == ["tsr"]
        assert report.passed
        report.raise_for_failures()

    def test_saturated_disturber_agrees(self, saturated_scenario):
        report = run_validation(saturated_scenario, SimProtocol(runs=50, intervals_per_run=1000))
        assert [c.name for c in report.checks] == ["tsr", "p_tf"]
        assert set(report.simulations) == {"transaction", "coexistence"}
        assert report.passed, report.failures()

    def test_report_rows(self, base_scenario):
        report = run_validation(base_scenario, SimProtocol(runs=5, intervals_per_run=200))
        row = report.as_rows()[0]
        assert set(row) == {"check", "observed", "expected", "gap", "tolerance", "rule", "passed"}
        assert row["expected"] == pytest.approx(0.358972, abs=1e-5)

    def test_failures_raise(self, base_scenario):
        model = AnalysisOrchestrator().analyze(base_scenario)
        report = ValidationReport(base_scenario, model, [ValidationCheck("tsr", 0.1, 0.359, 0.005, "absolute 0.005")])
        assert not report.passed
        with pytest.raises(AcceptanceError) as exc:
            report.raise_for_failures()
        assert exc.value.failures[0].check == "tsr"
