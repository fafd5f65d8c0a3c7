# src/visualizer.py
from typing import Sequence

import numpy as np

from .analyzers.throughput_model import ModelOutputs
from .simulation.protocol import SimResult
from .simulation.validation import ValidationReport
from .sweep.pareto import ParetoCurve, summarize_curve


def _fmt(value, spec: str = ".6f") -> str:
    return "n/a" if value is None else format(value, spec)


class SimpleVisualizer:
    """Create simple text-based visualizations"""

    @staticmethod
    def curve_chart(curve: ParetoCurve, column: str = "throughput_real", width: int = 40, rows: int = 20):
        """ASCII bar chart of one curve column, thinned to at most `rows` lines"""
        values = curve.column(column)
        if np.all(np.isnan(values)):
            print(f"No {column} values on {curve.label}")
            return
        lo, hi = np.nanmin(values), np.nanmax(values)
        span = hi - lo
        step = max(1, int(np.ceil(len(values) / rows)))

        print(f"\n📊 {column} along {curve.swept_param} ({curve.label})")
        print(f"High: {hi:.6g} | Low: {lo:.6g}")
        print("-" * 50)
        for point, value in list(zip(curve.points, values))[::step]:
            height = width if span == 0 else int((value - lo) / span * width)
            print(f"{point.value:>12.6g}: {'█' * height} {value:.6g}")

    @staticmethod
    def summary_dashboard(curves: Sequence[ParetoCurve]):
        print("\n" + "=" * 60)
        print(" " * 18 + "📊 PARETO CURVE SUMMARY")
        print("=" * 60)

        for curve in curves:
            s = summarize_curve(curve)
            print(f"\n{s.label} ({len(curve.points)} points over {curve.swept_param})")
            print(f"  first: {s.first.value:g} -> throughput {s.first.throughput_real:.1f} bps, "
                  f"reliability {_fmt(s.first.reliability)}")
            print(f"  last:  {s.last.value:g} -> throughput {s.last.throughput_real:.1f} bps, "
                  f"reliability {_fmt(s.last.reliability)}")
            print(f"  reliability {s.reliability_trend}, throughput {s.throughput_trend}"
                  f"{'' if s.throughput_unimodal else ' (not unimodal!)'}")
            if s.peak is not None:
                print(f"  🎯 peak at {s.peak.value:g} B: {s.peak.throughput:.1f} bps, "
                      f"reliability {_fmt(s.peak.reliability)}")
            print("-" * 30)

    @staticmethod
    def model_report(outputs: ModelOutputs):
        print(f"TSR:               {outputs.tsr:.6f}")
        print(f"Ideal throughput:  {outputs.throughput_ideal:.1f} bps")
        print(f"Real throughput:   {outputs.throughput_real:.1f} bps")
        print(f"P_TF:              {_fmt(outputs.p_tf)}")
        print(f"Reliability:       {_fmt(outputs.reliability)}")
        if outputs.probs is not None:
            probs = " ".join(f"{k}={v:.6f}" for k, v in outputs.probs.as_dict().items())
            print(f"Probabilities:     {probs}")

    @staticmethod
    def simulation_report(result: SimResult):
        print(f"Runs: {result.runs} x {result.intervals_per_run} intervals (seed {result.master_seed})")
        if result.empirical_tsr is not None:
            low, high = result.confidence_interval("tsr")
            print(f"Empirical TSR:        {result.empirical_tsr:.6f}  (95% CI {low:.6f} .. {high:.6f})")
            print(f"Empirical throughput: {result.empirical_throughput:.1f} bps")
            print(f"Outcomes: {result.successes} success / {result.fail_open} fail-open / "
                  f"{result.fail_close} fail-close, {result.retransmission_attempts} retransmissions "
                  f"({result.deferred_retransmissions} deferred)")
        if result.empirical_ptf is not None:
            low, high = result.confidence_interval("ptf")
            print(f"Empirical P_TF:       {result.empirical_ptf:.6f}  (95% CI {low:.6f} .. {high:.6f})")
            print(f"Overlap frequency:    {result.overlap_frequency:.4f} ({result.channel_mode})")

    @staticmethod
    def validation_report(report: ValidationReport):
        print("\n" + "=" * 60)
        print(" " * 20 + "🔬 MODEL VS SIMULATION")
        print("=" * 60)
        for check in report.checks:
            mark = "✅" if check.passed else "❌"
            print(f"{mark} {check.name}: sim {check.observed:.6f} vs model {check.expected:.6f} "
                  f"(gap {check.gap:.6f}, allowed {check.tolerance:.6f}; {check.rule})")
        print("\n✅ All checks passed" if report.passed else "\n❌ Acceptance thresholds exceeded")
