# analyze_all.py
import sys
import os
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from datetime import datetime

from src.analysis_pipeline import LinkAnalysisPipeline
from src.sweep.pareto import ParetoCurve, summarize_curve


def run_complete_analysis():
    """Run every preset through the closed-form models and save the tables"""
    print("=" * 60)
    print(" " * 12 + "📡 BLE LINK COMPLETE ANALYSIS")
    print("=" * 60)
    print(f"Time: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}")

    pipeline = LinkAnalysisPipeline()
    results = pipeline.run_all_presets(save=True)

    print(f"\n{'=' * 60}")
    print(" " * 20 + "📊 TRADE-OFF SUMMARY")
    print("=" * 60)

    for name, result in results.items():
        if not isinstance(result, list):
            print(f"\n{name}: TSR {result.tsr:.4f}, {result.throughput_real:.1f} bps, "
                  f"reliability {result.reliability if result.reliability is not None else 'n/a'}")
            continue
        for curve in result:
            if not isinstance(curve, ParetoCurve):
                continue
            summary = summarize_curve(curve)
            if summary.peak is not None:
                print(f"\n🎯 {name} {summary.label}: peak {summary.peak.throughput:.1f} bps at "
                      f"{summary.peak.value:g} B (reliability {summary.peak.reliability:.4f})")
                pipeline.visualizer.curve_chart(curve)
            else:
                print(f"\n📈 {name} {summary.label}: reliability {summary.first.reliability:.4f} -> "
                      f"{summary.last.reliability:.4f}, throughput {summary.first.throughput_real:.1f} -> "
                      f"{summary.last.throughput_real:.1f} bps")
            if not summary.throughput_unimodal:
                print("   ⚠️ throughput curve has more than one local maximum")

    print("\n" + "=" * 60)
    print(f"Analysis complete! Tables saved to {pipeline.store.results_dir}")
    print("=" * 60)


if __name__ == "__main__":
    run_complete_analysis()
