# tests/test_throughput_model.py
import numpy as np
import pytest

from conftest import make_scenario
from src.analyzers.link_probabilities import transaction_probs
from src.analyzers.throughput_model import (
    ThroughputModel,
    bytes_per_transaction,
    evaluate_throughput,
    throughput_ideal,
    throughput_real,
)


class TestThroughputFormulas:

    def test_ideal_two_transactions(self):
        assert throughput_ideal(50, 2, 7.5e-3) == pytest.approx(106666.7, abs=0.1)

    def test_ideal_single_transaction(self):
        assert throughput_ideal(50, 1, 7.5e-3) == pytest.approx(53333.3, abs=0.1)

    def test_ideal_empty_payload(self):
        assert throughput_ideal(0, 3, 7.5e-3) == 0.0

    def test_ideal_rejects_non_positive_interval(self):
        with pytest.raises(ValueError):
            throughput_ideal(50, 1, 0)

    def test_real_is_product(self):
        assert throughput_real(0.284572, 106666.7) == pytest.approx(30354, abs=1)
        assert throughput_real(1.0, 106666.7) == pytest.approx(106666.7)
        assert throughput_real(0.0, 106666.7) == 0.0

    def test_real_rejects_tsr_outside_unit_interval(self):
        with pytest.raises(ValueError):
            throughput_real(1.2, 1000.0)


class TestEvaluateThroughput:

    def test_tsr_equals_p1_with_one_transaction(self, base_scenario):
        outputs = evaluate_throughput(base_scenario)
        assert outputs.tsr == pytest.approx(transaction_probs(1e-3, 512, 512).p1, abs=1e-12)
        assert outputs.tsr == pytest.approx(0.358972, abs=1e-5)

    def test_two_transaction_reference(self):
        outputs = evaluate_throughput(make_scenario(x=2))
        assert outputs.tsr == pytest.approx(0.284572, abs=1e-5)
        assert outputs.throughput_real == pytest.approx(30354, abs=2)
        assert outputs.converged
        assert outputs.solver_gap <= 1e-9

    def test_base_point_with_two_transactions(self, fig8_base):
        outputs = evaluate_throughput(fig8_base)
        single = evaluate_throughput(make_scenario(ber=1e-5))
        # one transaction per event: TSR is (1 - 1e-5)^1024
        assert single.tsr == pytest.approx(0.98981, abs=1e-5)
        # the half-failed retransmissions cost about one percent at x = 2
        assert outputs.tsr == pytest.approx(0.98055, abs=5e-4)
        assert outputs.tsr < single.tsr

    def test_error_free_link_reaches_ideal(self):
        outputs = evaluate_throughput(make_scenario(ber=0.0, x=3))
        assert outputs.tsr == 1.0
        assert outputs.throughput_real == pytest.approx(outputs.throughput_ideal)

    def test_records_probabilities(self, base_scenario):
        outputs = evaluate_throughput(base_scenario)
        assert outputs.probs.p3 == pytest.approx(0.062025, abs=5e-6)
        assert outputs.extras["p6_check_gap"] <= 1e-9

    def test_tsr_non_increasing_in_ber(self):
        for x in (1, 2, 4):
            values = [evaluate_throughput(make_scenario(ber=float(b), x=x)).tsr for b in np.logspace(-5, -3, 20)]
            assert all(b <= a + 1e-12 for a, b in zip(values, values[1:]))

    def test_real_never_exceeds_ideal(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            outputs = evaluate_throughput(make_scenario(
                ber=float(10 ** rng.uniform(-6, -2)),
                payload_v_bytes=int(rng.integers(0, 252)),
                x=int(rng.integers(1, 6)),
                ci_v_us=float(rng.uniform(7500, 45000)),
            ))
            assert outputs.throughput_real <= outputs.throughput_ideal + 1e-9

    def test_as_row_without_disturber(self, base_scenario):
        row = evaluate_throughput(base_scenario).as_row()
        assert row["p_tf"] is None and row["reliability"] is None


class TestThroughputModes:

    def test_on_air_counts_whole_packet(self, base_scenario):
        assert bytes_per_transaction(base_scenario.victim, "on_air") == 64

    def test_bidirectional_adds_return_payload(self):
        scenario = make_scenario(payload_pc_bytes=20)
        assert bytes_per_transaction(scenario.victim, "bidirectional") == 70

    def test_unknown_mode_rejected(self, base_scenario):
        with pytest.raises(ValueError):
            bytes_per_transaction(base_scenario.victim, "goodput")
        with pytest.raises(ValueError):
            ThroughputModel(throughput_mode="goodput")

    def test_on_air_ideal_at_base_point(self, fig8_base):
        outputs = evaluate_throughput(fig8_base, throughput_mode="on_air")
        assert outputs.throughput_ideal == pytest.approx(512 * 2 / 7.5e-3)
        assert outputs.throughput_mode == "on_air"
