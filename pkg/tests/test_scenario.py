# tests/test_scenario.py
import logging

import numpy as np
import pytest

from src.collectors.scenario import (
    MAX_PAYLOAD_BYTES,
    PacketSpec,
    Scenario,
    ber_from_packet_corruption,
    packet_airtime,
    packet_bits_from_payload,
    payload_from_packet_bits,
    validate_scenario,
)
from src.errors import ScenarioValidationError
from src.analyzers.link_probabilities import failure_prob


class TestPacketConversions:

    @pytest.mark.parametrize("payload, bits", [(0, 80), (50, 512), (251, 2120)])
    def test_published_payload_bit_pairs(self, payload, bits):
        assert packet_bits_from_payload(payload) == bits

    def test_strictly_increasing_and_invertible(self):
        bits = [packet_bits_from_payload(p) for p in range(MAX_PAYLOAD_BYTES + 1)]
        assert all(b2 - b1 == 8 for b1, b2 in zip(bits[1:], bits[2:]))
        assert [payload_from_packet_bits(b) for b in bits] == list(range(MAX_PAYLOAD_BYTES + 1))

    def test_empty_pdu_carries_no_mic(self):
        assert packet_bits_from_payload(0) == 80
        assert packet_bits_from_payload(1) == 120
        assert payload_from_packet_bits(80) == 0

    def test_payload_above_maximum_names_bound(self):
        with pytest.raises(ValueError, match="251"):
            packet_bits_from_payload(252)

    @pytest.mark.parametrize("bits", [79, 88, 112, 2128, 513])
    def test_bits_outside_packet_sizes_rejected(self, bits):
        with pytest.raises(ValueError):
            payload_from_packet_bits(bits)

    @pytest.mark.parametrize("bits", [512, 80, 2120])
    def test_airtime_equals_bits_at_one_megabit(self, bits):
        assert packet_airtime(bits, 1e6) == pytest.approx(bits)

    def test_airtime_halves_at_two_megabit(self):
        assert packet_airtime(512, 2e6) == pytest.approx(256)

    def test_airtime_rejects_short_packet(self):
        with pytest.raises(ValueError):
            packet_airtime(64)

    def test_packet_spec_from_payload(self):
        spec = PacketSpec.from_payload(50)
        assert (spec.total_bits, spec.airtime, spec.aa_bits) == (512, 512.0, 32)


class TestBerFromCorruption:

    def test_linear_estimate(self):
        assert ber_from_packet_corruption(0.1, 512) == pytest.approx(1.953125e-4)

    def test_exact_inverse_round_trips(self):
        rate = failure_prob(1e-4, 512)
        assert ber_from_packet_corruption(rate, 512, exact=True) == pytest.approx(1e-4, rel=1e-9)

    def test_rejects_rate_outside_unit_interval(self):
        with pytest.raises(ValueError):
            ber_from_packet_corruption(1.5, 512)


class TestValidateScenario:

    def test_fig8_base_point(self, fig8_base):
        assert fig8_base.victim.m == 4
        assert fig8_base.victim.packet_cp.total_bits == 512
        assert fig8_base.victim.packet_pc.total_bits == 512
        assert fig8_base.disturber.n == 10
        assert fig8_base.ifs == 150

    def test_payload_too_large(self):
        with pytest.raises(ScenarioValidationError) as exc:
            validate_scenario({"ber": 1e-3, "payload_v_bytes": 300})
        assert any("payload exceeds 251" in e.message for e in exc.value.errors)
        assert exc.value.errors[0].field == "payload_v_bytes"

    def test_interval_too_short(self):
        with pytest.raises(ScenarioValidationError) as exc:
            validate_scenario({"ber": 1e-3, "payload_v_bytes": 50, "ci_v_us": 5000})
        assert any("connection interval below 7500" in e.message for e in exc.value.errors)

    def test_reports_every_violation(self):
        raw = {"ber": 2.0, "payload_v_bytes": 300, "ci_v_us": 5000, "x": 0, "ifs_us": 100}
        with pytest.raises(ScenarioValidationError) as exc:
            validate_scenario(raw)
        fields = {e.field for e in exc.value.errors}
        assert {"ber", "payload_v_bytes", "ci_v_us", "x", "ifs_us"} <= fields

    def test_unknown_key_named(self):
        with pytest.raises(ScenarioValidationError) as exc:
            validate_scenario({"ber": 1e-3, "payload_v_bytes": 50, "tx_power_dbm": 0})
        assert any("tx_power_dbm" in str(e) for e in exc.value.errors)

    def test_fixed_ifs(self):
        with pytest.raises(ScenarioValidationError, match="IFS is fixed at 150"):
            validate_scenario({"ber": 1e-3, "payload_v_bytes": 50, "ifs_us": 100})

    def test_partial_disturber_rejected(self):
        with pytest.raises(ScenarioValidationError) as exc:
            validate_scenario({"ber": 1e-3, "payload_v_bytes": 50, "n": 4})
        assert {e.field for e in exc.value.errors} == {"payload_d_bytes", "ci_d_us"}

    def test_large_x_warns(self, caplog):
        with caplog.at_level(logging.WARNING):
            scenario = validate_scenario({"ber": 1e-3, "payload_v_bytes": 50, "x": 6})
        assert scenario.victim.m == 12
        assert "exceeds the 5" in caplog.text

    def test_asymmetric_directions(self):
        scenario = validate_scenario({"ber": 1e-3, "payload_v_bytes": 50, "payload_pc_bytes": 0})
        assert scenario.victim.packet_pc.total_bits == 80
        assert scenario.victim.mean_bits == 296

    def test_to_raw_round_trip(self, fig8_base):
        assert validate_scenario(fig8_base.to_raw()) == fig8_base

    def test_random_configs_never_break_invariants(self):
        rng = np.random.default_rng(7)
        for _ in range(300):
            raw = {
                "ber": float(rng.uniform(-0.1, 1.1)),
                "payload_v_bytes": int(rng.integers(-5, 300)),
                "x": int(rng.integers(0, 7)),
                "ci_v_us": float(rng.uniform(5000, 50000)),
            }
            try:
                scenario = validate_scenario(raw)
            except ScenarioValidationError:
                continue
            assert isinstance(scenario, Scenario)
            assert 0.0 <= scenario.channel.ber <= 1.0
            assert 0 <= scenario.victim.packet_cp.payload_bytes <= 251
            assert scenario.victim.x >= 1 and scenario.victim.ci >= 7500
