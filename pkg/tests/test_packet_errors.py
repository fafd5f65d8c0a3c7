# tests/test_packet_errors.py
import numpy as np
import pytest

from src.analyzers.link_probabilities import failure_prob
from src.simulation.packet_errors import AA_ERROR, CLEAN, CRC_ERROR, corrupt_packet, sample_packet_outcomes
from src.simulation.protocol import PacketOutcome


class TestSamplePacketOutcomes:

    def test_error_free_channel(self):
        codes = sample_packet_outcomes(512, 32, 0.0, np.random.default_rng(1), 10_000)
        assert np.all(codes == CLEAN)

    def test_certain_corruption_hits_access_address(self):
        codes = sample_packet_outcomes(512, 32, 1.0, np.random.default_rng(1), 10_000)
        assert np.all(codes == AA_ERROR)

    def test_error_frequencies(self):
        n = 1_000_000
        codes = sample_packet_outcomes(512, 32, 1e-3, np.random.default_rng(2024), n)

        q_aa = failure_prob(1e-3, 32)
        assert q_aa == pytest.approx(0.031509, abs=1e-6)
        sigma = np.sqrt(q_aa * (1 - q_aa) / n)
        assert abs(np.mean(codes == AA_ERROR) - q_aa) <= 4 * sigma

        q_crc = (1 - q_aa) * failure_prob(1e-3, 480)
        sigma = np.sqrt(q_crc * (1 - q_crc) / n)
        assert abs(np.mean(codes == CRC_ERROR) - q_crc) <= 4 * sigma

    def test_shape_and_dtype(self):
        codes = sample_packet_outcomes(80, 32, 1e-2, np.random.default_rng(0), (50, 3))
        assert codes.shape == (50, 3)
        assert codes.dtype == np.int8

    def test_same_seed_same_stream(self):
        a = sample_packet_outcomes(512, 32, 1e-2, np.random.default_rng(9), 1000)
        b = sample_packet_outcomes(512, 32, 1e-2, np.random.default_rng(9), 1000)
        np.testing.assert_array_equal(a, b)

    def test_packet_shorter_than_access_address(self):
        with pytest.raises(ValueError):
            sample_packet_outcomes(16, 32, 1e-3, np.random.default_rng(0), 10)


class TestCorruptPacket:

    def test_clean_and_aa_extremes(self):
        rng = np.random.default_rng(0)
        assert corrupt_packet(512, 32, 0.0, rng) is PacketOutcome.CLEAN
        assert corrupt_packet(512, 32, 1.0, rng) is PacketOutcome.AA_ERROR

    def test_codes_match_enum(self):
        assert (CLEAN, CRC_ERROR, AA_ERROR) == (0, 1, 2)

    def test_rejects_ber_outside_unit_interval(self):
        with pytest.raises(ValueError):
            corrupt_packet(512, 32, -0.1, np.random.default_rng(0))
