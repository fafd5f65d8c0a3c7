# tests/test_link_probabilities.py
import numpy as np
import pytest

from src.analyzers.link_probabilities import failure_prob, success_prob, transaction_probs


class TestSuccessProb:

    def test_error_free(self):
        assert success_prob(0.0, 512) == 1.0

    def test_access_address_survival(self):
        assert success_prob(1e-3, 32) == pytest.approx(0.968491, abs=1e-6)

    def test_matches_repeated_multiplication(self):
        expected = 1.0
        for _ in range(32):
            expected *= 1 - 1e-3
        assert success_prob(1e-3, 32) == pytest.approx(expected, rel=1e-12)

    def test_certain_corruption(self):
        assert success_prob(1.0, 1) == 0.0

    def test_tiny_ber_failure_keeps_precision(self):
        assert failure_prob(1e-12, 1) == pytest.approx(1e-12, rel=1e-9)


class TestTransactionProbs:

    def test_error_free_convention(self):
        probs = transaction_probs(0.0, 512, 512)
        assert (probs.p1, probs.p2, probs.p3) == (1.0, 0.0, 0.0)
        assert (probs.p4, probs.p5, probs.p6) == (1.0, 0.0, 0.0)

    def test_reference_point(self):
        probs = transaction_probs(1e-3, 512, 512)
        assert probs.p1 == pytest.approx(0.3589715, abs=5e-6)
        assert probs.p2 == pytest.approx(0.579004, abs=5e-6)
        assert probs.p3 == pytest.approx(0.062025, abs=5e-6)
        assert probs.p4 == pytest.approx(0.084577, abs=5e-6)
        assert probs.p5 == pytest.approx(0.443549, abs=5e-6)

    def test_p2_is_aa_survival_minus_p1(self):
        probs = transaction_probs(1e-3, 512, 512)
        assert probs.p2 == pytest.approx(success_prob(1e-3, 32) ** 2 - probs.p1, abs=1e-12)

    def test_ber_one_rejected(self):
        with pytest.raises(ValueError):
            transaction_probs(1.0, 512, 512)

    def test_packet_shorter_than_access_address_rejected(self):
        with pytest.raises(ValueError):
            transaction_probs(1e-3, 16, 512)

    def test_probability_algebra_on_random_grid(self):
        rng = np.random.default_rng(2024)
        for _ in range(1000):
            ber = float(10 ** rng.uniform(-7, -1))
            l_cp = int(8 * (rng.integers(0, 252) + 14))
            l_pc = int(8 * (rng.integers(0, 252) + 14))
            probs = transaction_probs(ber, l_cp, l_pc)
            assert probs.p1 + probs.p2 + probs.p3 == pytest.approx(1.0, abs=1e-12)
            assert probs.p4 + probs.p5 + probs.p6 == pytest.approx(1.0, abs=1e-12)
            assert probs.p6_check_gap <= 1e-9
            assert all(0.0 <= p <= 1.0 for p in probs.as_dict().values())
