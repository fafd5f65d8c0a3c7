# src/analyzers/link_probabilities.py
import logging
import math
from dataclasses import dataclass
from typing import Tuple

from ..collectors.scenario import AA_BITS
from ..errors import ConsistencyError

logger = logging.getLogger(__name__)

P6_CHECK_TOLERANCE = 1e-9


def _log_survival(ber: float) -> float:
    return math.log1p(-ber) if ber < 1.0 else -math.inf


def success_prob(ber: float, bits: int) -> float:
    """Probability that `bits` consecutive bits all survive: (1 - BER)^bits"""
    if not 0.0 <= ber <= 1.0:
        raise ValueError("ber must lie in [0, 1]")
    if bits < 0:
        raise ValueError("bits must be non-negative")
    if bits == 0:
        return 1.0
    if ber == 1.0:
        return 0.0
    return math.exp(bits * _log_survival(ber))


def failure_prob(ber: float, bits: int) -> float:
    """1 - success_prob, kept accurate for tiny BER"""
    if bits == 0:
        return 0.0
    if ber == 1.0:
        return 1.0
    return -math.expm1(bits * _log_survival(ber))


@dataclass(frozen=True)
class TransactionProbabilities:
    """
    Outcome probabilities of one transaction.
    p1..p3: normal transaction -> success / fail (open) / fail (close)
    p4..p6: retransmission     -> success / fail (open) / fail (close)
    """
    p1: float
    p2: float
    p3: float
    p4: float
    p5: float
    p6: float
    p6_check_gap: float = 0.0

    @property
    def normal(self) -> Tuple[float, float, float]:
        return (self.p1, self.p2, self.p3)

    @property
    def retransmission(self) -> Tuple[float, float, float]:
        return (self.p4, self.p5, self.p6)

    def as_dict(self):
        return {f"p{i}": v for i, v in enumerate((self.p1, self.p2, self.p3, self.p4, self.p5, self.p6), start=1)}


def transaction_probs(ber: float, l_cp: int, l_pc: int, aa_bits: int = AA_BITS) -> TransactionProbabilities:
    """
    P1..P6 from the BER and the packet lengths in both directions.

    An access-address error closes the event; a CRC error with an intact
    access address keeps it open. A retransmission only succeeds outright when
    both directions failed the first time; a half-failed transaction carries
    the healthy direction's next packet and is booked as fail (open).
    """
    if not 0.0 <= ber < 1.0:
        raise ValueError("ber must lie in [0, 1); ber = 1 makes every transaction degenerate")
    if l_cp < aa_bits or l_pc < aa_bits:
        raise ValueError(f"packet lengths must be at least the {aa_bits}-bit access address")

    rho_aa = success_prob(ber, aa_bits)
    rho_cp = success_prob(ber, l_cp - aa_bits)
    rho_pc = success_prob(ber, l_pc - aa_bits)
    q_aa = failure_prob(ber, aa_bits)
    q_cp = failure_prob(ber, l_cp - aa_bits)
    q_pc = failure_prob(ber, l_pc - aa_bits)

    central_ok = rho_aa * rho_cp
    peripheral_ok = rho_aa * rho_pc

    p1 = central_ok * peripheral_ok

    only_central_bad = rho_aa * q_cp * peripheral_ok
    only_peripheral_bad = central_ok * rho_aa * q_pc
    both_bad = rho_aa * q_cp * rho_aa * q_pc
    p2 = only_central_bad + only_peripheral_bad + both_bad

    p3 = q_aa + rho_aa * q_aa

    if p2 <= 0.0:
        # retransmission states unreachable
        return TransactionProbabilities(p1, 0.0, p3, 1.0, 0.0, 0.0)

    p4 = both_bad * p1 / p2
    p5 = (only_central_bad * (central_ok * rho_aa) + only_peripheral_bad * (rho_aa * peripheral_ok)) / p2
    p6 = (
        only_central_bad * ((1.0 - central_ok) + central_ok * q_aa)
        + only_peripheral_bad * (q_aa + rho_aa * (1.0 - peripheral_ok))
        + both_bad * (1.0 - p1)
    ) / p2

    gap = abs(p6 - (1.0 - p4 - p5))
    if gap > P6_CHECK_TOLERANCE:
        raise ConsistencyError(f"P6 = {p6:.12f} but 1 - P4 - P5 = {1.0 - p4 - p5:.12f} (ber={ber})")
    logger.debug(f"P1..P6 at ber={ber}, l_cp={l_cp}, l_pc={l_pc}: {p1:.6f} {p2:.6f} {p3:.6f} {p4:.6f} {p5:.6f} {p6:.6f}")

    return TransactionProbabilities(p1, p2, p3, p4, p5, p6, p6_check_gap=gap)
