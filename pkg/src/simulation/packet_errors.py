# src/simulation/packet_errors.py
from typing import Tuple, Union

import numpy as np

from ..analyzers.link_probabilities import failure_prob
from .protocol import PacketOutcome

CLEAN, CRC_ERROR, AA_ERROR = (o.value for o in PacketOutcome)


def _corruption_probs(bits: int, aa_bits: int, ber: float) -> Tuple[float, float]:
    if bits < aa_bits:
        raise ValueError(f"packet of {bits} bits is shorter than its {aa_bits}-bit access address")
    if not 0.0 <= ber <= 1.0:
        raise ValueError("ber must lie in [0, 1]")
    return failure_prob(ber, aa_bits), failure_prob(ber, bits - aa_bits)


def sample_packet_outcomes(bits: int, aa_bits: int, ber: float, rng: np.random.Generator,
                           size: Union[int, Tuple[int, ...]]) -> np.ndarray:
    """
    Vectorised packet outcomes as integer codes (0 clean, 1 CRC error, 2 AA error).
    Access-address corruption wins over a corrupted body.
    """
    q_aa, q_body = _corruption_probs(bits, aa_bits, ber)
    aa_hit = rng.random(size) < q_aa
    body_hit = rng.random(size) < q_body
    codes = np.where(body_hit, CRC_ERROR, CLEAN)
    return np.where(aa_hit, AA_ERROR, codes).astype(np.int8)


def corrupt_packet(bits: int, aa_bits: int, ber: float, rng: np.random.Generator) -> PacketOutcome:
    """Outcome of one packet of `bits` bits (the first `aa_bits` being the access address)"""
    q_aa, q_body = _corruption_probs(bits, aa_bits, ber)
    aa_hit = rng.random() < q_aa
    body_hit = rng.random() < q_body
    if aa_hit:
        return PacketOutcome.AA_ERROR
    if body_hit:
        return PacketOutcome.CRC_ERROR
    return PacketOutcome.CLEAN
