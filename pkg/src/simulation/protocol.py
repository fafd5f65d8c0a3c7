# src/simulation/protocol.py
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

SIM_MODES = ("transaction", "coexistence")
CHANNEL_MODES = ("same-channel", "uniform-37", "disjoint")
DATA_CHANNELS = 37
Z_95 = 1.959963984540054


class PacketOutcome(Enum):
    CLEAN = 0
    CRC_ERROR = 1
    AA_ERROR = 2


class TransactionOutcome(Enum):
    SUCCESS = "success"
    FAIL_OPEN = "fail_open"
    FAIL_CLOSE = "fail_close"


@dataclass(frozen=True)
class SimProtocol:
    """How many intervals/runs to simulate, which random stream, which mode"""
    intervals_per_run: int = 1000
    runs: int = 500
    master_seed: int = 42
    mode: str = "transaction"
    channel_mode: str = "same-channel"
    workers: int = 1
    throughput_mode: str = "payload"

    def __post_init__(self):
        if self.intervals_per_run < 1:
            raise ValueError("intervals_per_run must be at least 1")
        if self.runs < 1:
            raise ValueError("runs must be at least 1")
        if self.mode not in SIM_MODES:
            raise ValueError(f"unknown simulation mode '{self.mode}', expected one of {SIM_MODES}")
        if self.channel_mode not in CHANNEL_MODES:
            raise ValueError(f"unknown channel mode '{self.channel_mode}', expected one of {CHANNEL_MODES}")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")
        if not 0 <= self.master_seed < 2 ** 64:
            raise ValueError("master_seed must be a 64-bit unsigned integer")

    def run_seed(self, run_index: int) -> int:
        return self.master_seed ^ run_index


@dataclass(frozen=True)
class RunTally:
    """Raw counts of one simulation run"""
    run_index: int
    attempts: int = 0
    successes: int = 0
    fail_open: int = 0
    fail_close: int = 0
    retransmission_attempts: int = 0
    deferred_retransmissions: int = 0
    victim_packets: int = 0
    failed_packets: int = 0
    overlapping_transactions: int = 0
    victim_transactions: int = 0
    phase_offset: float = 0.0


def _standard_error(per_run: pd.Series, p: float, n: int) -> float:
    """Between-run standard error; binomial when there is a single run"""
    if per_run.count() >= 2:
        return float(per_run.sem())
    return float(np.sqrt(max(p * (1.0 - p), 0.0) / n)) if n > 0 else 0.0


@dataclass(frozen=True)
class SimResult:
    mode: str
    runs: int
    intervals_per_run: int
    master_seed: int
    channel_mode: str = "same-channel"
    successes: int = 0
    fail_open: int = 0
    fail_close: int = 0
    attempts: int = 0
    retransmission_attempts: int = 0
    deferred_retransmissions: int = 0
    empirical_tsr: Optional[float] = None
    empirical_throughput: Optional[float] = None
    tsr_standard_error: Optional[float] = None
    throughput_standard_error: Optional[float] = None
    victim_packets: int = 0
    failed_packets: int = 0
    empirical_ptf: Optional[float] = None
    ptf_standard_error: Optional[float] = None
    overlap_frequency: Optional[float] = None
    per_run: Tuple[Dict[str, float], ...] = field(default_factory=tuple)

    def confidence_interval(self, estimate: str) -> Tuple[float, float]:
        """95% normal-approximation bounds for 'tsr', 'throughput' or 'ptf'"""
        value = getattr(self, f"empirical_{estimate}")
        se = getattr(self, f"{estimate}_standard_error")
        if value is None or se is None:
            raise ValueError(f"no {estimate} estimate in a {self.mode} result")
        lo, hi = value - Z_95 * se, value + Z_95 * se
        if estimate == "throughput":
            return max(0.0, lo), hi
        return max(0.0, lo), min(1.0, hi)

    def per_run_frame(self) -> pd.DataFrame:
        return pd.DataFrame(list(self.per_run))

    @classmethod
    def from_tallies(cls, tallies: List[RunTally], protocol: SimProtocol, bits_per_success: float = 0.0,
                     slot_time_s: float = 0.0) -> "SimResult":
        """
        Aggregate per-run tallies (sorted by run index, so worker count never changes the result).
        Throughput books each attempt as one transaction slot of CI/x seconds.
        """
        tallies = sorted(tallies, key=lambda t: t.run_index)
        attempts = sum(t.attempts for t in tallies)
        successes = sum(t.successes for t in tallies)
        victim_packets = sum(t.victim_packets for t in tallies)
        failed_packets = sum(t.failed_packets for t in tallies)
        transactions = sum(t.victim_transactions for t in tallies)
        overlapping = sum(t.overlapping_transactions for t in tallies)

        per_run = []
        for t in tallies:
            row = {"run": t.run_index, "attempts": t.attempts, "successes": t.successes}
            if protocol.mode == "transaction":
                row["tsr"] = t.successes / t.attempts if t.attempts else 0.0
                row["throughput_bps"] = (t.successes * bits_per_success / (t.attempts * slot_time_s)
                                         if t.attempts else 0.0)
            else:
                row["victim_packets"] = t.victim_packets
                row["failed_packets"] = t.failed_packets
                row["ptf"] = t.failed_packets / t.victim_packets if t.victim_packets else 0.0
                row["phase_offset_us"] = t.phase_offset
            per_run.append(row)

        fields = dict(
            mode=protocol.mode,
            runs=protocol.runs,
            intervals_per_run=protocol.intervals_per_run,
            master_seed=protocol.master_seed,
            channel_mode=protocol.channel_mode,
            successes=successes,
            fail_open=sum(t.fail_open for t in tallies),
            fail_close=sum(t.fail_close for t in tallies),
            attempts=attempts,
            retransmission_attempts=sum(t.retransmission_attempts for t in tallies),
            deferred_retransmissions=sum(t.deferred_retransmissions for t in tallies),
            victim_packets=victim_packets,
            failed_packets=failed_packets,
            per_run=tuple(per_run),
        )

        if protocol.mode == "transaction" and attempts:
            tsr = successes / attempts
            throughput = successes * bits_per_success / (attempts * slot_time_s)
            tsr_se = _standard_error(pd.DataFrame(per_run)["tsr"], tsr, attempts)
            fields.update(
                empirical_tsr=tsr,
                empirical_throughput=throughput,
                tsr_standard_error=tsr_se,
                throughput_standard_error=tsr_se * bits_per_success / slot_time_s,
            )
        if protocol.mode == "coexistence" and victim_packets:
            ptf = failed_packets / victim_packets
            ptf_se = _standard_error(pd.DataFrame(per_run)["ptf"], ptf, max(transactions, 1))
            fields.update(
                empirical_ptf=ptf,
                ptf_standard_error=ptf_se,
                overlap_frequency=overlapping / transactions if transactions else 0.0,
            )
        return cls(**fields)
