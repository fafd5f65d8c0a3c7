# src/simulation/coexistence_engine.py
import logging
import math
from dataclasses import dataclass

import numpy as np

from ..analyzers.link_probabilities import failure_prob
from ..collectors.scenario import IFS_US, DisturberConfig, VictimConfig
from .protocol import DATA_CHANNELS, RunTally, SimProtocol, SimResult
from .runner import execute_runs


@dataclass(frozen=True)
class CoexistenceSetup:
    victim: VictimConfig
    disturber: DisturberConfig
    ber_v: float
    ifs: float = IFS_US


def packets_per_event(airtime: float, count: int, ci: float, ifs: float = IFS_US) -> int:
    """How many of `count` back-to-back packets start before the next anchor point"""
    return min(count, math.ceil(ci / (airtime + ifs)))


def victim_layout(victim: VictimConfig, ifs: float = IFS_US):
    """(offsets, durations) of the victim packets in one event, central/peripheral alternating"""
    durations = np.tile([victim.packet_cp.airtime, victim.packet_pc.airtime], victim.x)
    offsets = np.concatenate(([0.0], np.cumsum(durations + ifs)[:-1]))
    # whole transactions only; a transaction starting after the next anchor is never sent
    keep = 2 * int(np.count_nonzero(offsets[::2] < victim.ci))
    return offsets[:keep], durations[:keep]


def overlaps_disturber_event(u: np.ndarray, duration: np.ndarray, pt_d: float, period: float,
                             n_eff: int) -> np.ndarray:
    """
    Does a victim packet starting `u` us after a disturber anchor overlap any of that
    event's packets (k * period, k * period + pt_d), k < n_eff? Touching ends do not count.
    """
    k_lo = np.maximum(np.floor((u - pt_d) / period) + 1, 0)
    k_hi = np.minimum(np.ceil((u + duration) / period) - 1, n_eff - 1)
    return k_lo <= k_hi


def run_coexistence(setup: CoexistenceSetup, run_index: int, protocol: SimProtocol) -> RunTally:
    rng = np.random.default_rng(protocol.run_seed(run_index))
    victim, disturber = setup.victim, setup.disturber
    events = protocol.intervals_per_run

    phase = rng.uniform(0.0, disturber.ci_d)

    offsets, durations = victim_layout(victim, setup.ifs)
    transactions_per_event = len(offsets) // 2
    starts = np.arange(events)[:, None] * victim.ci + offsets[None, :]
    durations = np.broadcast_to(durations, starts.shape)

    pt_d = disturber.packet.airtime
    period = pt_d + setup.ifs
    n_eff = packets_per_event(pt_d, disturber.n, disturber.ci_d, setup.ifs)

    # disturber event indices -2 .. last, stored shifted by two
    last_event = int(np.floor((events * victim.ci - phase) / disturber.ci_d)) + 1
    if protocol.channel_mode == "uniform-37":
        victim_channels = rng.integers(0, DATA_CHANNELS, size=events)
        disturber_channels = rng.integers(0, DATA_CHANNELS, size=last_event + 3)

    home = np.floor((starts - phase) / disturber.ci_d).astype(np.int64)
    hit = np.zeros(starts.shape, dtype=bool)
    for shift in (-1, 0, 1):
        j = home + shift
        u = starts - (phase + j * disturber.ci_d)
        timed = overlaps_disturber_event(u, durations, pt_d, period, n_eff)
        if protocol.channel_mode == "same-channel":
            hit |= timed
        elif protocol.channel_mode == "uniform-37":
            same = victim_channels[:, None] == disturber_channels[np.clip(j + 2, 0, last_event + 2)]
            hit |= timed & same

    hit_tx = hit.reshape(events, transactions_per_event, 2).any(axis=2)
    bits = victim.packet_cp.total_bits + victim.packet_pc.total_bits
    corrupted = rng.random((events, transactions_per_event)) < failure_prob(setup.ber_v, bits)
    failed_tx = int(np.count_nonzero(hit_tx & corrupted))

    return RunTally(
        run_index=run_index,
        attempts=events * transactions_per_event,
        successes=events * transactions_per_event - failed_tx,
        fail_close=failed_tx,   # a collided transaction loses both packets
        victim_packets=2 * events * transactions_per_event,
        failed_packets=2 * failed_tx,
        overlapping_transactions=int(np.count_nonzero(hit_tx)),
        victim_transactions=events * transactions_per_event,
        phase_offset=float(phase),
    )


class CoexistenceSimulator:
    """Victim connection sharing the air with one disturber connection"""

    def __init__(self, protocol: SimProtocol):
        if protocol.mode != "coexistence":
            raise ValueError(f"CoexistenceSimulator needs mode 'coexistence', got '{protocol.mode}'")
        self.protocol = protocol
        self.logger = logging.getLogger(__name__)

    def simulate(self, victim: VictimConfig, disturber: DisturberConfig, ber_v: float) -> SimResult:
        if disturber.n < 1:
            raise ValueError("coexistence needs a disturber with n >= 1")
        n_eff = packets_per_event(disturber.packet.airtime, disturber.n, disturber.ci_d)
        if n_eff < disturber.n:
            self.logger.warning(
                f"only {n_eff} of {disturber.n} disturber packets fit in CI_D={disturber.ci_d:.0f} us; "
                f"the rest are dropped"
            )
        if len(victim_layout(victim)[0]) < victim.m:
            self.logger.warning(f"not all {victim.x} victim transactions fit in CI_V={victim.ci:.0f} us")

        setup = CoexistenceSetup(victim=victim, disturber=disturber, ber_v=ber_v)
        tallies = execute_runs(run_coexistence, setup, self.protocol)
        result = SimResult.from_tallies(tallies, self.protocol)
        self.logger.info(
            f"Empirical P_TF={result.empirical_ptf:.6f} over {result.victim_packets} victim packets "
            f"({self.protocol.channel_mode}, overlap frequency {result.overlap_frequency:.4f})"
        )
        return result


def simulate_coexistence(victim: VictimConfig, disturber: DisturberConfig, ber_v: float,
                         protocol: SimProtocol) -> SimResult:
    return CoexistenceSimulator(protocol).simulate(victim, disturber, ber_v)
