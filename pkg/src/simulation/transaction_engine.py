# src/simulation/transaction_engine.py
import logging
from typing import FrozenSet, Optional, Tuple

import numpy as np

from ..analyzers.throughput_model import bytes_per_transaction
from ..collectors.scenario import Scenario
from .packet_errors import AA_ERROR, CRC_ERROR, sample_packet_outcomes
from .protocol import RunTally, SimProtocol, SimResult, TransactionOutcome
from .runner import execute_runs

CENTRAL = "central"
PERIPHERAL = "peripheral"
BOTH_DIRECTIONS = frozenset((CENTRAL, PERIPHERAL))


def classify_transaction(
    central: int,
    peripheral: int,
    pending: Optional[FrozenSet[str]] = None,
) -> Tuple[TransactionOutcome, FrozenSet[str]]:
    """
    Outcome of one transaction from its two packet codes.

    pending is None for a normal transaction, otherwise the directions whose
    packets failed CRC on the previous attempt of this transaction.
    Returns the outcome and the directions that failed CRC this time.

    Rules:
      access-address error on either packet        -> fail (close)
      CRC error repeating on a pending direction   -> fail (close)
      normal transaction without CRC errors        -> success
      normal transaction with CRC errors           -> fail (open)
      retransmission of both directions, all clean -> success
      retransmission of one direction              -> fail (open); the healthy
        direction's packet already belongs to the next transaction
    """
    if central == AA_ERROR or peripheral == AA_ERROR:
        return TransactionOutcome.FAIL_CLOSE, frozenset()

    failed = frozenset(
        d for d, code in ((CENTRAL, central), (PERIPHERAL, peripheral)) if code == CRC_ERROR
    )
    if pending is None:
        return (TransactionOutcome.FAIL_OPEN if failed else TransactionOutcome.SUCCESS), failed
    if failed & pending:
        return TransactionOutcome.FAIL_CLOSE, failed
    if pending == BOTH_DIRECTIONS:
        return TransactionOutcome.SUCCESS, failed
    return TransactionOutcome.FAIL_OPEN, failed


def run_connection(scenario: Scenario, run_index: int, protocol: SimProtocol) -> RunTally:
    """One run: intervals_per_run connection events of up to x transactions each"""
    rng = np.random.default_rng(protocol.run_seed(run_index))
    victim = scenario.victim
    ber = scenario.channel.ber
    shape = (protocol.intervals_per_run, victim.x)

    central = sample_packet_outcomes(victim.packet_cp.total_bits, victim.packet_cp.aa_bits, ber, rng, shape).tolist()
    peripheral = sample_packet_outcomes(victim.packet_pc.total_bits, victim.packet_pc.aa_bits, ber, rng, shape).tolist()

    attempts = successes = fail_open = fail_close = retransmissions = deferred = 0
    carry = False   # a failed transaction waits for the next event

    for event in range(protocol.intervals_per_run):
        # pending directions do not survive the end of an event
        pending = None
        for slot in range(victim.x):
            attempts += 1
            if slot == 0 and carry:
                deferred += 1
                retransmissions += 1
            elif pending is not None:
                retransmissions += 1

            outcome, failed = classify_transaction(central[event][slot], peripheral[event][slot], pending)

            if outcome is TransactionOutcome.SUCCESS:
                successes += 1
                pending = None
                carry = False
            elif outcome is TransactionOutcome.FAIL_OPEN:
                fail_open += 1
                pending = failed or None
                carry = bool(failed)
            else:
                fail_close += 1
                carry = True
                break

    return RunTally(
        run_index=run_index,
        attempts=attempts,
        successes=successes,
        fail_open=fail_open,
        fail_close=fail_close,
        retransmission_attempts=retransmissions,
        deferred_retransmissions=deferred,
    )


class TransactionSimulator:
    """Monte Carlo estimate of the transmission success ratio of one connection"""

    def __init__(self, protocol: SimProtocol):
        if protocol.mode != "transaction":
            raise ValueError(f"TransactionSimulator needs mode 'transaction', got '{protocol.mode}'")
        self.protocol = protocol
        self.logger = logging.getLogger(__name__)

    def simulate(self, scenario: Scenario) -> SimResult:
        victim = scenario.victim
        self.logger.info(
            f"Simulating {self.protocol.runs} runs x {self.protocol.intervals_per_run} events "
            f"at ber={scenario.channel.ber:.3e}, x={victim.x}, seed={self.protocol.master_seed}"
        )
        tallies = execute_runs(run_connection, scenario, self.protocol)
        result = SimResult.from_tallies(
            tallies,
            self.protocol,
            bits_per_success=8 * bytes_per_transaction(victim, self.protocol.throughput_mode),
            slot_time_s=victim.ci / 1e6 / victim.x,
        )
        self.logger.info(
            f"Empirical TSR={result.empirical_tsr:.6f} (se {result.tsr_standard_error:.2e}) "
            f"over {result.attempts} attempts, {result.retransmission_attempts} retransmissions"
        )
        return result


def simulate_connection(scenario: Scenario, protocol: SimProtocol) -> SimResult:
    return TransactionSimulator(protocol).simulate(scenario)
