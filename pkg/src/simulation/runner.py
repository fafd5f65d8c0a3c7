# src/simulation/runner.py
import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Callable, List

from .protocol import RunTally, SimProtocol

logger = logging.getLogger(__name__)

RunFunction = Callable[[Any, int, SimProtocol], RunTally]


def execute_runs(run_fn: RunFunction, setup: Any, protocol: SimProtocol) -> List[RunTally]:
    """
    Execute protocol.runs independent runs of run_fn(setup, run_index, protocol).
    run_fn must be a module-level function so worker processes can import it.
    The returned list is ordered by run index whatever the worker count.
    """
    indices = range(protocol.runs)
    if protocol.workers == 1 or protocol.runs == 1:
        tallies = [run_fn(setup, i, protocol) for i in indices]
    else:
        logger.info(f"Running {protocol.runs} runs on {protocol.workers} worker processes")
        with ProcessPoolExecutor(max_workers=protocol.workers) as pool:
            chunk = max(1, protocol.runs // (4 * protocol.workers))
            tallies = list(pool.map(run_fn, [setup] * protocol.runs, indices, [protocol] * protocol.runs,
                                    chunksize=chunk))
    return sorted(tallies, key=lambda t: t.run_index)
