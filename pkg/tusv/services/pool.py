"""Process-pool fan-out for independent per-form tasks."""

import logging
from multiprocessing import Pool
from typing import Callable, Sequence, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

DEFAULT_CHUNKSIZE = 8


def run_tasks(
    func: Callable[[T], R], tasks: Sequence[T], jobs: int, chunksize: int = DEFAULT_CHUNKSIZE
) -> list[R]:
    """
    Apply func to every task, in task order.

    jobs == 1 runs inline. func must be a module-level function and tasks
    plain picklable values; the caller is the only writer of the results.
    """
    if jobs < 1:
        raise ValueError(f"jobs must be >= 1, got {jobs}")
    if jobs == 1 or len(tasks) <= 1:
        return [func(task) for task in tasks]
    workers = min(jobs, len(tasks))
    logger.debug(f"Fanning {len(tasks)} tasks over {workers} workers")
    with Pool(workers) as pool:
        return list(pool.imap(func, tasks, chunksize))
