import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Sequence, TypeVar

T = TypeVar("T")

logger = logging.getLogger(__name__)


def run_batch(tasks: Sequence[Callable[[], T]], threads: int = 1) -> List[T]:
    """Run independent tasks; results always come back in task order."""
    if threads <= 1 or len(tasks) <= 1:
        return [task() for task in tasks]
    logger.info("Running %d tasks on %d threads", len(tasks), threads)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(task) for task in tasks]
        return [f.result() for f in futures]
