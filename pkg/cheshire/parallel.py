import logging
from typing import Any, Callable, Iterable

from joblib import Parallel, delayed

from cheshire.config import get_settings

logger = logging.getLogger("cheshire.parallel")


def run_ordered(func: Callable[..., Any], argument_sets: Iterable[tuple]) -> list:
    """Call ``func(*args)`` for every argument tuple; results come back in input order."""
    argument_sets = list(argument_sets)
    settings = get_settings()
    if settings.parallel_backend == "sequential" or settings.n_jobs == 1 or len(argument_sets) < 2:
        return [func(*args) for args in argument_sets]
    logger.debug(f"Dispatching {len(argument_sets)} runs: n_jobs={settings.n_jobs}, backend={settings.parallel_backend}")
    return Parallel(n_jobs=settings.n_jobs, backend=settings.parallel_backend)(
        delayed(func)(*args) for args in argument_sets
    )
