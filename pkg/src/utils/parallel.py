"""
joblib fan-out with an optional tqdm progress bar.

Results come back in task order, so nothing downstream depends on n_jobs.
"""

from typing import Any, Callable, Iterable, List, Optional

from joblib import Parallel, delayed
from tqdm import tqdm

from .config import get_settings


def resolve_jobs(n_jobs: Optional[int]) -> int:
    """Explicit n_jobs, or the HBT_N_JOBS setting."""
    return get_settings().n_jobs if n_jobs is None else n_jobs


def run_parallel(
    fn: Callable[..., Any],
    tasks: Iterable[tuple],
    n_jobs: Optional[int] = None,
    desc: Optional[str] = None,
    total: Optional[int] = None,
) -> List[Any]:
    """
    Call fn(*task) for every task.

    Args:
        fn: Picklable callable
        tasks: Argument tuples
        n_jobs: joblib workers (None reads settings)
        desc: Progress bar label; None hides the bar
        total: Number of tasks, for the progress bar

    Returns:
        Results in task order
    """
    jobs = resolve_jobs(n_jobs)
    if desc is not None:
        # disable=None turns the bar off when stderr is not a terminal
        tasks = tqdm(tasks, desc=desc, total=total, disable=None, leave=False)
    if jobs == 1:
        return [fn(*task) for task in tasks]
    return Parallel(n_jobs=jobs)(delayed(fn)(*task) for task in tasks)
