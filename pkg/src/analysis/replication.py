"""Seeded replication studies."""

from typing import Any, Callable, Iterable, List, Optional, Union

from ..core.rng import RngSeed
from ..utils import run_parallel


def replicate(
    fn: Callable[[RngSeed], Any],
    seeds: Iterable[Union[int, RngSeed]],
    n_jobs: Optional[int] = None,
    desc: Optional[str] = "Replications",
) -> List[Any]:
    """
    Run fn once per seed, in parallel, and return the results in seed order.

    fn must be picklable (a module-level function or functools.partial).
    """
    seeds = [s if isinstance(s, RngSeed) else RngSeed(int(s)) for s in seeds]
    return run_parallel(fn, [(s,) for s in seeds], n_jobs=n_jobs, desc=desc, total=len(seeds))
