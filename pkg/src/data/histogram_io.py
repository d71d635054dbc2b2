"""Histogram CSV files: header `bin_start_ps,count`, one row per bin."""

from pathlib import Path
from typing import Union

import numpy as np
import pandas as pd

from ..core.histogram import Histogram
from ..utils import StreamValidationError

COLUMNS = ["bin_start_ps", "count"]


def write_histogram_csv(h: Histogram, path: Union[str, Path]) -> Path:
    path = Path(path)
    table = pd.DataFrame({"bin_start_ps": h.edges()[:-1], "count": h.counts})
    table.to_csv(path, index=False, columns=COLUMNS)
    return path


def read_histogram_csv(path: Union[str, Path]) -> Histogram:
    """
    Read a histogram written by write_histogram_csv.

    Raises:
        StreamValidationError: on a wrong header, non-integer values,
            negative counts or unevenly spaced bins
    """
    try:
        table = pd.read_csv(path, dtype=str, keep_default_na=False, skipinitialspace=True)
    except (pd.errors.EmptyDataError, pd.errors.ParserError) as exc:
        raise StreamValidationError(f"unreadable histogram file: {exc}", line=1) from exc
    if list(table.columns) != COLUMNS:
        raise StreamValidationError(f"header must be 'bin_start_ps,count', got {','.join(table.columns)}", line=1)
    if len(table) < 1:
        raise StreamValidationError("histogram file has no bins", line=2)

    table = table.fillna("")
    valid = table["bin_start_ps"].str.fullmatch(r"[+-]?\d+") & table["count"].str.fullmatch(r"\d+")
    if not valid.all():
        row = int(np.flatnonzero(~valid.to_numpy())[0])
        raise StreamValidationError(f"malformed histogram row {','.join(table.iloc[row])!r}", line=row + 2)

    starts = table["bin_start_ps"].astype(np.int64).to_numpy()
    counts = table["count"].astype(np.int64).to_numpy()
    if starts.size == 1:
        raise StreamValidationError("a single-row histogram does not define a bin width", line=2)
    steps = np.diff(starts)
    uneven = np.flatnonzero(steps != steps[0])
    if steps[0] <= 0 or uneven.size:
        row = int(uneven[0]) + 1 if uneven.size else 1
        raise StreamValidationError("bins must be contiguous and of equal width", index=row, line=row + 2)
    return Histogram(origin=int(starts[0]), bin_width=int(steps[0]), counts=counts)
