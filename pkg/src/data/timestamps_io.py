"""
Timestamp CSV files.

Format: header `channel,time_ps`, one click per row, integer values,
rows ordered by (time_ps, channel). Within a channel, times must not
decrease.
"""

import re
from pathlib import Path
from typing import List, Optional, Sequence, Union

import numpy as np
import pandas as pd

from ..core.streams import TimestampStream, validate_stream
from ..utils import StreamValidationError, get_logger

logger = get_logger()

COLUMNS = ["channel", "time_ps"]
_INTEGER = r"[+-]?\d+"


def write_timestamps(streams: Sequence[TimestampStream], path: Union[str, Path]) -> Path:
    """Write click streams as one CSV, rows sorted by time then channel."""
    frames = [
        pd.DataFrame({"channel": np.full(len(s), s.channel_id, dtype=np.int64), "time_ps": s.times})
        for s in streams
    ]
    table = pd.concat(frames, ignore_index=True) if frames else pd.DataFrame(columns=COLUMNS)
    table = table.sort_values(["time_ps", "channel"], kind="mergesort")
    path = Path(path)
    table.to_csv(path, index=False, columns=COLUMNS)
    logger.debug(f"Wrote {len(table)} timestamps on {len(streams)} channel(s) to {path}")
    return path


def _parse_error_line(exc: Exception) -> Union[int, None]:
    match = re.search(r"line (\d+)", str(exc))
    return int(match.group(1)) if match else None


def read_timestamps(path: Union[str, Path], channel_ids: Optional[Sequence[int]] = None) -> List[TimestampStream]:
    """
    Read a timestamp CSV into one stream per channel, ordered by channel id.

    A file with only the header gives no streams. A channel that clicked
    zero times has no rows, so pass `channel_ids` to get exactly those streams
    back, in that order, with an empty stream for every listed channel
    without rows. Rows of other channels are still validated.

    Raises:
        StreamValidationError: on a malformed line (with its line number)
            or times that decrease within a channel (with the index)
        OSError: if the file cannot be read
    """
    path = Path(path)
    try:
        table = pd.read_csv(path, dtype=str, keep_default_na=False, skipinitialspace=True)
    except pd.errors.EmptyDataError as exc:
        raise StreamValidationError("missing header 'channel,time_ps'", line=1) from exc
    except pd.errors.ParserError as exc:
        raise StreamValidationError(f"malformed timestamp row: {exc}", line=_parse_error_line(exc)) from exc

    if list(table.columns) != COLUMNS:
        raise StreamValidationError(f"header must be 'channel,time_ps', got {','.join(table.columns)}", line=1)
    if table.empty:
        return _select([], channel_ids)

    table = table.fillna("")
    valid = table["channel"].str.fullmatch(r"\d+") & table["time_ps"].str.fullmatch(_INTEGER)
    if not valid.all():
        row = int(np.flatnonzero(~valid.to_numpy())[0])
        bad = ",".join(table.iloc[row])
        raise StreamValidationError(f"malformed timestamp row {bad!r}", line=row + 2)

    channels = table["channel"].astype(np.int64).to_numpy()
    try:
        times = table["time_ps"].astype(np.int64).to_numpy()
    except OverflowError as exc:
        raise StreamValidationError(f"timestamp outside the int64 ps range: {exc}") from exc
    negative = np.flatnonzero(times < 0)
    if negative.size:
        raise StreamValidationError(f"negative timestamp {times[negative[0]]}", line=int(negative[0]) + 2)

    streams = []
    for channel in np.unique(channels):
        rows = np.flatnonzero(channels == channel)
        report = validate_stream(times[rows])
        if not report.ok:
            index = report.first_violation
            raise StreamValidationError(
                f"channel {channel} times decrease at index {index}",
                index=index,
                line=int(rows[index]) + 2,
            )
        streams.append(TimestampStream(int(channel), times[rows]))
    logger.debug(f"Read {len(times)} timestamps on {len(streams)} channel(s) from {path}")
    return _select(streams, channel_ids)


def _select(streams: List[TimestampStream], channel_ids: Optional[Sequence[int]]) -> List[TimestampStream]:
    if channel_ids is None:
        return streams
    by_id = {s.channel_id: s for s in streams}
    return [by_id.get(int(c), TimestampStream(int(c), np.empty(0, dtype=np.int64))) for c in channel_ids]
