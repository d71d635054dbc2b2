"""
Result reports.

A report is an ordered list of entries written twice: a flat `key=value`
machine file whose first line is `schema_version=1`, and a human summary
built from the same formatted strings, so the two never disagree.
"""

import re
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from ..utils import format_value

REPORT_SCHEMA_VERSION = 1
_KEY = re.compile(r"[a-z][a-z0-9_.]*")


class Report:
    """Ordered key/value results of one analysis."""

    def __init__(self, title: str):
        self.title = title
        self._entries: List[Tuple[str, str, str, str]] = []
        self.add("schema_version", REPORT_SCHEMA_VERSION, label="Schema version")

    def add(self, key: str, value: Any, label: Optional[str] = None, unit: str = "") -> "Report":
        if not _KEY.fullmatch(key):
            raise ValueError(f"invalid report key {key!r}")
        if key in self.keys():
            raise ValueError(f"duplicate report key {key!r}")
        self._entries.append((key, format_value(value), label or key.replace("_", " "), unit))
        return self

    def extend(self, values: Dict[str, Any], prefix: str = "") -> "Report":
        for key, value in values.items():
            self.add(f"{prefix}{key}", value)
        return self

    def keys(self) -> List[str]:
        return [entry[0] for entry in self._entries]

    def values(self) -> Dict[str, str]:
        return {key: text for key, text, _, _ in self._entries}

    def machine_text(self) -> str:
        return "".join(f"{key}={text}\n" for key, text, _, _ in self._entries)

    def human_text(self) -> str:
        width = max(len(label) for _, _, label, _ in self._entries)
        lines = [self.title, "=" * len(self.title)]
        for _, text, label, unit in self._entries:
            lines.append(f"{label.ljust(width)} : {text}{' ' + unit if unit else ''}")
        return "\n".join(lines) + "\n"

    def write(self, directory: Union[str, Path], stem: str) -> Tuple[Path, Path]:
        """Write `<stem>.txt` (machine) and `<stem>_summary.txt` (human)."""
        directory = Path(directory)
        machine = directory / f"{stem}.txt"
        human = directory / f"{stem}_summary.txt"
        machine.write_text(self.machine_text())
        human.write_text(self.human_text())
        return machine, human


def parse_report(text: str) -> Dict[str, str]:
    """Inverse of Report.machine_text."""
    values: Dict[str, str] = {}
    for number, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"line {number}: expected key=value")
        values[key] = value
    return values
