"""
Run configuration: YAML files validated by pydantic models.

Errors are reported as ConfigError carrying the dotted key and the line
number in the user's YAML, taken from the yaml.compose node marks.
"""

import math
import re
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from ..core.timebase import seconds_to_ps
from ..detection.specs import CrosstalkSpec, DetectorSpec
from ..sources.specs import CwEmitterSpec, LaserPulsedSpec, QdPulsedSpec, SourceSpec
from ..utils import ConfigError, get_logger

logger = get_logger()

SCHEMA_VERSION = 1
PRESET_DIR = Path(__file__).resolve().parents[2] / "config" / "presets"

# Unit suffixes a key may carry; anything else ending in one of these is a mismatch
UNIT_SUFFIXES = ("ps", "s", "hz", "nm")
_FOREIGN_SUFFIXES = ("fs", "ns", "us", "ms", "khz", "mhz", "ghz", "um", "mm", "min")
_NUMBER_WITH_UNIT = re.compile(r"^\s*[-+]?(\d+\.?\d*|\.\d+)([eE][-+]?\d+)?\s*[a-zA-Zµ]+\s*$")


class _ConfigModel(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class DetectorsConfig(_ConfigModel):
    a: DetectorSpec = Field(default_factory=DetectorSpec)
    b: DetectorSpec = Field(default_factory=DetectorSpec)


class AcquisitionConfig(_ConfigModel):
    """Exactly one of n_pulses and duration_s."""

    n_pulses: Optional[int] = Field(default=None, gt=0)
    duration_s: Optional[float] = Field(default=None, gt=0)
    cable_delay_ps: int = Field(default=1000, ge=0, description="Stop-channel cable delay (lifetime runs)")
    trigger_jitter_fwhm_ps: float = Field(default=0.0, ge=0)

    @model_validator(mode="after")
    def _one_extent(self) -> "AcquisitionConfig":
        if (self.n_pulses is None) == (self.duration_s is None):
            raise ValueError("give exactly one of n_pulses or duration_s")
        return self

    @property
    def duration_ps(self) -> Optional[int]:
        return None if self.duration_s is None else seconds_to_ps(self.duration_s)


class AnalysisConfig(_ConfigModel):
    bin_width_ps: int = Field(default=550, gt=0)
    half_window_ps: int = Field(default=77_000, gt=0)
    peak_window_ps: int = Field(default=3000, gt=0)
    n_side_peaks: int = Field(default=6, ge=2)
    recenter: bool = False
    crosstalk_bin_width_ps: int = Field(default=550, gt=0)
    crosstalk_half_window_ps: int = Field(default=77_000, gt=0)
    fold_bin_width_ps: int = Field(default=50, gt=0)
    fold_half_width_ps: int = Field(default=5500, gt=0)
    lifetime_bin_width_ps: int = Field(default=4, gt=0)
    lifetime_range_ps: int = Field(default=12_000, gt=0)
    irf_n_pulses: Optional[int] = Field(default=None, gt=0)


class OutputConfig(_ConfigModel):
    directory: str = "results"


class RunConfig(_ConfigModel):
    """One simulated acquisition and the analysis applied to it."""

    schema_version: Literal[1] = SCHEMA_VERSION
    measurement: Literal["hbt", "lifetime"] = "hbt"
    source: SourceSpec
    detectors: DetectorsConfig = Field(default_factory=DetectorsConfig)
    crosstalk: CrosstalkSpec = Field(default_factory=CrosstalkSpec)
    acquisition: AcquisitionConfig
    analysis: AnalysisConfig = Field(default_factory=AnalysisConfig)
    seed: int = Field(ge=0, lt=2**64)
    output: OutputConfig = Field(default_factory=OutputConfig)


# -- YAML plumbing ----------------------------------------------------------

KeyPath = Tuple[Union[str, int], ...]


def _node_lines(node, path: KeyPath = (), lines: Optional[Dict[KeyPath, int]] = None) -> Dict[KeyPath, int]:
    """Map every key path in a composed YAML tree to its 1-based line."""
    if lines is None:
        lines = {}
    lines[path] = node.start_mark.line + 1
    if isinstance(node, yaml.MappingNode):
        for key_node, value_node in node.value:
            key_path = path + (key_node.value,)
            _node_lines(value_node, key_path, lines)
            lines[key_path] = key_node.start_mark.line + 1
    elif isinstance(node, yaml.SequenceNode):
        for index, item in enumerate(node.value):
            _node_lines(item, path + (index,), lines)
    return lines


def _line_for(lines: Dict[KeyPath, int], path: KeyPath) -> Optional[int]:
    while path:
        if path in lines:
            return lines[path]
        path = path[:-1]
    return None


def _dotted(path: KeyPath) -> str:
    return ".".join(str(part) for part in path)


def _walk(data: Any, path: KeyPath = ()):
    yield path, data
    if isinstance(data, dict):
        for key, value in data.items():
            yield from _walk(value, path + (key,))
    elif isinstance(data, list):
        for index, value in enumerate(data):
            yield from _walk(value, path + (index,))


def _deep_merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    """Recursive merge; a mapping whose `kind` changes replaces the one below wholesale."""
    merged = dict(base)
    for key, value in override.items():
        below = merged.get(key)
        if isinstance(below, dict) and isinstance(value, dict) and value.get("kind", below.get("kind")) == below.get("kind"):
            merged[key] = _deep_merge(below, value)
        else:
            merged[key] = value
    return merged


def _unit_fields() -> List[str]:
    models = [
        RunConfig,
        DetectorsConfig,
        AcquisitionConfig,
        AnalysisConfig,
        OutputConfig,
        DetectorSpec,
        CrosstalkSpec,
        QdPulsedSpec,
        LaserPulsedSpec,
        CwEmitterSpec,
    ]
    names = {name for model in models for name in model.model_fields}
    return sorted(n for n in names if n.rsplit("_", 1)[-1] in UNIT_SUFFIXES)


def _unit_hint(key: str) -> Optional[str]:
    """Suffixed field name the user probably meant by `key`, if any."""
    stem = key
    head, _, tail = key.rpartition("_")
    if head and tail in _FOREIGN_SUFFIXES + UNIT_SUFFIXES:
        stem = head
    for name in _unit_fields():
        if name != key and name.rsplit("_", 1)[0] == stem:
            return name
    return None


def _check_values(data: Dict[str, Any], lines: Dict[KeyPath, int]):
    for path, value in _walk(data):
        if not path:
            continue
        key = str(path[-1])
        if isinstance(value, float) and not math.isfinite(value):
            raise ConfigError(f"non-finite value {value}", key=_dotted(path), line=_line_for(lines, path))
        if isinstance(value, str) and _NUMBER_WITH_UNIT.match(value):
            unit = key.rsplit("_", 1)[-1]
            where = f"in ps/hz/s/nm as the key name says ({key})" if unit in UNIT_SUFFIXES else "as a bare number"
            raise ConfigError(
                f"unit-suffix mismatch: value {value!r} carries a unit; give it {where}",
                key=_dotted(path),
                line=_line_for(lines, path),
            )


def _model_path(data: Any, loc: Tuple) -> KeyPath:
    """Drop the union tags pydantic inserts so loc matches the YAML keys."""
    path: List[Union[str, int]] = []
    node = data
    for part in loc:
        if isinstance(node, dict) and part in node:
            path.append(part)
            node = node[part]
        elif isinstance(node, list) and isinstance(part, int) and part < len(node):
            path.append(part)
            node = node[part]
    return tuple(path)


def _raise_validation(exc: ValidationError, data: Dict[str, Any], lines: Dict[KeyPath, int]):
    error = exc.errors()[0]
    loc = tuple(error["loc"])
    kind = error["type"]
    if kind == "extra_forbidden":
        key = str(loc[-1])
        path = _model_path(data, loc)
        hint = _unit_hint(key)
        message = f"unknown key '{key}'"
        if hint:
            message += f"; did you mean '{hint}'? (units go in the key name)"
        raise ConfigError(message, key=_dotted(path), line=_line_for(lines, path))
    if kind == "missing":
        parent = _model_path(data, loc[:-1])
        key = _dotted(parent + (loc[-1],))
        raise ConfigError(f"missing key '{loc[-1]}'", key=key, line=_line_for(lines, parent))
    path = _model_path(data, loc)
    raise ConfigError(error["msg"], key=_dotted(path) or None, line=_line_for(lines, path))


def load_preset(name: str, preset_dir: Optional[Path] = None) -> Dict[str, Any]:
    """Raw mapping of a named preset from config/presets/<name>.yaml."""
    directory = Path(preset_dir) if preset_dir is not None else PRESET_DIR
    if not re.fullmatch(r"[A-Za-z0-9_-]+", str(name)):
        raise ConfigError(f"invalid preset name {name!r}", key="preset")
    path = directory / f"{name}.yaml"
    if not path.exists():
        known = sorted(p.stem for p in directory.glob("*.yaml"))
        raise ConfigError(f"unknown preset '{name}' (known: {', '.join(known) or 'none'})", key="preset")
    with open(path, "r") as f:
        data = yaml.safe_load(f) or {}
    if not isinstance(data, dict):
        raise ConfigError(f"preset '{name}' is not a mapping", key="preset")
    return data


def parse_config(text: str, preset_dir: Optional[Path] = None) -> RunConfig:
    """
    Parse and validate a YAML run configuration.

    A top-level `preset: <name>` key loads that preset first; every key the
    text gives overrides it.

    Raises:
        ConfigError: on YAML syntax errors, unknown or missing keys,
            unit-suffix mismatches, non-finite numbers and invalid values
    """
    try:
        root = yaml.compose(text)
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        line = mark.line + 1 if mark is not None else None
        problem = getattr(exc, "problem", None) or str(exc)
        raise ConfigError(f"YAML syntax error: {problem}", line=line) from exc

    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError("run configuration must be a mapping", line=1)
    lines = _node_lines(root) if root is not None else {}

    _check_values(data, lines)
    preset = data.pop("preset", None)
    if preset is not None:
        base = load_preset(preset, preset_dir)
        _check_values(base, {})
        given = data.get("acquisition")
        if isinstance(given, dict) and isinstance(base.get("acquisition"), dict):
            if {"n_pulses", "duration_s"} & set(given):
                base["acquisition"] = {
                    k: v for k, v in base["acquisition"].items() if k not in ("n_pulses", "duration_s")
                }
        data = _deep_merge(base, data)
        logger.debug(f"Merged preset '{preset}' beneath the given keys")

    try:
        config = RunConfig.model_validate(data)
    except ValidationError as exc:
        _raise_validation(exc, data, lines)
    return config


def load_run_config(path: Union[str, Path]) -> RunConfig:
    """
    Read and parse a run configuration file.

    Raises:
        OSError: if the file cannot be read
        ConfigError: if it does not validate
    """
    with open(path, "r") as f:
        text = f.read()
    config = parse_config(text)
    logger.info(f"Loaded run config {path} ({config.measurement}, source {config.source.kind}, seed {config.seed})")
    return config
