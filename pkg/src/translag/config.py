"""Pipeline configuration: a flat key = value file plus flag overrides.

One auditable document drives every subcommand; command-line flags override
file values key by key. All values are strings until build_config converts
them, so file entries and flag overrides share one conversion and one set
of error messages.
"""

from dataclasses import dataclass, fields
from pathlib import Path
from typing import Optional, Union

from .analytics import BASIC_LABELS, CLINICAL_LABELS
from .classify import LABELS
from .mesh import DEFAULT_RULES, CategoryRuleSet, MeshCodeError
from .triangle import PlotOptions


class ConfigError(ValueError):
    """A configuration line, value, or combination is invalid."""


@dataclass(frozen=True, slots=True)
class PipelineConfig:
    """Validated settings for every pipeline stage."""

    inputs: tuple[Path, ...] = ()
    mesh_file: Optional[Path] = None
    lexicon: Optional[Path] = None
    pairs: Optional[Path] = None
    out_dir: Path = Path("out")
    year_start: int = 1841
    year_end: int = 2018
    basic_set: frozenset[str] = BASIC_LABELS
    clinical_set: frozenset[str] = CLINICAL_LABELS
    c_prefixes: Optional[tuple[str, ...]] = None
    h_prefixes: Optional[tuple[str, ...]] = None
    a_prefixes: Optional[tuple[str, ...]] = None
    a_exceptions: Optional[tuple[str, ...]] = None
    resolution: int = 100
    r_min: float = 1.0
    r_max: float = 20.0
    width: int = 800
    height: int = 700
    margin: float = 60.0
    normalized_coords: bool = True
    workers: int = 1
    corpus_size: Optional[int] = None

    @property
    def window(self) -> tuple[int, int]:
        return (self.year_start, self.year_end)

    @property
    def rules(self) -> CategoryRuleSet:
        overrides = {
            name: getattr(self, name)
            for name in ("c_prefixes", "h_prefixes", "a_prefixes", "a_exceptions")
            if getattr(self, name) is not None
        }
        if not overrides:
            return DEFAULT_RULES
        merged = {
            name: overrides.get(name, getattr(DEFAULT_RULES, name))
            for name in ("c_prefixes", "h_prefixes", "a_prefixes", "a_exceptions")
        }
        try:
            return CategoryRuleSet(**merged)
        except (MeshCodeError, ValueError) as exc:
            raise ConfigError(f"category rules: {exc}") from None

    @property
    def plot_options(self) -> PlotOptions:
        try:
            return PlotOptions(
                width=self.width,
                height=self.height,
                margin=self.margin,
                r_min=self.r_min,
                r_max=self.r_max,
            )
        except ValueError as exc:
            raise ConfigError(f"plot options: {exc}") from None

    def validate(self) -> None:
        """Check cross-field invariants and that referenced inputs exist."""
        if self.year_start > self.year_end:
            raise ConfigError(
                f"year window is empty: year_start {self.year_start} > year_end {self.year_end}"
            )
        allowed = set(LABELS) - {"Other"}
        for name, labels in (("basic_set", self.basic_set), ("clinical_set", self.clinical_set)):
            if not labels:
                raise ConfigError(f"{name} must not be empty")
            unknown = sorted(set(labels) - allowed)
            if unknown:
                raise ConfigError(f"{name}: unknown labels {', '.join(unknown)}")
        overlap = sorted(self.basic_set & self.clinical_set)
        if overlap:
            raise ConfigError(
                f"basic_set and clinical_set must be disjoint; both contain {', '.join(overlap)}"
            )
        if self.resolution <= 0:
            raise ConfigError(f"resolution must be positive, got {self.resolution}")
        if self.workers < 1:
            raise ConfigError(f"workers must be at least 1, got {self.workers}")
        if self.corpus_size is not None and self.corpus_size <= 0:
            raise ConfigError(f"corpus_size must be positive, got {self.corpus_size}")
        self.rules
        self.plot_options
        for path in self.inputs:
            if not path.is_file():
                raise ConfigError(f"inputs: no such file: {path}")
        for name in ("mesh_file", "lexicon", "pairs"):
            path = getattr(self, name)
            if path is not None and not path.is_file():
                raise ConfigError(f"{name}: no such file: {path}")


# --- conversion --------------------------------------------------------------


def _as_list(value: Union[str, list, tuple]) -> list[str]:
    if isinstance(value, str):
        parts = [part.strip() for part in value.split(",")]
    else:
        parts = [str(part).strip() for part in value]
    return [part for part in parts if part]


def _to_paths(value) -> tuple[Path, ...]:
    return tuple(Path(part) for part in _as_list(value))


def _to_path(value) -> Path:
    text = str(value).strip()
    if not text:
        raise ValueError("empty path")
    return Path(text)


def _to_int(value) -> int:
    return int(str(value).strip())


def _to_float(value) -> float:
    return float(str(value).strip())


def _to_bool(value) -> bool:
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ("true", "yes", "1", "on"):
        return True
    if text in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"expected true/false, got {value!r}")


def _to_labels(value) -> frozenset[str]:
    return frozenset(_as_list(value))


def _to_codes(value) -> tuple[str, ...]:
    return tuple(_as_list(value))


_CONVERTERS = {
    "inputs": _to_paths,
    "mesh_file": _to_path,
    "lexicon": _to_path,
    "pairs": _to_path,
    "out_dir": _to_path,
    "year_start": _to_int,
    "year_end": _to_int,
    "basic_set": _to_labels,
    "clinical_set": _to_labels,
    "c_prefixes": _to_codes,
    "h_prefixes": _to_codes,
    "a_prefixes": _to_codes,
    "a_exceptions": _to_codes,
    "resolution": _to_int,
    "r_min": _to_float,
    "r_max": _to_float,
    "width": _to_int,
    "height": _to_int,
    "margin": _to_float,
    "normalized_coords": _to_bool,
    "workers": _to_int,
    "corpus_size": _to_int,
}

CONFIG_KEYS = tuple(_CONVERTERS)
assert set(CONFIG_KEYS) == {f.name for f in fields(PipelineConfig)}


def parse_config_text(text: str) -> dict[str, str]:
    """Parse key = value lines; '#' comments and blank lines are skipped."""
    values: dict[str, str] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not sep or not key:
            raise ConfigError(f"line {number}: expected key = value")
        if key not in _CONVERTERS:
            raise ConfigError(f"line {number}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {number}: duplicate key {key!r}")
        values[key] = value
    return values


def load_config_file(path: Union[str, Path]) -> dict[str, str]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None
    return parse_config_text(text)


def build_config(
    file_values: Optional[dict] = None, overrides: Optional[dict] = None
) -> PipelineConfig:
    """Convert and combine raw values; overrides win key by key.

    Raises ConfigError naming the offending key on any conversion failure,
    and runs full cross-field validation on the result.
    """
    merged: dict = {}
    for source in (file_values or {}), (overrides or {}):
        for key, value in source.items():
            if value is None:
                continue
            if key not in _CONVERTERS:
                raise ConfigError(f"unknown key {key!r}")
            merged[key] = value
    converted = {}
    for key, value in merged.items():
        try:
            converted[key] = _CONVERTERS[key](value)
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"{key}: {exc}") from None
    config = PipelineConfig(**converted)
    config.validate()
    return config
