"""Run configuration: a flat JSON document plus command-line overrides.

Example document (every key optional)::

    {
      "model":  {"N": 1000, "delta": 0.8, "h": 1.2, "J": 1.0, "grid": "periodic"},
      "sweep":  {"h_lo": 0.0, "h_hi": 3.0, "h_step": 0.01},
      "scan":   {"nb": 2, "budget": 10000000, "sample_count": 1000000, "seed": 0, "echo_threshold": 3},
      "stats":  {"bins_energy": 50, "bins_concurrence": 10000, "tol_ent": 1e-12},
      "oracle": {"N": 8, "nb_list": [1, 3], "tol": 1e-8, "rule": "odd-periodic"},
      "output_dir": "out",
      "workers": 1
    }
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Mapping, Optional

from .errors import ConfigError
from .spectrum import Grid, ModelParams


@dataclass
class ModelSection:
    N: int = 1000
    delta: float = 0.8
    h: float = 1.2
    J: float = 1.0
    grid: str = "periodic"


@dataclass
class SweepSection:
    h_lo: float = 0.0
    h_hi: float = 3.0
    h_step: float = 0.01


@dataclass
class ScanSection:
    nb: int = 2
    budget: int = 10**7
    sample_count: int = 10**6
    seed: int = 0
    echo_threshold: int = 3


@dataclass
class StatsSection:
    bins_energy: int = 50
    bins_concurrence: int = 10000
    tol_ent: float = 1e-12


@dataclass
class OracleSection:
    N: int = 8
    nb_list: list = field(default_factory=lambda: [1, 3])
    tol: float = 1e-8
    rule: str = "odd-periodic"


SECTIONS = {"model": ModelSection, "sweep": SweepSection, "scan": ScanSection,
            "stats": StatsSection, "oracle": OracleSection}


@dataclass
class RunConfig:
    model: ModelSection = field(default_factory=ModelSection)
    sweep: SweepSection = field(default_factory=SweepSection)
    scan: ScanSection = field(default_factory=ScanSection)
    stats: StatsSection = field(default_factory=StatsSection)
    oracle: OracleSection = field(default_factory=OracleSection)
    output_dir: str = "out"
    workers: int = 1

    def params(self, **changes) -> ModelParams:
        m = self.model
        values = dict(N=m.N, delta=m.delta, h=m.h, J=m.J, grid=m.grid)
        values.update(changes)
        try:
            return ModelParams(**values)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def to_dict(self) -> dict:
        return asdict(self)

    def validate(self) -> "RunConfig":
        self.params()
        if not 4 <= self.oracle.N <= 12:
            raise ConfigError(f"oracle.N must lie in [4, 12], got {self.oracle.N}")
        if not self.sweep.h_step > 0:
            raise ConfigError("sweep.h_step must be > 0")
        if not self.sweep.h_hi > self.sweep.h_lo:
            raise ConfigError("sweep.h_hi must exceed sweep.h_lo")
        s = self.scan
        if s.nb < 0 or s.nb > self.model.N:
            raise ConfigError(f"scan.nb must lie in [0, N], got {s.nb}")
        if s.budget < 1 or s.sample_count < 1:
            raise ConfigError("scan.budget and scan.sample_count must be >= 1")
        if self.stats.bins_energy < 1 or self.stats.bins_concurrence < 1:
            raise ConfigError("histogram bin counts must be >= 1")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if self.oracle.rule not in ("odd-periodic", "physical"):
            raise ConfigError(f"oracle.rule must be 'odd-periodic' or 'physical', got {self.oracle.rule!r}")
        try:
            Grid.parse(self.model.grid)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        return self


def _coerce(section: str, name: str, default: Any, value: Any) -> Any:
    if isinstance(default, bool) or value is None:
        return value
    try:
        if isinstance(default, int) and not isinstance(default, bool):
            if isinstance(value, float) and not value.is_integer():
                raise ValueError
            return int(value)
        if isinstance(default, float):
            return float(value)
        if isinstance(default, list):
            return [int(v) for v in value]
        return str(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{section}.{name}: cannot use {value!r}") from None


def _apply(cfg: RunConfig, doc: Mapping[str, Any]) -> RunConfig:
    for key, value in doc.items():
        if key in SECTIONS:
            if not isinstance(value, Mapping):
                raise ConfigError(f"section {key!r} must be an object")
            section = getattr(cfg, key)
            known = {f.name: getattr(section, f.name) for f in fields(section)}
            for name, v in value.items():
                if name not in known:
                    raise ConfigError(f"unknown key {key}.{name}")
                setattr(section, name, _coerce(key, name, known[name], v))
        elif key == "output_dir":
            cfg.output_dir = str(value)
        elif key == "workers":
            cfg.workers = _coerce("", "workers", 1, value)
        else:
            raise ConfigError(f"unknown top-level key {key!r}")
    return cfg


def parse_config(text: Optional[str] = None, overrides: Optional[Mapping[str, Any]] = None) -> RunConfig:
    """Build a RunConfig from JSON text and dotted-key overrides.

    ``overrides`` maps "section.key" (or "output_dir"/"workers") to values;
    None values are ignored so argparse namespaces can be passed straight in.
    """
    cfg = RunConfig()
    if text is not None and text.strip():
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
        if not isinstance(doc, Mapping):
            raise ConfigError("line 1: config document must be a JSON object")
        _apply(cfg, doc)
    nested: dict[str, Any] = {}
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if "." in key:
            section, name = key.split(".", 1)
            nested.setdefault(section, {})[name] = value
        else:
            nested[key] = value
    _apply(cfg, nested)
    return cfg.validate()


def load_config(path: Optional[str | Path], overrides: Optional[Mapping[str, Any]] = None) -> RunConfig:
    text = None
    if path is not None:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text, overrides)
