"""Run configuration: one YAML document with a section per subsystem.

Every key is optional; omitted keys take the defaults below (three
microgrids, storages of 200 and 250 kWh on the first two, ramp 10% of
capacity, floor 30%, start at 50%).
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import yaml

from .environment import DEFAULT_DAY_SEED, load_timeseries, synth_day
from .errors import ConfigError, InvalidInputError
from .learner import LearnerParams, ScalarizationSpec
from .model import (DEFAULT_PRICE_GRID, EconomicParams, MicrogridSpec, StorageSpec,
                    SystemConfig, default_system)

SECTIONS = ("system", "economics", "microgrids", "learner", "scalarization", "sweep", "data", "output")


@dataclass(frozen=True)
class RunConfig:
    system: SystemConfig = field(default_factory=default_system)
    learner: LearnerParams = field(default_factory=LearnerParams)
    scalarization: ScalarizationSpec = field(default_factory=ScalarizationSpec)
    grid: int = 5
    workers: int = 1
    data_path: Optional[str] = None
    synth_seed: int = DEFAULT_DAY_SEED
    out_dir: str = "out"

    def load_day(self):
        if self.data_path:
            return load_timeseries(self.data_path)
        return synth_day(self.synth_seed, self.system)


def _section(doc, name, kind=dict):
    value = doc.get(name)
    if value is None:
        return kind()
    if not isinstance(value, kind):
        raise ConfigError(name, f"expected a {'mapping' if kind is dict else 'list'}")
    return value


def _build(cls, section, values, **extra):
    known = {f.name for f in dataclasses.fields(cls)}
    for key in values:
        if key not in known or key in extra:
            raise ConfigError(f"{section}.{key}", "unknown key")
    try:
        return cls(**{**values, **extra})
    except InvalidInputError as exc:
        raise ConfigError(section, str(exc)) from None
    except TypeError as exc:
        raise ConfigError(section, str(exc)) from None


def _storage(raw, where):
    if not isinstance(raw, dict) or "capacity_max" not in raw:
        raise ConfigError(where, "storage needs at least capacity_max")
    allowed = {"capacity_max", "capacity_min", "ramp_max", "initial_level"}
    for key in raw:
        if key not in allowed:
            raise ConfigError(f"{where}.{key}", "unknown key")
    cap = float(raw["capacity_max"])
    try:
        return StorageSpec(
            capacity_max=cap,
            capacity_min=float(raw.get("capacity_min", 0.3 * cap)),
            ramp_max=float(raw.get("ramp_max", 0.1 * cap)),
            initial_level=float(raw.get("initial_level", 0.5 * cap)),
        )
    except (InvalidInputError, TypeError, ValueError) as exc:
        raise ConfigError(where, str(exc)) from None


def _microgrids(items):
    if not items:
        return default_system().microgrids
    out = []
    for i, raw in enumerate(items):
        where = f"microgrids[{i}]"
        if not isinstance(raw, dict):
            raise ConfigError(where, "expected a mapping")
        for key in raw:
            if key not in ("id", "storage", "omega", "baseload"):
                raise ConfigError(f"{where}.{key}", "unknown key")
        storage = _storage(raw["storage"], f"{where}.storage") if raw.get("storage") else None
        try:
            out.append(MicrogridSpec(
                id=int(raw.get("id", i + 1)),
                storage=storage,
                omega=raw.get("omega", 6.0),
                baseload=str(raw.get("baseload", "")),
            ))
        except (InvalidInputError, TypeError, ValueError) as exc:
            raise ConfigError(where, str(exc)) from None
    return tuple(out)


def config_from_dict(doc, base_dir=None):
    """Validate a parsed document and build a ``RunConfig``."""
    doc = doc or {}
    if not isinstance(doc, dict):
        raise ConfigError("<root>", "expected a mapping of sections")
    for key in doc:
        if key not in SECTIONS:
            raise ConfigError(key, f"unknown section; expected one of {', '.join(SECTIONS)}")

    econ = _build(EconomicParams, "economics", _section(doc, "economics"))
    sysraw = dict(_section(doc, "system"))
    sysraw.setdefault("price_grid", DEFAULT_PRICE_GRID)
    system = _build(SystemConfig, "system", sysraw,
                    microgrids=_microgrids(_section(doc, "microgrids", list)), economics=econ)
    learner = _build(LearnerParams, "learner", _section(doc, "learner"))
    scal_raw = dict(_section(doc, "scalarization"))
    if "weights" in scal_raw:
        scal_raw["weights"] = tuple(scal_raw["weights"])
    scal = _build(ScalarizationSpec, "scalarization", scal_raw)

    sweep = _section(doc, "sweep")
    for key in sweep:
        if key not in ("grid", "workers"):
            raise ConfigError(f"sweep.{key}", "unknown key")
    grid = sweep.get("grid", 5)
    if not isinstance(grid, int) or grid < 1:
        raise ConfigError("sweep.grid", f"must be an integer >= 1, got {grid!r}")
    workers = sweep.get("workers", 1)
    if not isinstance(workers, int) or workers < 1:
        raise ConfigError("sweep.workers", f"must be an integer >= 1, got {workers!r}")

    data = _section(doc, "data")
    for key in data:
        if key not in ("path", "synth_seed"):
            raise ConfigError(f"data.{key}", "unknown key")
    path = data.get("path")
    if path is not None and base_dir is not None and not Path(path).is_absolute():
        path = str(Path(base_dir) / path)
    seed = data.get("synth_seed", DEFAULT_DAY_SEED)
    if not isinstance(seed, int) or seed < 0:
        raise ConfigError("data.synth_seed", f"must be a non-negative integer, got {seed!r}")

    out = _section(doc, "output")
    for key in out:
        if key != "dir":
            raise ConfigError(f"output.{key}", "unknown key")
    return RunConfig(system, learner, scal, grid, workers, path, seed, str(out.get("dir", "out")))


def load_config(path):
    """Parse a YAML config file. ``OSError`` propagates for missing files."""
    path = Path(path)
    text = path.read_text()
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(str(path), f"not valid YAML: {exc}") from None
    return config_from_dict(doc, base_dir=path.parent)
