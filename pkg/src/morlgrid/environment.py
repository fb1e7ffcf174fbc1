"""Day-ahead multi-microgrid MDP.

State is (hour of day, aggregate state-of-charge bin); an action picks one
of the price levels together with a charge/discharge/idle command applied to
every storage at its full ramp rate.
"""
from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import model
from .errors import DataError, InvalidInputError
from .model import HOURS, ObjectiveVector, SystemConfig

DEFAULT_DAY_SEED = 2019


class StorageCommand(str, enum.Enum):
    CHARGE = "charge"
    DISCHARGE = "discharge"
    IDLE = "idle"


COMMANDS = (StorageCommand.CHARGE, StorageCommand.DISCHARGE, StorageCommand.IDLE)
_DIRECTION = {StorageCommand.CHARGE: 1.0, StorageCommand.DISCHARGE: -1.0, StorageCommand.IDLE: 0.0}


@dataclass(frozen=True)
class EnvState:
    """Tabular state plus the physical storage levels it was binned from."""

    tod: int
    soc_level: int
    levels: tuple = ()

    def index(self, n_soc_levels=8):
        return self.tod * n_soc_levels + self.soc_level


@dataclass(frozen=True)
class EnvAction:
    price_level: int
    storage_cmd: StorageCommand

    def index(self):
        return self.price_level * len(COMMANDS) + COMMANDS.index(self.storage_cmd)


def action_space(n_prices=8):
    """All (price level, storage command) pairs, price-major."""
    return [EnvAction(p, c) for p in range(n_prices) for c in COMMANDS]


def n_states(config):
    return HOURS * config.soc_levels


def n_actions(config):
    return len(config.price_grid) * len(COMMANDS)


def state_from_index(index, n_soc_levels=8):
    tod, soc = divmod(int(index), n_soc_levels)
    return EnvState(tod, soc)


@dataclass(frozen=True)
class TimeSeriesDay:
    """Hourly baseload and renewable output, one row per microgrid name."""

    names: tuple
    baseload: np.ndarray
    renewable: np.ndarray

    def __post_init__(self):
        base = np.asarray(self.baseload, dtype=float)
        ren = np.asarray(self.renewable, dtype=float)
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "baseload", base)
        object.__setattr__(self, "renewable", ren)
        shape = (len(self.names), HOURS)
        for label, arr in (("baseload", base), ("renewable", ren)):
            if arr.shape != shape:
                raise DataError(f"{label} has shape {arr.shape}, expected {shape}")
            bad = np.argwhere(~(arr >= 0))
            if len(bad):
                i, h = bad[0]
                raise DataError(f"negative or missing {label} value {arr[i, h]}",
                                row=int(h), column=f"{self.names[i]}_{label}")

    def series(self, name):
        try:
            i = self.names.index(name)
        except ValueError:
            raise DataError(f"no time series named {name!r}; have {list(self.names)}") from None
        return self.baseload[i], self.renewable[i]


@dataclass(frozen=True)
class StepInfo:
    lam: float
    demands: tuple
    renewable: tuple
    grid: tuple
    grid_total: float
    delta_s: tuple
    levels: tuple
    penalty: float


@dataclass(frozen=True)
class EnvTransition:
    next_state: EnvState
    reward: ObjectiveVector
    info: StepInfo
    terminal: bool


def soc_to_level(levels, specs, low=0.3, high=1.0, n_levels=8):
    """Bin the aggregate state of charge (total stored / total capacity)."""
    if len(levels) != len(specs):
        raise InvalidInputError(f"{len(levels)} levels for {len(specs)} storages")
    for lv, sp in zip(levels, specs):
        if not sp.capacity_min <= lv <= sp.capacity_max:
            raise InvalidInputError(f"level {lv} outside [{sp.capacity_min}, {sp.capacity_max}]")
    if not specs:
        return 0
    frac = sum(levels) / sum(sp.capacity_max for sp in specs)
    k = math.floor((frac - low) / ((high - low) / n_levels))
    return min(max(k, 0), n_levels - 1)


def initial_state(config):
    levels = tuple(sp.initial_level for sp in config.storages)
    soc = soc_to_level(levels, config.storages, config.soc_low, config.soc_high, config.soc_levels)
    return EnvState(0, soc, levels)


def _validate_state(state, config):
    if not 0 <= state.tod < HOURS:
        raise InvalidInputError(f"tod must be in 0..23, got {state.tod}")
    if not 0 <= state.soc_level < config.soc_levels:
        raise InvalidInputError(f"soc_level must be in 0..{config.soc_levels - 1}, got {state.soc_level}")
    if len(state.levels) != len(config.storages):
        raise InvalidInputError(
            f"state carries {len(state.levels)} storage levels, config has {len(config.storages)} storages")


def step(state, action, day, config: SystemConfig):
    """Advance one hour: set the price, move every storage, emit the reward vector."""
    _validate_state(state, config)
    if not 0 <= action.price_level < len(config.price_grid):
        raise InvalidInputError(f"price level {action.price_level} out of range")
    econ = config.economics
    hour = state.tod
    lam = config.price_grid[action.price_level]
    direction = _DIRECTION[StorageCommand(action.storage_cmd)]

    demands, renewables, grids, deltas, new_levels = [], [], [], [], []
    levels = iter(state.levels)
    for mg in config.microgrids:
        base, ren = day.series(mg.baseload)
        p_d = model.demand(lam, float(base[hour]), econ)
        p_r = float(ren[hour])
        delta = 0.0
        if mg.storage is not None:
            sp = mg.storage
            prev = next(levels)
            new = min(max(prev + direction * sp.ramp_max, sp.capacity_min), sp.capacity_max)
            # rounding in prev + ramp can overshoot the ramp by an ulp
            while abs(new - prev) > sp.ramp_max:
                new = math.nextafter(new, prev)
            delta = new - prev
            new_levels.append(new)
        demands.append(p_d)
        renewables.append(p_r)
        deltas.append(delta)
        grids.append(model.grid_power(p_d, p_r, delta))

    p_g = float(sum(grids))
    penalty = model.constraint_penalty(new_levels, state.levels, config.storages)
    reward = model.objective_vector(
        model.welfare(demands, lam, config.microgrids, hour, econ),
        model.stored_energy_objective(new_levels),
        model.grid_profit(lam, p_g, econ),
        econ.penalty_weight * penalty,
    )
    soc = soc_to_level(new_levels, config.storages, config.soc_low, config.soc_high, config.soc_levels)
    terminal = hour + 1 == HOURS
    info = StepInfo(lam, tuple(demands), tuple(renewables), tuple(grids), p_g,
                    tuple(deltas), tuple(new_levels), penalty)
    return EnvTransition(EnvState((hour + 1) % HOURS, soc, tuple(new_levels)), reward, info, terminal)


class TransitionCache:
    """Memoized dynamics for one (config, day) pair, keyed on physical state.

    Rewards are stored in maximization form ``(w, s, g, -a)``. The reachable
    set is small, so training touches ``step`` only a few thousand times.
    """

    def __init__(self, config, day):
        self.config = config
        self.day = day
        self.actions = action_space(len(config.price_grid))
        self.n_soc = config.soc_levels
        self._cache = {}
        for mg in config.microgrids:
            day.series(mg.baseload)

    def start(self):
        st = initial_state(self.config)
        return st.tod, st.levels, st.index(self.n_soc)

    def get(self, tod, levels, action_index):
        key = (tod, levels, action_index)
        hit = self._cache.get(key)
        if hit is None:
            soc = soc_to_level(levels, self.config.storages, self.config.soc_low,
                               self.config.soc_high, self.config.soc_levels)
            tr = step(EnvState(tod, soc, levels), self.actions[action_index], self.day, self.config)
            ns = tr.next_state
            hit = (ns.tod, ns.levels, ns.index(self.n_soc), tr.reward.maximization(), tr.terminal)
            self._cache[key] = hit
        return hit


@dataclass
class Trajectory:
    """One simulated day; row ``t`` describes the step taken at hour ``t``."""

    hours: np.ndarray
    price_levels: np.ndarray
    prices: np.ndarray
    commands: list
    demands: np.ndarray
    renewable: np.ndarray
    grid: np.ndarray
    delta_s: np.ndarray
    levels: np.ndarray
    soc_fraction: np.ndarray
    soc_levels: np.ndarray
    rewards: np.ndarray
    penalties: np.ndarray

    def __len__(self):
        return len(self.hours)


def _policy_action(policy, state, config, actions):
    if callable(policy):
        act = policy(state)
        return act if isinstance(act, EnvAction) else actions[int(act)]
    return actions[int(policy[state.index(config.soc_levels)])]


def rollout(policy, day, config):
    """Play one day from the initial state; returns (episode return, trajectory).

    ``policy`` is either a sequence indexed by flat state index holding action
    indices, or a callable mapping ``EnvState`` to an ``EnvAction``/index.
    """
    if not callable(policy) and len(policy) != n_states(config):
        raise InvalidInputError(f"policy covers {len(policy)} states, expected {n_states(config)}")
    actions = action_space(len(config.price_grid))
    state = initial_state(config)
    total = ObjectiveVector()
    cap = np.array([sp.capacity_max for sp in config.storages])
    rows = []
    for _ in range(HOURS):
        act = _policy_action(policy, state, config, actions)
        tr = step(state, act, day, config)
        total = total + tr.reward
        rows.append((state.tod, act, tr))
        state = tr.next_state
        if tr.terminal:
            break

    def arr(f):
        return np.array([f(a, t) for _, a, t in rows], dtype=float)

    levels = np.array([t.info.levels for _, _, t in rows], dtype=float).reshape(len(rows), len(cap))
    frac = levels.sum(axis=1) / cap.sum() if len(cap) else np.zeros(len(rows))
    traj = Trajectory(
        hours=np.array([h for h, _, _ in rows]),
        price_levels=np.array([a.price_level for _, a, _ in rows]),
        prices=arr(lambda a, t: t.info.lam),
        commands=[a.storage_cmd.value for _, a, _ in rows],
        demands=np.array([t.info.demands for _, _, t in rows]),
        renewable=np.array([t.info.renewable for _, _, t in rows]),
        grid=np.array([t.info.grid for _, _, t in rows]),
        delta_s=np.array([t.info.delta_s for _, _, t in rows]),
        levels=levels,
        soc_fraction=frac,
        soc_levels=np.array([t.next_state.soc_level for _, _, t in rows]),
        rewards=np.array([t.reward.as_tuple() for _, _, t in rows]),
        penalties=arr(lambda a, t: t.info.penalty),
    )
    return total, traj


def synth_day(seed, config):
    """Deterministic synthetic day: evening demand peak, midday solar, no solar at night.

    Values are quantized to what the CSV writer emits so a written file
    reloads to identical numbers.
    """
    rng = np.random.default_rng(seed)
    hours = np.arange(HOURS)
    shape = 0.55 + 0.2 * np.exp(-((hours - 8.0) ** 2) / 4.0) + 0.45 * np.exp(-((hours - 19.0) ** 2) / 6.0)
    sun = np.where((hours > 6) & (hours < 18), np.sin(np.pi * (hours - 6.0) / 12.0), 0.0)
    base_scale = (60.0, 45.0, 35.0)
    solar_scale = (70.0, 50.0, 30.0)
    names, base, ren = [], [], []
    for i, mg in enumerate(config.microgrids):
        b = base_scale[i % 3] * shape * rng.normal(1.0, 0.05, HOURS)
        clouds = rng.uniform(0.6, 1.0)
        r = solar_scale[i % 3] * clouds * sun * rng.normal(1.0, 0.1, HOURS)
        names.append(mg.baseload)
        base.append(_quantize(np.clip(b, 0.0, None)))
        ren.append(_quantize(np.clip(r, 0.0, None)))
    return TimeSeriesDay(tuple(names), np.array(base), np.array(ren))


def _quantize(values):
    return np.array([float(f"{v:.6g}") for v in np.round(values, 3)])


def write_timeseries(day, path):
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        header = ["hour"]
        for name in day.names:
            header += [f"{name}_baseload", f"{name}_renewable"]
        w.writerow(header)
        for h in range(HOURS):
            row = [h]
            for i in range(len(day.names)):
                row += [f"{day.baseload[i, h]:.6g}", f"{day.renewable[i, h]:.6g}"]
            w.writerow(row)
    return path


def load_timeseries(path):
    """Read a ``hour,<mg>_baseload,<mg>_renewable,...`` file with 24 data rows."""
    path = Path(path)
    with path.open(newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    if not rows:
        raise DataError(f"{path}: empty file")
    header = [c.strip() for c in rows[0]]
    if not header or header[0] != "hour":
        raise DataError(f"{path}: first column must be 'hour'", row=0)
    cols = header[1:]
    if not cols or len(cols) % 2:
        raise DataError(f"{path}: expected baseload/renewable column pairs", row=0)
    names = []
    for j in range(0, len(cols), 2):
        b, r = cols[j], cols[j + 1]
        if not b.endswith("_baseload"):
            raise DataError(f"{path}: expected a *_baseload column", row=0, column=b)
        name = b[: -len("_baseload")]
        if r != f"{name}_renewable":
            raise DataError(f"{path}: expected {name}_renewable after {b}", row=0, column=r)
        names.append(name)

    data = rows[1:]
    if len(data) != HOURS:
        raise DataError(f"{path}: series {cols[0]!r} has {len(data)} entries, expected {HOURS}")
    values = np.empty((len(cols), HOURS))
    for i, row in enumerate(data, start=1):
        if len(row) != len(header):
            raise DataError(f"{path}: {len(row)} fields, expected {len(header)}", row=i)
        try:
            hour = int(row[0])
        except ValueError:
            raise DataError(f"{path}: bad hour {row[0]!r}", row=i, column="hour") from None
        if hour != i - 1:
            raise DataError(f"{path}: hours must run 0..23 in order, got {hour}", row=i, column="hour")
        for j, col in enumerate(cols):
            try:
                v = float(row[j + 1])
            except ValueError:
                raise DataError(f"{path}: not a number {row[j + 1]!r}", row=i, column=col) from None
            if not v >= 0 or math.isinf(v):
                raise DataError(f"{path}: value {v} must be finite and >= 0", row=i, column=col)
            values[j, i - 1] = v
    return TimeSeriesDay(tuple(names), values[0::2], values[1::2])


def sample_day_path():
    """Bundled synthetic day (three microgrids, seed 2019)."""
    return Path(__file__).parent / "data" / "sample_day.csv"
