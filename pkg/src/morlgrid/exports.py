"""CSV writers for run outputs and the readers that load them back.

Numbers are written with 6 significant digits.
"""
from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .environment import COMMANDS, action_space
from .errors import DataError

CONVERGENCE_HEADER = ["episode", "scalarized_return", "Fw", "Fs", "Fg", "Fa"]
ARCHIVE_HEADER = ["weight_w", "weight_s", "weight_g", "weight_a", "Fw", "Fs", "Fg", "Fa", "is_fair_point"]
POLICY_HEADER = ["state", "tod", "soc_level", "action", "price_level", "price", "storage_cmd"]


def fmt(x):
    # + 0.0 folds negative zero into "0"
    return f"{float(x) + 0.0:.6g}"


def _write(path, header, rows):
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    return path


def _read(path, expected=None):
    path = Path(path)
    with path.open(newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise DataError(f"{path}: empty file")
    header, body = rows[0], rows[1:]
    if expected is not None and header != expected:
        raise DataError(f"{path}: header {header} != {expected}", row=0)
    return header, body


def write_convergence(log, path):
    rows = ([int(e), fmt(s)] + [fmt(v) for v in r]
            for e, s, r in zip(log.episode, log.scalarized, log.returns))
    return _write(path, CONVERGENCE_HEADER, rows)


def read_convergence(path):
    _, body = _read(path, CONVERGENCE_HEADER)
    arr = np.array([[float(c) for c in row] for row in body]).reshape(-1, len(CONVERGENCE_HEADER))
    return {name: arr[:, i] for i, name in enumerate(CONVERGENCE_HEADER)}


def write_policy(policy, config, path):
    actions = action_space(len(config.price_grid))
    rows = []
    for s, a in enumerate(policy):
        tod, soc = divmod(s, config.soc_levels)
        act = actions[int(a)]
        rows.append([s, tod, soc, int(a), act.price_level,
                     fmt(config.price_grid[act.price_level]), act.storage_cmd.value])
    return _write(path, POLICY_HEADER, rows)


def read_policy(path):
    """Action index per flat state index."""
    _, body = _read(path, POLICY_HEADER)
    policy = np.empty(len(body), dtype=int)
    for i, row in enumerate(body, start=1):
        if int(row[0]) != i - 1:
            raise DataError(f"{path}: states must be listed in order", row=i, column="state")
        policy[i - 1] = int(row[3])
    return policy


def trajectory_header(config):
    names = [mg.baseload for mg in config.microgrids]
    stored = [mg.baseload for mg in config.microgrids if mg.storage is not None]
    header = ["hour", "price_level", "price", "storage_cmd", "soc_fraction", "soc_level"]
    for n in names:
        header += [f"{n}_demand", f"{n}_renewable", f"{n}_grid", f"{n}_delta_s"]
    header += [f"{n}_level" for n in stored]
    return header + ["Fw", "Fs", "Fg", "Fa"]


def write_trajectory(traj, config, path):
    rows = []
    for t in range(len(traj)):
        row = [int(traj.hours[t]), int(traj.price_levels[t]), fmt(traj.prices[t]), traj.commands[t],
               fmt(traj.soc_fraction[t]), int(traj.soc_levels[t])]
        for i in range(len(config.microgrids)):
            row += [fmt(traj.demands[t, i]), fmt(traj.renewable[t, i]),
                    fmt(traj.grid[t, i]), fmt(traj.delta_s[t, i])]
        row += [fmt(v) for v in traj.levels[t]]
        row += [fmt(v) for v in traj.rewards[t]]
        rows.append(row)
    return _write(path, trajectory_header(config), rows)


def read_trajectory(path):
    """Columns by name; ``storage_cmd`` stays a list of strings, the rest are arrays."""
    header, body = _read(path)
    valid = {c.value for c in COMMANDS}
    out = {}
    for j, name in enumerate(header):
        col = [row[j] for row in body]
        if name == "storage_cmd":
            bad = [i for i, c in enumerate(col) if c not in valid]
            if bad:
                raise DataError(f"{path}: unknown storage command {col[bad[0]]!r}",
                                row=bad[0] + 1, column=name)
            out[name] = col
        else:
            out[name] = np.array([float(c) for c in col])
    return out


def write_archive(archive, path, fair_index=None):
    rows = []
    for i, e in enumerate(archive.entries):
        o = e.objectives
        rows.append([fmt(w) for w in e.weights] + [fmt(o.w), fmt(o.s), fmt(o.g), fmt(o.a)]
                    + ["true" if i == fair_index else "false"])
    return _write(path, ARCHIVE_HEADER, rows)


def read_archive(path):
    """List of dicts with ``weights`` (tuple), ``objectives`` (tuple) and ``is_fair_point``."""
    _, body = _read(path, ARCHIVE_HEADER)
    out = []
    for i, row in enumerate(body, start=1):
        if row[8] not in ("true", "false"):
            raise DataError(f"{path}: is_fair_point must be true/false", row=i, column="is_fair_point")
        out.append({
            "weights": tuple(float(c) for c in row[0:4]),
            "objectives": tuple(float(c) for c in row[4:8]),
            "is_fair_point": row[8] == "true",
        })
    return out


RUNS_HEADER = ARCHIVE_HEADER[:8] + ["seed", "non_dominated"]


def write_runs(archive, path):
    """Every trained run of a sweep, flagged by whether it survived filtering."""
    kept = {id(e) for e in archive.entries}
    rows = []
    for e in archive.candidates:
        o = e.objectives
        rows.append([fmt(w) for w in e.weights] + [fmt(o.w), fmt(o.s), fmt(o.g), fmt(o.a), e.seed,
                     "true" if id(e) in kept else "false"])
    return _write(path, RUNS_HEADER, rows)


def read_runs(path):
    _, body = _read(path, RUNS_HEADER)
    return [{
        "weights": tuple(float(c) for c in row[0:4]),
        "objectives": tuple(float(c) for c in row[4:8]),
        "seed": int(row[8]),
        "non_dominated": row[9] == "true",
    } for row in body]
