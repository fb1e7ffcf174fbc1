"""Approximate Pareto front from a weight sweep, and fair-point selection."""
from __future__ import annotations

import dataclasses
import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .environment import Trajectory, rollout
from .learner import LearnerParams, ScalarizationSpec, train
from .model import ObjectiveVector


def _max_form(v):
    return v.maximization() if isinstance(v, ObjectiveVector) else np.asarray(v, dtype=float)


def dominates(u, v):
    """True when ``u`` is at least as good as ``v`` everywhere and better somewhere.

    ObjectiveVectors compare as ``(w, s, g, -a)``; plain arrays are taken to be
    in maximization form already.
    """
    u, v = _max_form(u), _max_form(v)
    return bool(np.all(u >= v) and np.any(u > v))


def non_dominated_mask(points):
    pts = np.array([_max_form(p) for p in points], dtype=float)
    n = len(pts)
    if n == 0:
        return np.zeros(0, dtype=bool)
    ge = np.all(pts[:, None, :] >= pts[None, :, :], axis=2)
    gt = np.any(pts[:, None, :] > pts[None, :, :], axis=2)
    dom = ge & gt  # dom[i, j]: i dominates j
    return ~dom.any(axis=0)


def non_dominated_filter(points):
    """Points not dominated by any other, in their input order."""
    mask = non_dominated_mask(points)
    return [p for p, keep in zip(points, mask) if keep]


def weight_grid(h):
    """Every 4-vector ``(i, j, k, l) / h`` with non-negative integers summing to ``h``."""
    if h < 1:
        raise ValueError(f"granularity must be >= 1, got {h}")
    out = []
    for i, j, k in itertools.product(range(h + 1), repeat=3):
        l = h - i - j - k
        if l >= 0:
            out.append((i / h, j / h, k / h, l / h))
    return out


@dataclass
class ArchiveEntry:
    weights: tuple
    kind: str
    seed: int
    objectives: ObjectiveVector
    policy: np.ndarray
    trajectory: Optional[Trajectory] = None


@dataclass
class ParetoArchive:
    entries: list
    candidates: list = field(default_factory=list)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def returns(self):
        return np.array([e.objectives.maximization() for e in self.entries])


def normalized_returns(archive):
    """Min-max scale each objective over the archive; constant objectives become 1."""
    r = archive.returns() if isinstance(archive, ParetoArchive) else np.asarray(archive, dtype=float)
    lo, hi = r.min(axis=0), r.max(axis=0)
    span = hi - lo
    out = np.ones_like(r)
    varying = span > 0
    out[:, varying] = (r[:, varying] - lo[varying]) / span[varying]
    return out


def fair_point_index(archive):
    if len(archive) == 0:
        raise ValueError("fair point of an empty archive is undefined")
    norm = normalized_returns(archive)
    worst = norm.min(axis=1)
    total = norm.sum(axis=1)
    # lexsort: last key is primary; negate for descending, index breaks remaining ties
    order = np.lexsort((np.arange(len(norm)), -total, -worst))
    return int(order[0])


def fair_point(archive):
    """Entry whose weakest normalized objective is strongest."""
    return archive.entries[fair_point_index(archive)]


def _run_one(job):
    config, day, spec, params = job
    res = train(config, day, spec, params)
    ret, traj = rollout(res.policy, day, config)
    return ret, res.policy, traj


def sweep(config, day, kind, h, params, tau=1.0, normalize=None, workers=1):
    """Train one greedy policy per simplex weight vector and keep the non-dominated returns.

    Run ``i`` is seeded with ``params.seed + i``; results do not depend on
    ``workers``.
    """
    jobs = []
    for i, w in enumerate(weight_grid(h)):
        spec = ScalarizationSpec(kind, w, tau=tau, normalize=normalize)
        jobs.append((config, day, spec, dataclasses.replace(params, seed=params.seed + i)))
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_one, jobs))
    else:
        results = [_run_one(j) for j in jobs]

    candidates = [
        ArchiveEntry(spec.weights, kind, p.seed, ret, policy, traj)
        for (_, _, spec, p), (ret, policy, traj) in zip(jobs, results)
    ]
    mask = non_dominated_mask([c.objectives for c in candidates])
    kept = [c for c, keep in zip(candidates, mask) if keep]
    return ParetoArchive(kept, candidates)
