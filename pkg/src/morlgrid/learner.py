"""Vector-valued tabular Q-learning with scalarized action selection.

Each (state, action) cell holds one Q estimate per objective. Action choice
collapses that vector to a scalar either by a weighted sum (maximized) or by
a weighted Chebyshev distance to a utopian point (minimized).
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .environment import TransitionCache, n_actions, n_states
from .errors import InvalidInputError
from .model import HOURS, ObjectiveVector

LINEAR = "linear"
CHEBYSHEV = "chebyshev"
KINDS = (LINEAR, CHEBYSHEV)
N_OBJECTIVES = 4


def _check_weights(w):
    w = np.asarray(w, dtype=float)
    if w.ndim != 1 or np.any(w < 0) or not np.all(np.isfinite(w)):
        raise InvalidInputError(f"weights must be finite and non-negative, got {w.tolist()}")
    if abs(w.sum() - 1.0) > 1e-9:
        raise InvalidInputError(f"weights must sum to 1, got sum {w.sum():.12g}")
    return w


@dataclass(frozen=True)
class ScalarizationSpec:
    kind: str = CHEBYSHEV
    weights: tuple = (0.25, 0.25, 0.25, 0.25)
    utopian: Optional[tuple] = None
    tau: float = 1.0
    normalize: Optional[bool] = None  # None: on for chebyshev, off for linear

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidInputError(f"scalarization must be one of {KINDS}, got {self.kind!r}")
        w = _check_weights(self.weights)
        object.__setattr__(self, "weights", tuple(float(x) for x in w))
        if self.utopian is not None:
            z = tuple(float(x) for x in self.utopian)
            if len(z) != len(w):
                raise InvalidInputError("utopian point and weights differ in length")
            object.__setattr__(self, "utopian", z)
        if not self.tau >= 0:
            raise InvalidInputError(f"tau must be >= 0, got {self.tau}")

    @property
    def use_normalization(self):
        return self.kind == CHEBYSHEV if self.normalize is None else bool(self.normalize)


@dataclass(frozen=True)
class LearnerParams:
    alpha: float = 1.0
    gamma: float = 0.99
    epsilon_start: float = 1.0
    epsilon_end: float = 0.05
    epsilon_decay: float = 0.999
    episodes: int = 5000
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.alpha <= 1:
            raise InvalidInputError(f"alpha must be in (0, 1], got {self.alpha}")
        if not 0 <= self.gamma < 1:
            raise InvalidInputError(f"gamma must be in [0, 1), got {self.gamma}")
        for name in ("epsilon_start", "epsilon_end"):
            if not 0 <= getattr(self, name) <= 1:
                raise InvalidInputError(f"{name} must be in [0, 1]")
        if not 0 < self.epsilon_decay <= 1:
            raise InvalidInputError("epsilon_decay must be in (0, 1]")
        if self.episodes < 0:
            raise InvalidInputError("episodes must be >= 0")

    def epsilon(self, episode):
        return max(self.epsilon_end, self.epsilon_start * self.epsilon_decay ** episode)


class VectorQTable:
    """Dense ``q[state, action, objective]`` array."""

    def __init__(self, q):
        self.q = np.asarray(q, dtype=float)
        if self.q.ndim != 3:
            raise InvalidInputError(f"Q table must be 3-D, got shape {self.q.shape}")

    @classmethod
    def zeros(cls, n_states, n_actions, n_objectives=N_OBJECTIVES):
        return cls(np.zeros((n_states, n_actions, n_objectives)))

    @property
    def shape(self):
        return self.q.shape

    def copy(self):
        return VectorQTable(self.q.copy())

    def __getitem__(self, idx):
        return self.q[idx]

    def __eq__(self, other):
        return isinstance(other, VectorQTable) and np.array_equal(self.q, other.q)


def linear_scalarize(qvec, w):
    w = _check_weights(w)
    return float(np.dot(np.asarray(qvec, dtype=float), w))


def chebyshev_scalarize(qvec, spec, span=None):
    """Weighted L-infinity distance from ``qvec`` to the utopian point.

    With ``span`` given, each objective is divided by its observed range;
    objectives with zero range contribute nothing.
    """
    if spec.kind != CHEBYSHEV:
        raise InvalidInputError("chebyshev_scalarize needs a chebyshev spec")
    if spec.utopian is None:
        raise InvalidInputError("chebyshev spec has no utopian point")
    q = np.asarray(qvec, dtype=float)
    return float(np.max(_scale(spec.weights, span) * np.abs(q - np.asarray(spec.utopian))))


def lp_scalarize(qvec, spec, p):
    """Weighted L_p distance to the utopian point; ``p = inf`` is Chebyshev.

    Weights scale the coordinate differences before the power, so the value
    tends to ``chebyshev_scalarize`` as ``p`` grows and equals the weighted
    sum of differences at ``p = 1``.
    """
    if not p >= 1:
        raise InvalidInputError(f"p must be >= 1, got {p}")
    if spec.utopian is None:
        raise InvalidInputError("spec has no utopian point")
    d = np.abs(np.asarray(qvec, dtype=float) - np.asarray(spec.utopian))
    w = np.asarray(spec.weights)
    if math.isinf(p):
        return float(np.max(w * d))
    return float(np.sum((w * d) ** p) ** (1.0 / p))


def _scale(weights, span):
    w = np.asarray(weights, dtype=float)
    if span is None:
        return w
    span = np.asarray(span, dtype=float)
    out = np.zeros_like(w)
    np.divide(w, span, out=out, where=span > 0)
    return out


def scalarize_rows(rows, spec, utopian=None, span=None):
    """Scalar value of each row of a (n_actions, n_objectives) block."""
    rows = np.asarray(rows, dtype=float)
    scale = _scale(spec.weights, span)
    if spec.kind == LINEAR:
        return rows @ scale
    z = np.asarray(spec.utopian if utopian is None else utopian)
    return (np.abs(rows - z) * scale).max(axis=1)


def greedy_action(rows, spec, utopian=None, span=None):
    """Best action under the scalarization; ties go to the lowest index."""
    sq = scalarize_rows(rows, spec, utopian, span)
    return int(np.argmax(sq) if spec.kind == LINEAR else np.argmin(sq))


def scalarized_epsilon_greedy(state, table, spec, epsilon, rng, span=None, n_soc_levels=8):
    """Random action with probability ``epsilon``, else the scalarized greedy one.

    ``state`` may be a flat index or an ``EnvState``. Returns an action index.
    """
    if not 0 <= epsilon <= 1:
        raise InvalidInputError(f"epsilon must be in [0, 1], got {epsilon}")
    s = state if isinstance(state, (int, np.integer)) else state.index(n_soc_levels)
    rows = table.q[s]
    if rng.random() < epsilon:
        return int(rng.integers(rows.shape[0]))
    return greedy_action(rows, spec, span=span)


def q_update(table, s, a, reward, s_next, a_next, params):
    """One temporal-difference step on every objective of ``Q[s, a]``.

    ``a_next=None`` marks a terminal transition (no bootstrap). ``reward`` is
    an ``ObjectiveVector`` or an array already in maximization form.
    """
    r = reward.maximization() if isinstance(reward, ObjectiveVector) else np.asarray(reward, dtype=float)
    q = table.q[s, a]
    target = r if a_next is None else r + params.gamma * table.q[s_next, a_next]
    # convex form keeps alpha = 1 an exact overwrite and alpha = 0 a no-op
    q[:] = (1.0 - params.alpha) * q + params.alpha * target
    return q.copy()


def update_utopian(spec, observed):
    """Raise the utopian point to at least ``observed + tau`` componentwise."""
    obs = np.asarray(observed, dtype=float) + spec.tau
    z = obs if spec.utopian is None else np.maximum(np.asarray(spec.utopian), obs)
    return dataclasses.replace(spec, utopian=tuple(z.tolist()))


@dataclass
class ConvergenceLog:
    episode: np.ndarray
    scalarized: np.ndarray
    returns: np.ndarray  # (episodes, 4): Fw, Fs, Fg, Fa with Fa >= 0


@dataclass
class TrainResult:
    table: VectorQTable
    policy: np.ndarray
    log: ConvergenceLog
    spec: ScalarizationSpec
    span: Optional[np.ndarray] = None


def train(config, day, spec, params, table=None, trace=None):
    """Multi-objective Q-learning over whole-day episodes.

    The greedy action at the next state serves both as the bootstrap target
    and, unless the exploration draw fires, as the next action taken. For
    Chebyshev selection the utopian point follows the largest Q vector seen
    plus ``tau``. If ``trace`` is a list, every update appends
    ``(s, a, r, s_next, a_next)``.
    """
    cache = TransitionCache(config, day)
    nS, nA = n_states(config), n_actions(config)
    tbl = VectorQTable.zeros(nS, nA) if table is None else table.copy()
    if tbl.shape != (nS, nA, N_OBJECTIVES):
        raise InvalidInputError(f"table shape {tbl.shape} does not fit ({nS}, {nA}, {N_OBJECTIVES})")
    Q = tbl.q
    flat = Q.reshape(-1, N_OBJECTIVES)
    w = np.asarray(spec.weights)
    cheb = spec.kind == CHEBYSHEV
    norm = spec.use_normalization
    tau = spec.tau
    z = flat.max(axis=0) + tau if spec.utopian is None else np.array(spec.utopian, dtype=float)
    lo, hi = flat.min(axis=0), flat.max(axis=0)
    alpha, gamma = params.alpha, params.gamma
    rng = np.random.default_rng(params.seed)

    def greedy(s):
        scale = _scale(w, hi - lo) if norm else w
        rows = Q[s]
        if cheb:
            return int(np.argmin((np.abs(rows - z) * scale).max(axis=1)))
        return int(np.argmax(rows @ scale))

    n_ep = params.episodes
    log_scalar = np.empty(n_ep)
    log_ret = np.empty((n_ep, N_OBJECTIVES))
    for ep in range(n_ep):
        eps = params.epsilon(ep)
        draws = rng.random(HOURS)
        randoms = rng.integers(nA, size=HOURS)
        tod, levels, s = cache.start()
        a = int(randoms[0]) if draws[0] < eps else greedy(s)
        ret = np.zeros(N_OBJECTIVES)
        t = 0
        while True:
            tod, levels, s2, r, done = cache.get(tod, levels, a)
            ret += r
            q = Q[s, a]
            if done:
                a2 = None
                q[:] = (1.0 - alpha) * q + alpha * r
            else:
                a2 = greedy(s2)
                q[:] = (1.0 - alpha) * q + alpha * (r + gamma * Q[s2, a2])
            if trace is not None:
                trace.append((s, a, r, s2, a2))
            if cheb:
                np.maximum(z, q + tau, out=z)
            if norm:
                np.minimum(lo, q, out=lo)
                np.maximum(hi, q, out=hi)
            if done:
                break
            t += 1
            a = int(randoms[t]) if t < HOURS and draws[t] < eps else a2
            s = s2
        scale = _scale(w, hi - lo) if norm else w
        log_scalar[ep] = float(np.max(np.abs(ret - z) * scale)) if cheb else float(ret @ scale)
        ret[3] = 0.0 - ret[3]
        log_ret[ep] = ret

    policy = np.array([greedy(s) for s in range(nS)], dtype=int)
    final_spec = dataclasses.replace(spec, utopian=tuple(z.tolist())) if cheb else spec
    log = ConvergenceLog(np.arange(n_ep), log_scalar, log_ret)
    return TrainResult(tbl, policy, log, final_spec, (hi - lo) if norm else None)
