"""Independent reference implementations used to check the package.

These are written from the defining formulas with different mechanics
(vectorized numpy, brute force, enumeration) and never call the code under test.
"""
import itertools

import numpy as np


def demand(lam, baseload, slope, lam_ref):
    h = np.clip(-slope * (np.asarray(lam) - lam_ref) / lam_ref, -0.5, 0.5)
    return (1 + h) * np.asarray(baseload)


def utility(p_d, omega, alpha):
    p_d = np.asarray(p_d, dtype=float)
    quad = omega * p_d - alpha / 2 * p_d ** 2
    return np.where(p_d <= omega / alpha, quad, omega ** 2 / (2 * alpha))


def gen_cost(p_g, a, b, c):
    return np.polyval([a, b, c], p_g)


def profit(lam, p_g, a, b, c):
    return lam * p_g - gen_cost(p_g, a, b, c)


def welfare(demands, lam, omegas, alpha):
    d = np.asarray(demands, dtype=float)
    return float(np.sum(utility(d, np.asarray(omegas), alpha)) - lam * d.sum())


def penalty(now, prev, cap_max, cap_min, ramp):
    now, prev = np.asarray(now, float), np.asarray(prev, float)
    ramp_v = np.clip(np.abs(now - prev) - ramp, 0, None)
    over = np.clip(now - cap_max, 0, None)
    under = np.clip(cap_min - now, 0, None)
    return float((ramp_v + over + under).sum())


def feasible(now, prev, cap_max, cap_min, ramp):
    return all(lo <= n <= hi and abs(n - p) <= r
               for n, p, hi, lo, r in zip(now, prev, cap_max, cap_min, ramp))


def argmax_grid(f, lo, hi, step):
    xs = np.arange(lo, hi + step / 2, step)
    return xs[int(np.argmax(f(xs)))]


def dominates(u, v):
    better = False
    for a, b in zip(u, v):
        if a < b:
            return False
        if a > b:
            better = True
    return better


def pairwise_filter(points):
    out = []
    for i, p in enumerate(points):
        if not any(dominates(q, p) for j, q in enumerate(points) if j != i):
            out.append(p)
    return out


def simplex_grid(h):
    return sorted({tuple(c.count(k) / h for k in range(4))
                   for c in itertools.combinations_with_replacement(range(4), h)})


def value_iteration(rewards, next_state, gamma, tol=1e-13):
    """Optimal Q for a deterministic MDP: rewards[s, a], next_state[s, a]."""
    q = np.zeros_like(rewards, dtype=float)
    while True:
        new = rewards + gamma * q.max(axis=1)[next_state]
        if np.max(np.abs(new - q)) < tol:
            return new
        q = new


def max_min_index(values):
    """Brute-force fair point: normalize each column, maximize the minimum, then the sum."""
    rows = [list(map(float, r)) for r in values]
    m = len(rows[0])
    norm = [[0.0] * m for _ in rows]
    for k in range(m):
        col = [r[k] for r in rows]
        lo, hi = min(col), max(col)
        for i, r in enumerate(rows):
            norm[i][k] = 1.0 if hi == lo else (r[k] - lo) / (hi - lo)
    best = None
    for i, n in enumerate(norm):
        key = (min(n), sum(n), -i)
        if best is None or key > best[0]:
            best = (key, i)
    return best[1]
