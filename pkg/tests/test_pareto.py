from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from morlgrid import pareto
from morlgrid.learner import LearnerParams
from morlgrid.model import ObjectiveVector

vec4 = st.tuples(*[st.integers(-3, 3)] * 4).map(lambda t: np.array(t, dtype=float))


def archive_of(rows):
    rows = np.asarray(rows, dtype=float)
    assert np.all(rows[:, 3] <= 0), "maximization form carries -a"
    entries = [pareto.ArchiveEntry((0.25,) * 4, "linear", i, ObjectiveVector.from_maximization(r),
                                   np.zeros(192, dtype=int))
               for i, r in enumerate(np.asarray(rows, dtype=float))]
    return pareto.ParetoArchive(entries)


class TestDominates:
    def test_equal(self):
        u = ObjectiveVector(1, 2, 3, 0)
        assert not pareto.dominates(u, u)

    def test_strict(self):
        assert pareto.dominates(ObjectiveVector(2, 2, 2, 0), ObjectiveVector(1, 2, 2, 0))

    def test_incomparable(self):
        u, v = ObjectiveVector(3, 1, 0, 0), ObjectiveVector(1, 3, 0, 0)
        assert not pareto.dominates(u, v) and not pareto.dominates(v, u)

    def test_penalty_is_minimized(self):
        assert pareto.dominates(ObjectiveVector(1, 1, 1, 0), ObjectiveVector(1, 1, 1, 0.5))

    @given(u=vec4, v=vec4, w=vec4)
    @settings(max_examples=300)
    def test_strict_partial_order(self, u, v, w):
        assert not pareto.dominates(u, u)
        if pareto.dominates(u, v):
            assert not pareto.dominates(v, u)
            if pareto.dominates(v, w):
                assert pareto.dominates(u, w)
        assert pareto.dominates(u, v) == oracles.dominates(u, v)


class TestFilter:
    def test_single(self):
        p = [ObjectiveVector(1, 2, 3, 0)]
        assert pareto.non_dominated_filter(p) == p

    def test_chain(self):
        a, b, c = ObjectiveVector(3, 3, 3, 0), ObjectiveVector(2, 2, 2, 0), ObjectiveVector(1, 1, 1, 0)
        assert pareto.non_dominated_filter([b, c, a]) == [a]

    def test_empty(self):
        assert pareto.non_dominated_filter([]) == []

    def test_duplicates_survive_together(self):
        a = ObjectiveVector(1, 0, 0, 0)
        assert pareto.non_dominated_filter([a, a]) == [a, a]

    @pytest.mark.parametrize("seed", range(5))
    def test_matches_brute_force(self, seed):
        pts = [tuple(r) for r in np.random.default_rng(seed).integers(0, 6, size=(200, 4)).astype(float)]
        assert [tuple(p) for p in pareto.non_dominated_filter([np.array(p) for p in pts])] == \
            oracles.pairwise_filter(pts)

    @given(st.lists(vec4, max_size=30))
    def test_idempotent_and_mutually_non_dominated(self, pts):
        once = pareto.non_dominated_filter(pts)
        twice = pareto.non_dominated_filter(once)
        assert len(once) == len(twice) and all(np.array_equal(a, b) for a, b in zip(once, twice))
        for i, a in enumerate(once):
            for j, b in enumerate(once):
                assert i == j or not pareto.dominates(a, b)


class TestWeightGrid:
    def test_h1(self):
        assert sorted(pareto.weight_grid(1)) == sorted(tuple(r) for r in np.eye(4))

    def test_h2(self):
        assert len(pareto.weight_grid(2)) == 10

    @pytest.mark.parametrize("h", [1, 2, 3, 5, 8])
    def test_count_and_sum(self, h):
        g = pareto.weight_grid(h)
        assert len(g) == comb(h + 3, 3)
        assert sorted(g) == oracles.simplex_grid(h)
        assert all(abs(sum(w) - 1) <= 1e-12 for w in g)

    def test_invalid(self):
        with pytest.raises(ValueError):
            pareto.weight_grid(0)


class TestFairPoint:
    def test_singleton(self):
        arc = archive_of([(1, 2, 3, 0)])
        assert pareto.fair_point(arc) is arc.entries[0]

    def test_two_dim_projection(self):
        rows = [(1, 0, 5, 0), (0, 1, 5, 0), (0.6, 0.6, 5, 0)]
        assert pareto.fair_point_index(archive_of(rows)) == 2
        assert pareto.normalized_returns(archive_of(rows))[:, 2:].tolist() == [[1, 1]] * 3

    def test_empty(self):
        with pytest.raises(ValueError):
            pareto.fair_point(pareto.ParetoArchive([]))

    def test_ties_prefer_sum_then_index(self):
        rows = [(0, 1, 0, 0), (1, 0, 0, 0), (0.5, 0.5, 0, 0), (0.5, 0.5, 0, 0), (0.5, 0.6, 0, 0)]
        assert pareto.fair_point_index(archive_of(rows)) == 4
        assert pareto.fair_point_index(archive_of(rows[:4])) == 2

    @pytest.mark.parametrize("seed", range(20))
    def test_matches_brute_force(self, seed):
        rng = np.random.default_rng(seed)
        rows = rng.integers(0, 5, size=(12, 4)).astype(float)
        rows[:, 3] *= -1
        assert pareto.fair_point_index(archive_of(rows)) == oracles.max_min_index(rows)

    @pytest.mark.parametrize("seed", range(20))
    def test_affine_invariance(self, seed):
        rng = np.random.default_rng(100 + seed)
        rows = rng.integers(0, 5, size=(12, 4)).astype(float)
        rows[:, 3] *= -1
        # powers of two keep the rescaling exact in floating point
        scale = 2.0 ** rng.integers(-3, 4, size=4)
        shift = rng.integers(-50, 50, size=4).astype(float)
        shift[3] = -abs(shift[3])
        assert pareto.fair_point_index(archive_of(rows * scale + shift)) == \
            pareto.fair_point_index(archive_of(rows))

    def test_member_of_filtered_front(self):
        rng = np.random.default_rng(7)
        pts = [r for r in rng.normal(size=(60, 4))]
        for r in pts:
            r[3] = -abs(r[3])
        front = pareto.non_dominated_filter(pts)
        arc = archive_of(front)
        chosen = pareto.fair_point(arc).objectives.maximization()
        assert not any(pareto.dominates(p, chosen) for p in pts)


@pytest.fixture(scope="module")
def runs(config, day):
    p = LearnerParams(episodes=150, seed=3)
    return pareto.sweep(config, day, "chebyshev", 1, p), pareto.sweep(config, day, "chebyshev", 1, p)


class TestSweep:
    def test_small_archive(self, runs):
        arc, _ = runs
        assert 1 <= len(arc) <= 4
        assert len(arc.candidates) == 4
        assert [c.seed for c in arc.candidates] == [3, 4, 5, 6]

    def test_deterministic(self, runs):
        a, b = runs
        assert np.array_equal(a.returns(), b.returns())
        assert all(np.array_equal(x.policy, y.policy) for x, y in zip(a, b))

    def test_archive_is_filtered(self, runs):
        arc, _ = runs
        ret = arc.returns()
        assert np.all(ret[:, 3] == 0)
        cand = [c.objectives for c in arc.candidates]
        assert [e.objectives for e in arc] == pareto.non_dominated_filter(cand)

    def test_workers_do_not_change_result(self, config, day, runs):
        arc = pareto.sweep(config, day, "linear", 1, LearnerParams(episodes=50, seed=3), workers=2)
        ref = pareto.sweep(config, day, "linear", 1, LearnerParams(episodes=50, seed=3))
        assert np.array_equal(arc.returns(), ref.returns())
