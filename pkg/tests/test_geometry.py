"""Tests for sampling, metric, neighbor search and the Monte Carlo runner."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from likenessrisk.geometry import (
    COMPILED_AVAILABLE,
    SimConfig,
    build_kdtree,
    nn_distances_accelerated,
    nn_distances_bruteforce,
    nn_to_random_ratio,
    pair_distance,
    run_simulation,
    sample_points,
    theory_comparison,
)
from likenessrisk.geometry import _kernels_py
from likenessrisk.nnstats import nn_mean_exact

needs_compiled = pytest.mark.skipif(
    not COMPILED_AVAILABLE, reason="compiled kernels not built"
)


def _config(**kw):
    base = dict(D=2, N=64, trials=3, seed=11, topology="torus", max_rank=2)
    base.update(kw)
    return SimConfig(**base)


class TestSampling:
    def test_deterministic(self):
        cfg = _config()
        a = sample_points(cfg, 1)
        b = sample_points(cfg, 1)
        assert (a == b).all()

    def test_trials_are_distinct_substreams(self):
        cfg = _config()
        assert not (sample_points(cfg, 0) == sample_points(cfg, 1)).all()

    def test_shape_and_range(self):
        cfg = _config(N=3, D=2, trials=1)
        pts = sample_points(cfg, 0)
        assert pts.shape == (3, 2)
        assert ((pts >= 0.0) & (pts < 1.0)).all()

    def test_uniform_mean(self):
        cfg = _config(N=10_000, D=3, trials=10)
        total = sum(sample_points(cfg, t).mean() for t in range(10)) / 10
        assert abs(total - 0.5) < 0.005

    def test_trial_index_out_of_range(self):
        cfg = _config(trials=3)
        with pytest.raises(ValueError):
            sample_points(cfg, 3)
        with pytest.raises(ValueError):
            sample_points(cfg, -1)


class TestPairDistance:
    def test_coincident(self):
        assert pair_distance([0.3, 0.7], [0.3, 0.7], "torus") == 0.0

    def test_torus_wraparound(self):
        assert math.isclose(pair_distance([0.1], [0.9], "torus"), 0.2, abs_tol=1e-15)

    def test_cube_diagonal(self):
        d = pair_distance([0.0, 0.0], [0.5, 0.5], "cube")
        assert math.isclose(d, math.sqrt(0.5), rel_tol=1e-15)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            pair_distance([0.1, 0.2], [0.1], "torus")

    def test_unknown_topology(self):
        with pytest.raises(ValueError):
            pair_distance([0.1], [0.2], "sphere")


class TestNeighborSearch:
    def test_two_points_report_same_distance(self):
        pts = np.array([[0.1, 0.1], [0.4, 0.5]])
        out = nn_distances_bruteforce(pts, 1, "torus")
        expected = pair_distance(pts[0], pts[1], "torus")
        assert out[0, 0] == out[1, 0] == expected

    def test_collinear_cube(self):
        pts = np.array([[0.0], [0.1], [0.3]])
        out = nn_distances_bruteforce(pts, 1, "cube")
        assert np.allclose(out[:, 0], [0.1, 0.1, 0.2], atol=1e-15)

    def test_duplicated_pair_rank1_zero(self):
        rng = np.random.default_rng(5)
        pts = rng.random((12, 3))
        pts[9] = pts[4]
        for search in (nn_distances_bruteforce, nn_distances_accelerated):
            out = search(pts, 1, "torus")
            assert out[4, 0] == 0.0 and out[9, 0] == 0.0

    def test_rows_sorted_ascending(self):
        rng = np.random.default_rng(6)
        pts = rng.random((50, 4))
        out = nn_distances_bruteforce(pts, 10, "cube")
        assert (np.diff(out, axis=1) >= 0.0).all()

    @given(
        n=st.integers(min_value=2, max_value=60),
        d=st.integers(min_value=1, max_value=8),
        seed=st.integers(min_value=0, max_value=2**32 - 1),
        torus=st.booleans(),
        duplicate=st.booleans(),
    )
    @settings(max_examples=120, deadline=None)
    def test_accelerated_equals_bruteforce(self, n, d, seed, torus, duplicate):
        rng = np.random.default_rng(seed)
        pts = rng.random((n, d))
        if duplicate and n >= 3:
            pts[n - 1] = pts[0]
        topology = "torus" if torus else "cube"
        k = int(rng.integers(1, n))
        brute = nn_distances_bruteforce(pts, k, topology)
        accel = nn_distances_accelerated(pts, k, topology)
        assert (brute == accel).all()

    @needs_compiled
    @pytest.mark.parametrize("topology", ["torus", "cube"])
    @pytest.mark.parametrize("d", [1, 2, 3, 8, 32])
    def test_backends_bit_identical(self, topology, d):
        rng = np.random.default_rng(d)
        pts = rng.random((120, d))
        for k in (1, 2, 17):
            bc = nn_distances_bruteforce(pts, k, topology, backend="compiled")
            bp = nn_distances_bruteforce(pts, k, topology, backend="python")
            ac = nn_distances_accelerated(pts, k, topology, backend="compiled")
            ap = nn_distances_accelerated(pts, k, topology, backend="python")
            assert (bc == bp).all()
            assert (ac == ap).all()
            assert (bc == ac).all()

    def test_max_rank_out_of_range(self):
        pts = np.random.default_rng(0).random((10, 2))
        for bad in (0, 10, 11, -1):
            with pytest.raises(ValueError):
                nn_distances_bruteforce(pts, bad, "torus")
            with pytest.raises(ValueError):
                nn_distances_accelerated(pts, bad, "torus")

    def test_kdtree_handles_all_identical_points(self):
        pts = np.full((40, 3), 0.25)
        out = nn_distances_accelerated(pts, 2, "torus")
        assert (out == 0.0).all()


class TestKDTree:
    def test_partition_preserves_points(self):
        rng = np.random.default_rng(3)
        pts = rng.random((100, 3))
        tree = build_kdtree(pts)
        assert (tree.points == pts[tree.index]).all()
        assert sorted(tree.index.tolist()) == list(range(100))

    def test_leaf_ranges_cover_everything(self):
        tree = build_kdtree(np.random.default_rng(4).random((77, 2)))
        leaves = tree.left < 0
        covered = sorted(
            i for s, e in zip(tree.start[leaves], tree.end[leaves]) for i in range(s, e)
        )
        assert covered == list(range(77))


class TestSimConfig:
    @pytest.mark.parametrize(
        "kw",
        [
            dict(D=0),
            dict(D=33),
            dict(N=1),
            dict(N=200_000),
            dict(trials=0),
            dict(seed=-1),
            dict(seed=1 << 64),
            dict(topology="sphere"),
            dict(max_rank=0),
            dict(max_rank=64),
        ],
    )
    def test_invalid(self, kw):
        with pytest.raises(ValueError):
            _config(**kw)


class TestRunSimulation:
    def test_matches_one_dimensional_closed_form(self):
        cfg = SimConfig(D=1, N=1024, trials=100, seed=1, topology="torus", max_rank=1)
        res = run_simulation(cfg, workers=4)
        stats = res.ranks[0]
        assert abs(stats.mean - 1.0 / 2048.0) <= 3.0 * stats.se

    def test_matches_theory_low_dimensions(self):
        cfg = SimConfig(D=2, N=1024, trials=100, seed=7, topology="torus", max_rank=1)
        res = run_simulation(cfg, workers=4)
        (cmp,) = theory_comparison(res)
        assert abs(cmp["z"]) < 3.0

    def test_rank_means_strictly_increase(self):
        cfg = SimConfig(D=3, N=128, trials=10, seed=2, topology="torus", max_rank=6)
        res = run_simulation(cfg)
        means = [r.mean for r in res.ranks]
        assert all(a < b for a, b in zip(means, means[1:]))
        assert all(r.se > 0.0 and math.isfinite(r.se) for r in res.ranks)
        assert all(r.count == 128 * 10 for r in res.ranks)

    def test_deterministic_across_workers_and_methods(self):
        cfg = _config(N=128, trials=12)
        runs = [
            run_simulation(cfg, workers=1),
            run_simulation(cfg, workers=4),
            run_simulation(cfg, workers=3, method="bruteforce"),
            run_simulation(cfg, workers=2, method="accelerated"),
        ]
        assert all(r == runs[0] for r in runs[1:])

    def test_cube_boundary_inflates_means(self):
        # Boxes without wraparound push boundary points' neighbors farther:
        # documented reason the torus is the validation topology.
        for D in (2, 3, 8):
            torus = run_simulation(
                SimConfig(D=D, N=256, trials=40, seed=3, topology="torus", max_rank=1)
            )
            cube = run_simulation(
                SimConfig(D=D, N=256, trials=40, seed=3, topology="cube", max_rank=1)
            )
            assert cube.ranks[0].mean > torus.ranks[0].mean

    def test_bad_arguments(self):
        cfg = _config()
        with pytest.raises(ValueError):
            run_simulation(cfg, workers=0)
        with pytest.raises(ValueError):
            run_simulation(cfg, method="magic")


class TestSerialization:
    def test_json_schema(self):
        cfg = _config(trials=2)
        res = run_simulation(cfg)
        doc = res.to_json_dict()
        assert doc["config"] == cfg.to_dict()
        assert [r["rank"] for r in doc["ranks"]] == [1, 2]
        assert set(doc["ranks"][0]) == {"rank", "mean", "se", "count"}

    def test_csv_round_trip(self):
        res = run_simulation(_config(trials=2))
        lines = res.to_csv().strip().split("\n")
        assert lines[0] == "rank,mean,se,count"
        rank1 = lines[1].split(",")
        assert int(rank1[0]) == 1
        assert float(rank1[1]) == res.ranks[0].mean  # repr round-trips exactly


class TestNNToRandomRatio:
    def test_two_points_is_exactly_one(self):
        assert nn_to_random_ratio(5, 2, trials=5, seed=3) == 1.0

    def test_one_dimension_matches_closed_form(self):
        # torus: mean rank-1 distance 1/(2N), mean random-pair distance 1/4
        ratio = nn_to_random_ratio(1, 1000, trials=20, seed=3)
        assert math.isclose(ratio, 0.002, rel_tol=0.05)

    def test_high_dimension_flattens(self):
        assert nn_to_random_ratio(16, 1000, trials=4, seed=3) > 0.5

    def test_low_vs_high_contrast(self):
        low = nn_to_random_ratio(2, 500, trials=4, seed=9)
        high = nn_to_random_ratio(12, 500, trials=4, seed=9)
        assert low < 0.1 < 0.4 < high


class TestPythonFallbackInternals:
    def test_box_bound_is_a_true_lower_bound(self):
        rng = np.random.default_rng(12)
        pts = rng.random((64, 3))
        tree = build_kdtree(pts, leaf_size=4)
        x = rng.random(3)
        for node in range(tree.n_nodes):
            bound = _kernels_py._box_bound2(x, tree.box_lo[node], tree.box_hi[node], True)
            s, e = tree.start[node], tree.end[node]
            for row in range(s, e):
                d = pair_distance(x, tree.points[row], "torus")
                assert bound <= d * d + 1e-12
