import math
import time

import numpy as np
import pytest

from errors import DimensionError
from pareto import (
    count_non_dominated,
    crowding_distance,
    dominates,
    hypervolume,
    igd,
    igd_plus,
    non_dominated_sort,
    pareto_filter,
)


def brute_force_fronts(points):
    """Repeatedly strip the members nobody remaining dominates"""
    remaining = list(range(len(points)))
    fronts = []
    while remaining:
        front = [i for i in remaining if not any(dominates(points[j], points[i]) for j in remaining if j != i)]
        fronts.append(front)
        remaining = [i for i in remaining if i not in front]
    return fronts


def monte_carlo_hv(points, ref, samples, rng):
    low = points.min(axis=0)
    box = np.prod(ref - low)
    draws = low + rng.random((samples, points.shape[1])) * (ref - low)
    covered = np.zeros(samples, dtype=bool)
    for p in points:
        covered |= np.all(draws >= p, axis=1)
    share = covered.mean()
    return box * share, box * math.sqrt(share * (1 - share) / samples)


def test_dominates_definition():
    assert dominates((1, 2), (2, 2))
    assert not dominates((1, 2), (1, 2))
    assert not dominates((1, 3), (2, 1))
    assert not dominates((2, 1), (1, 3))


def test_dominates_rejects_length_mismatch():
    with pytest.raises(DimensionError):
        dominates((1, 2), (1, 2, 3))


def test_sort_small_example():
    assert non_dominated_sort([(1, 2), (2, 1), (3, 3)]).fronts == [[0, 1], [2]]


def test_sort_identical_points_share_one_front():
    assert non_dominated_sort([(1, 1)] * 4).fronts == [[0, 1, 2, 3]]


@pytest.mark.parametrize("dims", [2, 3, 5])
def test_sort_matches_brute_force(dims):
    rng = np.random.default_rng(dims)
    for _ in range(40):
        points = rng.integers(0, 6, size=(50, dims)).astype(float)
        assert non_dominated_sort(points).fronts == brute_force_fronts(points)


@pytest.mark.slow
def test_sort_matches_brute_force_full_scale():
    rng = np.random.default_rng(2024)
    sort_seconds = 0.0
    for k in range(1000):
        dims = (2, 3, 5)[k % 3]
        points = rng.integers(0, 6, size=(50, dims)).astype(float)
        start = time.perf_counter()
        fronts = non_dominated_sort(points).fronts
        sort_seconds += time.perf_counter() - start
        assert fronts == brute_force_fronts(points)
    assert sort_seconds < 10.0


def test_sort_front_properties(rng):
    points = rng.random((60, 3))
    partition = non_dominated_sort(points)
    assert sorted(i for f in partition.fronts for i in f) == list(range(60))
    for k, front in enumerate(partition.fronts):
        for i in front:
            assert not any(dominates(points[j], points[i]) for j in front)
            if k:
                assert any(dominates(points[j], points[i]) for j in partition.fronts[k - 1])
            assert partition.rank[i] == k


def test_crowding_two_points_infinite():
    assert np.all(np.isinf(crowding_distance([(0, 1), (1, 0)])))


def test_crowding_middle_point():
    d = crowding_distance([(0, 2), (1, 1), (2, 0)])
    assert np.isinf(d[0]) and np.isinf(d[2])
    assert d[1] == pytest.approx(2.0)


def test_crowding_flat_dimension_contributes_nothing():
    d = crowding_distance([(0, 5), (1, 5), (3, 5)])
    assert d[1] == pytest.approx(1.0)
    assert np.all(np.isfinite(d[1:2]))


def test_hypervolume_staircase():
    assert hypervolume([(1, 3), (2, 2), (3, 1)], (4, 4)) == 6.0


@pytest.mark.parametrize("dims", [1, 2, 3, 5])
def test_hypervolume_unit_box(dims):
    assert hypervolume([np.zeros(dims)], np.ones(dims)) == pytest.approx(1.0)


def test_hypervolume_ignores_dominated_duplicate_and_outside_points():
    base = [(1, 3), (2, 2), (3, 1)]
    assert hypervolume(base + [(3, 3), (2, 2), (5, 0)], (4, 4)) == 6.0
    assert hypervolume([], (4, 4)) == 0.0


def test_hypervolume_monotone_and_permutation_invariant(rng):
    for dims in (2, 3, 4):
        points = rng.random((15, dims))
        ref = np.ones(dims) * 1.1
        hv = hypervolume(points, ref)
        assert hypervolume(points[rng.permutation(15)], ref) == pytest.approx(hv, rel=1e-12)
        assert hypervolume(np.vstack([points, rng.random((1, dims))]), ref) >= hv - 1e-12


@pytest.mark.parametrize("dims", [2, 3, 4, 5])
def test_hypervolume_matches_monte_carlo(dims):
    rng = np.random.default_rng(100 + dims)
    for _ in range(5):
        points = rng.random((int(rng.integers(1, 20)), dims))
        ref = np.ones(dims)
        exact = hypervolume(points, ref)
        estimate, stderr = monte_carlo_hv(points, ref, 200_000, rng)
        assert abs(exact - estimate) <= 3 * stderr + 1e-9


@pytest.mark.slow
def test_hypervolume_matches_monte_carlo_full_scale():
    rng = np.random.default_rng(2024)
    for _ in range(100):
        dims = int(rng.integers(2, 6))
        points = rng.random((int(rng.integers(1, 51)), dims))
        ref = np.ones(dims)
        estimate, stderr = monte_carlo_hv(points, ref, 1_000_000, rng)
        assert abs(hypervolume(points, ref) - estimate) <= 3 * stderr + 1e-9


def test_hypervolume_dimension_mismatch():
    with pytest.raises(DimensionError):
        hypervolume([(1, 2)], (3, 3, 3))


def test_igd_examples():
    assert igd([(0, 2)], [(1, 1)]) == pytest.approx(math.sqrt(2))
    assert igd_plus([(0, 2)], [(1, 1)]) == pytest.approx(1.0)
    front = [(1, 3), (2, 2)]
    assert igd(front, front) == 0.0 and igd_plus(front, front) == 0.0
    assert igd_plus([(0, 0)], [(1, 2), (2, 1)]) == 0.0


def test_igd_matches_double_loop(rng):
    front, reference = rng.random((7, 3)), rng.random((5, 3))
    expected = np.mean([min(np.linalg.norm(z - a) for a in front) for z in reference])
    assert igd(front, reference) == pytest.approx(expected)


def test_igd_plus_never_exceeds_igd(rng):
    for _ in range(2000):
        dims = int(rng.integers(2, 5))
        front = rng.random((int(rng.integers(1, 8)), dims))
        reference = rng.random((int(rng.integers(1, 8)), dims))
        assert igd_plus(front, reference) <= igd(front, reference) + 1e-12


@pytest.mark.slow
def test_igd_plus_never_exceeds_igd_full_scale():
    rng = np.random.default_rng(7)
    for _ in range(10000):
        dims = int(rng.integers(2, 6))
        front = rng.random((int(rng.integers(1, 10)), dims))
        reference = rng.random((int(rng.integers(1, 10)), dims))
        assert igd_plus(front, reference) <= igd(front, reference) + 1e-12
        assert igd(front, front) == 0.0 and igd_plus(front, front) == 0.0


def test_pareto_filter_and_count():
    points = [(1, 2), (1, 2), (2, 1), (3, 3)]
    assert pareto_filter(points).tolist() == [[1.0, 2.0], [2.0, 1.0]]
    assert count_non_dominated(points) == 2
    assert count_non_dominated(np.zeros((0, 2))) == 0
