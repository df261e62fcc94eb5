import math
from itertools import permutations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import line, random_inclusion
from rips_hierarchy.errors import DensityError, InputError, SubcloudError
from rips_hierarchy.metric import (
    Inclusion,
    PointCloud,
    config_density_radius,
    core_distance,
    pairwise_distances,
    phase_change_values,
    point_density_radius,
)


def brute_config_radius(inc, k):
    """max over ordered distinct Y-tuples of min over ordered distinct X-tuples."""
    Y, idx = inc.sup.points, inc.index
    worst = 0.0
    for yt in permutations(range(len(Y)), k + 1):
        best = min(
            math.sqrt(sum(math.dist(Y[a], Y[idx[b]]) ** 2 for a, b in zip(yt, xt)))
            for xt in permutations(range(len(idx)), k + 1)
        )
        worst = max(worst, best)
    return worst


def test_rejects_bad_clouds():
    with pytest.raises(InputError, match="dimension mismatch"):
        PointCloud([[0.0], [1.0, 2.0]])
    with pytest.raises(InputError, match="duplicate"):
        PointCloud([[0.0], [0.0]])
    with pytest.raises(InputError):
        PointCloud([])
    with pytest.raises(InputError):
        PointCloud([[float("nan")]])


def test_pairwise_distances_examples():
    assert pairwise_distances(line(5)).entries.tolist() == [[0.0]]
    dm = line(0, 1, 3).distances
    assert sorted(dm.off_diagonal().tolist()) == [1.0, 2.0, 3.0]
    assert PointCloud([[0, 0], [3, 4]]).distances.entries[0, 1] == 5.0


def test_distances_close_to_float_formula(rng):
    P = PointCloud(rng.normal(size=(15, 3)))
    np.testing.assert_allclose(
        P.distances.entries,
        [[math.dist(a, b) for b in P.points] for a in P.points],
        rtol=1e-15,
        atol=0,
    )


def test_equal_real_distances_are_equal_floats():
    dm = line(0, 0.1, 1, 1.1).distances.entries
    assert dm[0, 1] == dm[2, 3] == 0.1
    assert dm[1, 2] == 0.9
    sq = PointCloud([[0.1, 0.2], [0.4, 0.6], [1.1, 1.2], [1.4, 1.6]]).distances.entries
    assert sq[0, 1] == sq[2, 3] == 0.5


def test_phase_change_values():
    assert phase_change_values(line(7).distances) == (0.0,)
    assert phase_change_values(line(0, 1, 3).distances) == (0.0, 1.0, 2.0, 3.0)
    assert phase_change_values(line(0, 0.5, 1, 3).distances) == (0.0, 0.5, 1.0, 2.0, 2.5, 3.0)


def test_phase_values_of_subcloud_are_a_subset(rng):
    for _ in range(30):
        inc = random_inclusion(rng, 0)
        assert set(phase_change_values(inc.sub.distances)) <= set(phase_change_values(inc.sup.distances))


def test_point_density_examples():
    Y = line(0, 0.5, 1, 3)
    assert point_density_radius(Y, Y).radius == 0
    assert point_density_radius(line(0), line(0, 1)).radius == 1.0
    rep = point_density_radius(line(0, 1), Y)
    assert rep.radius == 2.0
    assert rep.witness == ((3,), (1,))
    assert not rep.is_dense(2.0) and rep.is_dense(2.000001)


def test_subcloud_must_match():
    with pytest.raises(SubcloudError):
        point_density_radius(line(0, 2), line(0, 1))


def test_config_density_examples():
    Y = line(0, 0.5, 1, 3)
    assert config_density_radius(Y, Y, k=2).radius == 0
    X, Y = line(0, 1), line(0, 0.1, 1)
    rep = config_density_radius(X, Y, k=1)
    # frozen from brute_config_radius: 0.9 at the Y-tuple (0, 0.1) matched to (0, 1)
    assert rep.radius == pytest.approx(brute_config_radius(Inclusion.from_clouds(X, Y), 1), rel=1e-15)
    assert rep.radius == pytest.approx(0.9, rel=1e-15)
    assert rep.exact
    assert rep.witness == ((0, 1), (0, 1))


def test_config_density_requires_enough_x_points():
    with pytest.raises(DensityError):
        config_density_radius(line(0), line(0, 1), k=1)


def test_k0_config_equals_point_radius(rng):
    for _ in range(40):
        inc = random_inclusion(rng, 0)
        assert config_density_radius(inc, k=0).radius == point_density_radius(inc).radius


def test_config_radius_matches_brute_force(rng):
    for _ in range(25):
        k = int(rng.integers(0, 3))
        inc = random_inclusion(rng, k, n_max=6)
        assert config_density_radius(inc, k=k).radius == pytest.approx(brute_config_radius(inc, k), rel=1e-12)


def test_greedy_bound_dominates_exact(rng):
    for _ in range(40):
        k = int(rng.integers(0, 3))
        inc = random_inclusion(rng, k, n_max=9)
        exact = config_density_radius(inc, k=k)
        greedy = config_density_radius(inc, k=k, budget=0)
        assert exact.exact and not greedy.exact
        assert greedy.radius >= exact.radius


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.integers(-6, 6), min_size=2, max_size=7, unique=True),
    st.data(),
)
def test_density_monotone_in_k(xs, data):
    Y = line(*[x / 2 for x in xs])
    size = data.draw(st.integers(1, len(xs)))
    idx = data.draw(st.permutations(range(len(xs))))[:size]
    inc = Inclusion.from_indices(Y, sorted(idx))
    for k in range(len(xs) - 1):
        if len(inc.sub) < k + 2:
            break
        assert config_density_radius(inc, k=k).radius <= config_density_radius(inc, k=k + 1).radius


def test_core_distance_examples(line3):
    assert core_distance(line3, 0).tolist() == [0, 0, 0]
    assert core_distance(line3, 1).tolist() == [1, 1, 2]
    assert np.isinf(core_distance(line3, 3)).all()
