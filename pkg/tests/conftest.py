import numpy as np
import pytest

from rips_hierarchy.metric import Inclusion, PointCloud

FIXTURES = __import__("pathlib").Path(__file__).parent / "fixtures"


def random_cloud(rng, n_min=1, n_max=12, dims=(1, 2, 3)):
    """Uniform, one-decimal or small-integer coordinates; the last two force ties."""
    n = int(rng.integers(n_min, n_max + 1))
    dim = int(rng.choice(dims))
    style = int(rng.integers(3))
    if style == 0:
        pts = rng.random((n, dim))
    elif style == 1:
        pts = np.round(rng.random((n, dim)) * 2, 1)
    else:
        pts = rng.integers(0, 4, size=(n, dim)).astype(float)
    pts = np.unique(pts, axis=0)
    rng.shuffle(pts)
    if len(pts) < n_min:
        return random_cloud(rng, n_min, n_max, dims)
    return PointCloud(pts)


def random_inclusion(rng, k, n_max=14, dims=(1, 2, 3)):
    Y = random_cloud(rng, n_min=k + 1, n_max=n_max, dims=dims)
    size = int(rng.integers(k + 1, len(Y) + 1))
    idx = sorted(int(i) for i in rng.choice(len(Y), size=size, replace=False))
    return Inclusion.from_indices(Y, idx)


def line(*xs, labels=None):
    return PointCloud([[float(x)] for x in xs], labels)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def line3():
    return line(0, 1, 3)


def brute_lesnick(cloud, s, k, cap):
    """Every vertex tuple checked against the definition directly."""
    dm = cloud.distances.entries
    n = len(cloud)
    ok = [sum(1 for w in range(n) if w != v and dm[v, w] <= s) >= k for v in range(n)]
    out = []
    for p in range(cap + 1):
        out.append(tuple(
            t for t in __import__("itertools").combinations(range(n), p + 1)
            if all(ok[v] for v in t) and all(dm[a, b] <= s for a in t for b in t)
        ))
    return tuple(out)


def hierarchy_violations(g, bp):
    """Every hierarchy invariant, exhaustively: lub closure of branch points,
    the join identity on branch-point and layer triples, the layer
    ultrametric, and the maximal-branch-point properties over all vertices and pairs."""
    from itertools import combinations, combinations_with_replacement

    from rips_hierarchy.hierarchy import GammaVertex, layer_ultrametric, lub, lub_many
    from rips_hierarchy.metric import phase_change_values

    bad = []
    phases = set(phase_change_values(g.cloud.distances))
    verts = g.vertices()
    for b in bp:
        if b.scale not in phases:
            bad.append(("phase", b))
        if bp.max_below[b] != b:
            bad.append(("max_alpha", b))
    if len(bp.roots()) != 1:
        bad.append(("tree", bp.roots()))
    for a, b in combinations(bp, 2):
        if lub(g, a, b) not in bp:
            bad.append(("lub_closed", a, b))

    def join_identity(a, b, c):
        outer = lub(g, lub(g, a, b), lub(g, b, c))
        if not g.leq(lub(g, a, c), outer) or outer != lub_many(g, [a, b, c]):
            bad.append(("join", a, b, c))

    for a, b, c in combinations_with_replacement(bp.points, 3):
        join_identity(a, b, c)
    for j, s in enumerate(g.scales):
        reps, d = layer_ultrametric(g, s)
        layer = [GammaVertex(s, c) for c in reps]
        for a, b, c in combinations_with_replacement(layer, 3):
            join_identity(a, b, c)
        n = len(reps)
        if (d != d.T).any() or (d.diagonal() != 0).any() or (d + np.eye(n) <= 0).any():
            bad.append(("ultra_basic", s))
        # d[x,z] <= max(d[x,y], d[y,z]) for all triples at once
        if (d[:, None, :] > np.maximum(d[:, :, None], d[None, :, :])).any():
            bad.append(("ultra_triangle", s))

    below = {}
    for v in verts:
        mb = bp.max_below[v]
        lower = [b for b in bp if g.leq(b, v)]
        if not g.leq(mb, v) or mb not in bp or lub_many(g, lower) != mb:
            bad.append(("max_below", v))
        below[v] = mb
    for a, b in combinations(verts, 2):
        if below[lub(g, a, b)] != lub(g, below[a], below[b]):
            bad.append(("max_lub", a, b))
    return bad
