"""Point clouds, distances, phase-change values and density radii.

Distances are computed once per cloud and cached; every later comparison
(complex membership, admissibility, density) reads the cached floats so the
whole pipeline sees one consistent total order. No epsilons anywhere.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import permutations
from typing import Optional, Sequence

import numpy as np

from .errors import DensityError, InputError, SubcloudError

#: default cap on |Y-tuples| * |X-tuples| for exact configuration density
DEFAULT_BUDGET = 10**7

_CHUNK = 256


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    entries: np.ndarray

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    def off_diagonal(self) -> np.ndarray:
        iu = np.triu_indices(self.size, k=1)
        return self.entries[iu]


@dataclass(frozen=True, eq=False)
class PointCloud:
    """An ordered, duplicate-free finite subset of R^n.

    ``points`` is coerced to a read-only float64 array of shape (N, n).
    """

    points: np.ndarray
    labels: Optional[tuple] = None

    def __post_init__(self):
        raw = self.points
        if isinstance(raw, np.ndarray):
            rows = raw.tolist() if raw.ndim == 2 else None
        else:
            rows = [list(p) if not isinstance(p, (int, float)) else None for p in raw]
        if rows is None or any(r is None for r in rows):
            raise InputError("points must be a sequence of coordinate vectors")
        if not rows:
            raise InputError("a point cloud needs at least one point")
        dims = {len(r) for r in rows}
        if len(dims) != 1:
            raise InputError(f"dimension mismatch among points: {sorted(dims)}")
        if 0 in dims:
            raise InputError("points must have dimension n >= 1")
        try:
            arr = np.array(rows, dtype=np.float64)
        except (TypeError, ValueError) as exc:
            raise InputError(f"non-numeric coordinate: {exc}") from None
        if not np.all(np.isfinite(arr)):
            raise InputError("coordinates must be finite")
        seen = {}
        for i, row in enumerate(map(tuple, arr.tolist())):
            if row in seen:
                raise InputError(f"duplicate point at rows {seen[row]} and {i}: {row}")
            seen[row] = i
        arr.setflags(write=False)
        object.__setattr__(self, "points", arr)
        if self.labels is not None:
            labels = tuple(str(lab) for lab in self.labels)
            if len(labels) != len(arr):
                raise InputError(f"{len(labels)} labels for {len(arr)} points")
            object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels is not None else str(i)

    @cached_property
    def distances(self) -> DistanceMatrix:
        return pairwise_distances(self)

    def subcloud(self, indices: Sequence[int]) -> "PointCloud":
        """Sub-cloud on ``indices`` whose distances are read from this cloud's matrix."""
        idx = [int(i) for i in indices]
        if len(set(idx)) != len(idx):
            raise SubcloudError("sub-cloud indices repeat")
        if any(i < 0 or i >= len(self) for i in idx):
            raise SubcloudError(f"sub-cloud index out of range 0..{len(self) - 1}")
        labels = None if self.labels is None else [self.labels[i] for i in idx]
        sub = PointCloud(self.points[idx], labels)
        entries = self.distances.entries[np.ix_(idx, idx)].copy()
        entries.setflags(write=False)
        sub.__dict__["distances"] = DistanceMatrix(entries)
        return sub


def pairwise_distances(cloud: PointCloud) -> DistanceMatrix:
    """Euclidean distances, each the float nearest to the exact real distance.

    Coordinates are read as the shortest decimal that round-trips (what the
    user typed, for data given in decimal), so points such as 1.1 and 1.0
    are exactly 0.1 apart, and equal real distances always give equal floats.
    """
    coords = [[Fraction(repr(c)) for c in row] for row in cloud.points.tolist()]
    n = len(coords)
    entries = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            sq = sum((a - b) ** 2 for a, b in zip(coords[i], coords[j]))
            entries[i, j] = entries[j, i] = _sqrt_nearest(sq)
    entries.setflags(write=False)
    return DistanceMatrix(entries)


def _sqrt_nearest(q: Fraction) -> float:
    """Float nearest to sqrt(q) for a nonnegative rational q (ties go down)."""
    if q == 0:
        return 0.0
    f = math.sqrt(float(q))
    while True:
        up = math.nextafter(f, math.inf)
        mid = (Fraction(f) + Fraction(up)) / 2
        if mid * mid < q:
            f = up
            continue
        down = math.nextafter(f, 0.0)
        mid = (Fraction(down) + Fraction(f)) / 2
        if mid * mid >= q:
            f = down
            continue
        return f


def phase_change_values(dm: DistanceMatrix) -> tuple:
    """0 followed by the distinct off-diagonal distances in increasing order."""
    values = np.unique(dm.off_diagonal())
    return (0.0,) + tuple(float(v) for v in values)


def core_distance(cloud: PointCloud, k: int) -> np.ndarray:
    """Distance from each point to its k-th nearest other point.

    A point is a vertex of the degree-Rips complex at (s, k) iff s >= its
    core distance. ``inf`` when the cloud has at most k points.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    n = len(cloud)
    if k == 0:
        return np.zeros(n)
    if n <= k:
        return np.full(n, np.inf)
    # column 0 of each sorted row is the zero self-distance
    return np.sort(cloud.distances.entries, axis=1)[:, k].copy()


@dataclass(frozen=True)
class Inclusion:
    """X as a sub-cloud of Y; ``index[i]`` is the Y-index of X's point i.

    ``sub`` always carries distances taken from ``sup`` so both sides agree
    bit for bit.
    """

    sub: PointCloud
    sup: PointCloud
    index: tuple

    @classmethod
    def from_indices(cls, sup: PointCloud, indices: Sequence[int]) -> "Inclusion":
        sub = sup.subcloud(indices)
        return cls(sub, sup, tuple(int(i) for i in indices))

    @classmethod
    def from_clouds(cls, sub: PointCloud, sup: PointCloud) -> "Inclusion":
        return cls.from_indices(sup, match_subcloud(sub, sup))

    @cached_property
    def sup_to_sub(self) -> dict:
        return {y: x for x, y in enumerate(self.index)}

    def cross_distances(self) -> np.ndarray:
        """|Y| x |X| matrix of d(y, x)."""
        return self.sup.distances.entries[:, list(self.index)]


def match_subcloud(sub: PointCloud, sup: PointCloud) -> tuple:
    """Y-index of every point of ``sub`` by exact coordinate match."""
    if sub.dim != sup.dim:
        raise SubcloudError(f"sub-cloud dimension {sub.dim} != {sup.dim}")
    where = {tuple(row): i for i, row in enumerate(sup.points.tolist())}
    out = []
    for row in sub.points.tolist():
        j = where.get(tuple(row))
        if j is None:
            raise SubcloudError(f"point {tuple(row)} of the sub-cloud is not in the super-cloud")
        out.append(j)
    return tuple(out)


def as_inclusion(X, Y=None) -> Inclusion:
    if isinstance(X, Inclusion):
        return X
    return Inclusion.from_clouds(X, Y)


@dataclass(frozen=True)
class DensityReport:
    """Infimum radius r* such that X is r-dense in Y exactly when r > r*.

    ``witness`` is ``(y_tuple, x_tuple)``: Y-indices of the worst target tuple
    and X-indices of its best match. With ``exact=False`` the radius is a
    certified upper bound.
    """

    radius: float
    k: int
    exact: bool
    witness: Optional[tuple] = field(default=None)

    def is_dense(self, r: float) -> bool:
        return r > self.radius

    def to_json(self) -> dict:
        w = None
        if self.witness is not None:
            w = {"y": list(self.witness[0]), "x": list(self.witness[1])}
        return {"radius": self.radius, "k": self.k, "exact": self.exact, "witness": w}


def point_density_radius(X, Y=None) -> DensityReport:
    inc = as_inclusion(X, Y)
    cross = inc.cross_distances()
    nearest = cross.argmin(axis=1)
    mins = cross[np.arange(cross.shape[0]), nearest]
    y = int(mins.argmax())
    return DensityReport(float(mins[y]), 0, True, ((y,), (int(nearest[y]),)))


def ordered_tuples(n: int, m: int) -> np.ndarray:
    """All ordered m-tuples of distinct indices below n, lexicographic."""
    if m > n:
        return np.empty((0, m), dtype=np.intp)
    return np.array(list(permutations(range(n), m)), dtype=np.intp).reshape(-1, m)


def n_ordered(n: int, m: int) -> int:
    return math.perm(n, m) if m <= n else 0


def config_density_radius(X, Y=None, k: int = 0, budget: int = DEFAULT_BUDGET) -> DensityReport:
    """Density radius of ordered distinct (k+1)-tuples of X inside those of Y.

    Tuples are compared with the Euclidean distance of R^{n(k+1)}. Exact by
    enumeration when the pair count fits in ``budget``; otherwise a greedy
    upper bound: for any target tuple, matching coordinates one at a time to
    the nearest unused X point costs at most the (k+1)-th nearest X-distance
    per coordinate.
    """
    inc = as_inclusion(X, Y)
    m = k + 1
    ny, nx = len(inc.sup), len(inc.sub)
    if ny < m:
        return DensityReport(0.0, k, True, None)
    if nx < m:
        raise DensityError(
            f"X has {nx} points, so it has no distinct {m}-tuples, but Y has {ny}",
            witness=tuple(range(m)),
        )
    sq = inc.cross_distances() ** 2
    if n_ordered(ny, m) * n_ordered(nx, m) <= budget:
        return _exact_config_radius(sq, k)
    return _greedy_config_radius(sq, k)


def _exact_config_radius(sq: np.ndarray, k: int) -> DensityReport:
    m = k + 1
    yt = ordered_tuples(sq.shape[0], m)
    xt = ordered_tuples(sq.shape[1], m)
    best, witness = -1.0, None
    for start in range(0, len(yt), _CHUNK):
        chunk = yt[start:start + _CHUNK]
        cost = sq[chunk[:, 0]][:, xt[:, 0]]
        for i in range(1, m):
            cost = cost + sq[chunk[:, i]][:, xt[:, i]]
        arg = cost.argmin(axis=1)
        mins = cost[np.arange(len(chunk)), arg]
        j = int(mins.argmax())
        if mins[j] > best:
            best = float(mins[j])
            witness = (tuple(int(v) for v in chunk[j]), tuple(int(v) for v in xt[arg[j]]))
    return DensityReport(math.sqrt(best), k, True, witness)


def _greedy_config_radius(sq: np.ndarray, k: int) -> DensityReport:
    m = k + 1
    kth = np.sort(sq, axis=1)[:, k]
    worst = np.argsort(-kth, kind="stable")[:m]
    y_tuple = tuple(sorted(int(v) for v in worst))
    used, x_tuple = set(), []
    for y in y_tuple:
        order = np.argsort(sq[y], kind="stable")
        x = next(int(c) for c in order if int(c) not in used)
        used.add(x)
        x_tuple.append(x)
    bound = math.sqrt(float(kth[list(y_tuple)].sum()))
    return DensityReport(bound, k, False, (y_tuple, tuple(x_tuple)))
