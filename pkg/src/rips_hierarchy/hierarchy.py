"""The cluster hierarchy of degree-Rips complexes and its branch-point poset.

The hierarchy is stored on the critical grid only: complexes cannot change
between consecutive distance values, so a query at any real scale resolves to
the greatest critical value below it. A component is named by its least
point index, which stays stable as long as the component does not merge.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Optional

import numpy as np

from .errors import EmptyHierarchyError, NoUpperBoundError
from .homology import ComponentPartition
from .metric import PointCloud, core_distance, phase_change_values
from .unionfind import UnionFind

BIRTH = "birth"
MERGE = "merge"


@dataclass(frozen=True, order=True)
class GammaVertex:
    scale: float
    component: int

    def to_json(self) -> list:
        return [self.scale, self.component]


@dataclass(eq=False)
class GammaTree:
    """Components of L_{s,k}(X) for every critical s where the complex is nonempty.

    ``rep[j, v]`` is the component name of point v at ``scales[j]`` (-1 when v
    is not yet a vertex). ``join[p, q]`` is the first scale index at which p
    and q lie in one component (``len(scales)`` if never).
    """

    cloud: PointCloud
    k: int
    scales: tuple
    rep: np.ndarray
    join: np.ndarray
    layers: tuple
    successors: tuple
    _index: dict = field(init=False, repr=False)

    def __post_init__(self):
        self._index = {s: j for j, s in enumerate(self.scales)}

    def __len__(self) -> int:
        return len(self.scales)

    def index(self, s: float) -> int:
        """Index of the greatest critical scale <= s."""
        j = int(np.searchsorted(self.scales, s, side="right")) - 1
        if j < 0:
            raise ValueError(f"L_(s,{self.k}) is empty at s={s} (first nonempty scale {self.scales[0]})")
        return j

    def index_of(self, v: GammaVertex) -> int:
        return self._index[v.scale]

    def vertex(self, s: float, x: int) -> GammaVertex:
        """The hierarchy vertex (s, [x]) with s floored to the grid."""
        j = self.index(s)
        c = int(self.rep[j, x])
        if c < 0:
            raise ValueError(f"point {x} is not a vertex of L_({s},{self.k})")
        return GammaVertex(self.scales[j], c)

    def vertices(self) -> list:
        return [GammaVertex(s, c) for s, layer in zip(self.scales, self.layers) for c in layer.representatives]

    def members(self, v: GammaVertex) -> tuple:
        return self.layers[self.index_of(v)].block_of(v.component)

    def leq(self, a: GammaVertex, b: GammaVertex) -> bool:
        ja, jb = self.index_of(a), self.index_of(b)
        return ja <= jb and int(self.rep[jb, a.component]) == b.component

    def top_connected(self) -> bool:
        return len(self.layers[-1]) == 1


def build_gamma(X: PointCloud, k: int) -> GammaTree:
    """Sweep the critical grid once, adding vertices at their core distance
    and edges at max(length, core distances of the endpoints)."""
    n = len(X)
    if k < 0:
        raise ValueError("k must be >= 0")
    if n < k + 1:
        raise EmptyHierarchyError(f"hierarchy empty: {n} points cannot have {k} neighbours each")
    dm = X.distances.entries
    core = core_distance(X, k)
    grid = np.array(phase_change_values(X.distances))
    start = int(np.searchsorted(grid, core.min(), side="left"))
    scales = grid[start:]
    m = len(scales)

    def slot(value):
        return int(np.searchsorted(scales, value, side="left"))

    appear = [[] for _ in range(m)]
    for v in range(n):
        appear[slot(core[v])].append(v)
    edges = [[] for _ in range(m)]
    for u, v in itertools.combinations(range(n), 2):
        edges[slot(max(dm[u, v], core[u], core[v]))].append((u, v))

    uf = UnionFind(n)
    present = np.zeros(n, dtype=bool)
    blocks = {}
    rep = np.full((m, n), -1, dtype=np.intp)
    join = np.full((n, n), m, dtype=np.intp)
    layers, successors = [], []
    for j in range(m):
        for v in appear[j]:
            present[v] = True
            blocks[v] = [v]
            join[v, v] = j
        for u, v in edges[j]:
            ru, rv = uf.find(u), uf.find(v)
            if ru == rv:
                continue
            a, b = blocks.pop(ru), blocks.pop(rv)
            join[np.ix_(a, b)] = j
            join[np.ix_(b, a)] = j
            blocks[uf.union(ru, rv)] = a + b
        for v in np.flatnonzero(present):
            rep[j, v] = uf.find(int(v))
        partition = ComponentPartition(
            tuple(sorted(tuple(sorted(b)) for b in blocks.values())),
            {int(v): int(rep[j, v]) for v in np.flatnonzero(present)},
        )
        layers.append(partition)
        if j:
            successors.append({c: int(rep[j, c]) for c in layers[j - 1].representatives})
    rep.setflags(write=False)
    join.setflags(write=False)
    return GammaTree(X, k, tuple(float(s) for s in scales), rep, join, tuple(layers), tuple(successors))


@dataclass(eq=False)
class BranchPoset:
    """Branch points of a hierarchy with their kinds and the order inherited from it.

    ``parent[b]`` is the least branch point strictly above ``b`` (None at a
    top). ``max_below`` maps every hierarchy vertex to the greatest branch
    point below it.
    """

    tree: GammaTree
    points: tuple
    kind: dict
    parent: dict
    max_below: dict

    def __contains__(self, v) -> bool:
        return v in self.kind

    def __iter__(self):
        return iter(self.points)

    def __len__(self) -> int:
        return len(self.points)

    def children(self, b: GammaVertex) -> list:
        return [c for c in self.points if self.parent[c] == b]

    def roots(self) -> list:
        return [b for b in self.points if self.parent[b] is None]


def branch_points(g: GammaTree) -> BranchPoset:
    """Births (nothing below) and merges (two or more components just below).

    Layers are constant between grid points, so "for all s just below t"
    reduces to a look at the previous grid layer.
    """
    kind, max_below = {}, {}
    for j, (s, layer) in enumerate(zip(g.scales, g.layers)):
        for block in layer.blocks:
            v = GammaVertex(s, block[0])
            preds = set() if j == 0 else {int(g.rep[j - 1, x]) for x in block} - {-1}
            if not preds:
                kind[v] = BIRTH
            elif len(preds) >= 2:
                kind[v] = MERGE
            if v in kind:
                max_below[v] = v
            else:
                (p,) = preds
                max_below[v] = max_below[GammaVertex(g.scales[j - 1], p)]
    points = tuple(sorted(kind))
    parent = {}
    for b in points:
        parent[b] = None
        for i in range(g.index_of(b) + 1, len(g)):
            up = GammaVertex(g.scales[i], int(g.rep[i, b.component]))
            if up in kind:
                parent[b] = up
                break
    return BranchPoset(g, points, kind, parent, max_below)


def lub(g: GammaTree, a: GammaVertex, b: GammaVertex) -> GammaVertex:
    """Least common upper bound: the first layer at or above both where they share a component."""
    j = max(g.index_of(a), g.index_of(b), int(g.join[a.component, b.component]))
    if j >= len(g):
        raise NoUpperBoundError(f"{a} and {b} never join: the top layer is disconnected")
    return GammaVertex(g.scales[j], int(g.rep[j, a.component]))


def lub_many(g: GammaTree, vertices: Iterable[GammaVertex]) -> GammaVertex:
    vs = list(vertices)
    if not vs:
        raise ValueError("lub of an empty family")
    return reduce(lambda a, b: lub(g, a, b), vs)


def glb_many(g: GammaTree, vertices: Iterable[GammaVertex]) -> Optional[GammaVertex]:
    """Least upper bound of all common lower bounds, or None if there are none."""
    vs = list(vertices)
    if not vs:
        raise ValueError("glb of an empty family")
    top = min(g.index_of(v) for v in vs)
    lower = [
        GammaVertex(g.scales[j], c)
        for j in range(top + 1)
        for c in g.layers[j].representatives
        if all(g.leq(GammaVertex(g.scales[j], c), v) for v in vs)
    ]
    return lub_many(g, lower) if lower else None


def max_branch_below(g: GammaTree, bp: BranchPoset, v: GammaVertex) -> GammaVertex:
    """The greatest branch point <= v; follows the unique lineage down to the last event."""
    if bp.tree is not g:
        raise ValueError("branch poset was built from a different hierarchy")
    return bp.max_below[v]


def ultrametric(g: GammaTree, a: GammaVertex, b: GammaVertex) -> float:
    """How far above their common layer two components first meet."""
    if a.scale != b.scale:
        raise ValueError(f"ultrametric compares components of one layer, got scales {a.scale} and {b.scale}")
    return lub(g, a, b).scale - a.scale


def layer_ultrametric(g: GammaTree, s: float) -> tuple:
    """Component names at the layer of s and the matrix of pairwise ultrametric values."""
    j = g.index(s)
    reps = g.layers[j].representatives
    scale = g.scales[j]
    dist = np.array(
        [[ultrametric(g, GammaVertex(scale, p), GammaVertex(scale, q)) for q in reps] for p in reps]
    )
    return reps, dist.reshape(len(reps), len(reps))


def gamma_distance(g: GammaTree, a: GammaVertex, b: GammaVertex) -> float:
    """max(u - s, u - t) for (u, [z]) = lub(a, b); not an ultrametric across layers."""
    u = lub(g, a, b).scale
    return max(u - a.scale, u - b.scale)
