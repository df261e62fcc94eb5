"""Vietoris-Rips and degree-Rips (Lesnick) complexes as explicit simplex lists."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import AboveCapError
from .metric import PointCloud, core_distance

DEFAULT_CAP = 2


@dataclass(frozen=True)
class SimplicialComplex:
    """Simplices of a flag complex up to ``dim_cap``, as sorted index tuples.

    ``simplices_by_dim[p]`` is the lexicographically sorted tuple of
    p-simplices; ``n_points`` is the size of the vertex universe (the cloud).
    """

    vertices: tuple
    simplices_by_dim: tuple
    scale: float
    density: int
    dim_cap: int
    n_points: int

    @cached_property
    def _members(self) -> frozenset:
        return frozenset(s for layer in self.simplices_by_dim for s in layer)

    def __contains__(self, simplex) -> bool:
        return tuple(simplex) in self._members

    def __iter__(self):
        for layer in self.simplices_by_dim:
            yield from layer

    def __len__(self) -> int:
        return sum(len(layer) for layer in self.simplices_by_dim)

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    def simplices(self, dim: int) -> tuple:
        return self.simplices_by_dim[dim] if 0 <= dim <= self.dim_cap else ()

    def to_json(self) -> dict:
        return {
            "scale": self.scale,
            "k": self.density,
            "cap": self.dim_cap,
            "vertices": list(self.vertices),
            "simplices": {
                str(p): [list(s) for s in self.simplices_by_dim[p]]
                for p in range(1, self.dim_cap + 1)
            },
        }


def _flag_complex(dm: np.ndarray, admissible: Sequence[int], s: float, k: int, cap: int) -> SimplicialComplex:
    verts = sorted(int(v) for v in admissible)
    higher = {v: [w for w in verts if w > v and dm[v, w] <= s] for v in verts}
    layers = [[] for _ in range(cap + 1)]

    def extend(clique, candidates):
        layers[len(clique) - 1].append(tuple(clique))
        if len(clique) > cap:
            return
        for i, w in enumerate(candidates):
            rest = [u for u in candidates[i + 1:] if dm[w, u] <= s]
            extend(clique + [w], rest)

    for v in verts:
        extend([v], higher[v])
    return SimplicialComplex(
        vertices=tuple(verts),
        simplices_by_dim=tuple(tuple(sorted(layer)) for layer in layers),
        scale=float(s),
        density=int(k),
        dim_cap=int(cap),
        n_points=dm.shape[0],
    )


def rips_complex(X: PointCloud, s: float, dim_cap: int = DEFAULT_CAP) -> SimplicialComplex:
    """All vertex sets of pairwise distance <= s with at most dim_cap + 1 elements."""
    return lesnick_complex(X, s, 0, dim_cap)


def lesnick_complex(X: PointCloud, s: float, k: int, dim_cap: int = DEFAULT_CAP) -> SimplicialComplex:
    """Full subcomplex of the Rips complex at s on points with >= k other points within s.

    May be empty for small s and large k.
    """
    if s < 0:
        raise ValueError(f"scale must be >= 0, got {s}")
    if k < 0 or dim_cap < 0:
        raise ValueError("k and dim_cap must be >= 0")
    core = core_distance(X, k)
    admissible = np.flatnonzero(core <= s)
    return _flag_complex(X.distances.entries, admissible, s, k, dim_cap)


def is_simplex(c: SimplicialComplex, simplex: Iterable[int]) -> bool:
    """Membership of the vertex set of ``simplex`` (repeats collapse).

    Raises AboveCapError when the deduplicated set is larger than the cap
    allows, since absence then says nothing.
    """
    verts = tuple(sorted(set(int(v) for v in simplex)))
    if not verts:
        raise ValueError("empty simplex")
    if verts[0] < 0 or verts[-1] >= c.n_points:
        raise ValueError(f"vertex outside universe 0..{c.n_points - 1}: {verts}")
    if len(verts) - 1 > c.dim_cap:
        raise AboveCapError(f"dimension {len(verts) - 1} above cap {c.dim_cap}")
    return verts in c


def complexes_equal(a: SimplicialComplex, b: SimplicialComplex) -> bool:
    """Same vertices and same simplices; the scale labels are ignored."""
    if a.n_points != b.n_points or a.dim_cap != b.dim_cap:
        raise ValueError("complexes over different universes or caps are not comparable")
    return a.vertices == b.vertices and a.simplices_by_dim == b.simplices_by_dim


def inclusion_check(a: SimplicialComplex, b: SimplicialComplex, vertex_map: Optional[Sequence[int]] = None) -> bool:
    """Whether every simplex of ``a`` (mapped through ``vertex_map``) is a simplex of ``b``.

    Simplices of ``a`` above ``b``'s cap cannot be decided and raise AboveCapError.
    """
    for simplex in a:
        image = simplex if vertex_map is None else tuple(sorted(vertex_map[v] for v in simplex))
        if len(image) - 1 > b.dim_cap:
            raise AboveCapError(f"simplex {simplex} above target cap {b.dim_cap}")
        if image not in b:
            return False
    return True
