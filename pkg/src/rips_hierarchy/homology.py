"""Path components and mod-2 Betti numbers of simplicial complexes."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .complexes import SimplicialComplex, inclusion_check
from .errors import RipsHierarchyError
from .unionfind import UnionFind


@dataclass(frozen=True)
class ComponentPartition:
    """Blocks of vertices joined by edge paths; each block named by its least vertex."""

    blocks: tuple
    representative: dict

    @property
    def representatives(self) -> tuple:
        return tuple(b[0] for b in self.blocks)

    def __len__(self) -> int:
        return len(self.blocks)

    def block_of(self, v: int) -> tuple:
        rep = self.representative[v]
        return next(b for b in self.blocks if b[0] == rep)


def connected_components(c: SimplicialComplex) -> ComponentPartition:
    uf = UnionFind(c.n_points)
    for u, v in c.simplices(1):
        uf.union(u, v)
    rep = {v: uf.find(v) for v in c.vertices}
    grouped = {}
    for v in c.vertices:
        grouped.setdefault(rep[v], []).append(v)
    blocks = tuple(sorted(tuple(b) for b in grouped.values()))
    return ComponentPartition(blocks, rep)


def boundary_rank(c: SimplicialComplex, p: int) -> int:
    """Rank over GF(2) of the boundary map from p-chains to (p-1)-chains."""
    if p <= 0 or p > c.dim_cap:
        return 0
    row = {face: i for i, face in enumerate(c.simplices(p - 1))}
    pivots = {}
    rank = 0
    for simplex in c.simplices(p):
        col = 0
        for drop in range(len(simplex)):
            col ^= 1 << row[simplex[:drop] + simplex[drop + 1:]]
        while col:
            low = col.bit_length() - 1
            if low not in pivots:
                pivots[low] = col
                rank += 1
                break
            col ^= pivots[low]
    return rank


def betti_numbers(c: SimplicialComplex, max_dim: int) -> tuple:
    """Mod-2 Betti numbers b_0..b_max_dim; needs max_dim < c.dim_cap."""
    if max_dim < 0:
        raise ValueError("max_dim must be >= 0")
    if max_dim >= c.dim_cap:
        raise RipsHierarchyError(
            f"betti_{max_dim} needs simplices of dimension {max_dim + 1}, above cap {c.dim_cap}"
        )
    ranks = [boundary_rank(c, p) for p in range(max_dim + 2)]
    return tuple(
        len(c.simplices(p)) - ranks[p] - ranks[p + 1] for p in range(max_dim + 1)
    )


def betti_report(c: SimplicialComplex, max_dim: int) -> dict:
    return {"scale": c.scale, "k": c.density, "betti": list(betti_numbers(c, max_dim))}


def induced_component_map(
    source: SimplicialComplex,
    target: SimplicialComplex,
    vertex_map: Optional[Sequence[int]] = None,
) -> dict:
    """Map of component representatives induced by an inclusion of complexes.

    ``vertex_map`` renames source vertices into the target universe (an
    inclusion of clouds); identity when omitted.
    """
    if not inclusion_check(source, target, vertex_map):
        raise RipsHierarchyError("source complex is not contained in the target")
    src, dst = connected_components(source), connected_components(target)
    out = {}
    for block in src.blocks:
        v = block[0] if vertex_map is None else vertex_map[block[0]]
        out[block[0]] = dst.representative[v]
    return out
