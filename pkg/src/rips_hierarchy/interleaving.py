"""Interleaving maps for an inclusion of data sets X in Y, and their certificates.

Everything here is constructive and then checked: the retraction-type map
theta from Y-vertices to X-vertices is built explicitly, every commutation and
homotopy claim about it is tested simplex by simplex, and the induced maps on
branch points are compared pointwise. Failures are reported with a
counterexample rather than raised, except where a precondition is missing.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np

from .complexes import DEFAULT_CAP, SimplicialComplex, complexes_equal, lesnick_complex
from .errors import ConstructionError, DensityError, NoUpperBoundError, RipsHierarchyError
from .hierarchy import BranchPoset, GammaTree, GammaVertex, branch_points, build_gamma, lub
from .homology import betti_numbers, connected_components, induced_component_map
from .metric import (
    DEFAULT_BUDGET,
    DensityReport,
    Inclusion,
    as_inclusion,
    config_density_radius,
    core_distance,
    ordered_tuples,
    phase_change_values,
    point_density_radius,
)

AUTO_R_EPS = 1e-6


def shifted(s: float, r: float) -> float:
    """The target scale s + 2r, computed one way everywhere."""
    return s + 2 * r


@dataclass
class CheckResult:
    passed: bool
    checked: int
    counterexample: Optional[dict] = None

    def to_json(self) -> dict:
        return {"passed": self.passed, "checked": self.checked, "counterexample": self.counterexample}


class _Check:
    """Accumulates one named check, keeping the first counterexample."""

    def __init__(self):
        self.checked = 0
        self.counterexample = None

    def record(self, ok: bool, **witness):
        self.checked += 1
        if not ok and self.counterexample is None:
            self.counterexample = witness

    def result(self) -> CheckResult:
        return CheckResult(self.counterexample is None, self.checked, self.counterexample)


def density_report(inc: Inclusion, k: int, budget: int = DEFAULT_BUDGET) -> DensityReport:
    return point_density_radius(inc) if k == 0 else config_density_radius(inc, k=k, budget=budget)


def auto_radius(report: DensityReport, Y, eps: float = AUTO_R_EPS) -> float:
    """radius * (1 + eps); for radius 0 (X = Y) eps times the least positive Y-distance."""
    if report.radius > 0:
        return report.radius * (1 + eps)
    phases = phase_change_values(Y.distances)
    return eps * (phases[1] if len(phases) > 1 else 1.0)


def _require_density(report: DensityReport, r: float):
    if not report.is_dense(r):
        witness = report.witness
        raise DensityError(
            f"r={r} is not above the density radius {report.radius} (k={report.k}); "
            f"worst Y-tuple {witness[0] if witness else None}",
            witness=witness,
        )


@dataclass
class ThetaMap:
    """theta: Y-vertices of L_{s,k}(Y) -> X-vertices of L_{s+2r,k}(X).

    ``assignment`` maps Y-indices to X-indices. ``witnesses[y]`` is the pair
    (Y-tuple, X-tuple) the value was read from. ``violations`` lists every
    invariant that failed at build time (empty for a valid construction).
    """

    inclusion: Inclusion
    k: int
    s: float
    r: float
    assignment: dict
    witnesses: dict
    violations: list = field(default_factory=list)

    def __call__(self, y: int) -> int:
        return self.assignment[y]

    def image(self, simplex) -> Optional[tuple]:
        """Deduplicated X-vertex set of theta(simplex); None if a vertex is unassigned."""
        try:
            return tuple(sorted({self.assignment[y] for y in simplex}))
        except KeyError:
            return None

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "s": self.s,
            "r": self.r,
            "assignment": {str(y): x for y, x in sorted(self.assignment.items())},
        }


def _theta_violations(theta: ThetaMap) -> list:
    inc, k, s, r = theta.inclusion, theta.k, theta.s, theta.r
    core_x = core_distance(inc.sub, k)
    dy = inc.sup.distances.entries
    out = []
    for x in np.flatnonzero(core_x <= s):
        y = inc.index[x]
        if theta.assignment.get(y) != x:
            out.append({"invariant": "fixes X-vertices", "y": y, "theta": theta.assignment.get(y)})
    for y, x in sorted(theta.assignment.items()):
        if not dy[y, inc.index[x]] < r:
            out.append({"invariant": "d(y, theta(y)) < r", "y": y, "theta": x, "distance": float(dy[y, inc.index[x]])})
        if not core_x[x] <= shifted(s, r):
            out.append({"invariant": "theta(y) in target complex", "y": y, "theta": x, "core": float(core_x[x])})
    for y, (y_tuple, x_tuple) in sorted(theta.witnesses.items()):
        if len(y_tuple) > 1:
            dist = math.sqrt(sum(float(dy[a, inc.index[b]]) ** 2 for a, b in zip(y_tuple, x_tuple)))
            if not dist < r:
                out.append({"invariant": "witness tuple within r", "y": y, "tuple": list(x_tuple), "distance": dist})
    return out


def _finish(theta: ThetaMap, strict: bool) -> ThetaMap:
    theta.violations = _theta_violations(theta)
    if strict and theta.violations:
        raise ConstructionError(f"theta construction inconsistent: {theta.violations[0]}")
    return theta


def build_theta_vr(
    X,
    Y=None,
    s: float = 0.0,
    r: float = 0.0,
    check_density: bool = True,
    density: Optional[DensityReport] = None,
) -> ThetaMap:
    """Identity on X, nearest X point (least index on ties) elsewhere.

    ``check_density=False`` builds the map even when r is too small; the
    failed invariants are then left in ``violations`` (negative controls).
    """
    inc = as_inclusion(X, Y)
    if check_density:
        _require_density(density or point_density_radius(inc), r)
    cross = inc.cross_distances()
    assignment, witnesses = {}, {}
    for y in range(len(inc.sup)):
        x = inc.sup_to_sub.get(y)
        if x is None:
            x = int(cross[y].argmin())
        assignment[y] = x
        witnesses[y] = ((y,), (x,))
    return _finish(ThetaMap(inc, 0, float(s), float(r), assignment, witnesses), check_density)


def build_theta_lesnick(
    X,
    Y=None,
    k: int = 0,
    s: float = 0.0,
    r: float = 0.0,
    budget: int = DEFAULT_BUDGET,
    check_density: bool = True,
    density: Optional[DensityReport] = None,
) -> ThetaMap:
    """Tuple construction: y and its k nearest within-s neighbours are matched
    to the closest distinct X-tuple, and y goes to that tuple's first entry.

    Y-vertices that are already vertices of L_{s,k}(X) are fixed. The derived
    membership of theta(y) in L_{s+2r,k}(X) is checked, not assumed.
    """
    inc = as_inclusion(X, Y)
    if check_density:
        if density is None:
            density = density_report(inc, k, budget)
        _require_density(density, r)
    dy = inc.sup.distances.entries
    core_y = core_distance(inc.sup, k)
    core_x = core_distance(inc.sub, k)
    y_vertices = [int(y) for y in np.flatnonzero(core_y <= s)]
    if not y_vertices:
        raise RipsHierarchyError(f"L_({s},{k})(Y) is empty; theta needs a nonempty source")
    if len(inc.sub) < k + 1:
        raise DensityError(f"X has fewer than {k + 1} points")
    sq = inc.cross_distances() ** 2
    xt = ordered_tuples(len(inc.sub), k + 1)
    assignment, witnesses = {}, {}
    for y in y_vertices:
        x = inc.sup_to_sub.get(y)
        if x is not None and core_x[x] <= s:
            assignment[y] = x
            witnesses[y] = ((y,), (x,))
            continue
        near = sorted((dy[y, w], w) for w in range(len(inc.sup)) if w != y and dy[y, w] <= s)
        y_tuple = (y,) + tuple(w for _, w in near[:k])
        cost = sq[y_tuple[0], xt[:, 0]]
        for i in range(1, k + 1):
            cost = cost + sq[y_tuple[i], xt[:, i]]
        best = int(cost.argmin())
        x_tuple = tuple(int(v) for v in xt[best])
        assignment[y] = x_tuple[0]
        witnesses[y] = (y_tuple, x_tuple)
    return _finish(ThetaMap(inc, k, float(s), float(r), assignment, witnesses), check_density)


def verify_upper_triangle(theta: ThetaMap, x_complex: SimplicialComplex) -> CheckResult:
    """theta after the inclusion is the identity on every simplex of the X-complex."""
    check = _Check()
    index = theta.inclusion.index
    for simplex in x_complex:
        image = theta.image(index[v] for v in simplex)
        check.record(image == simplex, simplex=list(simplex), image=image and list(image))
    return check.result()


def verify_simplicial_image(theta: ThetaMap, y_complex: SimplicialComplex, x_target: SimplicialComplex) -> CheckResult:
    """theta carries every simplex of the Y-complex at s onto a simplex of the X-complex at s+2r."""
    check = _Check()
    for simplex in y_complex:
        image = theta.image(simplex)
        check.record(image is not None and image in x_target, simplex=list(simplex), image=image and list(image))
    return check.result()


def verify_gamma_homotopy(theta: ThetaMap, y_complex: SimplicialComplex, y_target: SimplicialComplex) -> CheckResult:
    """sigma together with theta(sigma) spans a simplex of the Y-complex at s+2r.

    That simplex contains both j(sigma) and i(theta(sigma)) as faces, which is
    what makes j and i.theta homotopic.
    """
    check = _Check()
    index = theta.inclusion.index
    for simplex in y_complex:
        image = theta.image(simplex)
        if image is None:
            check.record(False, simplex=list(simplex), union=None)
            continue
        union = tuple(sorted(set(simplex) | {index[x] for x in image}))
        if len(union) - 1 > y_target.dim_cap:
            raise RipsHierarchyError(f"gamma target cap {y_target.dim_cap} too small for {union}")
        check.record(union in y_target, simplex=list(simplex), union=list(union))
    return check.result()


@dataclass
class InterleavingCertificate:
    mode: str
    s: float
    k: int
    r: float
    checks: dict
    theta: ThetaMap

    @property
    def verdict(self) -> bool:
        return all(c.passed for c in self.checks.values())

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "s": self.s,
            "k": self.k,
            "r": self.r,
            "checks": {name: c.to_json() for name, c in self.checks.items()},
            "verdict": self.verdict,
        }


def certify_interleaving(
    X,
    Y=None,
    k: int = 0,
    s: float = 0.0,
    r: float = 0.0,
    dim_cap: int = DEFAULT_CAP,
    budget: int = DEFAULT_BUDGET,
    check_density: bool = True,
    density: Optional[DensityReport] = None,
) -> InterleavingCertificate:
    """Build theta at (s, k, r) and run the three diagram checks.

    The Y-complex at s + 2r is built with cap 2*dim_cap + 1 so that the union
    of any source simplex with its image can be looked up.
    """
    inc = as_inclusion(X, Y)
    if k == 0:
        theta = build_theta_vr(inc, s=s, r=r, check_density=check_density, density=density)
    else:
        theta = build_theta_lesnick(inc, k=k, s=s, r=r, budget=budget, check_density=check_density, density=density)
    t = shifted(s, r)
    x_s = lesnick_complex(inc.sub, s, k, dim_cap)
    y_s = lesnick_complex(inc.sup, s, k, dim_cap)
    x_t = lesnick_complex(inc.sub, t, k, dim_cap)
    y_t = lesnick_complex(inc.sup, t, k, 2 * dim_cap + 1)
    checks = {
        "upper_triangle": verify_upper_triangle(theta, x_s),
        "simplicial_image": verify_simplicial_image(theta, y_s, x_t),
        "gamma_homotopy": verify_gamma_homotopy(theta, y_s, y_t),
    }
    return InterleavingCertificate("VR" if k == 0 else "Lesnick", float(s), k, float(r), checks, theta)


@dataclass
class EquivalenceReport:
    """Checkable consequences of the equivalence criterion at one Y phase-change value.

    ``certified`` means the gap condition held and every consequence was
    confirmed; ``failed`` means the gap condition held but some consequence
    did not, which would contradict the theory.
    """

    k: int
    scale_index: int
    scale: float
    r: float
    gap: float
    threshold_ok: bool
    j_identity: bool
    pi0_bijection: bool
    betti_equal: bool
    betti_x: tuple
    betti_y: tuple
    density_radius: float

    @property
    def certified(self) -> bool:
        return self.threshold_ok and self.j_identity and self.pi0_bijection and self.betti_equal

    @property
    def failed(self) -> bool:
        return self.threshold_ok and not self.certified

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "scale_index": self.scale_index,
            "scale": self.scale,
            "r": self.r,
            "gap": None if math.isinf(self.gap) else self.gap,
            "threshold_ok": self.threshold_ok,
            "j_identity": self.j_identity,
            "pi0_bijection": self.pi0_bijection,
            "betti_equal": self.betti_equal,
            "betti_x": list(self.betti_x),
            "betti_y": list(self.betti_y),
            "density_radius": self.density_radius,
            "certified": self.certified,
        }


def certify_equivalence(
    X,
    Y=None,
    k: int = 0,
    i: int = 0,
    r: float = 0.0,
    max_betti_dim: int = 1,
    dim_cap: int = DEFAULT_CAP,
    budget: int = DEFAULT_BUDGET,
) -> EquivalenceReport:
    """Check the inclusion L_{s_i,k}(X) -> L_{s_i,k}(Y) against the 2r < gap criterion.

    s_i runs over the phase-change values of Y. The reported consequences are
    always computed; they are claims only when ``threshold_ok``.
    """
    inc = as_inclusion(X, Y)
    report = density_report(inc, k, budget)
    _require_density(report, r)
    phases = phase_change_values(inc.sup.distances)
    if not 0 <= i < len(phases):
        raise ValueError(f"scale index {i} outside 0..{len(phases) - 1}")
    s = phases[i]
    gap = phases[i + 1] - s if i + 1 < len(phases) else math.inf
    t = shifted(s, r)
    lx, ly = lesnick_complex(inc.sub, s, k, dim_cap), lesnick_complex(inc.sup, s, k, dim_cap)
    j_identity = complexes_equal(lx, lesnick_complex(inc.sub, t, k, dim_cap)) and complexes_equal(
        ly, lesnick_complex(inc.sup, t, k, dim_cap)
    )
    comp = induced_component_map(lx, ly, inc.index)
    pi0 = len(set(comp.values())) == len(comp) == len(connected_components(ly))
    bx, by = betti_numbers(lx, max_betti_dim), betti_numbers(ly, max_betti_dim)
    return EquivalenceReport(
        k, i, s, float(r), gap, 2 * r < gap, j_identity, pi0, bx == by, bx, by, report.radius
    )


def certify_equivalence_range(X, Y=None, k: int = 0, i: int = 0, r: float = 0.0, **kw) -> list:
    """One report per density p = 0..k; density at k+1 points implies it at fewer."""
    inc = as_inclusion(X, Y)
    return [certify_equivalence(inc, k=p, i=i, r=r, **kw) for p in range(k + 1)]


@dataclass(eq=False)
class BranchMaps:
    """Hierarchies, branch posets and the induced branch-point maps for X in Y at (k, r).

    theta is rebuilt at each Y-scale where it is needed (``theta_at``), since
    its construction depends on the scale.
    """

    inclusion: Inclusion
    k: int
    r: float
    density: Optional[DensityReport]
    gamma_x: GammaTree
    gamma_y: GammaTree
    br_x: BranchPoset
    br_y: BranchPoset
    budget: int = DEFAULT_BUDGET
    _thetas: dict = field(default_factory=dict, repr=False)

    def theta_at(self, t: float) -> ThetaMap:
        if t not in self._thetas:
            self._thetas[t] = build_theta_lesnick(
                self.inclusion, k=self.k, s=t, r=self.r, budget=self.budget, density=self.density
            )
        return self._thetas[t]

    def include(self, v: GammaVertex) -> GammaVertex:
        """Image of an X-hierarchy vertex in the Y-hierarchy."""
        return self.gamma_y.vertex(v.scale, self.inclusion.index[v.component])

    def theta_vertex(self, v: GammaVertex) -> GammaVertex:
        """(t, [y]) -> (t + 2r, [theta_t(y)]) in the X-hierarchy."""
        return self.gamma_x.vertex(shifted(v.scale, self.r), self.theta_at(v.scale)(v.component))

    @cached_property
    def i_star(self) -> dict:
        return {b: self.br_y.max_below[self.include(b)] for b in self.br_x}

    @cached_property
    def theta_star(self) -> dict:
        return {b: self.br_x.max_below[self.theta_vertex(b)] for b in self.br_y}

    @cached_property
    def shift_x(self) -> dict:
        return br_map_shift(self.gamma_x, self.br_x, 2 * self.r)

    @cached_property
    def shift_y(self) -> dict:
        return br_map_shift(self.gamma_y, self.br_y, 2 * self.r)


def branch_maps(X, Y=None, k: int = 0, r: float = 0.0, budget: int = DEFAULT_BUDGET, check_density: bool = True) -> BranchMaps:
    inc = as_inclusion(X, Y)
    density = None
    if check_density:
        density = density_report(inc, k, budget)
        _require_density(density, r)
    gx, gy = build_gamma(inc.sub, k), build_gamma(inc.sup, k)
    return BranchMaps(inc, k, float(r), density, gx, gy, branch_points(gx), branch_points(gy), budget)


def br_map_inclusion(X, Y=None, k: int = 0) -> dict:
    """Each X branch point goes to the greatest Y branch point below its image."""
    inc = as_inclusion(X, Y)
    gx, gy = build_gamma(inc.sub, k), build_gamma(inc.sup, k)
    bx, by = branch_points(gx), branch_points(gy)
    return {b: by.max_below[gy.vertex(b.scale, inc.index[b.component])] for b in bx}


def br_map_theta(X, Y=None, k: int = 0, r: float = 0.0, budget: int = DEFAULT_BUDGET) -> dict:
    return branch_maps(X, Y, k, r, budget).theta_star


def br_map_shift(g: GammaTree, bp: BranchPoset, two_r: float) -> dict:
    """Each branch point goes to the greatest branch point below its shift by 2r."""
    return {b: bp.max_below[g.vertex(b.scale + two_r, b.component)] for b in bp}


def check_monotone(mapping: dict, source: GammaTree, target: GammaTree) -> CheckResult:
    check = _Check()
    for a, b in itertools.permutations(mapping, 2):
        if source.leq(a, b):
            check.record(target.leq(mapping[a], mapping[b]), a=a.to_json(), b=b.to_json())
    return check.result()


def _lub_semi_preservation(mapping: dict, source: GammaTree, target: GammaTree) -> CheckResult:
    """f(a) v f(b) <= f(a v b) for every pair with a common upper bound."""
    check = _Check()
    for a, b in itertools.combinations(mapping, 2):
        try:
            ab = lub(source, a, b)
        except NoUpperBoundError:
            continue
        joined = lub(target, mapping[a], mapping[b])
        check.record(target.leq(joined, mapping[ab]), a=a.to_json(), b=b.to_json())
    return check.result()


@dataclass
class InequalityReport:
    k: int
    r: float
    checks: dict

    @property
    def verdict(self) -> bool:
        return all(c.passed for c in self.checks.values())

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "r": self.r,
            "checks": {name: c.to_json() for name, c in self.checks.items()},
            "verdict": self.verdict,
        }


def _maps(X, Y, k, r, budget) -> BranchMaps:
    return X if isinstance(X, BranchMaps) else branch_maps(X, Y, k, r, budget)


def verify_homotopy_inequalities(X, Y=None, k: int = 0, r: float = 0.0, budget: int = DEFAULT_BUDGET) -> InequalityReport:
    """Pointwise checks of the branch-point homotopies.

    Also accepts a prepared BranchMaps in place of X, whose map tables may
    have been altered (negative controls).
    """
    bm = _maps(X, Y, k, r, budget)
    gx, gy = bm.gamma_x, bm.gamma_y
    i_star, theta_star, sx, sy = bm.i_star, bm.theta_star, bm.shift_x, bm.shift_y

    theta_i, i_theta, id_x, id_y = _Check(), _Check(), _Check(), _Check()
    for b in bm.br_x:
        theta_i.record(gx.leq(theta_star[i_star[b]], sx[b]), point=b.to_json())
        id_x.record(gx.leq(b, sx[b]), point=b.to_json())
    for b in bm.br_y:
        i_theta.record(gy.leq(i_star[theta_star[b]], sy[b]), point=b.to_json())
        id_y.record(gy.leq(b, sy[b]), point=b.to_json())
    checks = {
        "inclusion_monotone": check_monotone(i_star, gx, gy),
        "theta_monotone": check_monotone(theta_star, gy, gx),
        "theta_i_le_shift": theta_i.result(),
        "i_theta_le_shift": i_theta.result(),
        "id_le_shift_x": id_x.result(),
        "id_le_shift_y": id_y.result(),
        "lub_inclusion": _lub_semi_preservation(i_star, gx, gy),
        "lub_theta": _lub_semi_preservation(theta_star, gy, gx),
        "lub_shift_x": _lub_semi_preservation(sx, gx, gx),
        "lub_shift_y": _lub_semi_preservation(sy, gy, gy),
    }
    return InequalityReport(bm.k, bm.r, checks)


def verify_eq1xx(X, Y=None, k: int = 0, r: float = 0.0, budget: int = DEFAULT_BUDGET) -> InequalityReport:
    """For X branch points a, b with join (s, [x]) in X and (t, [y]) the join of
    their images in Y: (s, [x]) <= (t+2r, [theta(y)]) <= (s+2r, [x]) and
    s - 2r <= t <= s."""
    bm = _maps(X, Y, k, r, budget)
    gx, gy = bm.gamma_x, bm.gamma_y
    lower, upper, scalar = _Check(), _Check(), _Check()
    for a, b in itertools.combinations_with_replacement(bm.br_x.points, 2):
        try:
            joined = lub(gx, a, b)
        except NoUpperBoundError:
            continue
        image_join = lub(gy, bm.include(a), bm.include(b))
        mid = bm.theta_vertex(image_join)
        top = gx.vertex(shifted(joined.scale, bm.r), joined.component)
        pair = {"a": a.to_json(), "b": b.to_json(), "s": joined.scale, "t": image_join.scale}
        lower.record(gx.leq(joined, mid), **pair)
        upper.record(gx.leq(mid, top), **pair)
        # s - 2r <= t, written as s <= t + 2r to match the floor used for mid
        scalar.record(joined.scale <= shifted(image_join.scale, bm.r) and image_join.scale <= joined.scale, **pair)
    checks = {"lower": lower.result(), "upper": upper.result(), "scalar_bound": scalar.result()}
    return InequalityReport(bm.k, bm.r, checks)


def verify_shift_sharpness(g: GammaTree, bp: BranchPoset, two_r: float) -> CheckResult:
    """A branch point at s_i is fixed by the shift whenever 2r < s_{i+1} - s_i."""
    shift = br_map_shift(g, bp, two_r)
    check = _Check()
    for b in bp:
        j = g.index_of(b)
        gap = g.scales[j + 1] - b.scale if j + 1 < len(g) else math.inf
        if two_r < gap:
            check.record(shift[b] == b, point=b.to_json(), image=shift[b].to_json())
    return check.result()
