"""Reading point clouds and writing hierarchies, complexes and reports."""
from __future__ import annotations

import csv
import json
import math
import os
import re
from pathlib import Path

from .errors import InputError, RipsHierarchyError
from .hierarchy import BranchPoset, GammaTree, GammaVertex
from .metric import Inclusion, PointCloud


def _parse_float(cell: str) -> float:
    try:
        return float(cell)
    except ValueError:
        raise InputError(f"non-numeric coordinate {cell!r}") from None


def read_csv(path, labels: bool = False) -> PointCloud:
    """One point per row; with ``labels`` the first column names the point.

    A first row with no numeric coordinate cell is taken as a header.
    """
    with open(path, newline="") as fh:
        rows = [[c.strip() for c in row] for row in csv.reader(fh) if any(c.strip() for c in row)]
    if rows and not any(_is_number(c) for c in rows[0][int(labels):]):
        rows = rows[1:]
    if not rows:
        raise InputError(f"{path}: no points")
    names = [row[0] for row in rows] if labels else None
    points = [[_parse_float(c) for c in row[int(labels):]] for row in rows]
    return PointCloud(points, names)


def _is_number(cell: str) -> bool:
    try:
        float(cell)
    except ValueError:
        return False
    return True


def read_json(path) -> PointCloud:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}: malformed JSON: {exc}") from None
    if not isinstance(data, dict) or "points" not in data:
        raise InputError(f'{path}: expected an object with a "points" array')
    return PointCloud(data["points"], data.get("labels"))


def read_cloud(path, labels: bool = False) -> PointCloud:
    path = Path(path)
    if not path.is_file():
        raise InputError(f"cannot read {path}")
    if path.suffix.lower() == ".json":
        return read_json(path)
    return read_csv(path, labels)


def read_subset(text: str, sup: PointCloud, labels: bool = False) -> Inclusion:
    """A sub-cloud given as a file of points, a JSON ``{"indices": [...]}`` file,
    or a comma-separated list of indices into ``sup``."""
    if os.path.isfile(text):
        if text.lower().endswith(".json"):
            with open(text) as fh:
                data = json.load(fh)
            if isinstance(data, dict) and "indices" in data:
                return Inclusion.from_indices(sup, data["indices"])
        return Inclusion.from_clouds(read_cloud(text, labels), sup)
    if re.fullmatch(r"\s*\d+(\s*,\s*\d+)*\s*", text):
        return Inclusion.from_indices(sup, [int(t) for t in text.split(",")])
    raise InputError(f"--subset {text!r} is neither a file nor a list of indices")


def jsonable(obj):
    """Replace infinities by None so the output is strict JSON."""
    if isinstance(obj, float):
        return None if math.isinf(obj) or math.isnan(obj) else obj
    if isinstance(obj, dict):
        return {k: jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    return obj


def dumps(obj) -> str:
    return json.dumps(jsonable(obj), indent=2, allow_nan=False) + "\n"


def branch_points_json(bp: BranchPoset) -> list:
    g = bp.tree
    return [
        {
            "scale": b.scale,
            "component": b.component,
            "kind": bp.kind[b],
            "members": list(g.members(b)),
            "parent": None if bp.parent[b] is None else bp.parent[b].to_json(),
        }
        for b in bp
    ]


def gamma_json(g: GammaTree, bp: BranchPoset) -> dict:
    """Condensed form: the scales, the partition at each, and the branch points."""
    return {
        "scales": list(g.scales),
        "layers": [[list(b) for b in layer.blocks] for layer in g.layers],
        "branch_points": branch_points_json(bp),
    }


def _node(j: int, c: int) -> str:
    return f"s{j}_c{c}"


def gamma_dot(g: GammaTree, bp: BranchPoset) -> str:
    """One node per (scale, component); births are boxes, merges diamonds."""
    shape = {"birth": "box", "merge": "diamond"}
    lines = ["digraph gamma {", "  rankdir=BT;", "  node [shape=ellipse];"]
    for j, (s, layer) in enumerate(zip(g.scales, g.layers)):
        for c in layer.representatives:
            v = GammaVertex(s, c)
            attrs = f'label="{s:g} [{c}]"'
            if v in bp:
                attrs += f", shape={shape[bp.kind[v]]}"
            lines.append(f"  {_node(j, c)} [{attrs}];")
    for j, succ in enumerate(g.successors):
        for c, d in sorted(succ.items()):
            lines.append(f"  {_node(j, c)} -> {_node(j + 1, d)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def branch_dot(bp: BranchPoset) -> str:
    shape = {"birth": "box", "merge": "diamond"}
    g = bp.tree
    lines = ["digraph branch_points {", "  rankdir=BT;"]
    for b in bp:
        lines.append(f'  {_node(g.index_of(b), b.component)} [label="{b.scale:g} [{b.component}]", shape={shape[bp.kind[b]]}];')
    for b in bp:
        p = bp.parent[b]
        if p is not None:
            lines.append(f"  {_node(g.index_of(b), b.component)} -> {_node(g.index_of(p), p.component)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _newick_name(label: str) -> str:
    if re.fullmatch(r"[A-Za-z0-9_.\-]+", label):
        return label
    return "'" + label.replace("'", "''") + "'"


def newick(bp: BranchPoset) -> str:
    """Branch-point tree with branch lengths equal to scale differences.

    Births are leaves named by the point labels of their component; the
    hierarchy's top layer must be connected.
    """
    g = bp.tree
    roots = bp.roots()
    if len(roots) != 1:
        raise RipsHierarchyError(f"top layer is disconnected ({len(roots)} trees); Newick needs one root")
    children = {b: [] for b in bp}
    for b in bp:
        if bp.parent[b] is not None:
            children[bp.parent[b]].append(b)

    def render(b):
        kids = sorted(children[b], key=lambda c: c.component)
        if kids:
            inner = ",".join(f"{render(c)}:{b.scale - c.scale!r}" for c in kids)
            return f"({inner})"
        return _newick_name("+".join(g.cloud.label(i) for i in g.members(b)))

    return render(roots[0]) + ";\n"
