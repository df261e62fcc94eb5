"""rips-hierarchy command line.

Exit status: 0 on success, 1 when a requested certificate or check fails,
2 on usage or input errors.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from . import io
from .complexes import DEFAULT_CAP, lesnick_complex
from .errors import DensityError, RipsHierarchyError
from .hierarchy import branch_points, build_gamma
from .homology import betti_report
from .interleaving import (
    AUTO_R_EPS,
    auto_radius,
    branch_maps,
    certify_equivalence,
    certify_interleaving,
    density_report,
    verify_eq1xx,
    verify_homotopy_inequalities,
)
from .metric import DEFAULT_BUDGET, core_distance, phase_change_values

log = logging.getLogger("rips_hierarchy")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _nonneg_int(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text}")
    return value


def _nonneg_float(text):
    value = float(text)
    if not value >= 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative number, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rips-hierarchy", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, subset=False):
        p.add_argument("--input", required=True, help="point cloud (.csv or .json); the super-cloud Y for certify/compare")
        p.add_argument("--labels", action="store_true", help="CSV first column holds point labels")
        p.add_argument("--k", type=_nonneg_int, default=0, help="density parameter")
        if subset:
            p.add_argument("--subset", required=True, help="sub-cloud X: a point file, a JSON {\"indices\": [...]} file, or i,j,...")
        p.add_argument("--output", help="write to this file instead of stdout")

    p = sub.add_parser("distances", help="distance matrix, phase-change values, core distances")
    common(p)

    p = sub.add_parser("complex", help="dump a Rips / degree-Rips complex or its Betti numbers")
    common(p)
    scale = p.add_mutually_exclusive_group(required=True)
    scale.add_argument("--scale", type=_nonneg_float)
    scale.add_argument("--scale-index", type=_nonneg_int)
    p.add_argument("--cap", type=_nonneg_int, default=DEFAULT_CAP)
    p.add_argument("--betti-dim", type=_nonneg_int, help="emit mod-2 Betti numbers up to this dimension instead")

    p = sub.add_parser("hierarchy", help="the cluster hierarchy at density k")
    common(p)
    p.add_argument("--format", choices=["json", "dot", "newick"], default="json")

    p = sub.add_parser("branchpoints", help="the branch-point poset at density k")
    common(p)
    p.add_argument("--format", choices=["json", "dot", "newick"], default="json")

    for name, text in (("certify", "interleaving certificate and equivalence reports"),
                       ("compare", "branch-point maps and their homotopy inequalities")):
        p = sub.add_parser(name, help=text)
        common(p, subset=True)
        radius = p.add_mutually_exclusive_group(required=True)
        radius.add_argument("--r", type=_nonneg_float, help="density radius parameter")
        radius.add_argument("--auto-r", action="store_true", help=f"r = density radius * (1 + {AUTO_R_EPS:g})")
        p.add_argument("--budget", type=_nonneg_int, default=DEFAULT_BUDGET, help="tuple-pair cap for exact density")
        p.add_argument("--exact", action="store_true", help="fail instead of using the greedy density bound")
        if name == "certify":
            scale = p.add_mutually_exclusive_group(required=True)
            scale.add_argument("--scale", type=_nonneg_float)
            scale.add_argument("--scale-index", type=_nonneg_int, help="index into the phase-change values of Y")
            p.add_argument("--cap", type=_nonneg_int, default=DEFAULT_CAP)
            p.add_argument("--betti-dim", type=_nonneg_int, default=1)
    return parser


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("RIPS_HIERARCHY_THREADS", "1")))
    except ValueError:
        return 1


def _scale(args, cloud):
    if args.scale is not None:
        return args.scale
    phases = phase_change_values(cloud.distances)
    if args.scale_index >= len(phases):
        raise RipsHierarchyError(f"--scale-index {args.scale_index} outside 0..{len(phases) - 1}")
    return phases[args.scale_index]


def cmd_distances(args):
    cloud = io.read_cloud(args.input, args.labels)
    dm = cloud.distances
    return EXIT_OK, io.dumps({
        "n": len(cloud),
        "distances": dm.entries.tolist(),
        "phase_changes": list(phase_change_values(dm)),
        "k": args.k,
        "core_distances": core_distance(cloud, args.k).tolist(),
    })


def cmd_complex(args):
    cloud = io.read_cloud(args.input, args.labels)
    c = lesnick_complex(cloud, _scale(args, cloud), args.k, args.cap)
    if args.betti_dim is not None:
        return EXIT_OK, io.dumps(betti_report(c, args.betti_dim))
    return EXIT_OK, io.dumps(c.to_json())


def cmd_hierarchy(args):
    cloud = io.read_cloud(args.input, args.labels)
    g = build_gamma(cloud, args.k)
    bp = branch_points(g)
    if args.format == "dot":
        return EXIT_OK, io.gamma_dot(g, bp)
    if args.format == "newick":
        return EXIT_OK, io.newick(bp)
    return EXIT_OK, io.dumps(io.gamma_json(g, bp))


def cmd_branchpoints(args):
    cloud = io.read_cloud(args.input, args.labels)
    bp = branch_points(build_gamma(cloud, args.k))
    if args.format == "dot":
        return EXIT_OK, io.branch_dot(bp)
    if args.format == "newick":
        return EXIT_OK, io.newick(bp)
    return EXIT_OK, io.dumps({"k": args.k, "branch_points": io.branch_points_json(bp)})


def _inclusion_and_r(args):
    sup = io.read_cloud(args.input, args.labels)
    inc = io.read_subset(args.subset, sup, args.labels)
    report = density_report(inc, args.k, args.budget)
    if not report.exact:
        if args.exact:
            raise RipsHierarchyError("exact density radius exceeds --budget and --exact was given")
        log.warning("density radius is a greedy upper bound (tuple budget %d exceeded)", args.budget)
    r = auto_radius(report, sup) if args.auto_r else args.r
    return inc, report, r


def cmd_certify(args):
    inc, report, r = _inclusion_and_r(args)
    s = _scale(args, inc.sup)
    try:
        cert = certify_interleaving(inc, k=args.k, s=s, r=r, dim_cap=args.cap, budget=args.budget, density=report)
    except DensityError as exc:
        log.error("%s", exc)
        return EXIT_FAIL, io.dumps({"density": report.to_json(), "r": r, "error": str(exc)})
    out = {"density": report.to_json(), "r": r, "certificate": cert.to_json()}
    status = EXIT_OK if cert.verdict else EXIT_FAIL
    if args.scale_index is not None:
        def one(p):
            return certify_equivalence(inc, k=p, i=args.scale_index, r=r, max_betti_dim=args.betti_dim,
                                       dim_cap=args.cap, budget=args.budget)

        with ThreadPoolExecutor(max_workers=_threads()) as pool:
            reports = list(pool.map(one, range(args.k + 1)))
        out["equivalence"] = [rep.to_json() for rep in reports]
        if any(rep.failed for rep in reports):
            status = EXIT_FAIL
    return status, io.dumps(out)


def cmd_compare(args):
    inc, report, r = _inclusion_and_r(args)
    try:
        bm = branch_maps(inc, k=args.k, r=r, budget=args.budget)
    except DensityError as exc:
        log.error("%s", exc)
        return EXIT_FAIL, io.dumps({"density": report.to_json(), "r": r, "error": str(exc)})
    homotopy = verify_homotopy_inequalities(bm)
    eq = verify_eq1xx(bm)
    out = {
        "density": report.to_json(),
        "r": r,
        "i_star": [[a.to_json(), b.to_json()] for a, b in sorted(bm.i_star.items())],
        "theta_star": [[a.to_json(), b.to_json()] for a, b in sorted(bm.theta_star.items())],
        "homotopy": homotopy.to_json(),
        "eq1xx": eq.to_json(),
    }
    return (EXIT_OK if homotopy.verdict and eq.verdict else EXIT_FAIL), io.dumps(out)


COMMANDS = {
    "distances": cmd_distances,
    "complex": cmd_complex,
    "hierarchy": cmd_hierarchy,
    "branchpoints": cmd_branchpoints,
    "certify": cmd_certify,
    "compare": cmd_compare,
}


def main(argv=None) -> int:
    logging.basicConfig(format="%(name)s: %(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        status, text = COMMANDS[args.command](args)
    except (RipsHierarchyError, ValueError, OSError) as exc:
        print(f"rips-hierarchy: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
