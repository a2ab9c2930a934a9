"""Command line entry point: `kakeya <command> ...`."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import io
from .errors import KakeyaError


def _vector(text: str) -> np.ndarray:
    return np.array([float(x) for x in text.replace(" ", "").strip("[]()").split(",")])


def _emit(obj, out):
    if out:
        io.write_json(obj, out)
    else:
        json.dump(io.to_jsonable(obj), sys.stdout, indent=1)
        sys.stdout.write("\n")


def _check(name, passed, value, target, tolerance):
    return {"name": name, "passed": bool(passed), "value": value, "target": target, "tolerance": tolerance}


# --------------------------------------------------------------------------


def cmd_erode(args):
    from .erosion import erode, erode_rotated
    K = io.load_body(args.container)
    S = io.load_body(args.probe)
    I = erode_rotated(K, S, io.load_rotation(args.rotation)) if args.rotation else erode(K, S)
    out = io.body_to_json(I.poly)
    out["feasible"] = I.feasible
    out["inradius"] = I.poly.inradius
    _emit(out, args.out)


def cmd_classify(args):
    from .erosion import TranslateSet, dimension_class
    poly = io.load_body(args.translate_set)
    print(dimension_class(TranslateSet(poly, poly, None), args.point_tol))


def cmd_hausdorff(args):
    from .metrics import hausdorff
    print(repr(hausdorff(io.load_body(args.a), io.load_body(args.b))))


def cmd_chebyshev(args):
    from .metrics import chebyshev_center
    res = chebyshev_center(io.load_body(args.a))
    _emit({"center": res.center, "radius": res.radius, "support_points": res.support_points}, None)


def cmd_select2d(args):
    from .selector2d import trace
    K = io.load_body(args.container)
    S = io.load_body(args.probe)
    tr = trace(K, S, args.samples, seed=args.seed)
    _emit({"angles": tr.angles, "translates": tr.translates, "gaps": tr.gaps,
           "slacks": tr.slacks, "max_gap": tr.max_gap}, args.out)
    if args.emit_plot:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
        fig, ax = plt.subplots(1, 2, figsize=(9, 4))
        ax[0].plot(tr.translates[:, 0], tr.translates[:, 1], lw=0.8)
        ax[0].set_aspect("equal")
        ax[0].set_title("selected translate")
        ax[1].hist(tr.gaps, bins=50)
        ax[1].set_title("gaps between adjacent angles")
        fig.tight_layout()
        fig.savefig(args.emit_plot)


def cmd_counterexample3d(args):
    from .swept import build_swept_body, expected_translate_3d, verify_discontinuity
    body = build_swept_body(args.nt, args.ncircle)
    checks = [_check("witness", body.witness["passed"], body.witness["min_slack"], 0.0,
                     body.witness["tolerance"])]
    if args.emit:
        io.write_obj(body.hull.points, body.hull.facets, args.emit)
    if args.verify:
        phis = [float(x) for x in args.verify.split("=", 1)[-1].split(",")]
        rep = verify_discontinuity(body, phis, hausdorff_tol=args.tol)
        for c in rep["checks"]:
            checks.append(_check(f"translate phi={c['phi']}", c["passed"], c["hausdorff"], 0.0, args.tol)
                          | {"class": c["class"], "translate": c["translate"],
                             "expected": expected_translate_3d(c["phi"])})
        for phi in rep["holes"]:
            checks.append(_check(f"translate phi={phi}", False, None, 0.0, args.tol) | {"class": "Empty"})
        if rep["jump"] is not None:
            checks.append(_check("jump at phi=0", abs(rep["jump"] - np.pi / 2) <= 0.05, rep["jump"],
                                 np.pi / 2, 0.05))
    report = {"n_t": args.nt, "n_circle": args.ncircle, "facets": len(body.hull.facets),
              "checks": checks, "passed": all(c["passed"] for c in checks)}
    _emit(report, args.out)


def cmd_counterexample4d(args):
    from . import fourd
    report = {"checks": []}
    if args.ap:
        for x in args.ap:
            report.setdefault("labels", {})[x] = fourd.ap_label(x)
    if args.verify_ap:
        ap = fourd.verify_ap_properties(args.pairs, args.trials, args.seed)
        for k, v in ap.items():
            report["checks"].append(_check(k, v["passed"], len(v.get("failures", [])), 0, 0))
        v = fourd.sv_cylinder_intersection([1.0, 0, 0, 0])
        ok = v.kind == "TwoPairs" and np.allclose(v.points, [[0.5, 3 ** 0.5 / 2, 0, 0],
                                                             [0.5, -3 ** 0.5 / 2, 0, 0]], atol=1e-12)
        report["checks"].append(_check("cylinder pair at e1", ok, [p.tolist() for p in v.points],
                                       "(1/2, +-sqrt(3)/2, 0, 0)", 1e-12))
    cloud = fourd.build_4d_witness_cloud(args.resolution, args.seed) if args.cloud else None
    paths = []
    if args.verify_obstruction:
        data = json.loads(Path(args.verify_obstruction).read_text())
        paths += data if isinstance(data, list) else [data]
    rng = np.random.default_rng(args.seed)
    paths += [fourd.random_path_attempt(rng) for _ in range(args.generate_paths)]
    for i, p in enumerate(paths):
        rep = fourd.verify_4d_obstruction(cloud, p)
        passed = rep["vacuous"] or rep["forced_jump"] >= fourd.OBSTRUCTION - 1e-3
        report["checks"].append(_check(f"obstruction path {i}", passed, rep["forced_jump"],
                                       fourd.OBSTRUCTION, 1e-3) | {"report": rep})
    report["passed"] = all(c["passed"] for c in report["checks"])
    _emit(report, args.out)


def cmd_plan(args):
    from .planner import MotionPath, build_graph, plan, validate
    K = io.load_body(args.container)
    g = build_graph(K, args.level)

    def placement(d, t):
        v = _vector(d)
        v = v / np.linalg.norm(v)
        if t:
            return v, _vector(t)
        from .planner import _deepest
        return v, _deepest(K, v)[0]

    ref = None
    if args.reference:
        data = json.loads(Path(args.reference).read_text())
        ref = np.array(data["directions"] if isinstance(data, dict) else data, dtype=float)
    proj = {"no": False, "yes": True, "auto": "auto"}[args.projective]
    path = plan(K, placement(args.start_dir, args.start_translate),
                placement(args.goal_dir, args.goal_translate), margin=args.margin, reference=ref,
                eps_budget=args.eps_budget, graph=g, projective=proj)
    out = path.to_json()
    check = validate(path, K, 10)
    out["validation"] = {"passed": check.passed, "min_slack": check.min_slack}
    out["flipped_goal"] = path.info["flipped_goal"]
    _emit(out, args.out)
    if args.emit_plot:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
        fig = plt.figure(figsize=(9, 4))
        ax = fig.add_subplot(1, 2, 1, projection="3d")
        D = path.directions
        ax.plot(D[:, 0], D[:, 1], D[:, 2])
        ax.set_title("direction path")
        ax = fig.add_subplot(1, 2, 2, projection="3d")
        U = path.translates
        ax.plot(U[:, 0], U[:, 1], U[:, 2])
        ax.set_title("translate path")
        fig.savefig(args.emit_plot)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kakeya", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("erode", help="translate set of a probe inside a container")
    s.add_argument("--container", required=True)
    s.add_argument("--probe", required=True)
    s.add_argument("--rotation")
    s.add_argument("--out")
    s.set_defaults(func=cmd_erode)

    s = sub.add_parser("classify", help="dimension class of a translate set")
    s.add_argument("--translate-set", required=True)
    s.add_argument("--point-tol", type=float, default=1e-7)
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("hausdorff", help="Hausdorff distance between two bodies")
    s.add_argument("a")
    s.add_argument("b")
    s.set_defaults(func=cmd_hausdorff)

    s = sub.add_parser("chebyshev", help="centre of the minimum enclosing ball")
    s.add_argument("a")
    s.set_defaults(func=cmd_chebyshev)

    s = sub.add_parser("select2d", help="continuous planar placement over all rotations")
    s.add_argument("--container", required=True)
    s.add_argument("--probe", required=True)
    s.add_argument("--samples", type=int, default=1024)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")
    s.add_argument("--emit-plot")
    s.set_defaults(func=cmd_select2d)

    s = sub.add_parser("counterexample3d", help="build and check the swept-circle body")
    s.add_argument("--nt", type=int, default=512)
    s.add_argument("--ncircle", type=int, default=256)
    s.add_argument("--emit", help="write the hull mesh as OBJ")
    s.add_argument("--verify", help="phi=0.1,0.5,...")
    s.add_argument("--tol", type=float, default=0.02)
    s.add_argument("--out")
    s.set_defaults(func=cmd_counterexample3d)

    s = sub.add_parser("counterexample4d", help="check the four-dimensional obstruction")
    s.add_argument("--verify-ap", action="store_true")
    s.add_argument("--verify-obstruction", help="JSON path attempt (or list of them)")
    s.add_argument("--generate-paths", type=int, default=0)
    s.add_argument("--ap", nargs="*", help="first coordinates (e.g. 3/4) to label exactly")
    s.add_argument("--cloud", action="store_true", help="also test placements against a witness cloud")
    s.add_argument("--resolution", type=int, default=40)
    s.add_argument("--pairs", type=int, default=10000)
    s.add_argument("--trials", type=int, default=100)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_counterexample4d)

    s = sub.add_parser("plan", help="rotate a unit segment between two placements")
    s.add_argument("--container", required=True)
    s.add_argument("--start-dir", required=True)
    s.add_argument("--start-translate")
    s.add_argument("--goal-dir", required=True)
    s.add_argument("--goal-translate")
    s.add_argument("--level", type=int, default=5)
    s.add_argument("--margin", type=float, default=1e-3)
    s.add_argument("--reference")
    s.add_argument("--eps-budget", type=float)
    s.add_argument("--projective", choices=["no", "yes", "auto"], default="auto")
    s.add_argument("--out")
    s.add_argument("--emit-plot")
    s.set_defaults(func=cmd_plan)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except KakeyaError as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
