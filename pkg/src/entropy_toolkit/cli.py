"""Command line front end.

Subcommands: check, entropy, score, fouratom, exl, minimize, cloud, hull,
outer, export.  Exit codes: 0 success, 1 a requested check failed (e.g. the
input of ``check`` is not a polymatroid), 2 usage or input errors.  All
numeric console output uses 10 significant digits; files carry full doubles.
Searches are deterministic given their seeds; ENTROPY_TOOLKIT_THREADS caps
parallel restarts.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from . import core, entropy, frame as frame_mod, inequalities as ineq_mod
from .search import engine, geometry

FMT = "{:.10g}"


def _fmt(x: float) -> str:
    return FMT.format(float(x))


def _load_frame(ground: core.GroundSet, spec: str | None) -> frame_mod.IngletonFrame:
    if spec is None:
        return frame_mod.IngletonFrame.default(ground)
    return frame_mod.IngletonFrame.from_spec(ground, spec)


def _print_set_function(f: core.SetFunction, bits: bool = False) -> None:
    unit = entropy.LN2 if bits else 1.0
    for mask in f.ground.subsets():
        key = f.ground.subset_key(mask) or "{}"
        print(f"  {key:<{f.ground.n}} {_fmt(f.values[mask] / unit)}")


# --- subcommands ---------------------------------------------------------------

def cmd_check(args) -> int:
    f = core.load_set_function(args.file)
    report = core.check_axioms(f, tol=args.tol)
    print(f"monotone:   {report.is_monotone}   "
          f"(worst violation {_fmt(report.worst_monotone_violation)})")
    print(f"submodular: {report.is_submodular}   "
          f"(worst violation {_fmt(report.worst_submodular_violation)})")
    for kind, witnesses in [("monotone", report.monotone_witnesses),
                            ("submodular", report.submodular_witnesses)]:
        for a, b in witnesses[:5]:
            print(f"  {kind} witness: ({f.ground.subset_key(a) or '{}'}, "
                  f"{f.ground.subset_key(b) or '{}'})")
    if report.is_polymatroid:
        print(f"tight:      {core.is_tight(f, args.tol)}")
        print(f"modular:    {core.is_modular(f, args.tol)}")
        print("polymatroid: yes")
        return 0
    print("polymatroid: no")
    return 1


def cmd_entropy(args) -> int:
    dist = entropy.load_distribution(args.file)
    f = entropy_function_checked(dist)
    if args.output:
        core.save_set_function(f, args.output)
        print(f"wrote {args.output}")
    _print_set_function(f, bits=args.bits)
    print(("entropies in bits" if args.bits else "entropies in nats"))
    return 0


def entropy_function_checked(dist: entropy.JointDistribution) -> core.SetFunction:
    f = entropy.entropy_function(dist)
    report = core.check_axioms(f, tol=core.TOL_ENTROPIC)
    if not report.is_polymatroid:
        raise ValueError("computed entropy function fails the polymatroid axioms; "
                         "the input distribution is corrupt")
    return f


def _score_block(f: core.SetFunction, fr: frame_mod.IngletonFrame) -> None:
    print(f"I(f)        = {_fmt(frame_mod.ingleton_score(f, fr))}")
    fti = core.tight_part(f)
    if fti.rank > 0:
        print(f"I(f^ti)     = {_fmt(frame_mod.ingleton_score(fti, fr))}")
    g = frame_mod.a_map(frame_mod.b_map(fti, fr), fr)
    if g.rank > 0:
        print(f"I(a.b.f^ti) = {_fmt(frame_mod.ingleton_score(g, fr))}")
    try:
        point, _ = frame_mod.cross_section_point(f, fr)
    except ValueError as exc:
        print(f"cross-section point: degenerate ({exc})")
        return
    print("weights     = ({}, {}, {}, {})".format(*(map(_fmt, point.as_tuple()))))


def cmd_score(args) -> int:
    f = core.load_set_function(args.file)
    fr = _load_frame(f.ground, args.frame)
    print(f"frame (i,j,k,l) = {fr.roles}")
    print(f"h(N) = {_fmt(f.rank)}, tight = {core.is_tight(f)}")
    _score_block(f, fr)
    return 0


def cmd_fouratom(args) -> int:
    fr = frame_mod.IngletonFrame.default(core.GroundSet("ijkl"))
    if args.minimize:
        p_star, score = engine.minimize_scalar(
            entropy.four_atom_score, 0.0, 0.5, tol=1e-7)
        print(f"p*    = {_fmt(p_star)}")
        print(f"score = {_fmt(score)}")
        p = p_star
    else:
        p = args.p
        if p is None:
            raise ValueError("need --p or --minimize")
    closed = entropy.four_atom_score(p)
    oracle = frame_mod.ingleton_score(
        entropy.entropy_function(entropy.four_atom_distribution(p)), fr)
    print(f"closed form at p={_fmt(p)}: {_fmt(closed)}")
    print(f"distribution oracle:      {_fmt(oracle)}")
    print(f"difference:               {_fmt(abs(closed - oracle))}")
    return 0


def cmd_exl(args) -> int:
    if args.default:
        params = entropy.EXL_REFERENCE
    else:
        missing = [n for n in "pqrst" if getattr(args, n) is None]
        if missing:
            raise ValueError(f"--default or all of --p..--t required; missing {missing}")
        params = entropy.ExLParams(args.p, args.q, args.r, args.s, args.t)
    ground = core.GroundSet("ijkl")
    fr = _load_frame(ground, args.frame)

    f = entropy.exl_closed_form(params, ground)
    table_entropy = entropy.entropy_function(entropy.exl_distribution(params, ground))
    dev = float(np.max(np.abs(f.values - table_entropy.values)))
    print("params (p,q,r,s,t) = ({}, {}, {}, {}, {})".format(
        *(map(_fmt, params.as_tuple()))))
    _score_block(f, fr)
    print(f"closed form vs table entropy, max deviation = {_fmt(dev)}")
    return 0


def _config_from_args(args) -> engine.SearchConfig:
    if args.config:
        with open(args.config) as fh:
            return engine.SearchConfig.from_json(json.load(fh))
    kwargs = {}
    if args.alphabet:
        kwargs["alphabet_sizes"] = tuple(int(s) for s in args.alphabet.split(","))
    if args.restarts is not None:
        kwargs["restarts"] = args.restarts
    if args.budget is not None:
        kwargs["budget_evals"] = args.budget
    if args.seed is not None:
        kwargs["master_seed"] = args.seed
    if getattr(args, "objective", None) is not None:
        kwargs["objective"] = args.objective
    return engine.SearchConfig(**kwargs)


def _result_json(result: engine.SearchResult, cfg: engine.SearchConfig) -> dict:
    point = None
    if result.best_point is not None:
        point = {"weights": list(result.best_point.as_tuple()),
                 "source": result.best_point.source_tag}
    return {
        "config": cfg.to_json(),
        "best_value": result.best_value,
        "best_restart": result.best_restart,
        "eval_count": result.eval_count,
        "budget_exhausted": result.budget_exhausted,
        "seed_trace": list(result.seed_trace),
        "best_point": point,
        "best_distribution": entropy.distribution_to_json(result.best_distribution),
    }


def cmd_minimize(args) -> int:
    cfg = _config_from_args(args)
    ground = core.GroundSet("ijkl")
    fr = _load_frame(ground, args.frame)
    init = entropy.load_distribution(args.init_dist) if args.init_dist else None
    result = engine.optimize_distribution(cfg, fr, init=init)
    print(f"objective      = {cfg.objective}")
    print(f"best value     = {_fmt(result.best_value)}")
    print(f"best restart   = {result.best_restart}")
    print(f"evaluations    = {result.eval_count}")
    print(f"budget spent   = {result.budget_exhausted}")
    if result.best_point is not None:
        print("best weights   = ({}, {}, {}, {})".format(
            *(map(_fmt, result.best_point.as_tuple()))))
    if args.output:
        with open(args.output, "w") as fh:
            json.dump(_result_json(result, cfg), fh, indent=1)
            fh.write("\n")
        print(f"wrote {args.output}")
    return 0


def _write_cloud_csv(points, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["alpha", "beta", "gamma", "delta", "source"])
        for pt in points:
            writer.writerow([repr(w) for w in pt.as_tuple()] + [pt.source_tag])


def _read_cloud_csv(path) -> list[tuple[float, float, float, float]]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0][:4] != ["alpha", "beta", "gamma", "delta"]:
        raise ValueError(f"{path}: expected header alpha,beta,gamma,delta,source")
    return [tuple(float(x) for x in row[:4]) for row in rows[1:] if row]


def cmd_cloud(args) -> int:
    cfg = _config_from_args(args)
    ground = core.GroundSet("ijkl")
    fr = _load_frame(ground, args.frame)
    if args.directions_file:
        with open(args.directions_file) as fh:
            directions = [tuple(d) for d in json.load(fh)]
    else:
        directions = engine.sphere_directions(args.directions, seed=cfg.master_seed)
    points = engine.generate_cloud(directions, cfg, fr, optima_only=args.optima_only)
    if args.include_vertices:
        for name, dist in engine.vertex_seed_distributions(fr).items():
            point, _ = frame_mod.cross_section_point(
                entropy.entropy_function(dist), fr, source_tag=f"vertex-{name}")
            points.append(point)
    _write_cloud_csv(points, args.output)
    print(f"cloud points   = {len(points)}")
    print(f"wrote {args.output}")
    return 0


def cmd_hull(args) -> int:
    points = _read_cloud_csv(args.file)
    poly = geometry.convex_hull_3d(points)
    print(f"input points   = {len(points)}")
    print(f"hull vertices  = {len(poly.vertices)}")
    print(f"hull facets    = {len(poly.facets)}")
    print(f"hull dimension = {poly.dim}")
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(geometry.hull_to_obj(poly))
        print(f"wrote {args.output}")
    return 0


def cmd_outer(args) -> int:
    bank = ineq_mod.default_halfspace_bank(args.dfz_max_s) if args.dfz_max_s else []
    if args.ineq_file:
        for item in ineq_mod.load_inequality_file(args.ineq_file):
            if isinstance(item, ineq_mod.CrossSectionHalfspace):
                bank.append(item)
            else:
                print(f"note: skipping {item.name!r}: only section halfspaces "
                      "bound the region", file=sys.stderr)
    poly = geometry.outer_region(bank)
    print(f"bank size      = {len(bank)}")
    print(f"region vertices = {len(poly.vertices)} (dim {poly.dim})")
    actives = [geometry.active_constraints(v, bank) for v in poly.vertices]
    for v, act in zip(poly.vertices, actives):
        print("  ({}, {}, {}, {})  [{}]".format(*(map(_fmt, v)), ", ".join(act)))
    if args.output:
        doc = {
            "halfspaces": [ineq_mod.halfspace_to_json(h) for h in bank],
            "dim": poly.dim,
            "vertices": [list(v) for v in poly.vertices],
            "facets": [list(fc) for fc in poly.facets],
            "active_constraints": actives,
        }
        with open(args.output, "w") as fh:
            json.dump(doc, fh, indent=1)
            fh.write("\n")
        print(f"wrote {args.output}")
    return 0


def cmd_export(args) -> int:
    ground = core.GroundSet("ijkl")
    fr = _load_frame(ground, args.frame)
    what = args.what
    if what == "rbar":
        core.save_set_function(frame_mod.ingleton_base(fr), args.output)
    elif what == "generators":
        doc = [core.set_function_to_json(g) for g in frame_mod.basis_generators(fr)]
        with open(args.output, "w") as fh:
            json.dump(doc, fh, indent=1)
            fh.write("\n")
    elif what == "vertices":
        doc = {name: core.set_function_to_json(v)
               for name, v in zip(("alpha", "beta", "gamma", "delta"),
                                  frame_mod.tetra_vertices(fr))}
        with open(args.output, "w") as fh:
            json.dump(doc, fh, indent=1)
            fh.write("\n")
    elif what == "exl-table":
        with open(args.output, "w") as fh:
            fh.write("column,config\n")
            for name, cfgs in entropy.EXL_COLUMNS:
                for cfg in cfgs:
                    fh.write(f"{name},{cfg}\n")
    elif what == "fouratom-dist":
        if args.p is None:
            raise ValueError("fouratom-dist needs --p")
        entropy.save_distribution(entropy.four_atom_distribution(args.p), args.output)
    elif what == "exl-dist":
        if args.default:
            params = entropy.EXL_REFERENCE
        else:
            missing = [n for n in "pqrst" if getattr(args, n) is None]
            if missing:
                raise ValueError(f"exl-dist needs --default or all of --p..--t; "
                                 f"missing {missing}")
            params = entropy.ExLParams(args.p, args.q, args.r, args.s, args.t)
        entropy.save_distribution(entropy.exl_distribution(params), args.output)
    else:
        raise ValueError(f"unknown export target {what!r}")
    print(f"wrote {args.output}")
    return 0


# --- parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entropy-toolkit",
        description="Polymatroid rank functions, entropy functions and "
                    "Ingleton score minimization.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="polymatroid axiom check of a set-function file")
    p.add_argument("file")
    p.add_argument("--tol", type=float, default=core.TOL_ANALYTIC)
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("entropy", help="entropy function of a distribution file")
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p.add_argument("--bits", action="store_true",
                   help="display entropies in bits (storage stays in nats)")
    p.set_defaults(fn=cmd_entropy)

    p = sub.add_parser("score", help="Ingleton scores of a set-function file")
    p.add_argument("file")
    p.add_argument("--frame")
    p.set_defaults(fn=cmd_score)

    p = sub.add_parser("fouratom", help="four-atom family score")
    p.add_argument("--p", type=float)
    p.add_argument("--minimize", action="store_true")
    p.set_defaults(fn=cmd_fouratom)

    p = sub.add_parser("exl", help="forty-configuration family scores")
    p.add_argument("--default", action="store_true",
                   help="use the reference parameter point")
    for name in "pqrst":
        p.add_argument(f"--{name}", type=float)
    p.add_argument("--frame")
    p.set_defaults(fn=cmd_exl)

    def add_search_args(p):
        p.add_argument("--config", help="SearchConfig JSON file")
        p.add_argument("--alphabet", help="comma list, e.g. 4,4,4,4")
        p.add_argument("--restarts", type=int)
        p.add_argument("--budget", type=int, help="objective evaluations per restart")
        p.add_argument("--seed", type=int)
        p.add_argument("--frame")

    p = sub.add_parser("minimize", help="minimize an Ingleton objective over distributions")
    add_search_args(p)
    p.add_argument("--objective", choices=[o for o in engine.OBJECTIVES
                                           if o != "alpha_in_direction"])
    p.add_argument("--init-dist", help="distribution file to seed the restarts near")
    p.add_argument("-o", "--output", help="write the result as JSON")
    p.set_defaults(fn=cmd_minimize)

    p = sub.add_parser("cloud", help="generate a cross-section point cloud")
    add_search_args(p)
    p.add_argument("--directions", type=int, default=8)
    p.add_argument("--directions-file", help="JSON list of 3-vectors")
    p.add_argument("--optima-only", action="store_true")
    p.add_argument("--include-vertices", action="store_true",
                   help="append the beta/gamma/delta corner points")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(fn=cmd_cloud)

    p = sub.add_parser("hull", help="convex hull of a cloud CSV")
    p.add_argument("file")
    p.add_argument("-o", "--output", help="write OBJ-like v/f lines")
    p.set_defaults(fn=cmd_hull)

    p = sub.add_parser("outer", help="outer approximation from halfspace banks")
    p.add_argument("--dfz-max-s", type=int, default=6)
    p.add_argument("--ineq-file")
    p.add_argument("-o", "--output", help="write the region as JSON")
    p.set_defaults(fn=cmd_outer)

    p = sub.add_parser("export", help="write built-in objects to files")
    p.add_argument("--what", required=True,
                   choices=["rbar", "generators", "vertices", "exl-table",
                            "fouratom-dist", "exl-dist"])
    p.add_argument("--default", action="store_true")
    for name in "pqrst":
        p.add_argument(f"--{name}", type=float)
    p.add_argument("--frame")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(fn=cmd_export)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
