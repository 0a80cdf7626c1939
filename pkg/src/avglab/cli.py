"""Command-line entry point: ``avglab <subcommand> ...`` (or ``python3 -m avglab``)."""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from typing import List, Optional, Sequence

import numpy as np

from .averaged import RadialFunction, direct_average
from .certify import TARGETS, certify_sign, ect_report, replay
from .coefficients import NuVector, PerturbationCoefficients, nu_from_ab
from .config import STAGES, ConfigError, load_config
from .integrals import integral_table
from .realization import RealizationError, RealizationRequest, place_zeros
from .simulator import displacement, find_limit_cycles, normalize_scale, orbit_points
from .verify import Context, verify_all
from .wronskian import BASES, wronskian_closed, wronskian_numeric
from .zeros import isolate_zeros
from . import svg

TARGET_ALIASES = {"g1p": "g1_prime", "g3p": "g3_prime"}


def _floats(text: str) -> List[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _read_coeffs(path: str) -> PerturbationCoefficients:
    """Bare coefficient JSON, or any avglab output carrying a ``coefficients`` entry."""
    with open(path) as fh:
        data = json.load(fh)
    if "data" in data and "meta" in data:
        data = data["data"]
    if "coefficients" in data:
        data = data["coefficients"]
    if data is None:
        raise SystemExit(f"{path} holds no coefficients (failed realization?)")
    return PerturbationCoefficients.from_dict(data)


def _load_nu(args) -> tuple:
    """(NuVector, coefficients or None) from --nu or --coeffs."""
    if getattr(args, "coeffs", None):
        coeffs = _read_coeffs(args.coeffs)
        return nu_from_ab(coeffs), coeffs
    if getattr(args, "nu", None):
        return NuVector.from_list(args.nu.split(",")), None
    raise SystemExit("give either --nu or --coeffs")


def cmd_integrals(args, ctx: Context) -> int:
    rs = _floats(args.r) if args.r else list(np.geomspace(args.lo, args.hi, args.points))
    ctx.write_csv(args.out, integral_table(rs))
    print(f"wrote {os.path.join(ctx.out, args.out)}")
    return 0


def cmd_avg_eval(args, ctx: Context) -> int:
    nu, coeffs = _load_nu(args)
    fn = RadialFunction(nu)
    rows = []
    for r in _floats(args.r):
        row = {"r": r, "F": fn.F(r), "f": fn.f(r), "dF": fn.dF(r)}
        if coeffs is not None and args.direct:
            row["f_direct"] = direct_average(coeffs, r)
        rows.append(row)
    ctx.write_json(args.out, {"nu": nu.to_list(), "rows": rows})
    for row in rows:
        print(" ".join(f"{k}={v:.15g}" for k, v in row.items()))
    return 0


def cmd_zeros(args, ctx: Context) -> int:
    nu, _ = _load_nu(args)
    report = isolate_zeros(RadialFunction(nu), (0.0, args.r_max))
    ctx.write_json(args.out, {"nu": nu.to_list(), **report.to_dict()})
    print(f"{report.count} zero(s): {report.roots}  complete={report.complete}")
    return 0


def cmd_wronskian(args, ctx: Context) -> int:
    n = len(BASES[args.basis])
    ks = [args.k] if args.k else list(range(2 if n == 7 else 1, n + 1))
    rows = []
    for r in _floats(args.r):
        for k in ks:
            num, closed = wronskian_numeric(k, r, args.basis), wronskian_closed(k, r, args.basis)
            rows.append({"basis": args.basis, "k": k, "r": r, "numeric": num, "closed": closed,
                         "rel_err": abs(num - closed) / abs(closed) if closed else float("inf")})
    ctx.write_csv(args.out, rows)
    for row in rows:
        print(f"W{row['k']}({row['r']:g}) = {row['numeric']:.15g}  closed {row['closed']:.15g}")
    return 0


def cmd_certify(args, ctx: Context) -> int:
    names = TARGETS if args.target == "all" else (TARGET_ALIASES.get(args.target, args.target),)
    certs = {}
    status = 0
    for name in names:
        c = certify_sign(name, args.r_lo, args.r_hi, head=args.head_tail, tail=args.head_tail)
        rep = replay(c)
        certs[c.expression] = c
        ctx.write_json(os.path.join(args.out, f"{c.expression}.json"), c.to_dict())
        print(f"{c.expression:9s} {c.conclusion:20s} complete={c.complete} "
              f"pieces={len(c.subintervals)} replay={'ok' if rep['ok'] else 'FAILED'}")
        if c.conclusion == "nonvanishing-failed" or not rep["ok"]:
            status = 1
    if args.target == "all":
        for basis in ("full7", "smooth4"):
            rep = ect_report(basis, certs)
            ctx.write_json(os.path.join(args.out, f"ect_{basis}.json"), rep)
            print(f"ect {basis}: {rep['verdict']} bound={rep['bound']}")
    return status


def cmd_realize(args, ctx: Context) -> int:
    try:
        req = RealizationRequest(tuple(_floats(args.radii)), args.mode)
    except RealizationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    res = place_zeros(req, args.r_max)
    ctx.write_json(args.out, res.to_dict())
    print(f"success={res.success} nu={res.nu.as_floats() if res.nu else None}")
    for d in res.diagnostics:
        print(f"  {d}")
    return 0 if res.success else 1


def cmd_simulate(args, ctx: Context) -> int:
    coeffs = _read_coeffs(args.coeffs)
    inst = normalize_scale(args.a, coeffs, args.eps)
    rep = find_limit_cycles(inst, (args.r_min, args.r_max))
    payload = rep.to_dict()
    payload["a"] = args.a
    payload["original_radii"] = [inst.original_radius(fp.radius) for fp in rep.fixed_points]
    ctx.write_json(args.out, payload)
    print(f"{rep.count} fixed point(s); predicted {len(rep.predicted_zeros)}; status {rep.status}")
    for fp in rep.fixed_points:
        print(f"  r*={fp.radius:.10g}  predicted={fp.predicted}  multiplier={fp.multiplier:.8f}")
    if args.emit_svg and rep.status == "isolated":
        grid = np.geomspace(args.r_min, args.r_max, 120)
        fn = RadialFunction(nu_from_ab(inst.coeffs))
        base = os.path.splitext(args.out)[0]
        ctx.write_svg(base + "_displacement.svg", svg.line_plot(
            [(grid, [displacement(inst, r) / args.eps for r in grid], "(P(r)-r)/eps"),
             (grid, [fn.f(r) for r in grid], "f(r)")], f"displacement, eps={args.eps:g}", "r",
            "", logx=True, markers=[(fp.radius, 0.0) for fp in rep.fixed_points]))
        if rep.fixed_points:
            orbits = [(*orbit_points(inst, fp.radius), f"r*={fp.radius:.4f}") for fp in rep.fixed_points]
            ctx.write_svg(base + "_cycles.svg", svg.line_plot(orbits, "limit cycles", "x", "y",
                                                              equal=True))
    return 0


def cmd_verify_all(args, ctx: Context) -> int:
    summary = verify_all(ctx.cfg)
    for name, res in summary["stages"].items():
        print(f"{name:13s} {'ok' if res['ok'] else 'FAILED'}")
    print(f"headline: {json.dumps(summary['headline'])}")
    if summary["first_failure"]:
        print(f"verify-all failed at stage: {summary['first_failure']}")
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="avglab", description=__doc__)
    p.add_argument("--out-dir", default=None, help="directory for all outputs (default avglab-out)")
    p.add_argument("--config", default=None, help="JSON run configuration")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("integrals", help="closed-form integral table against quadrature")
    s.add_argument("--r", help="comma-separated radii")
    s.add_argument("--points", type=int, default=40)
    s.add_argument("--lo", type=float, default=1e-3)
    s.add_argument("--hi", type=float, default=1e3)
    s.add_argument("--out", default="integrals.csv")
    s.set_defaults(func=cmd_integrals)

    for name, func, helptext in (("avg-eval", cmd_avg_eval, "evaluate F and f"),
                                 ("zeros", cmd_zeros, "isolate the zeros of F")):
        s = sub.add_parser(name, help=helptext)
        s.add_argument("--nu", help="seven comma-separated rationals, e.g. -1,0,0,0,0,0,1/2")
        s.add_argument("--coeffs", help="coefficient JSON (keys a1, b1, a2, b2)")
        s.set_defaults(func=func)
    sub.choices["avg-eval"].add_argument("--r", default="0.5,1,2")
    sub.choices["avg-eval"].add_argument("--direct", action="store_true",
                                         help="also integrate directly (needs --coeffs)")
    sub.choices["avg-eval"].add_argument("--out", default="avg_eval.json")
    sub.choices["zeros"].add_argument("--r-max", type=float, default=1e3)
    sub.choices["zeros"].add_argument("--out", default="zeros.json")

    s = sub.add_parser("wronskian", help="numeric and closed-form Wronskians")
    s.add_argument("--basis", choices=sorted(BASES), default="full7")
    s.add_argument("--r", default="0.5,1,2,5")
    s.add_argument("--k", type=int)
    s.add_argument("--out", default="wronskians.csv")
    s.set_defaults(func=cmd_wronskian)

    s = sub.add_parser("certify", help="rigorous sign certificates")
    s.add_argument("--target", default="all",
                   choices=["all", "g1p", "g1", "g2", "g31", "g3p", "g3", "h_smooth"])
    s.add_argument("--r-lo", type=float, default=1e-3)
    s.add_argument("--r-hi", type=float, default=1e3)
    s.add_argument("--no-head-tail", dest="head_tail", action="store_false",
                   help="skip the head and tail rules (certificates become incomplete)")
    s.add_argument("--out", default="certificates")
    s.set_defaults(func=cmd_certify)

    s = sub.add_parser("realize", help="place simple zeros at given radii")
    s.add_argument("--radii", required=True)
    s.add_argument("--mode", choices=["full", "smooth"], default="full")
    s.add_argument("--r-max", type=float, default=1e3)
    s.add_argument("--out", default="result.json")
    s.set_defaults(func=cmd_realize)

    s = sub.add_parser("simulate", help="return map and limit cycles of the perturbed system")
    s.add_argument("--coeffs", required=True, help="coefficient JSON (a realize result works too)")
    s.add_argument("--eps", type=float, default=1e-3)
    s.add_argument("--a", type=float, default=1.0, help="the scale a of the unnormalized system")
    s.add_argument("--r-min", type=float, default=0.2)
    s.add_argument("--r-max", type=float, default=9.0)
    s.add_argument("--out", default="report.json")
    s.add_argument("--emit-svg", action="store_true")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("verify-all", help="run the whole verification pipeline")
    s.add_argument("--stages", help=f"comma-separated subset of {','.join(STAGES)}")
    s.add_argument("--keep-going", action="store_true", help="do not stop at the first failure")
    s.set_defaults(func=cmd_verify_all)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    overrides = {"out_dir": args.out_dir, "seed": args.seed}
    if args.command == "verify-all":
        if args.stages:
            overrides["stages"] = [s.strip() for s in args.stages.split(",")]
        if args.keep_going:
            overrides["stop_on_failure"] = False
    try:
        cfg = load_config(args.config, **overrides)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    return args.func(args, Context(cfg))


if __name__ == "__main__":
    sys.exit(main())
