"""The end-to-end verification pipeline behind ``avglab verify-all``.

Stages run in a fixed order and each returns a JSON-ready dict with an
``ok`` flag.  Everything written to disk carries the config hash and seed;
wall-clock timings go to a separate file so the summary is reproducible
byte for byte.
"""
from __future__ import annotations

import json
import logging
import math
import os
import time
from collections import Counter
from fractions import Fraction
from typing import Callable, Dict, List

import numpy as np

from . import svg
from .averaged import RadialFunction, direct_average
from .certify import TARGETS, certify_all, ect_report, replay
from .coefficients import MONOMIALS, NuVector, PerturbationCoefficients, nu_from_ab
from .config import STAGES, RunConfig
from .auxiliary import get_aux
from .integrals import TABLE_IDS, eval_I, eval_J, quadrature_oracle
from .realization import CANONICAL_RADII, realize, sharpness_suite
from .simulator import (SystemInstance, cartesian_half, defect_ratio, displacement,
                        find_limit_cycles, half_trajectory, identity_defect, orbit_points)
from .wronskian import wronskian_closed, wronskian_numeric
from .zeros import ZeroIsolationError, isolate_zeros

log = logging.getLogger(__name__)


class Context:
    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.out = cfg.out_dir
        self.certs = {}
        os.makedirs(self.out, exist_ok=True)

    def rng(self, stage: str) -> np.random.Generator:
        return np.random.default_rng([self.cfg.seed, STAGES.index(stage)])

    def path(self, *parts) -> str:
        p = os.path.join(self.out, *parts)
        os.makedirs(os.path.dirname(p), exist_ok=True)
        return p

    def write_json(self, name: str, payload) -> None:
        with open(self.path(name), "w") as fh:
            json.dump({"meta": self.cfg.meta(), "data": payload}, fh, indent=1, sort_keys=True,
                      default=_json_default)
            fh.write("\n")

    def write_csv(self, name: str, rows: List[dict]) -> None:
        with open(self.path(name), "w") as fh:
            fh.write(f"# config_hash={self.cfg.hash()} seed={self.cfg.seed}\n")
            if rows:
                keys = list(rows[0])
                fh.write(",".join(keys) + "\n")
                for r in rows:
                    fh.write(",".join(repr(r[k]) if isinstance(r[k], float) else str(r[k])
                                      for k in keys) + "\n")

    def write_svg(self, name: str, text: str) -> None:
        if self.cfg.emit_svg:
            svg.write(self.path(name), text.replace(
                "<svg ", f"<!-- config_hash={self.cfg.hash()} seed={self.cfg.seed} -->\n<svg ", 1))


def _json_default(x):
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, (np.floating, np.integer, np.bool_)):
        return x.item()
    if isinstance(x, np.ndarray):
        return x.tolist()
    raise TypeError(f"not serializable: {type(x)}")


def _close(a: float, b: float) -> float:
    """Error measured as absolute below 1 and relative above."""
    return abs(a - b) / max(1.0, abs(b)) if math.isfinite(a) else math.inf


# -- stages -----------------------------------------------------------------------

def stage_integrals(ctx: Context) -> dict:
    cfg = ctx.cfg
    rows, worst_i, worst_j = [], 0.0, 0.0
    for r in np.geomspace(1e-3, 1e3, cfg.integral_points):
        for ix in TABLE_IDS:
            ci, qi = eval_I(ix, r), quadrature_oracle(ix, r, "upper")
            cj, qj = eval_J(ix, r), quadrature_oracle(ix, r, "lower")
            ei, ej = _close(ci, qi), _close(cj, qj)
            worst_i, worst_j = max(worst_i, ei), max(worst_j, ej)
            rows.append({"i": ix.i, "j": ix.j, "r": float(r), "I_closed": ci, "I_quad": qi,
                         "J_closed": cj, "J_quad": qj, "err_I": ei, "err_J": ej})
    ctx.write_csv("integrals.csv", rows)
    return {"ok": max(worst_i, worst_j) <= cfg.integral_tol, "points": cfg.integral_points,
            "worst_I": worst_i, "worst_J": worst_j, "tol": cfg.integral_tol}


def random_coefficients(rng: np.random.Generator, density: float = 0.5,
                        sides: int = 2) -> PerturbationCoefficients:
    """Sparse random rational coefficients p/q, |p| <= 5, 1 <= q <= 4."""
    tables = []
    for _ in range(2 * sides):
        t = {}
        for ix in MONOMIALS:
            if rng.random() < density:
                t[ix] = Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 5)))
        tables.append(t)
    while len(tables) < 4:
        tables.append({})
    return PerturbationCoefficients(a1=tables[0], b1=tables[1], a2=tables[2], b2=tables[3])


PIPELINE_RADII = (0.1, 0.5, 1.0, 2.0, 5.0, 10.0)


def stage_pipeline(ctx: Context) -> dict:
    cfg = ctx.cfg
    rng = ctx.rng("pipeline")
    worst, worst_case = 0.0, None
    for n in range(cfg.pipeline_sets):
        coeffs = random_coefficients(rng)
        fn = RadialFunction(nu_from_ab(coeffs))
        for r in PIPELINE_RADII:
            via_nu = fn.F(r)
            direct = r * direct_average(coeffs, r)
            err = _close(via_nu, direct)
            if err > worst:
                worst, worst_case = err, {"set": n, "r": r, "nu_path": via_nu, "direct": direct}
    return {"ok": worst <= cfg.pipeline_tol, "sets": cfg.pipeline_sets, "radii": list(PIPELINE_RADII),
            "worst": worst, "worst_case": worst_case, "tol": cfg.pipeline_tol}


def stage_wronskian(ctx: Context) -> dict:
    cfg = ctx.cfg
    rows, worst = [], 0.0
    for basis, ks in (("full7", range(2, 8)), ("smooth4", range(1, 5))):
        for r in np.geomspace(1e-2, 1e2, cfg.wronskian_points):
            for k in ks:
                num, closed = wronskian_numeric(k, r, basis), wronskian_closed(k, r, basis)
                rel = abs(num - closed) / abs(closed) if closed else math.inf
                worst = max(worst, rel)
                rows.append({"basis": basis, "k": k, "r": float(r), "numeric": num,
                             "closed": closed, "rel_err": rel})
    ctx.write_csv("wronskians.csv", rows)
    return {"ok": worst <= cfg.wronskian_tol, "worst_rel": worst, "tol": cfg.wronskian_tol}


def _g_curve(name: str, rs: np.ndarray):
    """g(r) / (r^k (1+r^2)^((D-k)/2)): bounded, and zero-free iff g is."""
    head = get_aux(name).core.head_model()
    degree, tail = get_aux(name).core.tail_model()
    k, grow = head.leading_order(), degree - tail.leading_order()
    ys = [float(get_aux(name).core.evaluate_mp(r) / (r**k * (1 + r * r) ** ((grow - k) / 2)))
          for r in rs]
    return ys, f"{name} / (r^{k} (1+r^2)^{(grow - k) / 2:g})"


def stage_certificates(ctx: Context) -> dict:
    cfg = ctx.cfg
    certs = certify_all(TARGETS, cfg.cert_r_lo, cfg.cert_r_hi, cfg.head_tail, cfg.head_tail)
    ctx.certs = certs
    out = {}
    for name, c in certs.items():
        rep = replay(c)
        ctx.write_json(os.path.join("certificates", f"{name}.json"), c.to_dict())
        out[name] = {"conclusion": c.conclusion, "complete": c.complete,
                     "subintervals": len(c.subintervals), "replay_ok": rep["ok"]}
    rs = np.geomspace(1e-2, 1e2, 200)
    for group, names in (("g1", ("g1_prime", "g1")), ("g2", ("g2",)),
                         ("g3", ("g31", "g3_prime", "g3"))):
        series = []
        for n in names:
            ys, label = _g_curve(n, rs)
            series.append((rs, ys, label))
        ctx.write_svg(f"curve_{group}.svg", svg.line_plot(series, f"normalized {group} family",
                                                          "r", "", logx=True))
    ok = all(v["conclusion"] != "nonvanishing-failed" and v["replay_ok"] for v in out.values())
    return {"ok": ok, "window": [cfg.cert_r_lo, cfg.cert_r_hi], "head_tail": cfg.head_tail,
            "certificates": out}


def stage_ect(ctx: Context) -> dict:
    if not ctx.certs:
        cfg = ctx.cfg
        ctx.certs = certify_all(TARGETS, cfg.cert_r_lo, cfg.cert_r_hi, cfg.head_tail, cfg.head_tail)
    reports = {b: ect_report(b, ctx.certs) for b in ("full7", "smooth4")}
    ctx.write_json("ect.json", reports)
    return {"ok": all(r["verdict"] == "ECT" for r in reports.values()),
            "full7": {"verdict": reports["full7"]["verdict"], "bound": reports["full7"]["bound"]},
            "smooth4": {"verdict": reports["smooth4"]["verdict"], "bound": reports["smooth4"]["bound"]}}


def stage_sharpness(ctx: Context) -> dict:
    suite = sharpness_suite(ctx.cfg.seed, ctx.cfg.sharpness_random)
    ctx.write_json("sharpness.json", suite)
    for mode, res in suite["canonical"].items():
        ctx.write_json(f"realization_{mode}.json", res)
    return {"ok": suite["canonical_ok"],
            "canonical": {m: {"success": r["success"], "zeros": len(r["verified_roots"])}
                          for m, r in suite["canonical"].items()},
            "random_ok": suite["random_ok"], "random_total": suite["random_total"]}


def random_nu(rng: np.random.Generator, smooth: bool = False) -> NuVector:
    vals = [Fraction(int(v), 1000) for v in rng.integers(-1000, 1001, 7)]
    if smooth:
        vals[0] = vals[4] = vals[5] = Fraction(0)
    return NuVector(tuple(vals))


def stage_zero_count(ctx: Context) -> dict:
    rng = ctx.rng("zero-count")
    out = {}
    for mode, bound in (("full", 6), ("smooth", 3)):
        hist, ambiguous, incomplete = Counter(), 0, 0
        for _ in range(ctx.cfg.zero_vectors):
            fn = RadialFunction(random_nu(rng, mode == "smooth"))
            try:
                rep = isolate_zeros(fn)
            except ZeroIsolationError:
                ambiguous += 1
                continue
            incomplete += not rep.complete
            hist[rep.count] += 1
        worst = max(hist) if hist else 0
        out[mode] = {"bound": bound, "max_zeros": worst, "histogram": dict(sorted(hist.items())),
                     "ambiguous": ambiguous, "incomplete_tail_rules": incomplete}
    ok = all(v["max_zeros"] <= v["bound"] for v in out.values())
    return {"ok": ok, "vectors": ctx.cfg.zero_vectors, **out}


def stage_simulation(ctx: Context) -> dict:
    cfg = ctx.cfg
    eps = cfg.epsilon
    ident = identity_defect()
    out = {"identity_defect": ident, "identity_ok": ident <= cfg.identity_tol}
    ok = out["identity_ok"]
    for mode, expect in (("full", 6), ("smooth", 3)):
        res = realize(CANONICAL_RADII[mode], mode)
        inst = SystemInstance(res.coeffs, eps)
        rep = find_limit_cycles(inst, (cfg.sim_r_min, cfg.sim_r_max))
        dist_ok = rep.max_distance is not None and rep.max_distance <= cfg.cycle_distance_factor * eps
        radii = [float(r) for r in np.geomspace(cfg.sim_r_min, cfg.sim_r_max, 12)]
        ratio = defect_ratio(res.coeffs, eps, radii)
        oracle = max(abs(half_trajectory(inst, r, "upper")[0] - cartesian_half(inst, r, "upper"))
                     for r in (0.5, 2.0, 8.0))
        entry = {"cycles": rep.count, "expected": expect, "count_ok": rep.count == expect,
                 "max_distance": rep.max_distance, "distance_bound": cfg.cycle_distance_factor * eps,
                 "distance_ok": dist_ok, "defect_ratio": ratio["ratio"],
                 "ratio_ok": ratio["ok"], "cartesian_gap": oracle, "report": rep.to_dict()}
        out[mode] = entry
        ok = ok and entry["count_ok"] and dist_ok and ratio["ok"] and oracle <= 1e-9
        ctx.write_json(f"limit_cycles_{mode}.json", rep.to_dict())
        fn = RadialFunction(res.nu)
        grid = np.geomspace(cfg.sim_r_min, cfg.sim_r_max, 120)
        disp = [displacement(inst, r) / eps for r in grid]
        ctx.write_svg(f"displacement_{mode}.svg", svg.line_plot(
            [(grid, disp, "(P(r)-r)/eps"), (grid, [fn.f(r) for r in grid], "f(r)")],
            f"return-map displacement, {mode} realization, eps={eps:g}", "r", "", logx=True,
            markers=[(fp.radius, 0.0) for fp in rep.fixed_points]))
        orbits = []
        for fp in rep.fixed_points:
            x, y = orbit_points(inst, fp.radius)
            orbits.append((x, y, f"r*={fp.radius:.4f}"))
        if orbits:
            ctx.write_svg(f"cycles_{mode}.svg", svg.line_plot(orbits, f"limit cycles, {mode}",
                                                              "x", "y", equal=True))
    out["ok"] = ok
    return out


STAGE_FUNCS: Dict[str, Callable[[Context], dict]] = {
    "integrals": stage_integrals, "pipeline": stage_pipeline, "wronskian": stage_wronskian,
    "certificates": stage_certificates, "ect": stage_ect, "sharpness": stage_sharpness,
    "zero-count": stage_zero_count, "simulation": stage_simulation,
}


def verify_all(cfg: RunConfig) -> dict:
    """Run the configured stages in order; ``summary['ok']`` is the exit verdict."""
    ctx = Context(cfg)
    results, timings, first_failure = {}, {}, None
    for name in STAGES:
        if name not in cfg.stages:
            continue
        log.info("stage %s", name)
        t0 = time.perf_counter()
        res = STAGE_FUNCS[name](ctx)
        timings[name] = time.perf_counter() - t0
        results[name] = res
        log.info("stage %s: %s (%.1f s)", name, "ok" if res["ok"] else "FAILED", timings[name])
        if not res["ok"] and first_failure is None:
            first_failure = name
            if cfg.stop_on_failure:
                break
    headline = {}
    if "ect" in results:
        headline["bound_full"] = results["ect"]["full7"]["bound"]
        headline["bound_smooth"] = results["ect"]["smooth4"]["bound"]
    if "simulation" in results:
        headline["cycles_full"] = results["simulation"]["full"]["cycles"]
        headline["cycles_smooth"] = results["simulation"]["smooth"]["cycles"]
    summary = {"ok": first_failure is None, "first_failure": first_failure,
               "headline": headline, "stages": results,
               "config": {k: v for k, v in cfg.to_dict().items() if k != "out_dir"}}
    ctx.write_json("summary.json", summary)
    ctx.write_json("timings.json", timings)
    return summary
