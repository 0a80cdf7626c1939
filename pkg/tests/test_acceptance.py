"""Acceptance criteria, each at its stated tolerance.

Every test records one PASS/FAIL line; the lines are printed in the pytest
terminal summary, or directly when this file is run as a script.
"""
import time
from fractions import Fraction

import numpy as np
import pytest

from avglab.averaged import RadialFunction, direct_average
from avglab.certify import TARGETS, certify_all, ect_report, replay
from avglab.coefficients import ab_from_nu, jacobian_determinant, nu_from_ab, smooth_restriction
from avglab.integrals import TABLE_IDS, eval_I, eval_J, quadrature_oracle
from avglab.realization import CANONICAL_RADII, realize
from avglab.simulator import SystemInstance, defect_ratio, find_limit_cycles, identity_defect
from avglab.verify import PIPELINE_RADII, random_coefficients, random_nu
from avglab.wronskian import wronskian_closed, wronskian_numeric
from avglab.zeros import ZeroIsolationError, isolate_zeros

RESULTS = {}


def record(n: int, title: str, ok: bool, detail: str) -> None:
    line = f"criterion {n} [{'PASS' if ok else 'FAIL'}] {title}: {detail}"
    RESULTS[n] = line
    print(line)


def _err(a: float, b: float) -> float:
    # absolute below 1, relative above
    return abs(a - b) / max(1.0, abs(b))


@pytest.fixture(scope="module")
def certs():
    t0 = time.perf_counter()
    out = certify_all(TARGETS)
    return out, time.perf_counter() - t0


def test_c1_integral_table():
    t0 = time.perf_counter()
    worst_i = worst_j = worst_parity = 0.0
    for r in np.geomspace(1e-3, 1e3, 40):
        for ix in TABLE_IDS:
            qi, qj = quadrature_oracle(ix, r, "upper"), quadrature_oracle(ix, r, "lower")
            worst_i = max(worst_i, _err(eval_I(ix, r), qi))
            worst_j = max(worst_j, _err(eval_J(ix, r), qj))
            worst_parity = max(worst_parity, _err((-1) ** (ix.i + ix.j) * qi, qj))
    dt = time.perf_counter() - t0
    ok = max(worst_i, worst_j, worst_parity) <= 1e-10 and dt < 10
    record(1, "integral table", ok, f"closed-vs-quad I {worst_i:.1e}, J {worst_j:.1e}, "
           f"J=(-1)^(i+j) I {worst_parity:.1e} (tol 1e-10), {dt:.1f} s (limit 10 s)")
    assert ok


def test_c2_pipeline_equivalence():
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(200):
        c = random_coefficients(rng)
        fn = RadialFunction(nu_from_ab(c))
        for r in PIPELINE_RADII:
            worst = max(worst, _err(fn.F(r), r * direct_average(c, r)))
    dt = time.perf_counter() - t0
    ok = worst <= 1e-8 and dt < 120
    record(2, "pipeline equivalence", ok, f"200 sets x {len(PIPELINE_RADII)} radii, worst {worst:.1e} "
           f"(tol 1e-8), {dt:.1f} s (limit 120 s)")
    assert ok


def test_c3_jacobian():
    det = jacobian_determinant()
    ok = isinstance(det, Fraction) and det == Fraction(1, 2)
    record(3, "Jacobian", ok, f"exact determinant {det}")
    assert ok


def test_c4_wronskians():
    worst = 0.0
    for r in np.geomspace(1e-2, 1e2, 25):
        for k in range(2, 8):
            num, closed = wronskian_numeric(k, r), wronskian_closed(k, r)
            worst = max(worst, abs(num - closed) / abs(closed))
    displays = 0.0
    for r in np.geomspace(1e-2, 1e2, 9):
        s = 1 + r * r
        for k, ref in ((2, r**2), (3, -3 * r**4 / s**2.5), (4, -6 * r**7 * (4 * r * r + 5) / s**5)):
            displays = max(displays, abs(wronskian_numeric(k, r) - ref) / abs(ref))
    ok = worst <= 1e-7 and displays <= 1e-7
    record(4, "Wronskian formulas", ok, f"k=2..7 worst rel {worst:.1e}; W2,W3,W4 displays {displays:.1e} "
           "(tol 1e-7)")
    assert ok


def test_c5_sign_certificates(certs):
    certificates, dt = certs
    want = {"g1_prime": "positive", "g1": "positive", "g31": "negative", "g3_prime": "positive",
            "g3": "positive"}
    problems = []
    for name in ("g1_prime", "g1", "g2", "g31", "g3_prime", "g3"):
        c = certificates[name]
        if name in want and c.conclusion != want[name]:
            problems.append(f"{name} {c.conclusion}")
        if name == "g2" and c.conclusion not in ("positive", "negative"):
            problems.append(f"g2 {c.conclusion}")
        if c.domain != (1e-3, 1e3) or not c.complete:
            problems.append(f"{name} incomplete")
        if not replay(c)["ok"]:
            problems.append(f"{name} replay")
    ok = not problems and dt < 300
    summary = ", ".join(f"{n} {certificates[n].conclusion}" for n in ("g1_prime", "g1", "g2", "g31",
                                                                       "g3_prime", "g3"))
    record(5, "sign certificates", ok, f"{summary}; head/tail valid and replay clean"
           f"{'' if not problems else ' EXCEPT ' + '; '.join(problems)}; {dt:.1f} s (limit 300 s)")
    assert ok


def test_c6_ect_verdicts(certs):
    certificates, _ = certs
    full, smooth = ect_report("full7", certificates), ect_report("smooth4", certificates)
    ok = full["bound"] == 6 and smooth["bound"] == 3
    record(6, "ECT verdicts", ok, f"full basis {full['verdict']} bound {full['bound']}; "
           f"(f2,f3,f4,f7) {smooth['verdict']} bound {smooth['bound']}")
    assert ok


def test_c7_sharpness():
    details, ok = [], True
    for mode, expect in (("full", 6), ("smooth", 3)):
        res = realize(CANONICAL_RADII[mode], mode)
        norm = float(np.linalg.norm(res.nu.as_floats()))
        worst_res = max(row["residual"] for row in res.verified_roots) / norm
        rep = res.zero_report
        good = (res.success and len(res.verified_roots) == expect
                and all(row["simple"] for row in res.verified_roots) and worst_res <= 1e-9
                and not res.extraneous_roots and rep["count"] == expect
                and rep["head_rule"]["valid"] and rep["tail_rule"]["valid"]
                and rep["interval"] == [0.0, 1e3])
        ok = ok and good
        details.append(f"{mode}: {len(res.verified_roots)} simple zeros, residual/||nu|| "
                       f"{worst_res:.1e}, extraneous {len(res.extraneous_roots)}")
    record(7, "sharpness", ok, "; ".join(details) + " on (0, 1e3] with head and tail rules")
    assert ok


def test_c8_zero_count():
    t0 = time.perf_counter()
    rng = np.random.default_rng(8)
    worst = {"full": 0, "smooth": 0}
    ambiguous = 0
    for _ in range(1000):
        nu = random_nu(rng)
        for mode, v in (("full", nu), ("smooth", nu_from_ab(smooth_restriction(ab_from_nu(nu))))):
            try:
                rep = isolate_zeros(RadialFunction(v))
            except ZeroIsolationError:
                ambiguous += 1
                continue
            worst[mode] = max(worst[mode], rep.count)
    dt = time.perf_counter() - t0
    ok = worst["full"] <= 6 and worst["smooth"] <= 3 and dt < 120
    record(8, "zero count", ok, f"max zeros {worst['full']} (bound 6), smooth-restricted "
           f"{worst['smooth']} (bound 3), ambiguous {ambiguous}, {dt:.1f} s (limit 120 s)")
    assert ok


def test_c9_simulation_closure():
    t0 = time.perf_counter()
    eps = 1e-3
    res = realize(CANONICAL_RADII["full"], "full")
    rep = find_limit_cycles(SystemInstance(res.coeffs, eps), (0.2, 9.0))
    dists = [fp.distance for fp in rep.fixed_points]
    radii = [float(r) for r in np.geomspace(0.2, 9.0, 12)]
    ratio = defect_ratio(res.coeffs, eps, radii)
    ident = identity_defect()
    dt = time.perf_counter() - t0
    count_ok = rep.count == 6 and not rep.unmatched_predictions
    dist_ok = bool(dists) and max(dists) <= 5 * eps
    ratio_ok = 1.7 <= ratio["ratio"] <= 2.3
    ident_ok = ident <= 1e-11
    ok = count_ok and dist_ok and ratio_ok and ident_ok and dt < 300
    record(9, "simulation closure", ok,
           f"{rep.count} fixed points ({'ok' if count_ok else 'FAIL'}); max distance "
           f"{max(dists) / eps:.2f} eps (limit 5, {'ok' if dist_ok else 'FAIL'}); defect ratio "
           f"{ratio['ratio']:.2f} (range [1.7, 2.3], {'ok' if ratio_ok else 'FAIL'}); identity "
           f"{ident:.1e} (tol 1e-11, {'ok' if ident_ok else 'FAIL'}); {dt:.1f} s (limit 300 s)")
    assert count_ok, "fixed-point count"
    assert ident_ok, "identity at eps = 0"
    assert dist_ok, f"distances / eps = {[round(d / eps, 3) for d in dists]}"
    assert ratio_ok, f"defect ratio {ratio['ratio']:.3f}"


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
