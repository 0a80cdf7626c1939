"""Rigorous sign certificates for the auxiliary expressions and ECT verdicts.

A certificate partitions [r_lo, r_hi] into subintervals, each carrying an
outward-rounded enclosure of the expression that excludes zero.  Three
enclosure methods are used, chosen by location:

``series-head``  hi <= 0.5: exact Q[pi] Maclaurin model, r^k * Q(r);
``direct``       interval Horner intersected with the mean-value form;
``series-tail``  lo >= 2: exact model in u = 1/r, r^(D-k) * Q(u).

The pieces (0, r_lo] and [r_hi, oo) are handled by the head and tail rules.
The expressions certified are the cores of the auxiliary functions; the
factor r/sqrt(1+r^2) of g3' is positive and does not affect the sign.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from .auxiliary import G1, G1_PRIME, G3, G3_PRIME_CORE, G31, get_aux
from .expressions import AtanSqrtExpr, SeriesModel, head_rule, tail_rule
from .interval import Interval
from .wronskian import FORMS

HEAD_SERIES_MAX = 0.5
TAIL_SERIES_MIN = 2.0
MIN_WIDTH = 1e-12
DEFAULT_WINDOW = (1e-3, 1e3)
SIGN_WORD = {1: "positive", -1: "negative"}
FAILED = "nonvanishing-failed"
TARGETS = ("g1_prime", "g1", "g2", "g31", "g3_prime", "g3", "h_smooth")


@dataclass
class Subinterval:
    lo: float
    hi: float
    enclosure_lo: float
    enclosure_hi: float
    method: str


@dataclass
class SignCertificate:
    expression: str
    domain: Tuple[float, float]
    subintervals: List[Subinterval] = field(default_factory=list)
    head_rule: Optional[dict] = None
    tail_rule: Optional[dict] = None
    conclusion: str = FAILED
    failures: List[Tuple[float, float]] = field(default_factory=list)

    @property
    def sign(self) -> int:
        return {"positive": 1, "negative": -1}.get(self.conclusion, 0)

    @property
    def complete(self) -> bool:
        """Signed on all of (0, oo): window, head rule and tail rule agree."""
        if not self.sign:
            return False
        for rule in (self.head_rule, self.tail_rule):
            if not rule or not rule.get("valid") or rule.get("sign") != self.sign:
                return False
        return True

    def to_dict(self) -> dict:
        d = asdict(self)
        d["domain"] = list(self.domain)
        d["failures"] = [list(f) for f in self.failures]
        d["complete"] = self.complete
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)

    @classmethod
    def from_dict(cls, d: dict) -> "SignCertificate":
        return cls(d["expression"], tuple(d["domain"]),
                   [Subinterval(**s) for s in d["subintervals"]],
                   d.get("head_rule"), d.get("tail_rule"), d["conclusion"],
                   [tuple(f) for f in d.get("failures", [])])

    @classmethod
    def from_json(cls, text: str) -> "SignCertificate":
        return cls.from_dict(json.loads(text))


@lru_cache(maxsize=None)
def _head(name: str) -> SeriesModel:
    return get_aux(name).core.head_model()


@lru_cache(maxsize=None)
def _tail(name: str) -> Tuple[int, SeriesModel]:
    return get_aux(name).core.tail_model()


def enclose_on(name: str, lo: float, hi: float, method: str) -> Interval:
    """Enclosure of the core of ``name`` over [lo, hi] by the given method."""
    name = get_aux(name).name
    if method == "series-head":
        model = _head(name)
        k = model.leading_order()
        return Interval(lo, hi) ** k * model.enclose_quotient(lo, hi, k)
    if method == "series-tail":
        degree, model = _tail(name)
        k = model.leading_order()
        u = Interval(1.0) / Interval(lo, hi)
        return Interval(lo, hi) ** (degree - k) * model.enclose_quotient(u.lo, u.hi, k)
    if method == "direct":
        return get_aux(name).core.enclose_mean_value(Interval(lo, hi))
    raise ValueError(f"unknown enclosure method {method!r}")


def _method(lo: float, hi: float) -> str:
    if hi <= HEAD_SERIES_MAX:
        return "series-head"
    if lo >= TAIL_SERIES_MIN:
        return "series-tail"
    return "direct"


def _initial_partition(r_lo: float, r_hi: float) -> List[float]:
    """Breakpoints at the method switches and at powers of two."""
    pts = {r_lo, r_hi}
    x = 2.0 ** -60
    while x < r_hi:
        if r_lo < x < r_hi:
            pts.add(x)
        x *= 2
    return sorted(pts)


def certify_sign(name: str, r_lo: float = DEFAULT_WINDOW[0], r_hi: float = DEFAULT_WINDOW[1],
                 head: bool = True, tail: bool = True, min_width: float = MIN_WIDTH) -> SignCertificate:
    """Certify that the auxiliary expression ``name`` keeps one sign on (0, oo).

    Bisects until every enclosure excludes zero; a piece narrower than
    ``min_width`` that still straddles zero is recorded as a failure and the
    conclusion becomes ``nonvanishing-failed``.
    """
    if not 0 < r_lo < r_hi:
        raise ValueError("need 0 < r_lo < r_hi")
    name = get_aux(name).name
    cert = SignCertificate(name, (float(r_lo), float(r_hi)))
    pts = _initial_partition(float(r_lo), float(r_hi))
    stack = list(reversed(list(zip(pts[:-1], pts[1:]))))
    while stack:
        lo, hi = stack.pop()
        method = _method(lo, hi)
        enc = enclose_on(name, lo, hi, method)
        if enc.sign():
            cert.subintervals.append(Subinterval(lo, hi, enc.lo, enc.hi, method))
            continue
        if hi - lo < min_width:
            cert.failures.append((lo, hi))
            continue
        mid = 0.5 * (lo + hi)
        stack.extend([(mid, hi), (lo, mid)])

    if head:
        cert.head_rule = head_rule(_head(name), r_lo)
    if tail:
        degree, model = _tail(name)
        cert.tail_rule = tail_rule(degree, model, r_hi)
    signs = {Interval(s.enclosure_lo, s.enclosure_hi).sign() for s in cert.subintervals}
    if not cert.failures and len(signs) == 1:
        cert.conclusion = SIGN_WORD[signs.pop()]
    return cert


def replay(cert: SignCertificate) -> dict:
    """Re-derive every stored enclosure and rule; report coverage and agreement."""
    name = cert.expression
    subs = sorted(cert.subintervals, key=lambda s: s.lo)
    problems = []
    if cert.failures:
        problems.append("certificate lists unresolved pieces")
    if not subs:
        problems.append("empty partition")
    else:
        if subs[0].lo != cert.domain[0] or subs[-1].hi != cert.domain[1]:
            problems.append("partition does not reach the window ends")
        for a, b in zip(subs[:-1], subs[1:]):
            if a.hi != b.lo:
                problems.append(f"gap or overlap at {a.hi!r} / {b.lo!r}")
    for s in subs:
        enc = enclose_on(name, s.lo, s.hi, s.method)
        if enc.sign() != cert.sign or not cert.sign:
            problems.append(f"enclosure on [{s.lo}, {s.hi}] does not have the claimed sign")
    r_lo, r_hi = cert.domain
    if cert.head_rule is not None:
        again = head_rule(_head(name), r_lo)
        if again.get("sign") != cert.head_rule.get("sign") or not again.get("valid"):
            problems.append("head rule does not replay")
    if cert.tail_rule is not None:
        degree, model = _tail(name)
        again = tail_rule(degree, model, r_hi)
        if again.get("sign") != cert.tail_rule.get("sign") or not again.get("valid"):
            problems.append("tail rule does not replay")
    return {"expression": name, "ok": not problems, "problems": problems,
            "subintervals": len(subs)}


# -- exact derivative chain ------------------------------------------------------

SQRT = AtanSqrtExpr.from_monomials([(1, 0, 0, 1)])
R_SQRT = AtanSqrtExpr.from_monomials([(1, 1, 0, 1)])


def _vanishes_at_zero(expr: AtanSqrtExpr) -> bool:
    return expr.head_model().exact[0].is_zero()


def chain_identities() -> Dict[str, bool]:
    """Exact checks behind the monotonicity chain, all as (1+r^2) d/dr identities."""
    return {
        "g1' = d g1/dr": G1.scaled_derivative() == G1_PRIME.times_poly([1, 0, 1]),
        "g1(0) = 0": _vanishes_at_zero(G1),
        "d core(g3')/dr = -g31/sqrt(1+r^2)": G3_PRIME_CORE.scaled_derivative() == -(G31 * SQRT),
        "core(g3')(0) = 0": _vanishes_at_zero(G3_PRIME_CORE),
        "g3' = d g3/dr": G3.scaled_derivative() == G3_PRIME_CORE * R_SQRT,
        "g3(0) = 0": _vanishes_at_zero(G3),
    }


CHAIN_STEPS = (
    ("g1", "g1_prime", 1, ("g1' = d g1/dr", "g1(0) = 0")),
    ("g3_prime", "g31", -1, ("d core(g3')/dr = -g31/sqrt(1+r^2)", "core(g3')(0) = 0")),
    ("g3", "g3_prime", 1, ("g3' = d g3/dr", "g3(0) = 0")),
)


def derive_chain(certs: Dict[str, SignCertificate]) -> List[dict]:
    """Signs implied by monotonicity from a zero start, given derivative certificates.

    For each step the target vanishes at 0 and its derivative is a positive
    multiple of ``sign * premise``; a complete premise certificate then fixes
    the target's sign on (0, oo).  The step is cross-checked against the
    direct certificate of the target when one is supplied.
    """
    ids = chain_identities()
    derived: Dict[str, int] = {}
    out = []
    for target, premise, factor, needed in CHAIN_STEPS:
        prem = certs.get(premise)
        prem_sign = prem.sign if prem is not None and prem.complete else derived.get(premise, 0)
        ok_ids = all(ids[k] for k in needed)
        sign = prem_sign * factor if ok_ids else 0
        if sign:
            derived[target] = sign
        direct = certs.get(target)
        out.append({
            "target": target, "premise": premise, "identities": {k: ids[k] for k in needed},
            "premise_sign": prem_sign, "derived": SIGN_WORD.get(sign, FAILED),
            "direct": direct.conclusion if direct is not None else None,
            "consistent": direct is None or not direct.complete or direct.sign == sign,
        })
    return out


def certify_all(names=TARGETS, r_lo: float = DEFAULT_WINDOW[0], r_hi: float = DEFAULT_WINDOW[1],
                head: bool = True, tail: bool = True) -> Dict[str, SignCertificate]:
    return {get_aux(n).name: certify_sign(n, r_lo, r_hi, head, tail) for n in names}


# -- ECT verdicts -------------------------------------------------------------------

REQUIRED = {
    "full7": ("g1_prime", "g1", "g2", "g31", "g3_prime", "g3"),
    "smooth4": ("h_smooth",),
}
BOUNDS = {"full7": 6, "smooth4": 3}


def ect_report(basis: str, certs: Dict[str, SignCertificate]) -> dict:
    """Nonvanishing of every prefix Wronskian on (0, oo) and the resulting zero bound.

    Wronskians with an explicit prefactor only are signed by inspection; the
    rest need a complete certificate for their auxiliary factor.  For the full
    basis the monotonicity chain must also close and agree with the direct
    certificates.  Anything missing yields ``incomplete`` with no bound.
    """
    if basis not in REQUIRED:
        raise ValueError(f"basis must be one of {sorted(REQUIRED)}")
    missing = [n for n in REQUIRED[basis] if n not in certs or not certs[n].complete]
    chain = derive_chain(certs) if basis == "full7" else []
    chain_ok = all(step["derived"] != FAILED and step["consistent"] for step in chain)
    wronskians = []
    for k, form in FORMS[basis].items():
        if form.aux is None:
            sign, source = form.sign, "explicit"
        else:
            c = certs.get(form.aux)
            sign = form.sign * c.sign if c is not None and c.complete else 0
            source = f"certificate:{form.aux}"
        wronskians.append({"k": k, "form": form.text, "sign": sign, "source": source})
    ok = not missing and chain_ok and all(w["sign"] for w in wronskians)
    return {
        "basis": basis,
        "verdict": "ECT" if ok else "incomplete",
        "bound": BOUNDS[basis] if ok else None,
        "wronskians": wronskians,
        "chain": chain,
        "missing": missing,
        "consumed": {n: certs[n].conclusion for n in REQUIRED[basis] if n in certs},
    }
