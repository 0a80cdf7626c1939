"""Truncated Taylor arithmetic ("jets") for exact-rule derivatives.

A jet is a list ``[c0, c1, ..., cn]`` of Taylor coefficients about a point;
the m-th derivative there is ``m! * c_m``.  The routines are generic over the
scalar type, so the same code runs in doubles and in mpmath.
"""
from __future__ import annotations

import math
from typing import Callable, List, Sequence

import mpmath


class Backend:
    def __init__(self, atan: Callable, const: Callable):
        self.atan = atan
        self.const = const


FLOAT = Backend(math.atan, float)
def _mp_const(x):
    if isinstance(x, (int, float)):
        return mpmath.mpf(x)
    return mpmath.mpf(x.numerator) / x.denominator


MP = Backend(mpmath.atan, _mp_const)


def variable(x0, order: int) -> List:
    zero = x0 * 0
    return [x0, zero + 1] + [zero] * (order - 1) if order >= 1 else [x0]


def constant(c, like: Sequence) -> List:
    zero = like[0] * 0
    return [zero + c] + [zero] * (len(like) - 1)


def add(a: Sequence, b: Sequence) -> List:
    return [x + y for x, y in zip(a, b)]


def sub(a: Sequence, b: Sequence) -> List:
    return [x - y for x, y in zip(a, b)]


def mul(a: Sequence, b: Sequence) -> List:
    n = len(a)
    return [sum((a[j] * b[k - j] for j in range(k + 1)), a[0] * 0) for k in range(n)]


def div(a: Sequence, b: Sequence) -> List:
    out: List = []
    for k in range(len(a)):
        s = a[k] - sum((b[j] * out[k - j] for j in range(1, k + 1)), a[0] * 0)
        out.append(s / b[0])
    return out


def power(h: Sequence, alpha, backend: Backend = FLOAT) -> List:
    """h**alpha for h[0] > 0 via  k h0 g_k = sum_j (alpha j - (k - j)) h_j g_{k-j}."""
    al = backend.const(alpha)
    g = [h[0] ** al]
    for k in range(1, len(h)):
        s = sum(((al * j - (k - j)) * h[j] * g[k - j] for j in range(1, k + 1)), h[0] * 0)
        g.append(s / (k * h[0]))
    return g


def atan(h: Sequence, backend: Backend = FLOAT) -> List:
    """arctan(h): integrate h' / (1 + h^2) term by term."""
    n = len(h)
    if n == 1:
        return [backend.atan(h[0])]
    dh = [h[k + 1] * (k + 1) for k in range(n - 1)]
    hh = h[: n - 1]
    q = div(dh, add(constant(1, hh), mul(hh, hh)))
    return [backend.atan(h[0])] + [q[k - 1] / k for k in range(1, n)]


def derivatives(jet: Sequence) -> List:
    """[f, f', f'', ...] from Taylor coefficients."""
    out, fact = [], 1
    for m, c in enumerate(jet):
        if m:
            fact *= m
        out.append(c * fact)
    return out
