"""Hyperdifferentiations on O_x and the fractional difference operator.

Only the place pi = x is supported here, so series digits are the
x-adic digits of the argument and multiplication by x is a shift.
"""
from __future__ import annotations

import numpy as np

from .carlitz import FunctionHandle
from .field_tower import lucas_binomial
from .local_series import LocalSeries
from .place import PlaceCtx


def check_base_digits(t: LocalSeries, place: PlaceCtx) -> LocalSeries:
    """Reject series whose digits leave F_q (arguments must lie in K_x)."""
    if not place.is_x:
        raise ValueError("hyperdifferentiation is only defined here for pi = x")
    if not t.in_level(place.field.fq_level):
        raise TypeError("series digits must lie in F_q")
    return t


def hyperdiff(k: int, t: LocalSeries) -> LocalSeries:
    """D_k(sum theta_n x^n) = sum_{n>=k} theta_n binom(n, k) x^(n-k), known to prec - k."""
    if k < 0:
        raise ValueError("k must be >= 0")
    if not t.is_zero() and t.val < 0:
        raise ValueError("hyperdifferentiation needs v(t) >= 0")
    if k == 0:
        return t
    p = t.level.p
    lo = max(t.start, k)
    N = t.prec - k
    if t.is_zero() or lo >= t.prec:
        return LocalSeries.zero(t.level, max(N, 0), t.delta)
    idx = np.arange(lo, t.prec)
    binoms = np.array([lucas_binomial(int(n), k, p) for n in idx], dtype=np.int64)
    rows = t.digits[lo - t.start:] * binoms[:, None]
    return LocalSeries(t.level, lo - k, rows, N, t.delta)


def hat(a: LocalSeries) -> LocalSeries:
    """sum alpha_n x^n -> sum (-1)^n alpha_n x^n."""
    if a.level.p == 2:
        return a
    signs = np.where((np.arange(a.start, a.prec) % 2) == 1, -1, 1)
    return LocalSeries(a.level, a.start, a.digits * signs[:, None], a.prec, a.delta)


def frac_delta(place: PlaceCtx, alpha: LocalSeries, u: FunctionHandle, t: LocalSeries) -> LocalSeries:
    """(Delta^(alpha) u)(t) = sum_k (-1)^k D_k(hat alpha) u(x^k t)."""
    check_base_digits(alpha, place)
    if not alpha.is_zero() and alpha.val < 0:
        raise ValueError("alpha must lie in O_x")
    if not t.is_zero() and t.val < 0:
        raise ValueError("t must lie in O_x")
    target = place.prec
    vt = max(t.val, 0)
    ah = hat(alpha)
    acc = place.zero(target)
    bound = target
    k = 0
    while True:
        if u.modulus(k + vt) >= target:
            break
        if k >= ah.prec:
            # D_k(alpha) is unknown from here on; |D_k(alpha)| <= 1 still holds
            bound = min(bound, u.modulus(k + vt))
            break
        dk = hyperdiff(k, ah)
        if dk.is_zero():
            bound = min(bound, dk.prec + u.modulus(k + vt))
        else:
            term = dk * u(t.shift(k))
            acc = acc - term if k % 2 else acc + term
        k += 1
    return acc.cap(bound)


def frac_delta_handle(place: PlaceCtx, alpha: LocalSeries, u: FunctionHandle) -> FunctionHandle:
    """Delta^(alpha) u as a handle; it inherits u's modulus since |D_k(alpha)| <= 1."""
    return FunctionHandle(lambda t: frac_delta(place, alpha, u, t), u.modulus, f"D^(a)({u.name})")


def leibniz_rhs(n: int, a: LocalSeries, b: LocalSeries) -> LocalSeries:
    """sum_{k+l=n} D_k(b) D_l(a)."""
    acc = None
    for k in range(n + 1):
        term = hyperdiff(k, b) * hyperdiff(n - k, a)
        acc = term if acc is None else acc + term
    return acc
