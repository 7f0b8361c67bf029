"""Normalized Carlitz polynomials, the Carlitz difference operators and A_{n,r}.

Functions on O_pi are handled in three forms: Carlitz expansions
sum c_i f_i (CarlitzFunction), F_q-linear power series sum a_j t^(q^j)
(LinearPowerSeries), and opaque evaluators with a certified modulus bound
(FunctionHandle).  Difference operators act pointwise on handles.
"""
from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass
from typing import Callable

from .errors import OutsideDisk
from .local_series import LocalSeries
from .place import PlaceCtx


# -- normalized Carlitz polynomials -----------------------------------------


def eval_f_all(place: PlaceCtx, t: LocalSeries, i_max: int) -> list[LocalSeries]:
    """[f_0(t), ..., f_imax(t)] via f_i = (f_{i-1}^q - f_{i-1}) / [i]."""
    out = [t]
    f = t
    for i in range(1, i_max + 1):
        num = f.q_power(1, cap=f.prec) - f
        f = num / place.bracket(i)
        out.append(f)
    return out


def eval_f(place: PlaceCtx, i: int, t: LocalSeries) -> LocalSeries:
    return eval_f_all(place, t, i)[i]


def eval_f_sum(place: PlaceCtx, i: int, t: LocalSeries) -> LocalSeries:
    """f_i(t) from the closed alternating sum over t^(q^j) / (D_j L_{i-j}^(q^j)).

    Exponentially more expensive than eval_f; kept as an independent check.
    """
    q = place.q
    acc = None
    for j in range(i + 1):
        L = place.L_factorial(i - j)
        Lq = L.q_power(j, cap=L.start * q**j + place.prec)
        denom = place.D_factorial(j) * Lq
        tq = t.q_power(j, cap=t.prec * q**j)
        term = tq / denom
        if (i - j) % 2:
            term = -term
        acc = term if acc is None else acc + term
    return acc


# -- decay bounds -------------------------------------------------------------


@dataclass(frozen=True)
class DecayBound:
    """v(c_i) >= q^(i - offset) - shift, valid for i > offset."""

    q: int
    offset: int
    shift: int = 0

    def __call__(self, i: int) -> int:
        if i <= self.offset:
            raise ValueError(f"decay bound only holds for i > {self.offset}")
        return self.q ** (i - self.offset) - self.shift

    def holds_at(self, i: int) -> bool:
        return i > self.offset


class CarlitzFunction:
    """u = sum_i c_i f_i with explicit c_0..c_imax and a certified tail bound."""

    def __init__(self, place: PlaceCtx, coeffs: list[LocalSeries], tail_bound: Callable[[int], int]):
        self.place = place
        self.coeffs = list(coeffs)
        self.tail_bound = tail_bound

    @property
    def i_max(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, t: LocalSeries) -> LocalSeries:
        return eval_cf(self, t)

    def coeff_lower_bound(self, i: int) -> int:
        if i <= self.i_max:
            return self.coeffs[i].val
        return self.tail_bound(i)

    def min_valuation(self) -> int:
        """Lower bound for v(u(t)) over t in O_pi."""
        return min(min(c.val for c in self.coeffs), self.tail_bound(self.i_max + 1))


def eval_cf(u: CarlitzFunction, t: LocalSeries, target: int | None = None) -> LocalSeries:
    place = u.place
    target = place.prec if target is None else target
    last = 0
    for i, c in enumerate(u.coeffs):
        if not c.is_zero() or c.prec < target:
            last = i
    fs = eval_f_all(place, t, last)
    acc = None
    for c, f in zip(u.coeffs, fs):
        term = c * f
        acc = term if acc is None else acc + term
    bound = min([c.prec for c in u.coeffs[last + 1:]] + [u.tail_bound(u.i_max + 1), target])
    return acc.cap(bound)


def delta_on_carlitz(u: CarlitzFunction) -> CarlitzFunction:
    """Carlitz coefficients of Delta u: b_i = c_{i+1} + [i] c_i."""
    place = u.place
    b = [u.coeffs[1]]
    for i in range(1, u.i_max):
        b.append(u.coeffs[i + 1] + place.bracket(i) * u.coeffs[i])
    return CarlitzFunction(place, b, u.tail_bound)


class LinearPowerSeries:
    """u(t) = sum_j a_j t^(q^j) on |t| <= q^-delta.

    `coeff_bound(j)` bounds v(a_j) from below for j beyond the stored ones.
    """

    def __init__(self, place: PlaceCtx, coeffs: list[LocalSeries | None], coeff_bound: Callable[[int], int]):
        self.place = place
        self.coeffs = list(coeffs)
        self.coeff_bound = coeff_bound

    @property
    def j_max(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, t: LocalSeries) -> LocalSeries:
        place = self.place
        if not t.is_zero() and t.val < 1:
            raise OutsideDisk(f"power series needs v(t) >= 1, got {t.val}")
        q, target = place.q, place.prec
        v = max(t.val, 1)
        acc = place.zero(target)
        for j, a in enumerate(self.coeffs):
            if a is None or a.is_zero() and a.prec >= target:
                continue
            if a.val + q**j * v >= target:
                continue
            acc = acc + a * t.q_power(j, cap=target - a.val)
        tail = min(
            (self.coeff_bound(j) + q**j * v for j in range(self.j_max + 1, self.j_max + 64)),
            default=target,
        )
        return acc.cap(min(tail, target))


# -- function handles and the difference operators -------------------------------


class FunctionHandle:
    """An F_q-linear function t -> LocalSeries with a modulus bound.

    modulus(k) is a lower bound for v(u(t)) whenever v(t) >= k >= 0, monotone in k.
    Evaluations are memoized by argument.
    """

    def __init__(self, fn: Callable[[LocalSeries], LocalSeries], modulus: Callable[[int], int], name: str = "u"):
        self._fn = fn
        self.modulus = modulus
        self.name = name
        self._cache: dict = {}
        self._lock = threading.Lock()
        self.derived: dict = {}

    def __call__(self, t: LocalSeries) -> LocalSeries:
        k = t.key()
        with self._lock:
            if k in self._cache:
                return self._cache[k]
        val = self._fn(t)
        with self._lock:
            self._cache[k] = val
        return val

    def __repr__(self):
        return f"FunctionHandle({self.name})"


def identity_handle() -> FunctionHandle:
    return FunctionHandle(lambda t: t, lambda k: k, "id")


def carlitz_handle(u: CarlitzFunction, modulus: Callable[[int], int] | None = None, name="u") -> FunctionHandle:
    base = u.min_valuation()
    if modulus is None:
        modulus = lambda k: base  # noqa: E731
    return FunctionHandle(u, modulus, name)


def _derived(u: FunctionHandle, key, build):
    if key not in u.derived:
        u.derived[key] = build()
    return u.derived[key]


def delta_handle(place: PlaceCtx, u: FunctionHandle) -> FunctionHandle:
    """(Delta u)(t) = u(xt) - x u(t)."""
    e = place.x_valuation

    def build():
        fn = lambda t: u(place.mul_x(t)) - place.mul_x(u(t))  # noqa: E731
        mod = lambda k: min(u.modulus(k + e), e + u.modulus(k))  # noqa: E731
        return FunctionHandle(fn, mod, f"D({u.name})")

    return _derived(u, "delta", build)


def delta_pow_handle(place: PlaceCtx, u: FunctionHandle, r: int) -> FunctionHandle:
    for _ in range(r):
        u = delta_handle(place, u)
    return u


def delta_n_handle(place: PlaceCtx, u: FunctionHandle, n: int) -> FunctionHandle:
    """Delta_n u(t) = Delta_{n-1}u(xt) - x^(q^(n-1)) Delta_{n-1}u(t), Delta_1 = Delta."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return delta_handle(place, u)

    def build():
        prev = delta_n_handle(place, u, n - 1)
        xq = place.chi.q_power(n - 1, cap=place.prec)
        e = place.x_valuation * place.q ** (n - 1)
        fn = lambda t: prev(place.mul_x(t)) - xq * prev(t)  # noqa: E731
        mod = lambda k: min(prev.modulus(k + place.x_valuation), e + prev.modulus(k))  # noqa: E731
        return FunctionHandle(fn, mod, f"D{n}({u.name})")

    return _derived(u, ("delta_n", n), build)


def delta_point(place, u, t):
    return delta_handle(place, u)(t)


def delta_pow_point(place, u, r, t):
    return delta_pow_handle(place, u, r)(t)


def delta_n_point(place, u, n, t):
    return delta_n_handle(place, u, n)(t)


# -- connection coefficients A_{n,r} ------------------------------------------------


def elementary_symmetric(values: list[LocalSeries], one: LocalSeries) -> list[LocalSeries]:
    """[e_0, ..., e_m] of the given values by the standard O(m^2) recurrence."""
    e = [one]
    for v in values:
        e.append(e[-1] * v)
        for k in range(len(e) - 2, 0, -1):
            e[k] = e[k] + e[k - 1] * v
    return e


def a_coeff(place: PlaceCtx, n: int, r: int) -> LocalSeries:
    """A_{n,r} = (-1)^(n+r) L_{n-1} e_{r-1}(1/[1], ..., 1/[n-1])."""
    if not 1 <= r <= n:
        raise ValueError("need 1 <= r <= n")
    return a_table(place, n)[n][r]


def a_table(place: PlaceCtx, n_max: int) -> dict[int, dict[int, LocalSeries]]:
    # L_{n-1} e_{r-1}(1/[i]) equals e_{n-r}([1], ..., [n-1]); no inverses needed.
    cache = place._a_table
    for n in range(1, n_max + 1):
        if n in cache:
            continue
        e = elementary_symmetric([place.bracket(i) for i in range(1, n)], place.one)
        row = {}
        for r in range(1, n + 1):
            val = e[n - r]
            row[r] = -val if (n + r) % 2 else val
        cache[n] = row
    return {n: cache[n] for n in range(1, n_max + 1)}


def a_coeff_bruteforce(place: PlaceCtx, n: int, r: int) -> LocalSeries:
    """A_{n,r} by explicit subset enumeration over 1/[i]; for testing small n."""
    acc = place.zero()
    for subset in itertools.combinations(range(1, n), r - 1):
        term = place.one
        for i in subset:
            term = term / place.bracket(i)
        acc = acc + term
    val = place.L_factorial(n - 1) * acc
    return -val if (n + r) % 2 else val
