"""The logarithm-like function l_1 and the polylogarithms l_n on O_pi.

Each l_n has two representations: the power series sum_j t^(q^j) / [j]^n on
the small disk v(t) >= 1, and a Carlitz expansion sum_i c_i f_i valid on all
of O_pi.  Every infinite sum is cut off by a certified valuation bound.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .artin_schreier import solve
from .carlitz import (
    CarlitzFunction,
    DecayBound,
    FunctionHandle,
    LinearPowerSeries,
    carlitz_handle,
)
from .local_series import LocalSeries
from .place import PlaceCtx

DEFAULT_I_MAX = 14
DEFAULT_N_MAX = 6


# -- small-disk power series ---------------------------------------------------


def build_ln_series(place: PlaceCtx, n: int, j_max: int = 16) -> LinearPowerSeries:
    """Coefficients a_0 = 0, a_j = [j]^(-n)."""
    coeffs = [place.zero()]
    for j in range(1, j_max + 1):
        coeffs.append(place.bracket(j).inverse() ** n)
    delta = place.delta
    return LinearPowerSeries(place, coeffs, lambda j: -n * (j // delta))


def build_l1_series(place: PlaceCtx, j_max: int = 16) -> LinearPowerSeries:
    return build_ln_series(place, 1, j_max)


def eval_ln_series(place: PlaceCtx, n: int, t: LocalSeries, j_max: int = 16) -> LocalSeries:
    return build_ln_series(place, n, j_max)(t)


def series_modulus(q: int, delta: int, n: int, k: int) -> int:
    """min over j >= 1 of q^j k - n floor(j/delta): lower bound for v(l_n(t)), v(t) >= k >= 1."""
    best = None
    for j in range(1, 64):
        b = q**j * k - n * (j // delta)
        best = b if best is None else min(best, b)
        if q**j * k > best + n * (j + 1):
            break
    return best


# -- Carlitz expansions ----------------------------------------------------------


def _certified_lb(u_coeffs, tail_bound, j) -> int:
    c = u_coeffs[j]
    if c.is_zero() and tail_bound.holds_at(j):
        return max(c.prec, tail_bound(j))
    return c.val


def _signed_ratio_sum(place: PlaceCtx, coeffs, tail_bound, lo: int, sign0: int, target: int) -> LocalSeries:
    """sum_{j >= lo} sign0 * (-1)^j c_j / L_j, to absolute precision `target`."""
    acc = place.zero(target)
    delta = place.delta
    for j in range(lo, len(coeffs)):
        vL = place.L_factorial(j).val
        if tail_bound.holds_at(j) and _certified_lb(coeffs, tail_bound, j) - vL >= target:
            continue
        term = coeffs[j] / place.L_factorial(j)
        acc = acc - term if (sign0 + j) % 2 else acc + term
    i_next = len(coeffs)
    tail = tail_bound(i_next) - i_next // delta
    return acc.cap(min(target, tail))


def limit_constant(place: PlaceCtx, coeffs, tail_bound) -> LocalSeries:
    """c_0 = sum_{i>=1} (-1)^(i+1) c_i / L_i, making t^-1 u(t) -> 0."""
    return _signed_ratio_sum(place, coeffs, tail_bound, 1, 1, place.prec)


def _check_branch(place: PlaceCtx, branch):
    branch = [0] * place.delta if branch is None else list(branch)
    if len(branch) != place.delta or any(not 0 <= b < place.q for b in branch):
        raise ValueError(f"branch must have {place.delta} entries in [0, {place.q})")
    return branch


def next_principal(place: PlaceCtx, prev: LocalSeries, n: int) -> LocalSeries:
    """c_n = sum_{j>=0} (c_{n-1} [n-1])^(q^(j+1))."""
    y = prev * place.bracket(n - 1)
    W, q = place.prec, place.q
    if y.is_zero():
        return place.zero(min(W, y.prec * q))
    acc = place.zero(W)
    j = 1
    while y.val * q**j < W:
        acc = acc + y.q_power(j, cap=W)
        j += 1
    return acc


def build_l1_carlitz(place: PlaceCtx, branch=None, i_max: int = DEFAULT_I_MAX) -> CarlitzFunction:
    """Carlitz coefficients of the continuous extension of l_1.

    c_1..c_delta are the roots selected by `branch`; the returned function's
    place carries the (possibly extended) residue tower.
    """
    branch = _check_branch(place, branch)
    delta = place.delta
    if i_max <= delta:
        raise ValueError("i_max must exceed delta")
    fieldctx = place.field
    minus_one = LocalSeries.constant(-place.residue_level.one(), place.prec, delta)
    fieldctx, roots, _ = solve(fieldctx, minus_one)
    c = [None, roots[branch[0]]]
    for i in range(1, delta):
        xi = -(place.bracket(i) * c[i]).q_power(1, cap=place.prec)
        fieldctx, roots, _ = solve(fieldctx, xi)
        c.append(roots[branch[i]])
    place = place.with_field(fieldctx)
    for n in range(delta + 1, i_max + 1):
        c.append(next_principal(place, c[n - 1], n))
    tail = DecayBound(place.q, delta, 0)
    c[0] = limit_constant(place, c, tail)
    return CarlitzFunction(place, c, tail)


def build_ln(place: PlaceCtx, prev: CarlitzFunction, n: int) -> CarlitzFunction:
    """Coefficients of l_n from those of l_{n-1} through the tail-sum closed form."""
    place = prev.place
    tail_prev = prev.tail_bound
    tail = DecayBound(tail_prev.q, tail_prev.offset, tail_prev.shift + 1)
    c = [None]
    for m in range(1, prev.i_max + 1):
        L = place.L_factorial(m - 1)
        S = _signed_ratio_sum(place, prev.coeffs, tail_prev, m, 0, place.prec - L.val)
        val = L * S
        c.append(-val if m % 2 else val)
    c[0] = limit_constant(place, c, tail)
    return CarlitzFunction(place, c, tail)


def certified_constant(u: CarlitzFunction) -> dict:
    """The decay certificate v(c_i) >= q^(i-delta) - shift, as C = q^(delta*shift)."""
    tb = u.tail_bound
    return {"shift": tb.shift, "C_exponent": u.place.delta * tb.shift, "C": u.place.q ** (u.place.delta * tb.shift)}


def build_alternative_branch(place: PlaceCtx, n_branch: int, i_max: int = DEFAULT_I_MAX):
    """A continuous solution with unit c_1..c_{N delta}, principal roots afterwards.

    Returns (CarlitzFunction, valuation profile [v(c_1), ..., v(c_imax)]).
    """
    delta = place.delta
    if n_branch < 2 or n_branch * delta > i_max:
        raise ValueError("need 2 <= n_branch and n_branch*delta <= i_max")
    fieldctx = place.field
    xi = LocalSeries.constant(-place.residue_level.one(), place.prec, delta)
    c = [None]
    for n in range(1, i_max + 1):
        if n > 1:
            xi = -(place.bracket(n - 1) * c[n - 1]).q_power(1, cap=place.prec)
        fieldctx, roots, principal = solve(fieldctx, xi)
        if n <= n_branch * delta:
            idx = 0 if principal is None else 1
        else:
            if principal is None:
                raise ValueError(f"no principal root at step {n}")
            idx = principal
        c.append(roots[idx])
    place = place.with_field(fieldctx)
    tail = DecayBound(place.q, n_branch * delta, 0)
    c[0] = limit_constant(place, c, tail)
    profile = [ci.val if not ci.is_zero() else None for ci in c[1:]]
    return CarlitzFunction(place, c, tail), profile


def alt_branch_valuation(q: int, delta: int, l: int) -> int:
    """q^(l delta) + q^((l-1) delta) + ... + q^delta."""
    return sum(q ** (k * delta) for k in range(1, l + 1))


# -- the assembled family ----------------------------------------------------------


@dataclass
class PolylogSet:
    place: PlaceCtx
    branch: list
    carlitz: list  # index n-1 -> CarlitzFunction of l_n
    series: list  # index n-1 -> LinearPowerSeries of l_n
    _handles: dict = field(default_factory=dict)

    @property
    def n_max(self) -> int:
        return len(self.carlitz)

    @property
    def i_max(self) -> int:
        return self.carlitz[0].i_max

    def l(self, n: int) -> CarlitzFunction:
        return self.carlitz[n - 1]

    def handle(self, n: int) -> FunctionHandle:
        """l_n as a function handle with a certified modulus bound."""
        if n not in self._handles:
            u = self.carlitz[n - 1]
            base = u.min_valuation()
            q, delta = self.place.q, self.place.delta

            def modulus(k, base=base, n=n):
                if k < 1:
                    return base
                return max(base, series_modulus(q, delta, n, k))

            self._handles[n] = carlitz_handle(u, modulus, name=f"l{n}")
        return self._handles[n]


def build_polylogs(place: PlaceCtx, n_max: int = DEFAULT_N_MAX, i_max: int = DEFAULT_I_MAX, branch=None, j_max: int = 16) -> PolylogSet:
    l1 = build_l1_carlitz(place, branch, i_max)
    place = l1.place
    carlitz = [l1]
    for n in range(2, n_max + 1):
        carlitz.append(build_ln(place, carlitz[-1], n))
    series = [build_ln_series(place, n, j_max) for n in range(1, n_max + 1)]
    return PolylogSet(place, _check_branch(place, branch), carlitz, series)
