"""The zeta function on K_x and checks of the identities it satisfies.

zeta(x^-n) = l_n(1), and for t = x^-n alpha with alpha in O_x,
zeta(t) = (Delta^(alpha) l_n)(1).  Verification routines return defect
records (a valuation plus the bound it is held to), never bare booleans.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass

from .carlitz import a_table, delta_n_point, delta_pow_point
from .errors import DepthExceeded
from .hyperdiff import check_base_digits, frac_delta, hyperdiff
from .local_series import LocalSeries
from .polylog import PolylogSet


@dataclass(frozen=True)
class Defect:
    """v(lhs - rhs) against a required bound.

    When the difference vanishes to its known precision, `valuation` is that
    precision and `exact` is False.  A bound beyond the available precision
    cannot be witnessed, so `ok` compares against min(bound, precision).
    """

    valuation: int
    exact: bool
    bound: int
    precision: int

    @classmethod
    def of(cls, diff: LocalSeries, bound: int) -> Defect:
        return cls(diff.val, not diff.is_zero(), bound, diff.prec)

    @property
    def ok(self) -> bool:
        return self.valuation >= min(self.bound, self.precision)

    def to_json(self) -> dict:
        return {"valuation": self.valuation, "exact": self.exact, "bound": self.bound,
                "precision": self.precision, "ok": self.ok}


class ZetaEvaluator:
    """Zeta values built from a PolylogSet at the place pi = x.

    `floor` is the valuation every exact identity is required to reach;
    it defaults to the working precision less 8 guard digits.
    """

    def __init__(self, polylogs: PolylogSet, floor: int | None = None):
        place = polylogs.place
        if not place.is_x:
            raise ValueError("the zeta function is defined for pi = x only")
        self.polylogs = polylogs
        self.place = place
        self.floor = place.prec - 8 if floor is None else floor
        self._cache: dict = {}
        self._lock = threading.Lock()

    @property
    def n_max(self) -> int:
        return self.polylogs.n_max

    def monomial(self, m: int, c=1) -> LocalSeries:
        fq = self.place.field.fq_level
        return LocalSeries.monomial(fq.from_int(c) if isinstance(c, int) else c, m, self.place.prec + max(m, 0))

    def decompose(self, t: LocalSeries, n: int | None = None):
        """(n, alpha) with t = x^-n alpha, alpha in O_x; n defaults to max(1, -v(t))."""
        canonical = max(1, -t.val)
        n = canonical if n is None else n
        if n < canonical:
            raise ValueError(f"n = {n} is too small for v(t) = {t.val}")
        return n, t.shift(n)

    def zeta(self, t: LocalSeries, n: int | None = None) -> LocalSeries:
        check_base_digits(t, self.place)
        if t.is_zero():
            return self.place.zero()
        n, alpha = self.decompose(t, n)
        if n > self.n_max:
            raise DepthExceeded(f"zeta needs l_{n}; rebuild with n_max >= {n}")
        key = (n, alpha.key())
        with self._lock:
            if key in self._cache:
                return self._cache[key]
        val = frac_delta(self.place, alpha.cap(self.place.prec), self.polylogs.handle(n), self.place.one)
        with self._lock:
            self._cache[key] = val
        return val

    def zeta_x_power(self, m: int) -> LocalSeries:
        """zeta(x^m) through the canonical decomposition."""
        return self.zeta(self.monomial(m))

    def zeta_special_pos(self, m: int) -> LocalSeries:
        """zeta(x^m) = (Delta^(m+1) l_1)(1), m >= 0."""
        if m < 0:
            raise ValueError("m must be >= 0")
        return delta_pow_point(self.place, self.polylogs.handle(1), m + 1, self.place.one)

    def lower_bound(self, m: int) -> int:
        """Certified lower bound for v(zeta(x^m))."""
        if m < 0:
            return self.polylogs.handle(-m).modulus(0)
        mod = self.polylogs.handle(1).modulus
        return min(m + 1 - k + mod(k) for k in range(m + 2))

    def _tail_bound(self, first_m: int) -> int:
        best = None
        m = first_m
        mod0 = min(0, self.polylogs.handle(1).modulus(0))
        while True:
            b = self.lower_bound(m)
            best = b if best is None else min(best, b)
            if m >= 0 and m + 1 + mod0 >= best:
                return best
            m += 1

    # -- identities --------------------------------------------------------------

    def verify_expansion(self, n: int, t: LocalSeries, i_cut: int) -> Defect:
        """l_n(t) against sum_{i <= i_cut} zeta(x^(i-n)) D_i(t)."""
        check_base_digits(t, self.place)
        lhs = self.polylogs.l(n)(t)
        rhs = self.place.zero()
        for i in range(i_cut + 1):
            rhs = rhs + self.zeta_x_power(i - n) * hyperdiff(i, t)
        bound = min(self._tail_bound(i_cut + 1 - n), self.floor)
        return Defect.of(lhs - rhs, bound)

    def c_identity_rhs(self, i: int, n: int) -> LocalSeries:
        row = a_table(self.place, i)[i]
        acc = self.place.zero()
        for r in range(1, i + 1):
            acc = acc + row[r] * self.zeta_x_power(r - n)
        return acc

    def verify_c_identity(self, i: int, n: int) -> dict:
        """c_i^(n) against sum_r A_{i,r} zeta(x^(r-n)) and against (Delta_i l_n)(1)."""
        c = self.polylogs.l(n).coeffs[i]
        rhs = self.c_identity_rhs(i, n)
        pointwise = delta_n_point(self.place, self.polylogs.handle(n), i, self.place.one)
        return {
            "expansion": Defect.of(c - rhs, self.floor),
            "pointwise": Defect.of(c - pointwise, self.floor),
        }

    def verify_functional_equation(self, n: int, i_cut: int) -> Defect:
        """zeta(x^-n) against the partial sum over i <= i_cut, outer index first."""
        place = self.place
        lhs = self.zeta_x_power(-n)
        rhs = place.zero()
        for i in range(1, i_cut + 1):
            term = self.c_identity_rhs(i, n) / place.L_factorial(i)
            rhs = rhs + term if i % 2 else rhs - term
        tb = self.polylogs.l(n).tail_bound
        tail = min(tb(i) - place.L_factorial(i).val for i in range(max(i_cut + 1, tb.offset + 1), i_cut + 3 + tb.offset))
        if i_cut + 1 <= tb.offset:
            tail = min(tail, min(self.polylogs.l(n).coeffs[i].val - place.L_factorial(i).val for i in range(i_cut + 1, tb.offset + 1)))
        return Defect.of(lhs - rhs, min(tail, self.floor))

    # -- Euler product ---------------------------------------------------------------

    def z_value(self, i: int) -> LocalSeries:
        """z_i = c_{i-1}^q [i-1]^q."""
        place = self.place
        if i < place.delta + 1:
            raise ValueError("z_i is defined for i >= delta + 1")
        c = self.polylogs.l(1).coeffs[i - 1]
        return (c * place.bracket(i - 1)).q_power(1, cap=place.prec)

    def euler_partial(self, i: int, primes_up_to: int, depth: int) -> LocalSeries:
        return euler_product(primes_up_to, depth, self.place.config.p).evaluate(self.z_value(i), self.place.prec)

    def euler_report(self, i: int, primes_up_to: int = 7, depth: int = 32) -> dict:
        place = self.place
        z = self.z_value(i)
        prod = euler_product(primes_up_to, depth, place.config.p)
        value = prod.evaluate(z, place.prec)
        direct = FormalDirichlet.geometric(1, _last_index(z, place), place.config.p).evaluate(z, place.prec)
        m_miss = prod.first_missing()
        certified = min(place.prec, z.val * place.q**m_miss) if not z.is_zero() else place.prec
        c_i = self.polylogs.l(1).coeffs[i]
        return {
            "i": i,
            "product_vs_direct_sum": Defect.of(value - direct, certified),
            "first_missing_index": m_miss,
            "j0_term_valuation": z.val,
            "c_i_minus_product_valuation": (c_i - value).val,
            "c_i_minus_product_minus_z": Defect.of(c_i - value - z, min(certified, self.floor)),
        }


def _last_index(z: LocalSeries, place) -> int:
    J = 1
    while not z.is_zero() and z.val * place.q ** (J + 1) < place.prec:
        J += 1
    return J


# -- the otimes semiring -------------------------------------------------------------


class FormalDirichlet:
    """A finite formal sum sum_j kappa_j z^(q^j), kappa_j in F_p.

    Multiplication is z^(q^i) (x) z^(q^j) = z^(q^(ij)); index 1 is the unit.
    """

    def __init__(self, coeffs: dict[int, int], p: int):
        self.p = p
        self.coeffs = {j: k % p for j, k in coeffs.items() if k % p}
        if any(j < 0 for j in self.coeffs):
            raise ValueError("indices must be >= 0")

    @classmethod
    def monomial(cls, j: int, p: int) -> FormalDirichlet:
        return cls({j: 1}, p)

    @classmethod
    def geometric(cls, lo: int, hi: int, p: int = 2) -> FormalDirichlet:
        return cls({j: 1 for j in range(lo, hi + 1)}, p)

    def __eq__(self, other):
        return isinstance(other, FormalDirichlet) and self.coeffs == other.coeffs

    def __repr__(self):
        return "FormalDirichlet(" + " + ".join(f"{k}*z^q^{j}" for j, k in sorted(self.coeffs.items())) + ")"

    def __add__(self, other):
        out = dict(self.coeffs)
        for j, k in other.coeffs.items():
            out[j] = out.get(j, 0) + k
        return FormalDirichlet(out, self.p)

    def otimes(self, other: FormalDirichlet) -> FormalDirichlet:
        out: dict[int, int] = {}
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                out[i * j] = out.get(i * j, 0) + a * b
        return FormalDirichlet(out, self.p)

    __matmul__ = otimes

    def first_missing(self) -> int:
        m = 1
        while self.coeffs.get(m):
            m += 1
        return m

    def evaluate(self, z: LocalSeries, prec: int) -> LocalSeries:
        q = z.level.config.q
        acc = LocalSeries.zero(z.level, prec, z.delta)
        for j, k in sorted(self.coeffs.items()):
            if not z.is_zero() and z.val * q**j >= prec:
                continue
            acc = acc + z.q_power(j, cap=prec).scale(k)
        if z.is_zero():
            return acc.cap(z.prec)
        return acc


def otimes(a: FormalDirichlet, b: FormalDirichlet) -> FormalDirichlet:
    return a.otimes(b)


def primes_upto(n: int) -> list[int]:
    return [k for k in range(2, n + 1) if all(k % d for d in range(2, int(k**0.5) + 1))]


def euler_product(primes_up_to: int, depth: int, p: int = 2) -> FormalDirichlet:
    """prod over primes r <= primes_up_to of sum_{r^n <= depth} z^(q^(r^n))."""
    acc = FormalDirichlet.monomial(1, p)
    for r in primes_upto(primes_up_to):
        factor = {}
        e = 1
        while e <= depth:
            factor[e] = 1
            e *= r
        acc = acc.otimes(FormalDirichlet(factor, p))
    return acc
