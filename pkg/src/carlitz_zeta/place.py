"""The completion K_pi of F_q(x) at a finite place, as F_{q^delta}((pi)).

The residue field F_q[x]/(pi) becomes a tower level, and the image chi of x
is the root of pi(X) = pi congruent to the residue class of x, found by
Newton iteration.  Every polynomial in x then embeds as a LocalSeries.
"""
from __future__ import annotations

import threading

from .errors import IndeterminateValuation, ReduciblePolynomial
from .field_tower import FFElement, FieldCtx, FqConfig, is_irreducible
from .local_series import LocalSeries


class PlaceCtx:
    """A finite place pi of F_q(x) together with its series model at precision `prec`.

    `pi` holds the coefficients of the monic polynomial as F_q encodings,
    constant term first.
    """

    def __init__(self, config: FqConfig, pi, prec: int, field: FieldCtx, residue_level, chi: LocalSeries):
        self.config = config
        self.pi = tuple(pi)
        self.delta = len(self.pi) - 1
        self.prec = prec
        self.field = field
        self.residue_level = residue_level
        self.chi = chi
        self._lock = threading.Lock()
        self._brackets: dict[int, LocalSeries] = {}
        self._D: dict[int, LocalSeries] = {0: self.one}
        self._L: dict[int, LocalSeries] = {0: self.one}
        self._a_table: dict = {}

    def __repr__(self):
        return f"PlaceCtx(q={self.q}, pi={list(self.pi)}, prec={self.prec})"

    @property
    def q(self) -> int:
        return self.config.q

    @property
    def is_x(self) -> bool:
        """True for the place pi = x, where chi is the uniformizer itself."""
        return self.pi == (0, 1)

    @property
    def one(self) -> LocalSeries:
        return LocalSeries.constant(self.residue_level.one(), self.prec, self.delta)

    def zero(self, prec=None) -> LocalSeries:
        return LocalSeries.zero(self.residue_level, self.prec if prec is None else prec, self.delta)

    def uniformizer(self) -> LocalSeries:
        return LocalSeries.monomial(self.residue_level.one(), 1, self.prec, delta=self.delta)

    def const(self, c: FFElement | int) -> LocalSeries:
        if isinstance(c, int):
            c = self.config_fq().from_int(c)
        return LocalSeries.constant(c, self.prec, self.delta)

    def config_fq(self):
        return self.field.fq_level

    # -- multiplication by powers of x ---------------------------------------

    @property
    def x_valuation(self) -> int:
        return 1 if self.is_x else 0

    def mul_x(self, t: LocalSeries, k: int = 1) -> LocalSeries:
        """x^k * t; a pure shift when pi = x."""
        if self.is_x:
            return t.shift(k)
        for _ in range(k):
            t = self.chi * t
        return t

    # -- Carlitz constants ---------------------------------------------------

    def bracket(self, n: int) -> LocalSeries:
        """[n] = x^(q^n) - x."""
        with self._lock:
            if n not in self._brackets:
                self._brackets[n] = self.chi.q_power(n, cap=self.prec) - self.chi
            return self._brackets[n]

    def D_factorial(self, i: int) -> LocalSeries:
        """D_i = [i] [i-1]^q ... [1]^(q^(i-1))."""
        if i not in self._D:
            prev = self.D_factorial(i - 1)
            val = self.bracket(i) * prev.q_power(1, cap=prev.start * self.q + self.prec)
            with self._lock:
                self._D[i] = val
        return self._D[i]

    def L_factorial(self, i: int) -> LocalSeries:
        """L_i = [i][i-1]...[1]."""
        if i not in self._L:
            val = self.bracket(i) * self.L_factorial(i - 1)
            with self._lock:
                self._L[i] = val
        return self._L[i]

    def with_field(self, field: FieldCtx) -> PlaceCtx:
        """Same place over a deeper tower (caches are shared values, so recomputed lazily)."""
        other = PlaceCtx(self.config, self.pi, self.prec, field, self.residue_level, self.chi)
        other._brackets = self._brackets
        other._D = self._D
        other._L = self._L
        other._a_table = self._a_table
        return other


def parse_fq_poly(config: FqConfig, field: FieldCtx, pi) -> list[FFElement]:
    fq = field.fq_level
    return [c if isinstance(c, FFElement) else fq.from_int(int(c)) for c in pi]


def make_place(config: FqConfig, pi, prec: int = 64) -> PlaceCtx:
    """Build the series model of K_pi.  `pi` is a list of F_q encodings, constant first."""
    if prec < 2:
        raise ValueError("precision must be >= 2")
    field = FieldCtx.base(config)
    coeffs = parse_fq_poly(config, field, pi)
    if len(coeffs) < 2 or coeffs[-1] != 1:
        raise ReduciblePolynomial("pi must be monic of degree >= 1")
    if not is_irreducible(coeffs, field.fq_level):
        raise ReduciblePolynomial(f"pi = {[c.to_int() for c in coeffs]} is reducible over F_{config.q}")
    delta = len(coeffs) - 1
    if delta == 1:
        residue = field.fq_level
        xbar = -coeffs[0]
    else:
        field = field.adjoin(coeffs)
        residue = field.top
        xbar = residue.generator()
    chi = _newton_chi(coeffs, residue, xbar, prec, delta)
    return PlaceCtx(config, tuple(c.to_int() for c in coeffs), prec, field, residue, chi)


def _horner(coeffs, X: LocalSeries) -> LocalSeries:
    acc = LocalSeries.constant(coeffs[-1].embed(X.level), X.prec, X.delta)
    for c in reversed(coeffs[:-1]):
        acc = acc * X + c.embed(X.level)
    return acc


def _newton_chi(coeffs, residue, xbar, prec, delta) -> LocalSeries:
    T = LocalSeries.monomial(residue.one(), 1, prec, delta=delta)
    X = LocalSeries.constant(xbar.embed(residue), prec, delta)
    deriv = [c * k for k, c in enumerate(coeffs)][1:]
    for _ in range(prec.bit_length() + 4):
        F = _horner(coeffs, X) - T
        if F.is_zero():
            return X
        X = X - F / _horner(deriv, X)
    F = _horner(coeffs, X) - T
    if not F.is_zero():  # pragma: no cover
        raise IndeterminateValuation("Newton iteration for x did not converge")
    return X


def embed_poly(place: PlaceCtx, f) -> LocalSeries:
    """f(x) for f a list of F_q encodings (constant first), to the place's precision."""
    coeffs = parse_fq_poly(place.config, place.field, f)
    if not coeffs:
        return place.zero()
    acc = place.zero() + coeffs[-1].embed(place.residue_level)
    for c in reversed(coeffs[:-1]):
        acc = acc * place.chi + c.embed(place.residue_level)
    return acc


def embed_rational(place: PlaceCtx, num, den) -> LocalSeries:
    d = embed_poly(place, den)
    if d.is_zero():
        raise IndeterminateValuation("denominator is divisible by pi to full precision")
    return embed_poly(place, num) / d
