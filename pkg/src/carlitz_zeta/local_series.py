"""Truncated Laurent series in a uniformizer pi with digits in a tower field.

A LocalSeries is known modulo pi^prec.  Digits are stored as an (n, D) array
of F_p coordinates for indices start .. prec-1, with the first row nonzero
unless the element is zero to its precision (then n == 0 and start == prec).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IndeterminateValuation, NotAQthPower
from .field_tower import FFElement, FieldLevel, join


@dataclass(frozen=True)
class AtLeast:
    """Valuation of an element that is zero to the known precision."""

    bound: int

    def __repr__(self):
        return f">={self.bound}"


def _conv(level: FieldLevel, A: np.ndarray, B: np.ndarray, n: int) -> np.ndarray:
    """First n digits of the product of two digit arrays."""
    A, B = A[:n], B[:n]
    D, p = level.degree, level.p
    out = np.zeros((len(A) + len(B) - 1, D), dtype=np.int64)
    T = level.mul_table
    for r in range(D):
        a = A[:, r]
        if not a.any():
            continue
        for s in range(D):
            b = B[:, s]
            if not b.any() or not T[r, s].any():
                continue
            out += np.outer(np.convolve(a, b), T[r, s])
    return out[:n] % p


def _widen(digits: np.ndarray, width: int) -> np.ndarray:
    if digits.shape[1] == width:
        return digits
    out = np.zeros((digits.shape[0], width), dtype=np.int64)
    out[:, : digits.shape[1]] = digits
    return out


class LocalSeries:
    __slots__ = ("level", "start", "digits", "prec", "delta")

    def __init__(self, level: FieldLevel, start: int, digits, prec: int, delta: int = 1):
        digits = np.asarray(digits, dtype=np.int64).reshape(-1, level.degree) % level.p
        digits = digits[: max(prec - start, 0)]
        nz = np.flatnonzero(digits.any(axis=1))
        if len(nz) == 0:
            start, digits = prec, digits[:0]
        else:
            start += int(nz[0])
            digits = digits[nz[0]:]
        if len(digits) < prec - start:
            digits = np.concatenate(
                [digits, np.zeros((prec - start - len(digits), level.degree), dtype=np.int64)]
            )
        self.level = level
        self.start = start
        self.digits = digits
        self.prec = prec
        self.delta = delta

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, level, prec, delta=1):
        return cls(level, prec, np.zeros((0, level.degree)), prec, delta)

    @classmethod
    def monomial(cls, c: FFElement | int, k: int, prec: int, level=None, delta=1):
        if isinstance(c, int):
            c = level.element((c,))
        level = c.level if level is None else join(level, c.level)
        return cls(level, k, c.vec(level.degree).reshape(1, -1), prec, delta)

    @classmethod
    def constant(cls, c: FFElement, prec: int, delta=1):
        return cls.monomial(c, 0, prec, delta=delta)

    @classmethod
    def from_elements(cls, elems, start: int, prec: int, level=None, delta=1):
        """Series with digits elems[0], elems[1], ... from index `start`."""
        elems = list(elems)
        if level is None:
            level = elems[0].level
            for e in elems[1:]:
                level = join(level, e.level)
        rows = np.array([e.vec(level.degree) for e in elems], dtype=np.int64).reshape(-1, level.degree)
        return cls(level, start, rows, prec, delta)

    @classmethod
    def from_ints(cls, level, ints, start, prec, delta=1):
        return cls.from_elements([level.from_int(n) for n in ints], start, prec, level, delta)

    # -- inspection ---------------------------------------------------------

    def is_zero(self) -> bool:
        """True means: zero modulo pi^prec (no claim beyond)."""
        return len(self.digits) == 0

    @property
    def val(self) -> int:
        """Valuation if nonzero, else the precision (a lower bound)."""
        return self.start

    def digit(self, i: int) -> FFElement:
        if i >= self.prec:
            raise IndexError(f"digit {i} is beyond precision {self.prec}")
        if i < self.start:
            return self.level.zero()
        return FFElement(self.level, self.digits[i - self.start])

    def digit_ints(self) -> list[int]:
        return [FFElement(self.level, row).to_int() for row in self.digits]

    def abs_value_exponent(self) -> int:
        """|a| = q^(-delta * v); returns delta * v."""
        return self.delta * self.start

    def key(self):
        d = self.digits
        while len(d) and not d[-1].any():
            d = d[:-1]
        return (self.start, self.prec, _widen(d, self.level.degree).tobytes(), id(self.level))

    def __repr__(self):
        if self.is_zero():
            return f"O(pi^{self.prec})"
        terms = []
        for i, n in enumerate(self.digit_ints()[:8]):
            if n:
                terms.append(f"{n}*pi^{self.start + i}")
        more = " + ..." if len(self.digits) > 8 else ""
        return " + ".join(terms) + more + f" + O(pi^{self.prec})"

    def __eq__(self, other):
        if not isinstance(other, LocalSeries):
            return NotImplemented
        if self.prec != other.prec or self.start != other.start:
            return False
        w = max(self.level.degree, other.level.degree)
        return np.array_equal(_widen(self.digits, w), _widen(other.digits, w))

    __hash__ = None

    # -- arithmetic ---------------------------------------------------------

    def _window(self, level: FieldLevel, lo: int, hi: int) -> np.ndarray:
        """Digits for indices lo..hi-1 (all < prec) at the width of `level`."""
        out = np.zeros((max(hi - lo, 0), level.degree), dtype=np.int64)
        a, b = max(lo, self.start), min(hi, self.prec)
        if a < b:
            out[a - lo:b - lo, : self.level.degree] = self.digits[a - self.start:b - self.start]
        return out

    def __add__(self, other):
        if isinstance(other, (int, FFElement)):
            other = self._const(other)
        level = join(self.level, other.level)
        N = min(self.prec, other.prec)
        lo = min(self.start, other.start, N)
        return LocalSeries(level, lo, self._window(level, lo, N) + other._window(level, lo, N), N, self.delta)

    __radd__ = __add__

    def __neg__(self):
        return LocalSeries(self.level, self.start, -self.digits, self.prec, self.delta)

    def __sub__(self, other):
        if isinstance(other, (int, FFElement)):
            other = self._const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def _const(self, c):
        if isinstance(c, int):
            c = self.level.element((c,))
        return LocalSeries.constant(c, max(self.prec, 1), self.delta)

    def scale(self, c: FFElement | int) -> LocalSeries:
        """Multiply by a residue-field constant (exact)."""
        if isinstance(c, int):
            return LocalSeries(self.level, self.start, self.digits * c, self.prec, self.delta)
        level = join(self.level, c.level)
        M = level.mul_matrix(c.vec(level.degree))
        d = _widen(self.digits, level.degree) @ M.T % level.p
        return LocalSeries(level, self.start, d, self.prec, self.delta)

    def shift(self, k: int) -> LocalSeries:
        """Multiply by pi^k (exact)."""
        return LocalSeries(self.level, self.start + k, self.digits, self.prec + k, self.delta)

    def __mul__(self, other):
        if isinstance(other, (int, FFElement)):
            return self.scale(other)
        level = join(self.level, other.level)
        va, vb = self.start, other.start
        N = min(self.prec + vb, other.prec + va)
        n = N - va - vb
        if n <= 0 or self.is_zero() or other.is_zero():
            return LocalSeries.zero(level, N, self.delta)
        A = _widen(self.digits[:n], level.degree)
        B = _widen(other.digits[:n], level.degree)
        return LocalSeries(level, va + vb, _conv(level, A, B, n), N, self.delta)

    __rmul__ = __mul__

    def inverse(self) -> LocalSeries:
        if self.is_zero():
            raise IndeterminateValuation(
                f"cannot invert an element that is zero to precision {self.prec}"
            )
        level, v = self.level, self.start
        R = self.prec - v
        u = self.digits[:R]
        lead = FFElement(level, u[0]).inverse().vec()
        y = lead.reshape(1, -1)
        k = 1
        while k < R:
            k = min(2 * k, R)
            uy = _conv(level, u[:k], y, k)
            # y <- y * (2 - u*y)
            corr = (-uy) % level.p
            corr[0] = (corr[0] + 2 * np.eye(1, level.degree, dtype=np.int64)[0]) % level.p
            y = _conv(level, y, corr, k)
        return LocalSeries(level, -v, y, self.prec - 2 * v, self.delta)

    def __truediv__(self, other):
        if isinstance(other, (int, FFElement)):
            if isinstance(other, int):
                other = self.level.element((other,))
            return self.scale(other.inverse())
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        if e == 0:
            return self._const(1)
        result = None
        base = self
        while e:
            if e & 1:
                result = base if result is None else result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def truncate_to(self, N: int) -> LocalSeries:
        if N > self.prec:
            raise ValueError(f"cannot raise precision from {self.prec} to {N}")
        return LocalSeries(self.level, self.start, self.digits, N, self.delta)

    def cap(self, N: int) -> LocalSeries:
        """Truncate to min(N, prec)."""
        return self if N >= self.prec else self.truncate_to(N)

    def embed(self, level: FieldLevel) -> LocalSeries:
        return LocalSeries(join(level, self.level), self.start, _widen(self.digits, join(level, self.level).degree), self.prec, self.delta)

    def in_level(self, level: FieldLevel) -> bool:
        """Do all known digits lie in `level`?"""
        return not self.digits[:, level.degree:].any()

    def restrict(self, level: FieldLevel) -> LocalSeries:
        """The same series over a subfield that holds all its digits."""
        if not (self.level.contains(level) and self.in_level(level)):
            raise ValueError("digits do not lie in the requested level")
        return LocalSeries(level, self.start, self.digits[:, : level.degree], self.prec, self.delta)

    def minimal(self, levels) -> LocalSeries:
        """Restrict to the shallowest of `levels` (a chain, shallowest first) holding the digits."""
        for lvl in levels:
            if self.level.contains(lvl) and self.in_level(lvl):
                return self.restrict(lvl)
        return self

    # -- Frobenius ---------------------------------------------------------

    def q_power(self, n: int = 1, cap: int | None = None) -> LocalSeries:
        """a^(q^n): digit-wise Frobenius and index stretch by q^n."""
        level = self.level
        Q = level.config.q**n
        N = self.prec * Q
        if cap is not None:
            N = min(N, cap)
        s = self.start * Q
        if self.is_zero() or s >= N:
            return LocalSeries.zero(level, N, self.delta)
        F = level.frob_matrix(n * level.config.upsilon)
        src = self.digits @ F.T % level.p
        cnt = (N - s + Q - 1) // Q
        out = np.zeros((N - s, level.degree), dtype=np.int64)
        out[::Q] = src[:cnt]
        return LocalSeries(level, s, out, N, self.delta)

    def q_root(self) -> LocalSeries:
        level = self.level
        q = level.config.q
        if self.is_zero():
            return LocalSeries.zero(level, -(-self.prec // q), self.delta)
        idx = np.flatnonzero(self.digits.any(axis=1)) + self.start
        if self.start % q or any(int(i) % q for i in idx):
            raise NotAQthPower("series has a nonzero digit at an index not divisible by q")
        F = level.frob_matrix(-level.config.upsilon)
        src = self.digits[::q] @ F.T % level.p
        return LocalSeries(level, self.start // q, src, -(-self.prec // q), self.delta)

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        """Trailing zero digits are dropped; `precision` still records what is known."""
        d = self.digits
        nz = np.flatnonzero(d.any(axis=1))
        d = d[: int(nz[-1]) + 1] if len(nz) else d[:0]
        return {
            "valuation": self.start,
            "precision": self.prec,
            "digits": [[int(c) for c in row] for row in d],
            "level": self.level.index,
        }

    @classmethod
    def from_json(cls, data: dict, field_ctx, delta: int = 1) -> LocalSeries:
        level = field_ctx.levels[data["level"]]
        rows = np.array(data["digits"], dtype=np.int64).reshape(-1, level.degree)
        return cls(level, data["valuation"], rows, data["precision"], delta)


def valuation_of(a: LocalSeries) -> int | AtLeast:
    return AtLeast(a.prec) if a.is_zero() else a.start


def is_zero(a: LocalSeries) -> bool:
    return a.is_zero()


def truncate_to(a: LocalSeries, N: int) -> LocalSeries:
    return a.truncate_to(N)


def q_power(a: LocalSeries, n: int, cap: int | None = None) -> LocalSeries:
    return a.q_power(n, cap)


def q_root(a: LocalSeries) -> LocalSeries:
    return a.q_root()


def defect_valuation(a: LocalSeries) -> int:
    """Valuation of a defect term: exact when nonzero, else the precision bound."""
    return a.start


def series_sum(terms, level: FieldLevel, prec: int, delta: int = 1) -> LocalSeries:
    acc = LocalSeries.zero(level, prec, delta)
    for t in terms:
        acc = acc + t
    return acc
