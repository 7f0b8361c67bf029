"""Finite fields of characteristic p realized as a tower of simple extensions.

Level 0 is F_p.  Level L+1 is level L adjoined a root of an explicit monic
irreducible polynomial.  An element of level L is a vector of F_p coordinates
in the monomial basis of the tower; the coordinates of a level-L element
embedded in level L+1 are the same vector padded with zeros, so elements of
different levels compare by coordinates alone.

Elements are encoded as integers by reading the coordinate vector as a base-p
number, first coordinate least significant.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


@dataclass(frozen=True)
class FqConfig:
    p: int
    upsilon: int = 1

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"characteristic {self.p} is not prime")
        if self.upsilon < 1:
            raise ValueError("upsilon must be >= 1")

    @property
    def q(self) -> int:
        return self.p**self.upsilon


class FieldLevel:
    """One level of the tower, with its multiplication and Frobenius tables."""

    def __init__(self, config: FqConfig, parent: FieldLevel | None = None, modulus=None):
        self.config = config
        self.p = p = config.p
        self.parent = parent
        if parent is None:
            self.index = 0
            self.rel_degree = 1
            self.degree = 1
            self.modulus = ()
        else:
            self.index = parent.index + 1
            self.modulus = tuple(tuple(int(c) % p for c in coeff) for coeff in modulus)
            self.rel_degree = len(self.modulus) - 1
            self.degree = parent.degree * self.rel_degree
            if self.rel_degree < 1:
                raise ValueError("defining polynomial must have degree >= 1")
            one = (1,) + (0,) * (parent.degree - 1)
            if self.modulus[-1] != one:
                raise ValueError("defining polynomial must be monic")
        self.size = p**self.degree
        self.mul_table = self._build_mul_table()
        self._frob = {0: np.eye(self.degree, dtype=np.int64)}
        self._frob[1] = self._build_frobenius()

    def __repr__(self):
        return f"FieldLevel(index={self.index}, size={self.p}^{self.degree})"

    # -- construction ------------------------------------------------------

    def _build_mul_table(self) -> np.ndarray:
        p, D = self.p, self.degree
        if self.parent is None:
            return np.ones((1, 1, 1), dtype=np.int64)
        par = self.parent
        d, m = par.degree, self.rel_degree
        g = [np.array(c, dtype=np.int64) for c in self.modulus]
        one = np.zeros(d, dtype=np.int64)
        one[0] = 1
        # theta^k for k <= 2m-2 as m parent-level coefficient vectors
        pows = [[one if r == 0 else np.zeros(d, dtype=np.int64) for r in range(m)]]
        for _ in range(2 * m - 2):
            prev = pows[-1]
            top = prev[m - 1]
            cur = [np.zeros(d, dtype=np.int64)] + [c.copy() for c in prev[: m - 1]]
            if top.any():
                for r in range(m):
                    cur[r] = (cur[r] - par.mul_vec(top, g[r])) % p
            pows.append(cur)
        T = np.zeros((D, D, D), dtype=np.int64)
        for s, t in itertools.product(range(m), repeat=2):
            for a, b in itertools.product(range(d), repeat=2):
                ab = par.mul_table[a, b]
                if not ab.any():
                    continue
                row = T[s * d + a, t * d + b]
                for r in range(m):
                    row[r * d:(r + 1) * d] = par.mul_vec(ab, pows[s + t][r])
        return T % p

    def _build_frobenius(self) -> np.ndarray:
        D = self.degree
        F = np.zeros((D, D), dtype=np.int64)
        for i in range(D):
            e = np.zeros(D, dtype=np.int64)
            e[i] = 1
            F[:, i] = self.pow_vec(e, self.p)
        return F

    # -- raw coordinate arithmetic -----------------------------------------

    def mul_vec(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        D = self.degree
        if D == 1:
            return (a * b) % self.p
        return (a @ self.mul_table.reshape(D, D * D)).reshape(D, D).T.dot(b) % self.p

    def mul_matrix(self, a: np.ndarray) -> np.ndarray:
        """Matrix M with M @ b == coords of a*b."""
        D = self.degree
        return (a @ self.mul_table.reshape(D, D * D)).reshape(D, D).T % self.p

    def pow_vec(self, a: np.ndarray, e: int) -> np.ndarray:
        result = np.zeros(self.degree, dtype=np.int64)
        result[0] = 1
        base = np.array(a, dtype=np.int64)
        while e:
            if e & 1:
                result = self.mul_vec(result, base)
            base = self.mul_vec(base, base)
            e >>= 1
        return result

    def frob_matrix(self, e: int) -> np.ndarray:
        """Matrix of a -> a^(p^e); e is taken modulo the absolute degree."""
        e %= self.degree
        if e not in self._frob:
            M = self._frob[0]
            for _ in range(e):
                M = (self._frob[1] @ M) % self.p
            self._frob[e] = M
        return self._frob[e]

    # -- tower relations ---------------------------------------------------

    def chain(self) -> list[FieldLevel]:
        out, lvl = [], self
        while lvl is not None:
            out.append(lvl)
            lvl = lvl.parent
        return out[::-1]

    def contains(self, other: FieldLevel) -> bool:
        lvl = self
        while lvl is not None:
            if lvl is other:
                return True
            lvl = lvl.parent
        return False

    # -- elements ----------------------------------------------------------

    def element(self, coords) -> FFElement:
        return FFElement(self, coords)

    def from_int(self, n: int) -> FFElement:
        if not 0 <= n < self.size:
            raise ValueError(f"{n} does not encode an element of {self}")
        coords = []
        for _ in range(self.degree):
            n, r = divmod(n, self.p)
            coords.append(r)
        return FFElement(self, coords)

    def zero(self) -> FFElement:
        return FFElement(self, ())

    def one(self) -> FFElement:
        return FFElement(self, (1,))

    def elements(self):
        for n in range(self.size):
            yield self.from_int(n)

    def random_element(self, rng) -> FFElement:
        return self.from_int(rng.randrange(self.size))

    def generator(self) -> FFElement:
        """The adjoined root theta of this level's defining polynomial."""
        if self.parent is None:
            return self.one()
        coords = [0] * self.degree
        coords[self.parent.degree] = 1
        return FFElement(self, coords)


def join(a: FieldLevel, b: FieldLevel) -> FieldLevel:
    """The deeper of two levels of the same tower."""
    if a is b:
        return a
    if a.contains(b):
        return a
    if b.contains(a):
        return b
    raise ValueError("field levels belong to different towers")


class FFElement:
    __slots__ = ("level", "coords")

    def __init__(self, level: FieldLevel, coords):
        c = [int(x) % level.p for x in coords]
        if len(c) > level.degree:
            if any(c[level.degree:]):
                raise ValueError("coordinates exceed level degree")
            c = c[: level.degree]
        c += [0] * (level.degree - len(c))
        self.level = level
        self.coords = tuple(c)

    def vec(self, width: int | None = None) -> np.ndarray:
        width = self.level.degree if width is None else width
        v = np.zeros(width, dtype=np.int64)
        v[: self.level.degree] = self.coords
        return v

    def embed(self, level: FieldLevel) -> FFElement:
        if not level.contains(self.level):
            raise ValueError("target level does not contain this element's level")
        return FFElement(level, self.coords)

    def to_int(self) -> int:
        n = 0
        for c in reversed(self.coords):
            n = n * self.level.p + c
        return n

    def is_zero(self) -> bool:
        return not any(self.coords)

    def _coerce(self, other):
        if isinstance(other, int):
            return self.level, self.vec(), FFElement(self.level, (other,)).vec()
        lvl = join(self.level, other.level)
        return lvl, self.vec(lvl.degree), other.vec(lvl.degree)

    def __add__(self, other):
        lvl, a, b = self._coerce(other)
        return FFElement(lvl, a + b)

    __radd__ = __add__

    def __sub__(self, other):
        lvl, a, b = self._coerce(other)
        return FFElement(lvl, a - b)

    def __rsub__(self, other):
        lvl, a, b = self._coerce(other)
        return FFElement(lvl, b - a)

    def __neg__(self):
        return FFElement(self.level, [-c for c in self.coords])

    def __mul__(self, other):
        lvl, a, b = self._coerce(other)
        return FFElement(lvl, lvl.mul_vec(a, b))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return FFElement(self.level, self.level.pow_vec(self.vec(), e))

    def inverse(self) -> FFElement:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a finite field")
        return self ** (self.level.size - 2)

    def __truediv__(self, other):
        if isinstance(other, int):
            other = FFElement(self.level, (other,))
        return self * other.inverse()

    def __eq__(self, other):
        if isinstance(other, int):
            other = FFElement(self.level, (other,))
        if not isinstance(other, FFElement):
            return NotImplemented
        w = max(self.level.degree, other.level.degree)
        return self.coords + (0,) * (w - len(self.coords)) == other.coords + (0,) * (
            w - len(other.coords)
        )

    def __hash__(self):
        c = list(self.coords)
        while c and c[-1] == 0:
            c.pop()
        return hash(tuple(c))

    def __repr__(self):
        return f"FFElement(L{self.level.index}, {self.to_int()})"


def frobenius(a: FFElement, e: int) -> FFElement:
    """a^(p^e); negative e gives the inverse Frobenius."""
    return FFElement(a.level, a.level.frob_matrix(e) @ a.vec() % a.level.p)


def lucas_binomial(n: int, k: int, p: int) -> int:
    """binom(n, k) mod p, digit by digit in base p."""
    if k < 0 or n < 0 or k > n:
        return 0
    result = 1
    while n or k:
        n, nd = divmod(n, p)
        k, kd = divmod(k, p)
        if kd > nd:
            return 0
        result = result * _small_binom(nd, kd) % p
    return result


def _small_binom(n, k):
    r = 1
    for i in range(k):
        r = r * (n - i) // (i + 1)
    return r


# -- polynomials over a level (lists of FFElement, constant term first) ----


def _trim(f):
    f = list(f)
    while f and f[-1].is_zero():
        f.pop()
    return f


def poly_divmod(f, g):
    f, g = _trim(f), _trim(g)
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = g[-1].inverse()
    quot = [g[0].level.zero()] * max(len(f) - len(g) + 1, 0)
    f = list(f)
    while len(f) >= len(g):
        c = f[-1] * inv_lead
        shift = len(f) - len(g)
        quot[shift] = c
        for i, gi in enumerate(g):
            f[shift + i] = f[shift + i] - c * gi
        f = _trim(f)
    return quot, f


def poly_mulmod(f, h, g):
    if not f or not h:
        return []
    prod = [f[0].level.zero()] * (len(f) + len(h) - 1)
    for i, a in enumerate(f):
        if a.is_zero():
            continue
        for j, b in enumerate(h):
            prod[i + j] = prod[i + j] + a * b
    return poly_divmod(prod, g)[1]


def poly_powmod(f, e, g):
    level = g[0].level
    result = [level.one()]
    base = poly_divmod(f, g)[1]
    while e:
        if e & 1:
            result = poly_mulmod(result, base, g)
        base = poly_mulmod(base, base, g)
        e >>= 1
    return result


def poly_gcd(f, g):
    f, g = _trim(f), _trim(g)
    while g:
        f, g = g, poly_divmod(f, g)[1]
    return f


def is_irreducible(poly, level: FieldLevel) -> bool:
    """Irreducibility of a monic poly over `level` by gcd with X^(Q^k) - X."""
    g = [level.element(c.coords) if isinstance(c, FFElement) else level.from_int(c) for c in poly]
    g = _trim(g)
    m = len(g) - 1
    if m < 1:
        return False
    if m == 1:
        return True
    X = [level.zero(), level.one()]
    h = X
    for _ in range(m // 2):
        h = poly_powmod(h, level.size, g)
        diff = list(h) + [level.zero()] * max(0, 2 - len(h))
        diff[1] = diff[1] - level.one()
        if len(poly_gcd(g, diff)) > 1:
            return False
    return True


# -- the tower context -----------------------------------------------------


@dataclass(frozen=True)
class FieldCtx:
    config: FqConfig
    levels: tuple

    @classmethod
    def base(cls, config: FqConfig) -> FieldCtx:
        ctx = cls(config, (FieldLevel(config),))
        if config.upsilon > 1:
            ctx = extend(ctx, config.upsilon)
        return ctx

    @property
    def top(self) -> FieldLevel:
        return self.levels[-1]

    @property
    def fq_level(self) -> FieldLevel:
        """The level realizing F_q."""
        return self.levels[0 if self.config.upsilon == 1 else 1]

    def adjoin(self, modulus) -> FieldCtx:
        """Append a level defined by the given monic irreducible polynomial over the top."""
        top = self.top
        coeffs = [c.embed(top).coords if isinstance(c, FFElement) else top.from_int(c).coords for c in modulus]
        return FieldCtx(self.config, self.levels + (FieldLevel(self.config, top, coeffs),))

    def defining_polynomials(self) -> list:
        """Per level above F_p: coefficient encodings, constant first."""
        out = []
        for lvl in self.levels[1:]:
            par = lvl.parent
            out.append([par.element(c).to_int() for c in lvl.modulus])
        return out


def extend(ctx: FieldCtx, m: int) -> FieldCtx:
    """Extend the top level by the lexicographically smallest monic irreducible of degree m."""
    if m < 2:
        raise ValueError("extension degree must be >= 2")
    top = ctx.top
    for coeffs in itertools.product(range(top.size), repeat=m):
        poly = list(coeffs) + [1]
        if is_irreducible(poly, top):
            return ctx.adjoin(poly)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


def solve_mod_p(M: np.ndarray, b: np.ndarray, p: int):
    """Solve M x = b over F_p.  Returns (particular solution or None, nullspace basis)."""
    M = np.array(M, dtype=np.int64) % p
    rows, cols = M.shape
    aug = np.concatenate([M, np.array(b, dtype=np.int64).reshape(-1, 1) % p], axis=1)
    pivots = []
    r = 0
    for c in range(cols):
        nz = [i for i in range(r, rows) if aug[i, c]]
        if not nz:
            continue
        aug[[r, nz[0]]] = aug[[nz[0], r]]
        aug[r] = aug[r] * pow(int(aug[r, c]), -1, p) % p
        for i in range(rows):
            if i != r and aug[i, c]:
                aug[i] = (aug[i] - aug[i, c] * aug[r]) % p
        pivots.append(c)
        r += 1
        if r == rows:
            break
    if any(aug[i, cols] for i in range(r, rows)):
        x0 = None
    else:
        x0 = np.zeros(cols, dtype=np.int64)
        for i, c in enumerate(pivots):
            x0[c] = aug[i, cols]
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = np.zeros(cols, dtype=np.int64)
        v[f] = 1
        for i, c in enumerate(pivots):
            v[c] = -aug[i, f] % p
        basis.append(v)
    return x0, basis


def artin_schreier_residue(ctx: FieldCtx, xi: FFElement):
    """All q roots of z^q - z = xi, in the smallest level of the tower holding one.

    Returns the (possibly deeper) context and the roots sorted by encoding.
    """
    config = ctx.config
    p, ups = config.p, config.upsilon
    start = join(xi.level, ctx.fq_level)
    if not ctx.top.contains(start):
        raise ValueError("element does not belong to this tower")
    candidates = [lvl for lvl in ctx.levels if lvl.contains(start)]
    while True:
        for lvl in candidates:
            roots = _as_roots(lvl, xi, p, ups)
            if roots is not None:
                return ctx, roots
        ctx = extend(ctx, p)
        candidates = [ctx.top]


def _as_roots(lvl, xi, p, ups):
    M = (lvl.frob_matrix(ups) - np.eye(lvl.degree, dtype=np.int64)) % p
    x0, basis = solve_mod_p(M, xi.vec(lvl.degree), p)
    if x0 is None:
        return None
    roots = []
    for lams in itertools.product(range(p), repeat=len(basis)):
        v = x0.copy()
        for lam, b in zip(lams, basis):
            v = v + lam * b
        roots.append(FFElement(lvl, v))
    return sorted(roots, key=FFElement.to_int)
