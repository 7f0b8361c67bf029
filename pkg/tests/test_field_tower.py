import itertools
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from carlitz_zeta.field_tower import (
    FieldCtx,
    FqConfig,
    artin_schreier_residue,
    extend,
    frobenius,
    is_irreducible,
    join,
    lucas_binomial,
)


def ctx(p, upsilon=1):
    return FieldCtx.base(FqConfig(p, upsilon))


def test_extend_f2_quadratic():
    c = extend(ctx(2), 2)
    assert c.defining_polynomials() == [[1, 1, 1]]


def test_extend_f3_quadratic_is_lex_smallest():
    c = extend(ctx(3), 2)
    assert c.defining_polynomials() == [[1, 0, 1]]
    # oracle: enumerate monic quadratics over F_3 by brute-force root search
    base = ctx(3).top
    irreducible = [
        (a, b) for a, b in itertools.product(range(3), repeat=2) if all((x * x + b * x + a) % 3 for x in range(3))
    ]
    assert min(irreducible) == (1, 0)
    assert is_irreducible([base.from_int(1), base.from_int(0), base.from_int(1)], base)


def test_extend_rejects_degree_one():
    with pytest.raises(ValueError):
        extend(ctx(2), 1)


def test_extend_is_deterministic():
    a = extend(extend(ctx(3), 2), 3).defining_polynomials()
    b = extend(extend(ctx(3), 2), 3).defining_polynomials()
    assert a == b


def test_frobenius_in_f4():
    top = extend(ctx(2), 2).top
    w = top.generator()
    assert frobenius(w, 1) == w + top.one()
    assert w * w == w + top.one()
    assert frobenius(w, 0) == w


@pytest.mark.parametrize("p,m", [(2, 3), (3, 2), (5, 2)])
def test_frobenius_inverse_and_period(p, m):
    top = extend(ctx(p), m).top
    rng = random.Random(p * 10 + m)
    for _ in range(10):
        a = top.random_element(rng)
        assert frobenius(frobenius(a, -1), 1) == a
        assert a ** (p**top.degree) == a
        assert frobenius(a, 1) == a**p


@pytest.mark.parametrize("p,m", [(2, 4), (3, 3)])
def test_field_axioms(p, m):
    top = extend(ctx(p), m).top
    rng = random.Random(7)
    for _ in range(20):
        a, b, c = (top.random_element(rng) for _ in range(3))
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        if not a.is_zero():
            assert a * a.inverse() == top.one()


def test_artin_schreier_q2_needs_f4():
    c = ctx(2)
    c2, roots = artin_schreier_residue(c, c.top.one())
    assert c2.top.degree == 2
    assert sorted(r.to_int() for r in roots) == [2, 3]
    # exhaustive: no root in F_2
    assert all((z * z - z) % 2 != 1 for z in range(2))


def test_artin_schreier_xi_zero():
    c = ctx(2)
    _, roots = artin_schreier_residue(c, c.top.zero())
    assert sorted(r.to_int() for r in roots) == [0, 1]


def test_artin_schreier_q3_goes_to_f27():
    c = ctx(3)
    c2, roots = artin_schreier_residue(c, c.top.one())
    assert c2.top.degree == 3 and len(roots) == 3
    one = c2.top.one()
    for z in roots:
        assert z**3 - z == one


@pytest.mark.parametrize("p,upsilon", [(2, 1), (2, 2), (3, 1)])
def test_artin_schreier_properties(p, upsilon):
    c = ctx(p, upsilon)
    q = p**upsilon
    e = extend(c, 2)
    rng = random.Random(1)
    for _ in range(5):
        xi = e.top.random_element(rng)
        c2, roots = artin_schreier_residue(e, xi)
        assert len(set(roots)) == q
        for z in roots:
            assert z**q - z == xi.embed(z.level)
        for a, b in itertools.combinations(roots, 2):
            assert (a - b) ** q == a - b  # the difference lies in F_q


def test_join_different_towers_raises():
    with pytest.raises(ValueError):
        join(ctx(2).top, ctx(3).top)


def test_lucas_examples():
    assert lucas_binomial(5, 2, 2) == 0
    assert lucas_binomial(3, 2, 2) == 1
    assert lucas_binomial(7, 0, 3) == 1
    assert lucas_binomial(2, 5, 3) == 0


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 64), st.integers(0, 64), st.sampled_from([2, 3, 5, 7]))
def test_lucas_matches_exact_binomial(n, k, p):
    assert lucas_binomial(n, k, p) == math.comb(n, k) % p
