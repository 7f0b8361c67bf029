import random

import pytest

from carlitz_zeta import FqConfig, make_place
from carlitz_zeta.carlitz import (
    CarlitzFunction,
    DecayBound,
    FunctionHandle,
    a_coeff,
    a_coeff_bruteforce,
    delta_n_point,
    delta_on_carlitz,
    delta_point,
    delta_pow_point,
    eval_f,
    eval_f_all,
    eval_f_sum,
    identity_handle,
)
from carlitz_zeta.hyperdiff import hyperdiff
from conftest import rand_series

KEYS = ["q2_x", "q3_x", "q2_x2x1"]


def f_handle(place, i):
    return FunctionHandle(lambda t: eval_f(place, i, t), lambda k: 0, f"f{i}")


@pytest.mark.parametrize("key", KEYS)
def test_f0_is_identity_and_fi_vanish_at_one(places, key, rng):
    pl = places[key]
    t = rand_series(pl, rng)
    assert eval_f(pl, 0, t) == t
    for i, v in enumerate(eval_f_all(pl, pl.one, 8)):
        if i:
            assert v.is_zero()


def test_f1_at_x_q2(places):
    pl = places["q2_x"]
    assert (eval_f(pl, 1, pl.chi) - pl.one).is_zero()


@pytest.mark.parametrize("p,pi", [(2, [0, 1]), (3, [0, 1]), (2, [1, 1, 1])])
def test_recursion_matches_explicit_sum(p, pi):
    pl = make_place(FqConfig(p, 1), pi, 200)
    rng = random.Random(9)
    for _ in range(3):
        t = rand_series(pl, rng, ndigits=12)
        for i in range(1, 4):
            a, b = eval_f(pl, i, t), eval_f_sum(pl, i, t)
            d = a - b
            assert d.is_zero(), (i, d.val)
            assert d.prec >= 60


@pytest.mark.parametrize("key", KEYS)
def test_fi_are_fq_linear(places, key, rng):
    pl = places[key]
    fq = pl.field.fq_level
    for _ in range(4):
        s, t = rand_series(pl, rng), rand_series(pl, rng)
        a = fq.random_element(rng)
        for i in range(1, 6):
            lhs = eval_f(pl, i, s.scale(a) + t)
            rhs = eval_f(pl, i, s).scale(a) + eval_f(pl, i, t)
            assert (lhs - rhs).is_zero()


@pytest.mark.parametrize("key", KEYS)
def test_delta_of_identity_vanishes(places, key, rng):
    pl = places[key]
    u = identity_handle()
    for _ in range(3):
        assert delta_point(pl, u, rand_series(pl, rng)).is_zero()


@pytest.mark.parametrize("key", KEYS)
def test_delta_fi_relation(places, key, rng):
    pl = places[key]
    for i in range(1, 5):
        fi = f_handle(pl, i)
        for _ in range(2):
            t = rand_series(pl, rng)
            lhs = delta_point(pl, fi, t)
            rhs = pl.bracket(i) * eval_f(pl, i, t) + eval_f(pl, i - 1, t)
            d = lhs - rhs
            assert d.val >= 60


@pytest.mark.parametrize("key", KEYS)
def test_delta_one_is_delta(places, polylogs, key, rng):
    pl = polylogs[key].place
    u = polylogs[key].handle(1)
    t = rand_series(pl, rng)
    assert delta_n_point(pl, u, 1, t) == delta_point(pl, u, t)


def test_delta_on_carlitz_examples(places):
    pl = places["q2_x"]
    zero = pl.zero()
    const = CarlitzFunction(pl, [pl.chi + pl.one] + [zero] * 5, DecayBound(2, 1, 0))
    assert all(c.is_zero() for c in delta_on_carlitz(const).coeffs)
    f1 = CarlitzFunction(pl, [zero, pl.one] + [zero] * 4, DecayBound(2, 1, 0))
    b = delta_on_carlitz(f1).coeffs
    assert b[0] == pl.one
    assert (b[1] - pl.bracket(1)).is_zero()
    assert all(c.is_zero() for c in b[2:])


@pytest.mark.parametrize("key", KEYS)
def test_delta_on_carlitz_matches_pointwise(polylogs, key, rng):
    ps = polylogs[key]
    pl = ps.place
    du = delta_on_carlitz(ps.l(2))
    for _ in range(3):
        t = rand_series(pl, rng)
        assert (du(t) - delta_point(pl, ps.handle(2), t)).val >= 60


@pytest.mark.parametrize("key", KEYS)
def test_a_coeff_examples(places, key):
    pl = places[key]
    assert a_coeff(pl, 1, 1) == pl.one
    for n in range(1, 7):
        assert (a_coeff(pl, n, n) - pl.one).is_zero()
        for r in range(1, n + 1):
            assert (a_coeff(pl, n, r) - a_coeff_bruteforce(pl, n, r)).is_zero()


@pytest.mark.parametrize("key", KEYS)
def test_delta_n_expands_in_delta_powers(polylogs, key, rng):
    ps = polylogs[key]
    pl = ps.place
    u = ps.handle(1)
    t = rand_series(pl, rng)
    for n in range(1, 6):
        rhs = pl.zero()
        for r in range(1, n + 1):
            rhs = rhs + a_coeff(pl, n, r) * delta_pow_point(pl, u, r, t)
        assert (delta_n_point(pl, u, n, t) - rhs).val >= 60


@pytest.mark.parametrize("key", ["q2_x", "q3_x"])
def test_hyperdiff_expands_in_carlitz_basis(places, key, rng):
    pl = places[key]
    i_max = 14
    for _ in range(3):
        t = rand_series(pl, rng, ndigits=24, base=True)
        fs = eval_f_all(pl, t, i_max)
        for r in range(1, 5):
            acc = pl.zero()
            for n in range(r, i_max + 1):
                acc = acc + a_coeff(pl, n, r) * fs[n]
            # v(A_{n,r}) >= n - r and |f_n(t)| <= 1 bound the omitted terms
            assert (hyperdiff(r, t) - acc).val >= i_max + 1 - r
