import random

import pytest

from carlitz_zeta import FqConfig, ReduciblePolynomial, embed_poly, make_place
from carlitz_zeta.place import embed_rational

CUBIC = [1, 1, 0, 1]  # x^3 + x + 1 over F_2


@pytest.fixture(scope="module")
def small():
    return {
        1: make_place(FqConfig(2, 1), [0, 1], 40),
        2: make_place(FqConfig(2, 1), [1, 1, 1], 40),
        3: make_place(FqConfig(2, 1), CUBIC, 40),
        "q3": make_place(FqConfig(3, 1), [1, 0, 1], 40),  # x^2 + 1 over F_3
    }


def test_pi_x_chi_is_uniformizer(small):
    pl = small[1]
    assert pl.delta == 1 and pl.is_x
    assert pl.chi == pl.uniformizer()


@pytest.mark.parametrize("key", [2, 3, "q3"])
def test_newton_self_check(small, key):
    pl = small[key]
    pi_of_chi = embed_poly(pl, list(pl.pi))
    assert (pi_of_chi - pl.uniformizer()).is_zero()
    assert pi_of_chi.val == 1


def test_delta2_chi_constant_digit(small):
    pl = small[2]
    w = pl.chi.digit(0)
    assert w * w + w + w.level.one() == w.level.zero()


def test_reducible_rejected():
    with pytest.raises(ReduciblePolynomial):
        make_place(FqConfig(2, 1), [1, 0, 1], 16)
    with pytest.raises(ReduciblePolynomial):
        make_place(FqConfig(3, 1), [2, 0, 1], 16)  # x^2 - 1


def test_embed_examples(small):
    pl = small[1]
    assert embed_poly(pl, [0, 1, 1]).val == 1
    assert embed_poly(pl, [0, 1, 1]) == pl.bracket(1)
    x_at_2 = embed_poly(small[2], [0, 1])
    assert x_at_2.val == 0 and not x_at_2.digit(0).is_zero()


@pytest.mark.parametrize("key", [1, 2, "q3"])
def test_embed_is_homomorphism(small, key):
    pl = small[key]
    q = pl.q
    rng = random.Random(4)

    def polymul(f, g):
        out = [0] * (len(f) + len(g) - 1)
        for i, a in enumerate(f):
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % q
        return out

    for _ in range(5):
        f = [rng.randrange(q) for _ in range(9)]
        g = [rng.randrange(q) for _ in range(9)]
        assert (embed_poly(pl, polymul(f, g)) - embed_poly(pl, f) * embed_poly(pl, g)).is_zero()
        s = [(a + b) % q for a, b in zip(f, g)]
        assert (embed_poly(pl, s) - embed_poly(pl, f) - embed_poly(pl, g)).is_zero()


def test_embed_rational(small):
    pl = small[1]
    r = embed_rational(pl, [0, 1], [1, 1])  # x/(1+x)
    assert (r * embed_poly(pl, [1, 1]) - pl.chi).is_zero()


@pytest.mark.parametrize("key,delta", [(1, 1), (2, 2), (3, 3), ("q3", 2)])
def test_bracket_and_L_valuations(small, key, delta):
    pl = small[key]
    for n in range(1, 13):
        assert pl.bracket(n).val == (1 if n % delta == 0 else 0)
        assert pl.L_factorial(n).val == n // delta


def test_small_factorials_q2_x(small):
    pl = small[1]
    assert pl.L_factorial(2).val == 2
    assert pl.D_factorial(2).val == 3
    D2 = pl.bracket(2) * pl.bracket(1) * pl.bracket(1)
    assert (pl.D_factorial(2) - D2).is_zero()
    assert pl.L_factorial(0) == pl.one and pl.D_factorial(0) == pl.one
