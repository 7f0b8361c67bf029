import pytest

from carlitz_zeta.carlitz import delta_point, delta_pow_point
from carlitz_zeta.hyperdiff import frac_delta, frac_delta_handle, hat, hyperdiff, leibniz_rhs
from carlitz_zeta.local_series import LocalSeries
from conftest import rand_series


def mono(place, k, c=1):
    return LocalSeries.monomial(place.field.fq_level.from_int(c), k, place.prec)


def test_hyperdiff_examples(places):
    pl = places["q2_x"]
    t = rand_series(pl, __import__("random").Random(0), base=True)
    assert hyperdiff(0, t) == t
    assert hyperdiff(1, mono(pl, 2)).is_zero()
    assert (hyperdiff(2, mono(pl, 3)) - mono(pl, 1)).is_zero()
    assert hyperdiff(5, t).prec == t.prec - 5


def test_hat(places, rng):
    p2, p3 = places["q2_x"], places["q3_x"]
    a = rand_series(p2, rng, base=True)
    assert hat(a) == a
    assert hat(mono(p3, 1)) == mono(p3, 1, 2)
    for _ in range(5):
        b = rand_series(p3, rng, base=True, start=rng.randrange(0, 3))
        assert hat(hat(b)) == b
        assert hat(b).val == b.val


@pytest.mark.parametrize("key", ["q2_x", "q3_x"])
def test_leibniz(places, key, rng):
    pl = places[key]
    for _ in range(3):
        a, b = rand_series(pl, rng, base=True, ndigits=12), rand_series(pl, rng, base=True, ndigits=12)
        ah, bh = hat(a), hat(b)
        for n in range(9):
            assert (hyperdiff(n, ah * bh) - leibniz_rhs(n, ah, bh)).is_zero()


@pytest.mark.parametrize("key", ["q2_x", "q3_x"])
def test_frac_delta_integer_powers(polylogs, key, rng):
    ps = polylogs[key]
    pl = ps.place
    u = ps.handle(1)
    t = rand_series(pl, rng, base=True)
    assert (frac_delta(pl, mono(pl, 0), u, t) - u(t)).val >= 60
    assert (frac_delta(pl, mono(pl, 1), u, t) - delta_point(pl, u, t)).val >= 60
    for n in range(2, 5):
        assert (frac_delta(pl, mono(pl, n), u, t) - delta_pow_point(pl, u, n, t)).val >= 60


@pytest.mark.parametrize("key", ["q2_x", "q3_x"])
def test_frac_delta_composition_and_linearity(polylogs, key, rng):
    ps = polylogs[key]
    pl = ps.place
    u = ps.handle(1)
    for _ in range(3):
        a = rand_series(pl, rng, base=True, ndigits=12)
        b = rand_series(pl, rng, base=True, ndigits=12)
        t = rand_series(pl, rng, base=True)
        inner = frac_delta_handle(pl, b, u)
        lhs = frac_delta(pl, a, inner, t)
        assert (lhs - frac_delta(pl, a * b, u, t)).val >= 60
        lin = frac_delta(pl, a + b, u, t) - frac_delta(pl, a, u, t) - frac_delta(pl, b, u, t)
        assert lin.val >= 60


def test_frac_delta_rejects_bad_arguments(polylogs, rng):
    ps = polylogs["q2_x"]
    pl = ps.place
    with pytest.raises(ValueError):
        frac_delta(pl, mono(pl, -1), ps.handle(1), pl.one)
    with pytest.raises(ValueError):
        hyperdiff(1, mono(pl, -2))
    with pytest.raises(ValueError):
        frac_delta(polylogs["q2_x2x1"].place, mono(pl, 1), polylogs["q2_x2x1"].handle(1), pl.one)
