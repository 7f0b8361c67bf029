import pytest

from carlitz_zeta import FqConfig, build_alternative_branch, build_polylogs, eval_ln_series, make_place
from carlitz_zeta.carlitz import delta_handle, delta_on_carlitz, eval_cf
from carlitz_zeta.local_series import LocalSeries
from carlitz_zeta.polylog import build_l1_series, certified_constant, alt_branch_valuation, series_modulus
from conftest import rand_series

KEYS = ["q2_x", "q3_x", "q2_x2x1"]


def test_series_coefficients_q2(places):
    pl = places["q2_x"]
    s = build_l1_series(pl, 8)
    assert s.coeffs[0].is_zero()
    a1 = s.coeffs[1]
    assert a1.val == -1
    assert (a1 * (pl.chi * pl.chi + pl.chi) - pl.one).is_zero()


@pytest.mark.parametrize("key", KEYS)
def test_series_coefficient_recursion(places, key):
    pl = places[key]
    a = build_l1_series(pl, 8).coeffs
    for j in range(1, 7):
        rhs = (a[j] * pl.bracket(j)).q_power(1, cap=pl.prec) / pl.bracket(j + 1)
        assert (a[j + 1] - rhs).val >= 60


def test_series_at_x_q2(places):
    pl = places["q2_x"]
    v = eval_ln_series(pl, 1, pl.chi)
    assert v.val == 1
    assert eval_ln_series(pl, 2, pl.zero()).is_zero()


def test_l1_coefficients_q2(polylogs):
    ps = polylogs["q2_x"]
    c = ps.l(1).coeffs
    assert c[1].val == 0 and c[1].digit(0).to_int() in (2, 3)
    assert c[2].val == 2
    pl = ps.place
    assert (ps.l(1)(pl.one) - c[0]).is_zero()


@pytest.mark.parametrize("key", KEYS)
def test_c1_branches_solve_equation(places, key):
    pl = places[key]
    q = pl.q
    seen = set()
    for b in range(q):
        branch = [b] + [0] * (pl.delta - 1)
        ps = build_polylogs(pl, 1, 10, branch)
        c1 = ps.l(1).coeffs[1]
        assert (c1.q_power(1, cap=c1.prec) - c1 + ps.place.one).is_zero()
        seen.add(c1.digit(0).to_int())
    assert len(seen) == q


@pytest.mark.parametrize("key", KEYS)
def test_decay(polylogs, key):
    ps = polylogs[key]
    q, d = ps.place.q, ps.place.delta
    for n in range(d + 1, ps.i_max + 1):
        c = ps.l(1).coeffs[n]
        assert c.val >= min(q ** (n - d), c.prec)


@pytest.mark.parametrize("key", KEYS)
def test_root_free_defining_identity(polylogs, key, rng):
    ps = polylogs[key]
    pl = ps.place
    D = delta_handle(pl, ps.handle(1))
    for _ in range(5):
        t = rand_series(pl, rng)
        w = D(t)
        assert (w - w.q_power(1, cap=w.prec) - t.q_power(1, cap=pl.prec)).val >= 60


@pytest.mark.parametrize("key", KEYS)
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_small_disk_agreement(polylogs, key, n, rng):
    ps = polylogs[key]
    pl = ps.place
    for _ in range(3):
        t = rand_series(pl, rng, start=1)
        assert (ps.l(n)(t) - ps.series[n - 1](t)).val >= 60


@pytest.mark.parametrize("key", KEYS)
def test_l2_relations(polylogs, key):
    ps = polylogs[key]
    pl = ps.place
    c1, c2 = ps.l(1).coeffs, ps.l(2).coeffs
    assert (c2[1] - c1[0]).val >= 60
    for i in range(1, ps.i_max):
        assert (c2[i + 1] - (c1[i] - pl.bracket(i) * c2[i])).val >= 60


@pytest.mark.parametrize("key", KEYS)
def test_delta_chain(polylogs, key):
    ps = polylogs[key]
    for n in range(2, 5):
        b = delta_on_carlitz(ps.l(n)).coeffs
        a = ps.l(n - 1).coeffs
        assert all((x - y).val >= 60 for x, y in zip(b, a))


@pytest.mark.parametrize("key", KEYS)
def test_limit_growth(polylogs, key):
    ps = polylogs[key]
    pl = ps.place
    gaps = []
    for k in range(1, 13):
        t = LocalSeries.monomial(pl.residue_level.one(), k, pl.prec, delta=pl.delta)
        gaps.append(eval_cf(ps.l(1), t).val - k)
    assert all(b >= a for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1] > gaps[0]


def test_certified_constant(polylogs):
    ps = polylogs["q3_x"]
    assert certified_constant(ps.l(1))["C"] == 1
    assert certified_constant(ps.l(3))["shift"] == 2


def test_series_modulus_bounds(polylogs, rng):
    ps = polylogs["q2_x"]
    pl = ps.place
    for n in (1, 2, 3):
        for k in (1, 2, 3):
            t = rand_series(pl, rng, start=k)
            assert ps.series[n - 1](t).val >= series_modulus(pl.q, pl.delta, n, k)


@pytest.mark.parametrize("p,pi", [(2, [0, 1]), (3, [0, 1]), (2, [1, 1, 1])])
@pytest.mark.parametrize("nb", [2, 3])
def test_alternative_branch(p, pi, nb):
    pl = make_place(FqConfig(p, 1), pi, 104)
    d = pl.delta
    u, profile = build_alternative_branch(pl, nb, (nb + 3) * d)
    q = pl.q
    for l in (1, 2, 3):
        assert profile[(nb + l) * d - 1] == alt_branch_valuation(q, d, l)
    c = u.coeffs
    place = u.place
    assert (c[1].q_power(1, cap=c[1].prec) - c[1] + place.one).is_zero()
    for n in range(2, len(c)):
        lhs = c[n].q_power(1, cap=place.prec) - c[n]
        rhs = (place.bracket(n - 1) * c[n - 1]).q_power(1, cap=place.prec)
        assert (lhs + rhs).val >= 60


def test_alternative_branch_differs_from_series():
    pl = make_place(FqConfig(2, 1), [0, 1], 104)
    u, _ = build_alternative_branch(pl, 2, 8)
    series = build_polylogs(pl, 1, 8).series[0]
    t = LocalSeries.monomial(pl.residue_level.one(), 1, pl.prec)
    assert (u(t) - series(t)).val < 0
