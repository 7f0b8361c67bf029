import random

import pytest

from carlitz_zeta import FqConfig, LocalSeries, build_polylogs, make_place

N = 64
GUARD = 40
W = N + GUARD

PLACES = {
    "q2_x": (2, (0, 1)),
    "q3_x": (3, (0, 1)),
    "q2_x2x1": (2, (1, 1, 1)),
}


@pytest.fixture(scope="session")
def places():
    return {k: make_place(FqConfig(p, 1), list(pi), W) for k, (p, pi) in PLACES.items()}


@pytest.fixture(scope="session")
def polylogs(places):
    return {k: build_polylogs(pl, 4, 14) for k, pl in places.items()}


def rand_series(place, rng: random.Random, start=0, ndigits=16, base=False, prec=None):
    level = place.field.fq_level if base else place.residue_level
    digits = [level.random_element(rng) for _ in range(ndigits)]
    return LocalSeries.from_elements(digits, start, place.prec if prec is None else prec, level, place.delta)


@pytest.fixture
def rng():
    return random.Random(20240601)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(':'))):
            terminalreporter.write_line(line)
