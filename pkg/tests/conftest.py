import random

import pytest

from hopcroft.geom import normalize_line


def random_instance(rng, m, n, coord=1000, slope=50, den=False):
    """Homogeneous points and lines with small integer coordinates."""
    P = [(rng.randint(-coord, coord), rng.randint(-coord, coord), rng.choice([1, 1, 2]) if den else 1)
         for _ in range(m)]
    L = [normalize_line(rng.randint(-slope, slope), rng.randint(-coord, coord), rng.choice([1, 1, 3]) if den else 1)
         for _ in range(n)]
    return P, L


def with_duplicates(rng, P, L):
    if P:
        P = P + [rng.choice(P) for _ in range(len(P) // 3)]
    if L:
        L = L + [rng.choice(L) for _ in range(len(L) // 4)]
    return P, L


def brute_pair(P, L):
    """(points strictly above a line, incidences) by direct evaluation."""
    above = inc = 0
    for X, Y, W in P:
        for A, B, D in L:
            v = D * Y - A * X - B * W
            if v > 0:
                above += 1
            elif v == 0:
                inc += 1
    return above, inc


@pytest.fixture
def rng():
    return random.Random(12345)


# one summary line per acceptance criterion, printed at the end of the run
ACCEPTANCE_LINES = {}


def record_criterion(key, passed, detail):
    ACCEPTANCE_LINES[key] = (passed, detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        passed, detail = ACCEPTANCE_LINES[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if passed else 'FAIL'}  {detail}")
