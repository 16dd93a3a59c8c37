import numpy as np
import pytest

from isotau.monodromy import GarnierParams, PVIParams, validate

ACCEPTANCE_LINES = []


def rc(rng, s):
    return complex(rng.uniform(-s, s), rng.uniform(-s, s))


def random_pvi(rng, theta=0.3, sigma=0.3, t=0.1, margin=0.1):
    """Random generic PVI data; the box sizes keep all tested routes in range
    and 2 sigma stays at least margin away from the integers."""
    while True:
        p = PVIParams(rc(rng, theta), rc(rng, theta), rc(rng, theta), rc(rng, theta),
                      rc(rng, sigma), eta=rc(rng, 1.0), t=t)
        s2 = 2 * p.sigma
        if abs(s2 - round(s2.real)) < margin:
            continue
        if not validate(p) and not validate(p, route="series"):
            return p


def random_garnier(rng, n=5, times=(0.15, 0.45)):
    while True:
        g = GarnierParams([rc(rng, 0.3) for _ in range(n)], [rc(rng, 0.4) for _ in range(n - 3)],
                          [rc(rng, 1.0) for _ in range(n - 3)], times[:n - 3])
        if not validate(g):
            return g


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
