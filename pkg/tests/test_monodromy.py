import math

from isotau.monodromy import (GarnierParams, PVIParams, garnier_prefactor, garnier_sigma_weight,
                              pvi_as_garnier, pvi_prefactor, validate)

from conftest import random_pvi


def test_validate_generic(rng):
    p = PVIParams(0.1234 + 0.01j, 0.2171, -0.1414, 0.3162, 0.3)
    assert validate(p) == []


def test_validate_half_sigma():
    p = PVIParams(0.1234, 0.2171, -0.1414, 0.3162, 0.5)
    assert "sigma = ±1/2 excluded" in validate(p)


def test_validate_resonance():
    p = PVIParams(0.4, 0.3, -0.1414, 0.3162, 0.3)
    assert any("theta0 + thetat + sigma" in v for v in validate(p))


def test_validate_degenerate():
    p = PVIParams(0, 0, 0, 0, 0.3)
    assert any("degenerate" in v for v in validate(p))


def test_prefactor_exponent():
    p = PVIParams(0.1, 0.0, 0.25, 0.3, 0.3)
    t = 0.37
    assert abs(pvi_prefactor(p, t) - t ** (0.3 ** 2 - 0.1 ** 2)) < 1e-15
    q = PVIParams(0.1, 0.2, 0.25, 0.3, 0.3)
    assert abs((q.sigma ** 2 - q.theta0 ** 2 - q.thetat ** 2) - 0.04) < 1e-15


def test_prefactor_shift(rng):
    p = random_pvi(rng)
    t = 0.23
    r = pvi_prefactor(p.replace(sigma=p.sigma + 1), t) / pvi_prefactor(p, t)
    assert abs(r / t ** (2 * p.sigma + 1) - 1) < 1e-13


def test_garnier_prefactor_reduces_to_pvi(rng):
    p = random_pvi(rng)
    for t in (0.05, 0.3, 0.7):
        g = pvi_as_garnier(p, t)
        lhs = garnier_prefactor(g) * garnier_sigma_weight(g)
        assert abs(lhs / pvi_prefactor(p, t) - 1) < 1e-14


def test_garnier_prefactor_trivial_and_n5():
    g = GarnierParams([0] * 5, [0.2, 0.3], None, [0.1, 0.4])
    assert garnier_prefactor(g) == 1
    th = [0.11, 0.23, -0.17, 0.31, 0.05]
    g = GarnierParams(th, [0.2, 0.3], None, [0.1, 0.4])
    a = [0.1, 0.4, 1.0]
    ref = a[0] ** (-th[0] ** 2) * a[0] ** (-th[1] ** 2) * a[1] ** (-th[2] ** 2)
    ref *= (1 - a[0] / a[1]) ** (-2 * th[1] * th[2]) * (1 - a[0]) ** (-2 * th[1] * th[3])
    ref *= (1 - a[1]) ** (-2 * th[2] * th[3])
    assert math.isclose(garnier_prefactor(g).real, ref, rel_tol=1e-14)


def test_garnier_validation():
    g = GarnierParams([0.1, 0.2, 0.15, -0.1, 0.2], [0.25, 0.3], None, [0.5, 0.2])
    assert any("ordered" in v for v in validate(g))
