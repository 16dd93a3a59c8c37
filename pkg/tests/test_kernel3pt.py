import math

import numpy as np
import pytest

from isotau.kernel3pt import (TrinionKernel, block, chi_phi, diag_factors, first_taylor_blocks,
                              fourier_oracle, kernel_a, kernel_a_pvi, kernel_b, kernel_c, kernel_d,
                              kernel_d_pvi, psi_in_tilde, pvi_trinions, trinion_from_garnier)
from isotau.monodromy import PVIParams
from isotau.specialfn import pochhammer

from conftest import random_garnier, random_pvi


def _series(a, b, c, z, n=2000):
    s, term = 0j, 1 + 0j
    for k in range(n):
        s += term
        term *= (a + k) * (b + k) / ((c + k) * (k + 1)) * z
    return s


def test_chi_phi_origin():
    chi, phi = chi_phi(0.21, 0.13, 0.3, 0.0)
    assert chi == 1 and phi == 0


def test_chi_phi_vanishing_prefactor():
    _, phi = chi_phi(0.25, 0.5, 0.75, 0.4)
    assert phi == 0


def test_chi_against_direct_series():
    t1, t2, t3 = 0.21 + 0.1j, 0.13, -0.27
    z = 0.35 + 0.2j
    chi, _ = chi_phi(t1, t2, t3, z)
    ref = _series(t1 + t2 + t3, t1 + t2 - t3, 2 * t1, z)
    assert abs(chi - ref) < 1e-12


def test_det_psi_in(rng):
    tk = TrinionKernel(0.21 + 0.05j, 0.17 - 0.1j, 0.3, 1.0)
    for r in (0.2, 0.6, 0.9):
        w = r * np.exp(1j * rng.uniform(0, 2 * math.pi))
        d = np.linalg.det(psi_in_tilde(tk, w))
        assert abs(d / (1 - w) ** (-2 * tk.theta) - 1) < 1e-11


def test_kernel_a_degenerate():
    # theta1 = 0, thetainf = sigma makes K the identity, so a vanishes
    p = PVIParams(0.2, 0.1, 0.0, 0.3, 0.3, t=0.2)
    z, zp = 0.4 + 0.1j, -0.3 + 0.2j
    assert np.abs(kernel_a_pvi(p, z, zp)).max() < 1e-14


def test_kernel_d_small_t(rng):
    p = random_pvi(rng)
    z, zp = 0.5 + 0.1j, -0.4 + 0.2j
    big = np.abs(kernel_d_pvi(p, z, zp, t=1e-2)).max()
    small = np.abs(kernel_d_pvi(p, z, zp, t=1e-6)).max()
    assert small < 1e-3 * big


def test_kernel_a_diagonal_limit(rng):
    p = random_pvi(rng)
    z = 0.45 + 0.05j
    on = kernel_a_pvi(p, z, z)
    near = kernel_a_pvi(p, z, z + 1e-6)
    assert np.abs(on - near).max() < 1e-5


def test_diag_factor_first_psi(rng):
    tk = TrinionKernel(0.21 + 0.05j, 0.17 - 0.1j, 0.3 + 0.02j, 0.3, 0.07)
    v = diag_factors(tk, 0.5, 1, "psi")
    ref = ((tk.theta + tk.s_in) ** 2 - tk.s_out ** 2) / (2 * tk.s_in)
    ref *= tk.a ** (tk.shift - tk.s_in) * (-1)
    assert abs(v - ref) < 1e-14


def test_diag_factor_zero_pattern():
    s1, s2 = 0.25, 0.5
    tk = TrinionKernel(s1, s1 + s2, s2, 0.3)
    # (theta - s1 - s2)_{p+1/2} contains the zero factor
    assert diag_factors(tk, 1.5, -1, "psi") == 0
    assert pochhammer(tk.theta - s1 - s2, 2) == 0


def test_diag_factor_ratio():
    tk = TrinionKernel(0.21 + 0.05j, 0.17 - 0.1j, 0.3 + 0.02j, 0.3)
    r = [abs(diag_factors(tk, p + 0.5, 1, "phi") / diag_factors(tk, p - 0.5, 1, "phi")) for p in (40, 80)]
    assert abs(r[1] - tk.a) < abs(r[0] - tk.a) < 0.05


def test_first_block_is_taylor_coefficient(rng):
    p = random_pvi(rng, t=0.2)
    L, R = pvi_trinions(p)
    gR, _ = first_taylor_blocks(p)
    assert np.abs(block("a", R, 0.5, 0.5) - gR).max() < 1e-14


def test_d_elements_scaling(rng):
    p = random_pvi(rng)
    cores = []
    for t in (0.1, 0.2):
        L, _ = pvi_trinions(p, t)
        s = p.sigma
        S = np.diag([t ** s, t ** -s])
        Si = np.diag([t ** -s, t ** s])
        blocks = [S @ block("d", L, P + 0.5, Qq + 0.5) @ Si / t ** (P + Qq + 1)
                  for P in range(3) for Qq in range(3)]
        cores.append(np.array(blocks))
    assert np.abs(cores[0] - cores[1]).max() < 1e-10 * np.abs(cores[0]).max()


def test_oracle_trivial():
    tab = fourier_oracle(lambda z, zp: np.zeros(np.broadcast(z[:, None], zp[None, :]).shape + (2, 2)), 0.5)
    assert np.abs(tab.coef).max() == 0
    const = fourier_oracle(lambda z, zp: np.ones(np.broadcast(z[:, None], zp[None, :]).shape + (2, 2)), 0.5)
    assert abs(const.block("a", 0.5, 0.5)[0, 0] - 1) < 1e-14
    assert np.abs(const.block("a", 1.5, 0.5)).max() < 1e-14


def test_oracle_bad_size():
    with pytest.raises(ValueError):
        fourier_oracle(lambda z, zp: 0, 0.5, M=48)


def test_cauchy_vs_quadrature_pvi(rng):
    p = random_pvi(rng, t=0.2)
    L, R = pvi_trinions(p)
    r = math.sqrt(0.2)
    ta = fourier_oracle(lambda z, zp: kernel_a(R, z, zp), r, 128)
    td = fourier_oracle(lambda z, zp: kernel_d(L, z, zp), r, 128)
    for P in range(7):
        for Qq in range(7 - P):
            assert np.abs(ta.block("a", P + .5, Qq + .5) - block("a", R, P + .5, Qq + .5)).max() < 1e-10
            assert np.abs(td.block("d", P + .5, Qq + .5) - block("d", L, P + .5, Qq + .5)).max() < 1e-10


def test_cauchy_vs_quadrature_bc(rng):
    g = random_garnier(rng)
    T = trinion_from_garnier(g, 2)
    r1, r2 = math.sqrt(g.a(1) * g.a(2)), math.sqrt(g.a(2))
    tb = fourier_oracle(lambda z, zp: kernel_b(T, z, zp), r1, 128, r2)
    tc = fourier_oracle(lambda z, zp: kernel_c(T, z, zp), r2, 128, r1)
    for P in range(5):
        for Qq in range(5 - P):
            assert np.abs(tb.block("b", P + .5, Qq + .5) - block("b", T, P + .5, Qq + .5)).max() < 1e-9
            assert np.abs(tc.block("c", P + .5, Qq + .5) - block("c", T, P + .5, Qq + .5)).max() < 1e-9
