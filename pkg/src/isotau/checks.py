"""End-to-end validators: the sigma form of PVI, Jimbo's leading term and
the comparison of the Fredholm and series representations."""

from concurrent.futures import ThreadPoolExecutor
import cmath
import json
import math
import os

import numpy as np

from .errors import GenericityError
from .fredholm import fredholm_det_pvi, tau_fredholm_pvi
from .kernel3pt import first_taylor_blocks
from .monodromy import _rpow, pvi_prefactor, validate
from .nekrasov import eta_prime_from_eta, eval_terms, pvi_series_terms, tau_series_pvi


def _threads(threads=None):
    if threads is None:
        threads = int(os.environ.get("ISOTAU_THREADS", "1") or 1)
    return max(1, int(threads))


def grid_map(fn, items, threads=None):
    """Map over grid points, in order, optionally on a thread pool."""
    items = list(items)
    n = _threads(threads)
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(n) as ex:
        return list(ex.map(fn, items))


def _require_generic(params, route):
    bad = validate(params, route=route)
    if bad:
        raise GenericityError(bad)


# sigma form

def series_zeta(params, W, t, nmax=2):
    """zeta, zeta', zeta'' of zeta = t(t-1) d/dt log tau, term-wise."""
    terms = pvi_series_terms(params, W, nmax)
    S, S1, S2, S3 = eval_terms(terms, t, 3)
    kappa = 2 * params.thetat * params.theta1
    L = S1 / S
    L1 = S2 / S - L * L
    L2 = S3 / S - 3 * S2 * S1 / S ** 2 + 2 * L ** 3
    u = t * (t - 1)
    z = kappa * t + u * L
    z1 = kappa + (2 * t - 1) * L + u * L1
    z2 = 2 * L + 2 * (2 * t - 1) * L1 + u * L2
    return z, z1, z2


def sigma_pvi_sides(params, z, z1, z2, t):
    th0, tht, th1, thinf = params.thetas
    lhs = (t * (t - 1) * z2) ** 2
    e = z1 + th0 ** 2 + tht ** 2 + th1 ** 2 - thinf ** 2
    m = np.array([[2 * th0 ** 2, t * z1 - z, e],
                  [t * z1 - z, 2 * tht ** 2, (t - 1) * z1 - z],
                  [e, (t - 1) * z1 - z, 2 * th1 ** 2]], dtype=complex)
    rhs = -2 * np.linalg.det(m)
    return complex(lhs), complex(rhs)


def sigma_pvi_residual(params, W, t, nmax=2):
    """|LHS - RHS| / max(|LHS|, |RHS|, 1) of the sigma form of PVI."""
    _require_generic(params.replace(t=t), "series")
    z, z1, z2 = series_zeta(params, W, t, nmax)
    lhs, rhs = sigma_pvi_sides(params, z, z1, z2, t)
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1.0)


def fredholm_log_derivative(params, Q, t, rel_step=1e-4):
    """d/dt log tau_F by a five-point stencil with one Richardson step."""
    def f(x):
        return tau_fredholm_pvi(params, Q, x).value

    def d5(h):
        return (f(t - 2 * h) - 8 * f(t - h) + 8 * f(t + h) - f(t + 2 * h)) / (12 * h)

    h = rel_step * t
    d = (16 * d5(h) - d5(2 * h)) / 15
    return d / f(t)


def fredholm_zeta(params, Q, t, rel_step=1e-4):
    return t * (t - 1) * fredholm_log_derivative(params, Q, t, rel_step)


# eta' calibration

def fredholm_sectors(params, Q, t, samples=None):
    """Charge sectors F_m(t) of tau_F = sum_m e^{i m eta} F_m(t), by a DFT in eta."""
    M = samples or 4 * Q + 3
    phis = 2 * math.pi * np.arange(M) / M
    vals = np.array([tau_fredholm_pvi(params.replace(eta=complex(ph)), Q, t).value for ph in phis])
    coef = np.fft.fft(vals) / M
    return {m: complex(coef[m % M]) for m in range(-Q, Q + 1)}


def series_sector(params, W, n, t):
    p0 = params.replace(eta_prime=0j)
    terms = pvi_series_terms(p0, W, 0, n_range=[n])
    return _rpow(1.0 - t, 2 * p0.thetat * p0.theta1) * eval_terms(terms, t)[0]


def calibrate_eta_prime(params, t_grid, Q=8, W=8):
    """Least-squares fit of e^{i eta'} from the charge +-1 sectors of the
    Fredholm determinant against the series sectors, over the t-grid."""
    num, den = 0j, 0.0
    for t in t_grid:
        F = fredholm_sectors(params, Q, t)
        S = {n: series_sector(params, W, n, t) for n in (-1, 0, 1)}
        ph = cmath.exp(1j * params.eta)
        # x A = B for both sectors, x = e^{i eta'}
        A, B = F[0] * S[1], ph * F[1] * S[0]
        num += A.conjugate() * B
        den += abs(A) ** 2
        A2, B2 = F[-1] * S[0], ph * F[0] * S[-1]
        num += A2.conjugate() * B2
        den += abs(A2) ** 2
    x = num / den
    return -1j * cmath.log(x)


# dual representation

def cross_check(params, t_grid, Q=8, W=8, nmax=2, eta_prime="analytic", threads=None):
    """Ratio tau_F / tau_series over the grid and its maximal relative
    deviation from the grid mean."""
    _require_generic(params, "fredholm")
    if eta_prime == "analytic":
        ep = eta_prime_from_eta(params)
    elif eta_prime == "fit":
        ep = calibrate_eta_prime(params, t_grid, Q, W)
    else:
        ep = complex(eta_prime)
    q = params.replace(eta_prime=ep)

    def one(t):
        f = tau_fredholm_pvi(params, Q, t)
        s = tau_series_pvi(q, W, nmax, t=t)
        return f.value, s.value

    pairs = grid_map(one, t_grid, threads)
    ratios = np.array([f / s for f, s in pairs])
    mean = ratios.mean()
    dev = float(np.max(np.abs(ratios - mean)) / abs(mean)) if len(ratios) else 0.0
    return {
        "t": [float(t) for t in t_grid],
        "tau_fredholm": [f for f, _ in pairs],
        "tau_series": [s for _, s in pairs],
        "ratio": list(ratios),
        "ratio_mean": complex(mean),
        "deviation": dev,
        "eta_prime": ep,
        "Q": Q, "W": W, "nmax": nmax,
    }


# Jimbo asymptotics

def jimbo_det(params, t):
    """det(1 - g1^R t^{1-S} g1^L t^S) with S = diag(sigma, -sigma)."""
    gR, gL = first_taylor_blocks(params, t)
    s = params.sigma
    A = np.diag([_rpow(t, 1 - s), _rpow(t, 1 + s)])
    B = np.diag([_rpow(t, s), _rpow(t, -s)])
    return complex(np.linalg.det(np.eye(2) - gR @ A @ gL @ B))


def jimbo_check(params, t, Q=8):
    """Compare the gauge-stripped determinant with the Jimbo leading term at
    t and t/2; the discrepancy must decay faster than t."""
    if not abs((2 * params.sigma).real) < 1:
        raise GenericityError(["|Re(sigma_+ - sigma_-)| >= 1"])
    out = {"t": t, "Q": Q}
    disc = []
    for x in (t, t / 2):
        d = fredholm_det_pvi(params, Q, x)
        j = jimbo_det(params, x)
        disc.append(abs(d - j))
        if x == t:
            out["det"] = d
            out["jimbo"] = j
            out["tau"] = pvi_prefactor(params, x) * d
    out["discrepancy"] = disc[0]
    out["discrepancy_half"] = disc[1]
    out["ratio"] = disc[1] / disc[0] if disc[0] > 0 else 0.0
    out["leading"] = out["jimbo"]
    return out


# reports

def _plain(v):
    if isinstance(v, complex) or isinstance(v, np.complexfloating):
        return [float(v.real), float(v.imag)]
    if isinstance(v, (np.floating,)):
        return float(v)
    if isinstance(v, dict):
        return {k: _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_plain(x) for x in v]
    return v


def report_json(report):
    return json.dumps(_plain(report), indent=2, sort_keys=True)


def report_table(report):
    """Aligned text table for a cross-check report."""
    lines = ["%10s  %24s  %24s  %24s" % ("t", "tau_fredholm", "tau_series", "ratio")]
    for t, f, s, r in zip(report["t"], report["tau_fredholm"], report["tau_series"], report["ratio"]):
        lines.append("%10.5f  %24s  %24s  %24s" % (t, "%.10g%+.10gj" % (f.real, f.imag),
                                                  "%.10g%+.10gj" % (s.real, s.imag),
                                                  "%.10g%+.10gj" % (r.real, r.imag)))
    lines.append("max relative deviation: %.3e" % report["deviation"])
    return "\n".join(lines)
