"""Truncated block operators, determinants, the principal-minor (von Koch)
expansion and the Nystrom determinant of the continuous 2F1 kernel."""

from dataclasses import dataclass, field
import warnings

import numpy as np
import scipy.linalg

from .combinat import PLUS
from .errors import QuadratureWarning
from .kernel3pt import block, pvi_trinions, trinion_from_garnier
from .monodromy import garnier_prefactor, garnier_sigma_weight, pvi_prefactor
from .specialfn import hyp2f1_vec


@dataclass
class TauResult:
    value: complex
    trunc_err: float = float("nan")
    meta: dict = field(default_factory=dict)


def det_lu(m):
    """Determinant via LU with partial pivoting."""
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("det_lu needs a square matrix")
    if m.shape[0] == 0:
        return 1.0 + 0j
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        lu, piv = scipy.linalg.lu_factor(m, check_finite=True)
    swaps = int(np.count_nonzero(piv != np.arange(len(piv))))
    d = complex(np.prod(np.diag(lu)))
    return -d if swaps % 2 else d


# Index layout: each annulus holds 2Q positive modes (p, color) followed by
# 2Q negative modes (-q, color); position 2*(p-1/2) + color slot.

def _ci(color):
    return 0 if color == PLUS else 1


def pos_index(Q, annulus, p2, color):
    """p2 = 2p > 0; annuli are numbered from 1."""
    return (annulus - 1) * 4 * Q + (p2 - 1) + _ci(color)


def neg_index(Q, annulus, q2, color):
    """q2 = -2q < 0."""
    return (annulus - 1) * 4 * Q + 2 * Q + (-q2 - 1) + _ci(color)


def _fill(M, r0, c0, op, tk, Q, triangular):
    for P in range(Q):
        for R in range(Q):
            if triangular and P + R + 1 > Q:
                continue
            M[r0 + 2 * P:r0 + 2 * P + 2, c0 + 2 * R:c0 + 2 * R + 2] = block(op, tk, P + 0.5, R + 0.5)


def assemble_uq(params, Q, t=None):
    """U_Q = [[0, a_Q], [d_Q, 0]] with entries kept only for p + q <= Q."""
    L, R = pvi_trinions(params, t)
    U = np.zeros((4 * Q, 4 * Q), dtype=complex)
    _fill(U, 0, 2 * Q, "a", R, Q, True)
    _fill(U, 2 * Q, 0, "d", L, Q, True)
    return U


def assemble_k(g, Q, triangular=False):
    """Block-tridiagonal K for a Garnier system: per annulus U_k, with V_k
    (b of trinion k+1) above and W_k (c of trinion k+1) below the diagonal."""
    n = g.n
    na = n - 3
    tks = {k: trinion_from_garnier(g, k) for k in range(1, n - 1)}
    K = np.zeros((4 * Q * na, 4 * Q * na), dtype=complex)
    for k in range(1, na + 1):
        o = (k - 1) * 4 * Q
        _fill(K, o, o + 2 * Q, "a", tks[k + 1], Q, triangular)
        _fill(K, o + 2 * Q, o, "d", tks[k], Q, triangular)
        if k < na:
            o2 = k * 4 * Q
            _fill(K, o, o2, "b", tks[k + 1], Q, triangular)
            _fill(K, o2 + 2 * Q, o + 2 * Q, "c", tks[k + 1], Q, triangular)
    return K


def fredholm_det_pvi(params, Q, t=None):
    if Q == 0:
        return 1.0 + 0j
    U = assemble_uq(params, Q, t)
    return det_lu(np.eye(U.shape[0]) - U)


def tau_fredholm_pvi(params, Q, t=None):
    t = params.t if t is None else t
    pref = pvi_prefactor(params, t)
    d = fredholm_det_pvi(params, Q, t)
    err = abs(pref * (d - fredholm_det_pvi(params, Q - 1, t))) if Q >= 1 else float("nan")
    return TauResult(pref * d, err, {"Q": Q, "t": t, "det": d})


def fredholm_det_garnier(g, Q, triangular=False):
    if Q == 0:
        return 1.0 + 0j
    K = assemble_k(g, Q, triangular)
    return det_lu(np.eye(K.shape[0]) - K)


def tau_fredholm_garnier(g, Q, triangular=False):
    """Prefactor times prod (a_k/a_{k+1})^{sigma_k^2} times det(1 - K)."""
    pref = garnier_prefactor(g) * garnier_sigma_weight(g)
    d = fredholm_det_garnier(g, Q, triangular)
    err = abs(pref * (d - fredholm_det_garnier(g, Q - 1, triangular))) if Q >= 1 else float("nan")
    return TauResult(pref * d, err, {"Q": Q, "det": d})


# Principal-minor expansion.

def trinion_minor_indices(Q, k, n_annuli, cfg_in, cfg_out):
    """Rows (I_{k-1}, J_k) and columns (J_{k-1}, I_k) of trinion k inside K,
    plus |I_k| for the sign (-1)^{|I_k|}."""
    rows, cols = [], []
    if k >= 2:
        rows += sorted(pos_index(Q, k - 1, p, c) for p, c in cfg_in.I)
        cols += sorted(neg_index(Q, k - 1, q, c) for q, c in cfg_in.J)
    if k <= n_annuli:
        rows += sorted(neg_index(Q, k, q, c) for q, c in cfg_out.J)
        cols += sorted(pos_index(Q, k, p, c) for p, c in cfg_out.I)
    nI = len(cfg_out.I) if k <= n_annuli else 0
    return rows, cols, nI


def von_koch_sum(K, Q, n_annuli, configs, chunk=20000):
    """Sum over configurations of products of trinion minors
    Z_k = (-1)^{|I_k|} det[[a, b], [c, d]] read off from K."""
    from .combinat import EMPTY_ANNULUS

    K = np.asarray(K, dtype=complex)
    cache = {}
    total = 0j
    buf = []

    def flush():
        nonlocal total
        pending = {}
        for cfg in buf:
            for k in range(1, n_annuli + 2):
                cin = cfg[k - 2] if k >= 2 else EMPTY_ANNULUS
                cout = cfg[k - 1] if k <= n_annuli else EMPTY_ANNULUS
                key = (k, cin, cout)
                if key not in cache and key not in pending:
                    pending[key] = trinion_minor_indices(Q, k, n_annuli, cin, cout)
        by_size = {}
        for key, (rows, cols, nI) in pending.items():
            if len(rows) != len(cols):
                cache[key] = 0j
                continue
            by_size.setdefault(len(rows), []).append((key, rows, cols, nI))
        for size, items in by_size.items():
            if size == 0:
                for key, _, _, nI in items:
                    cache[key] = (-1) ** nI + 0j
                continue
            R = np.array([it[1] for it in items])
            C = np.array([it[2] for it in items])
            dets = np.linalg.det(K[R[:, :, None], C[:, None, :]])
            for (key, _, _, nI), dv in zip(items, dets):
                cache[key] = (-1) ** nI * complex(dv)
        for cfg in buf:
            prod = 1.0 + 0j
            for k in range(1, n_annuli + 2):
                cin = cfg[k - 2] if k >= 2 else EMPTY_ANNULUS
                cout = cfg[k - 1] if k <= n_annuli else EMPTY_ANNULUS
                prod *= cache[(k, cin, cout)]
                if prod == 0:
                    break
            total += prod
        buf.clear()

    for cfg in configs:
        buf.append(cfg)
        if len(buf) >= chunk:
            flush()
    flush()
    return total


# Continuous 2F1 kernel.

def _phi_psi(theta1, thetainf, sigma, x):
    a1, b1 = sigma + theta1 + thetainf, sigma + theta1 - thetainf
    F1 = hyp2f1_vec(a1, b1, 2 * sigma, x)
    dF1 = a1 * b1 / (2 * sigma) * hyp2f1_vec(a1 + 1, b1 + 1, 2 * sigma + 1, x)
    F2 = hyp2f1_vec(a1 + 1, b1 + 1, 2 + 2 * sigma, x)
    dF2 = (a1 + 1) * (b1 + 1) / (2 + 2 * sigma) * hyp2f1_vec(a1 + 2, b1 + 2, 3 + 2 * sigma, x)
    base = np.exp(sigma * np.log(x) + theta1 * np.log1p(-x))
    dlog = sigma / x - theta1 / (1 - x)
    phi = base * F1
    dphi = phi * dlog + base * dF1
    psi = x * base * F2
    dpsi = psi * (dlog + 1 / x) + x * base * dF2
    return phi, dphi, psi, dpsi


def hyp_kernel_matrix(theta1, thetainf, sigma, x, y=None):
    """K(x_i, y_j) = (psi(x) phi(y) - phi(x) psi(y))/(x - y), with the diagonal
    psi'(x) phi(x) - phi'(x) psi(x) when y is x."""
    x = np.asarray(x, dtype=float)
    ph, dph, ps, dps = _phi_psi(theta1, thetainf, sigma, x)
    if y is None:
        num = ps[:, None] * ph[None, :] - ph[:, None] * ps[None, :]
        dx = x[:, None] - x[None, :]
        np.fill_diagonal(dx, 1.0)
        K = num / dx
        np.fill_diagonal(K, dps * ph - dph * ps)
        return K
    y = np.asarray(y, dtype=float)
    ph2, _, ps2, _ = _phi_psi(theta1, thetainf, sigma, y)
    return (ps[:, None] * ph2[None, :] - ph[:, None] * ps2[None, :]) / (x[:, None] - y[None, :])


def _nystrom(theta1, thetainf, sigma, lam, t, nodes):
    u, w = np.polynomial.legendre.leggauss(nodes)
    u = 0.5 * (u + 1.0)
    w = 0.5 * w
    x = t * u * u
    wx = w * 2.0 * t * u
    K = hyp_kernel_matrix(theta1, thetainf, sigma, x)
    s = np.sqrt(wx)
    A = np.eye(nodes) - lam * s[:, None] * K * s[None, :]
    return det_lu(A)


def tau_hyp_kernel(theta1, thetainf, sigma, lam, t, nodes=64, check=True):
    """det(1 - lam K) on (0, t) by Gauss-Legendre Nystrom after x = t u^2."""
    sigma = complex(sigma)
    if sigma.real <= 0:
        raise ValueError("tau_hyp_kernel needs Re sigma > 0")
    if not 0 < t < 1 or nodes < 16:
        raise ValueError("need 0 < t < 1 and nodes >= 16")
    if lam == 0:
        return 1.0 + 0j
    d = _nystrom(theta1, thetainf, sigma, lam, t, nodes)
    if check:
        d2 = _nystrom(theta1, thetainf, sigma, lam, t, 2 * nodes)
        if abs(d2 - d) > 1e-8 * max(1.0, abs(d2)):
            warnings.warn("node doubling changed D(t) by %.2e" % abs(d2 - d), QuadratureWarning)
    return d
