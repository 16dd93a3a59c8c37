"""Rank-2 three-point solutions, their Plemelj kernels a, b, c, d, the
closed Cauchy form of the Fourier matrix elements, and a quadrature oracle.

Fourier conventions (p, q positive half-integers):
    a(z,z') = sum a^{p}_{-q}  z^{p-1/2}  z'^{q-1/2}
    b(z,z') = sum b^{p}_{q}   z^{p-1/2}  z'^{-q-1/2}
    c(z,z') = sum c^{-p}_{-q} z^{-p-1/2} z'^{q-1/2}
    d(z,z') = sum d^{-p}_{q}  z^{-p-1/2} z'^{-q-1/2}
"""

from dataclasses import dataclass
from functools import lru_cache
import cmath
import math
import warnings

import numpy as np

from .errors import AliasingWarning, EvaluationError, ResonanceError
from .monodromy import pvi_as_garnier
from .specialfn import factorial, hyp2f1, hyp2f1_taylor, hyp2f1_vec, pochhammer

COLOR_INDEX = {1: 0, -1: 1}


def _hyp(a, b, c, z):
    try:
        if np.ndim(z) == 0:
            return hyp2f1(a, b, c, z)
        return hyp2f1_vec(a, b, c, z)
    except Exception as exc:  # surfaced with context
        raise EvaluationError(str(exc)) from exc


def chi_phi(theta1, theta2, theta3, z):
    """The building blocks chi[theta2; theta1, theta3](z), phi[...](z)."""
    s = theta1 + theta2
    chi = _hyp(s + theta3, s - theta3, 2 * theta1, z)
    pref = (theta3 ** 2 - s ** 2) / (2 * theta1 * (1 + 2 * theta1))
    if pref == 0:
        return chi, 0 * chi
    phi = pref * z * _hyp(1 + s + theta3, 1 + s - theta3, 2 + 2 * theta1, z)
    return chi, phi


def _chi_phi_taylor(theta1, theta2, theta3, n):
    s = theta1 + theta2
    chi = hyp2f1_taylor(s + theta3, s - theta3, 2 * theta1, n)
    pref = (theta3 ** 2 - s ** 2) / (2 * theta1 * (1 + 2 * theta1))
    phi = np.zeros(n, dtype=complex)
    if n > 1:
        phi[1:] = pref * hyp2f1_taylor(1 + s + theta3, 1 + s - theta3, 2 + 2 * theta1, n - 1)
    return chi, phi


@dataclass(frozen=True)
class TrinionKernel:
    """One pair of pants: exponents (sigma_{k-1}, theta_k, sigma_k), time a_k,
    the sum of the exponents theta_j with j < k, and D_inf = diag(d+, d-)."""

    s_in: complex
    theta: complex
    s_out: complex
    a: float = 1.0
    shift: complex = 0j
    d_plus: complex = 1.0 + 0j
    d_minus: complex = 1.0 + 0j

    def sig_in(self, eps):
        """sigma_{k-1, eps} = -sum_{j<k} theta_j + eps sigma_{k-1}."""
        return -self.shift + eps * self.s_in

    def sig_out(self, eps):
        """sigma_{k, eps} = -sum_{j<=k} theta_j + eps sigma_k."""
        return -self.shift - self.theta + eps * self.s_out

    def d_inf(self, eps):
        return self.d_plus if eps == 1 else self.d_minus

    def taylor_in(self, n):
        return _taylor_in(self.s_in, self.theta, self.s_out, n)

    def taylor_out(self, n):
        return _taylor_out(self.s_in, self.theta, self.s_out, n)


def trinion_from_garnier(g, k):
    """Trinion k = 1..n-2 of a GarnierParams."""
    n = g.n
    shift = sum(g.thetas[:k], 0j)
    eta = g.etas[k - 1] if k <= n - 3 else 0j
    return TrinionKernel(g.sigma(k - 1), g.thetas[k], g.sigma(k), g.a(k), shift,
                         1.0 + 0j, cmath.exp(1j * eta))


def pvi_trinions(params, t=None):
    """(left, right) trinions of the four-point problem."""
    g = pvi_as_garnier(params, t)
    return trinion_from_garnier(g, 1), trinion_from_garnier(g, 2)


@lru_cache(maxsize=256)
def _taylor_in(s_in, theta, s_out, n):
    out = np.zeros((n, 2, 2), dtype=complex)
    for i, e in enumerate((1, -1)):
        chi, phi = _chi_phi_taylor(e * s_in, theta, s_out, n)
        out[:, i, i] = chi
        out[:, i, 1 - i] = phi
    out.setflags(write=False)
    return out


@lru_cache(maxsize=256)
def _taylor_out(s_in, theta, s_out, n):
    out = np.zeros((n, 2, 2), dtype=complex)
    for i, e in enumerate((1, -1)):
        chi, phi = _chi_phi_taylor(-e * s_out, theta, s_in, n)
        out[:, i, i] = chi
        out[:, i, 1 - i] = phi
    out.setflags(write=False)
    return out


def psi_in_tilde(tk, w):
    """Psi_in(w): entries chi/phi[theta_k; +-sigma_{k-1}, sigma_k](w)."""
    w = np.asarray(w, dtype=complex)
    out = np.zeros(w.shape + (2, 2), dtype=complex)
    for i, e in enumerate((1, -1)):
        chi, phi = chi_phi(e * tk.s_in, tk.theta, tk.s_out, w)
        out[..., i, i] = chi
        out[..., i, 1 - i] = phi
    return out


def psi_out_tilde(tk, w):
    """Psi_out(w): entries chi/phi[theta_k; -+sigma_k, sigma_{k-1}](1/w)."""
    w = np.asarray(w, dtype=complex)
    out = np.zeros(w.shape + (2, 2), dtype=complex)
    for i, e in enumerate((1, -1)):
        chi, phi = chi_phi(-e * tk.s_out, tk.theta, tk.s_in, 1.0 / w)
        out[..., i, i] = chi
        out[..., i, 1 - i] = phi
    return out


def g_inf(tk):
    th, s1, s2 = tk.theta, tk.s_in, tk.s_out
    return np.array([[-th + s1 + s2, th + s1 - s2],
                     [-th + s1 - s2, th + s1 + s2]], dtype=complex) / (2 * s2)


def adj2(m):
    out = np.empty_like(m)
    out[..., 0, 0] = m[..., 1, 1]
    out[..., 1, 1] = m[..., 0, 0]
    out[..., 0, 1] = -m[..., 0, 1]
    out[..., 1, 0] = -m[..., 1, 0]
    return out


def _conj(m, left, right):
    """diag(left) m diag(right) over the trailing 2x2 axes."""
    return m * np.asarray(left)[:, None] * np.asarray(right)[None, :]


def _powa(tk, e):
    return np.exp(np.asarray(e, dtype=complex) * math.log(tk.a))


def _s_in_pows(tk, sign):
    return _powa(tk, [sign * tk.sig_in(1), sign * tk.sig_in(-1)])


def _s_out_pows(tk, sign):
    return _powa(tk, [sign * tk.sig_out(1), sign * tk.sig_out(-1)])


def _dvec(tk, power):
    return np.array([tk.d_plus ** power, tk.d_minus ** power], dtype=complex)


def _pair(z, zp):
    z = np.asarray(z, dtype=complex)
    zp = np.asarray(zp, dtype=complex)
    return z, zp, z[:, None] - zp[None, :]


def kernel_a(tk, z, zp):
    """a^{[k]}(z_i, z'_j) for 1-d arrays z, zp on the inner circle, z_i != z'_j."""
    z, zp, dz = _pair(z, zp)
    K = psi_in_tilde(tk, z / tk.a)
    B = adj2(psi_in_tilde(tk, zp / tk.a)) * ((1 - zp / tk.a) ** (2 * tk.theta))[:, None, None]
    num = np.einsum("iab,jbc->ijac", K, B) - np.eye(2)
    out = num / dz[:, :, None, None]
    return _conj(out, _s_in_pows(tk, -1), _s_in_pows(tk, 1))


def kernel_b(tk, z, zp):
    """z on the inner circle, z' on the outer one."""
    z, zp, dz = _pair(z, zp)
    K = psi_in_tilde(tk, z / tk.a)
    Kb = adj2(psi_out_tilde(tk, zp / tk.a)) * ((1 - tk.a / zp) ** (2 * tk.theta))[:, None, None]
    ginv = np.linalg.inv(g_inf(tk))
    num = np.einsum("iab,bc,jcd->ijad", K, ginv, Kb)
    out = -num / dz[:, :, None, None]
    return _conj(out, _s_in_pows(tk, -1), _s_out_pows(tk, 1) * _dvec(tk, -1))


def kernel_c(tk, z, zp):
    """z on the outer circle, z' on the inner one."""
    z, zp, dz = _pair(z, zp)
    Kb = psi_out_tilde(tk, z / tk.a)
    K = adj2(psi_in_tilde(tk, zp / tk.a)) * ((1 - zp / tk.a) ** (2 * tk.theta))[:, None, None]
    num = np.einsum("iab,bc,jcd->ijad", Kb, g_inf(tk), K)
    out = num / dz[:, :, None, None]
    return _conj(out, _dvec(tk, 1) * _s_out_pows(tk, -1), _s_in_pows(tk, 1))


def kernel_d(tk, z, zp):
    """z, z' on the outer circle, z_i != z'_j."""
    z, zp, dz = _pair(z, zp)
    Kb = psi_out_tilde(tk, z / tk.a)
    B = adj2(psi_out_tilde(tk, zp / tk.a)) * ((1 - tk.a / zp) ** (2 * tk.theta))[:, None, None]
    num = np.eye(2) - np.einsum("iab,jbc->ijac", Kb, B)
    out = num / dz[:, :, None, None]
    return _conj(out, _dvec(tk, 1) * _s_out_pows(tk, -1), _s_out_pows(tk, 1) * _dvec(tk, -1))


# Four-point kernels written directly in terms of the PVI exponents.

def _k_matrix(p, z):
    s, t1, ti = p.sigma, p.theta1, p.thetainf
    K = np.zeros((2, 2), dtype=complex)
    dK = np.zeros((2, 2), dtype=complex)
    for i, e in enumerate((1, -1)):
        a, b, c = t1 + ti + e * s, t1 - ti + e * s, 2 * e * s
        K[i, i] = hyp2f1(a, b, c, z)
        dK[i, i] = a * b / c * hyp2f1(a + 1, b + 1, c + 1, z)
        pref = e * (ti ** 2 - (t1 + e * s) ** 2) / (2 * s * (1 + 2 * e * s))
        f = hyp2f1(1 + a, 1 + b, 2 + c, z)
        df = (1 + a) * (1 + b) / (2 + c) * hyp2f1(2 + a, 2 + b, 3 + c, z)
        K[i, 1 - i] = pref * z * f
        dK[i, 1 - i] = pref * (f + z * df)
    return K, dK


def _kbar_matrix(p, z, t):
    s, t0, tt = p.sigma, p.theta0, p.thetat
    w = t / z
    dw = -t / z ** 2
    K = np.zeros((2, 2), dtype=complex)
    dK = np.zeros((2, 2), dtype=complex)
    for i, e in enumerate((1, -1)):
        a, b, c = tt + t0 - e * s, tt - t0 - e * s, -2 * e * s
        K[i, i] = hyp2f1(a, b, c, w)
        dK[i, i] = a * b / c * hyp2f1(a + 1, b + 1, c + 1, w) * dw
        pref = (-e * cmath.exp(-e * 2 * s * math.log(t)) * cmath.exp(-e * 1j * p.eta)
                * (t0 ** 2 - (tt - e * s) ** 2) / (2 * s * (1 - 2 * e * s)))
        f = hyp2f1(1 + a, 1 + b, 2 + c, w)
        df = (1 + a) * (1 + b) / (2 + c) * hyp2f1(2 + a, 2 + b, 3 + c, w)
        K[i, 1 - i] = pref * w * f
        dK[i, 1 - i] = pref * (f + w * df) * dw
    return K, dK


def kernel_a_pvi(params, z, zp):
    """a(z,z') = [(1-z')^{2 theta1} K(z) adj K(z') - 1]/(z - z'); the
    diagonal returns the removable limit -K(z) d/dz[(1-z)^{2 theta1} adj K(z)]."""
    z, zp = complex(z), complex(zp)
    th = params.theta1
    K, _ = _k_matrix(params, z)
    if z == zp:
        Kp, dKp = _k_matrix(params, z)
        f = (1 - z) ** (2 * th)
        dB = -2 * th * (1 - z) ** (2 * th - 1) * adj2(Kp) + f * adj2(dKp)
        return -K @ dB
    Kp, _ = _k_matrix(params, zp)
    return ((1 - zp) ** (2 * th) * K @ adj2(Kp) - np.eye(2)) / (z - zp)


def kernel_d_pvi(params, z, zp, t=None):
    """d(z,z') = [1 - (1-t/z')^{2 thetat} Kb(z) adj Kb(z')]/(z - z')."""
    t = params.t if t is None else t
    z, zp = complex(z), complex(zp)
    th = params.thetat
    K, _ = _kbar_matrix(params, z, t)
    if z == zp:
        Kp, dKp = _kbar_matrix(params, z, t)
        u = 1 - t / z
        dB = 2 * th * u ** (2 * th - 1) * (t / z ** 2) * adj2(Kp) + u ** (2 * th) * adj2(dKp)
        return K @ dB
    Kp, _ = _kbar_matrix(params, zp, t)
    return (np.eye(2) - (1 - t / zp) ** (2 * th) * K @ adj2(Kp)) / (z - zp)


# Closed Cauchy form of the matrix elements.

def _half(p):
    """Integer p - 1/2 for a positive half-integer p."""
    n = p - 0.5
    k = int(round(float(n)))
    if k < 0 or abs(float(n) - k) > 1e-12:
        raise ValueError("index must be a positive half-integer, got %r" % (p,))
    return k


def diag_factors(tk, p, color, which):
    """psi^{p;e}, psibar_{p;e}, phi^{-p;e}, phibar_{-p;e} of one trinion."""
    k = _half(p)
    e = color
    th, s1, s2 = tk.theta, tk.s_in, tk.s_out
    la = math.log(tk.a)
    if which == "psi":
        num = pochhammer(th + e * s1 + s2, k + 1) * pochhammer(th + e * s1 - s2, k + 1)
        den = factorial(k) * pochhammer(2 * e * s1, k + 1)
        expo = tk.shift - e * s1 - k
        extra = -e
    elif which == "psibar":
        num = pochhammer(1 - th - e * s1 + s2, k) * pochhammer(1 - th - e * s1 - s2, k)
        den = factorial(k) * pochhammer(1 - 2 * e * s1, k)
        expo = -tk.shift + e * s1 - (k + 1)
        extra = -e
    elif which == "phi":
        num = pochhammer(th + s1 - e * s2, k + 1) * pochhammer(th - s1 - e * s2, k + 1)
        den = factorial(k) * pochhammer(-2 * e * s2, k + 1)
        expo = tk.shift + th - e * s2 + (k + 1)
        extra = e * tk.d_inf(e)
    elif which == "phibar":
        num = pochhammer(1 - th + s1 + e * s2, k) * pochhammer(1 - th - s1 + e * s2, k)
        den = factorial(k) * pochhammer(1 + 2 * e * s2, k)
        expo = -tk.shift - th + e * s2 + k
        extra = e / tk.d_inf(e)
    else:
        raise ValueError("unknown diagonal factor %r" % (which,))
    if den == 0:
        raise ResonanceError("vanishing Pochhammer denominator in %s" % which)
    return num / den * cmath.exp(expo * la) * extra


_DIAG_KINDS = {"a": ("psi", "psibar"), "b": ("psi", "phibar"),
               "c": ("phi", "psibar"), "d": ("phi", "phibar")}


def cauchy_denominator(op, tk, p, q, alpha, beta):
    p, q = float(p), float(q)
    if op == "a":
        return p + q + tk.sig_in(alpha) - tk.sig_in(beta)
    if op == "b":
        return q - p - tk.sig_in(alpha) + tk.sig_out(beta)
    if op == "c":
        return q - p + tk.sig_out(alpha) - tk.sig_in(beta)
    if op == "d":
        return p + q - tk.sig_out(alpha) + tk.sig_out(beta)
    raise ValueError("unknown operator %r" % (op,))


def matrix_element(op, tk, p, q, alpha, beta):
    """Single Cauchy product, e.g. a^{p;alpha}_{-q;beta} = psi psibar / (p+q+...)."""
    left, right = _DIAG_KINDS[op]
    den = cauchy_denominator(op, tk, p, q, alpha, beta)
    if abs(den) < 1e-10:
        raise ResonanceError("Cauchy denominator vanishes for %s at p=%s q=%s" % (op, p, q))
    return diag_factors(tk, p, alpha, left) * diag_factors(tk, q, beta, right) / den


def block(op, tk, p, q):
    """2x2 color block of operator op at Fourier indices (p, q)."""
    out = np.empty((2, 2), dtype=complex)
    for i, al in enumerate((1, -1)):
        for j, be in enumerate((1, -1)):
            out[i, j] = matrix_element(op, tk, p, q, al, be)
    return out


def first_taylor_blocks(params, t=None):
    """(g1^[R], g1^[L]) from Taylor coefficients of the three-point solutions,
    with the D_inf conjugation absorbed in g1^[L]."""
    L, R = pvi_trinions(params, t)
    gR = np.array(R.taylor_in(2)[1])
    h1 = np.array(L.taylor_out(2)[1])
    D = np.array([L.d_plus, L.d_minus])
    gL = h1 * D[:, None] / D[None, :]
    return gR, gL


# Contour-quadrature oracle.

@dataclass
class FourierTable:
    """Double Fourier coefficients of a 2x2 kernel on two circles."""

    coef: np.ndarray
    R: float
    Rp: float
    M: int
    aliasing: float

    def mode(self, n, m):
        """Coefficient of z^n z'^m."""
        M = self.M
        return self.coef[n % M, m % M]

    def block(self, op, p, q):
        P, Qn = _half(p), _half(q)
        if op == "a":
            return self.mode(P, Qn)
        if op == "b":
            return self.mode(P, -Qn - 1)
        if op == "c":
            return self.mode(-P - 1, Qn)
        if op == "d":
            return self.mode(-P - 1, -Qn - 1)
        raise ValueError(op)


def fourier_oracle(kernel, R, M=64, Rp=None, warn=True):
    """Fourier coefficients of kernel(z, z') by a double DFT.

    z runs over R e^{2 pi i j/M}; z' over Rp e^{2 pi i (k+1/2)/M}, a grid
    staggered by half a step so that z != z' even when R == Rp.
    """
    if M < 64 or M & (M - 1):
        raise ValueError("M must be a power of two >= 64")
    Rp = R if Rp is None else Rp
    j = np.arange(M)
    z = R * np.exp(2j * np.pi * j / M)
    off = np.pi / M
    zp = Rp * np.exp(1j * (2 * np.pi * j / M + off))
    vals = kernel(z, zp)
    F = np.fft.fft2(vals, axes=(0, 1)) / (M * M)
    n = np.where(j < M // 2, j, j - M)
    scale_z = float(R) ** (-n.astype(float))
    scale_zp = float(Rp) ** (-n.astype(float)) * np.exp(-1j * off * n)
    coef = F * scale_z[:, None, None, None] * scale_zp[None, :, None, None]
    band = np.abs(n) >= M // 2 - 2
    raw = np.abs(F)
    alias = float(max(raw[band].max(initial=0.0), raw[:, band].max(initial=0.0)))
    if warn and alias > 1e-9:
        warnings.warn("estimated aliasing %.2e exceeds 1e-9" % alias, AliasingWarning)
    return FourierTable(coef, R, Rp, M, alias)
