"""Complex special functions: log-Gamma, Pochhammer symbols, Gauss 2F1 and
integer-shift ratios of the Barnes G-function."""

import cmath
import math

import numpy as np

from .errors import NonConvergence, PoleError

# Godfrey's Lanczos coefficients, g = 607/128.
_LANCZOS_G = 607.0 / 128.0
_LANCZOS_C = (
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)

HYP_TOL = 1e-16
HYP_MAX_TERMS = 10_000


def _check_pole(z, tol=1e-12):
    if z.real < 0.5 and abs(z - round(z.real)) < tol and round(z.real) <= 0:
        raise PoleError("Gamma pole at z = %r" % (z,))


def _lanczos(z):
    # valid for Re z >= 0.5
    z = z - 1.0
    s = _LANCZOS_C[0]
    for k in range(1, len(_LANCZOS_C)):
        s += _LANCZOS_C[k] / (z + k)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * cmath.log(t) - t + cmath.log(s)


def ln_gamma(z):
    """Principal branch of log Gamma (cut along the negative real axis).

    For Re z < 1/2 the argument is shifted up with the recurrence, so the
    imaginary part is the sum of principal logarithms and stays continuous
    off the negative axis.
    """
    z = complex(z)
    _check_pole(z)
    if z.real >= 0.5:
        return _lanczos(z)
    n = int(math.ceil(0.5 - z.real))
    acc = 0j
    for k in range(n):
        acc += cmath.log(z + k)
    return _lanczos(z + n) - acc


def gamma(z):
    return cmath.exp(ln_gamma(z))


def rgamma(z):
    """1/Gamma(z), returning 0 at the poles."""
    z = complex(z)
    if z.real < 0.5 and abs(z - round(z.real)) < 1e-12 and round(z.real) <= 0:
        return 0j
    return cmath.exp(-ln_gamma(z))


def pochhammer(c, l):
    """Rising factorial (c)_l as a direct product."""
    if l < 0:
        raise ValueError("pochhammer length must be >= 0")
    out = 1.0 + 0j
    c = complex(c)
    for j in range(l):
        out *= c + j
    return out


def factorial(n):
    return float(math.factorial(n))


def _check_c(c):
    c = complex(c)
    if abs(c.imag) < 1e-12 and c.real <= 0 and abs(c.real - round(c.real)) < 1e-12:
        raise PoleError("2F1 lower parameter at non-positive integer %r" % (c,))


def hyp2f1_count(a, b, c, z):
    """Gauss 2F1 by direct Taylor summation; returns (value, number of terms)."""
    a, b, c, z = complex(a), complex(b), complex(c), complex(z)
    _check_c(c)
    if abs(z) > 0.95:
        raise ValueError("hyp2f1 restricted to |z| <= 0.95, got %r" % (z,))
    s = 1.0 + 0j
    term = 1.0 + 0j
    for k in range(HYP_MAX_TERMS):
        ratio = (a + k) * (b + k) / ((c + k) * (k + 1)) * z
        term = term * ratio
        s += term
        if term == 0:
            return s, k + 2
        if abs(term) < HYP_TOL * abs(s) and abs(ratio) < 1.0:
            return s, k + 2
    raise NonConvergence("2F1 did not converge in %d terms" % HYP_MAX_TERMS)


def hyp2f1(a, b, c, z):
    return hyp2f1_count(a, b, c, z)[0]


def hyp2f1_vec(a, b, c, z):
    """Vectorized 2F1 over an array of arguments, same stopping rule."""
    a, b, c = complex(a), complex(b), complex(c)
    _check_c(c)
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z) > 0.95):
        raise ValueError("hyp2f1 restricted to |z| <= 0.95")
    s = np.ones_like(z)
    term = np.ones_like(z)
    for k in range(HYP_MAX_TERMS):
        ratio = (a + k) * (b + k) / ((c + k) * (k + 1))
        term = term * (ratio * z)
        s = s + term
        if abs(ratio) * np.max(np.abs(z), initial=0.0) < 1.0 and np.all(
            np.abs(term) <= HYP_TOL * np.abs(s)
        ):
            return s
    raise NonConvergence("2F1 did not converge in %d terms" % HYP_MAX_TERMS)


def hyp2f1_taylor(a, b, c, n):
    """First n Taylor coefficients (a)_k (b)_k / ((c)_k k!)."""
    a, b, c = complex(a), complex(b), complex(c)
    _check_c(c)
    out = np.empty(n, dtype=complex)
    term = 1.0 + 0j
    for k in range(n):
        out[k] = term
        term = term * (a + k) * (b + k) / ((c + k) * (k + 1))
    return out


def barnes_g_ratio(nu, k):
    """G(1+nu+k)/G(1+nu) for integer k, via G(x+1) = Gamma(x) G(x)."""
    nu = complex(nu)
    out = 1.0 + 0j
    if k >= 0:
        for j in range(k):
            out *= gamma(1.0 + nu + j)
    else:
        for j in range(1, -k + 1):
            _check_pole(1.0 + nu - j)
            out /= gamma(1.0 + nu - j)
    return out
