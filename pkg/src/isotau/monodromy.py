"""Monodromy parameter containers, genericity checks and tau prefactors."""

from dataclasses import dataclass, field
import cmath
import math

GENERIC_TOL = 1e-9


def _c(x):
    return complex(x)


def near_integer(z, tol=GENERIC_TOL):
    z = complex(z)
    return abs(z.imag) < tol and abs(z.real - round(z.real)) < tol


@dataclass(frozen=True)
class PVIParams:
    """Painleve VI data: local exponents, (sigma, eta) for the Fredholm
    route and eta_prime for the series route."""

    theta0: complex
    thetat: complex
    theta1: complex
    thetainf: complex
    sigma: complex
    eta: complex = 0j
    eta_prime: complex = 0j
    t: float = 0.1

    def __post_init__(self):
        for name in ("theta0", "thetat", "theta1", "thetainf", "sigma", "eta", "eta_prime"):
            object.__setattr__(self, name, _c(getattr(self, name)))
        object.__setattr__(self, "t", float(self.t))

    def replace(self, **kw):
        d = dict(self.__dict__)
        d.update(kw)
        return PVIParams(**d)

    @property
    def thetas(self):
        return (self.theta0, self.thetat, self.theta1, self.thetainf)


@dataclass(frozen=True)
class GarnierParams:
    """Rank-2 Fuchsian data with n punctures at 0, a_1, ..., a_{n-3}, 1, inf.

    thetas has n entries, sigmas, etas and times have n-3 entries."""

    thetas: tuple
    sigmas: tuple
    etas: tuple = field(default=None)
    times: tuple = ()

    def __post_init__(self):
        th = tuple(_c(x) for x in self.thetas)
        sg = tuple(_c(x) for x in self.sigmas)
        et = tuple(_c(x) for x in self.etas) if self.etas is not None else tuple(0j for _ in sg)
        tm = tuple(float(x) for x in self.times)
        object.__setattr__(self, "thetas", th)
        object.__setattr__(self, "sigmas", sg)
        object.__setattr__(self, "etas", et)
        object.__setattr__(self, "times", tm)
        n = len(th)
        if n < 4 or len(sg) != n - 3 or len(et) != n - 3 or len(tm) != n - 3:
            raise ValueError("GarnierParams needs n >= 4 thetas and n-3 sigmas, etas, times")

    @property
    def n(self):
        return len(self.thetas)

    def sigma(self, k):
        """sigma_k for k = 0..n-2, with sigma_0 = theta_0 and sigma_{n-2} = -theta_{n-1}."""
        if k == 0:
            return self.thetas[0]
        if k == self.n - 2:
            return -self.thetas[-1]
        return self.sigmas[k - 1]

    def a(self, k):
        """a_k for k = 1..n-2 with a_{n-2} = 1."""
        return 1.0 if k == self.n - 2 else self.times[k - 1]

    def replace(self, **kw):
        d = dict(thetas=self.thetas, sigmas=self.sigmas, etas=self.etas, times=self.times)
        d.update(kw)
        return GarnierParams(**d)


def pvi_as_garnier(p, t=None):
    t = p.t if t is None else t
    return GarnierParams(p.thetas, (p.sigma,), (p.eta,), (t,))


def validate(params, tol=GENERIC_TOL, route="fredholm"):
    """List of violated genericity conditions (empty when generic)."""
    if isinstance(params, PVIParams):
        return _validate_pvi(params, tol, route)
    return _validate_garnier(params, tol)


def _validate_pvi(p, tol, route):
    out = []
    s = p.sigma
    if route == "fredholm" and abs(s.real) > 0.5 + tol:
        out.append("|Re sigma| > 1/2")
    if abs(s) < tol:
        out.append("sigma = 0 excluded")
    if near_integer(2 * s, tol) and not near_integer(s, tol):
        out.append("sigma = ±1/2 excluded" if route == "fredholm" else "2 sigma integer excluded")
    elif near_integer(s, tol) and abs(s) >= tol:
        out.append("sigma integer excluded")
    for e1 in (1, -1):
        for e2 in (1, -1):
            if near_integer(p.theta0 + e1 * p.thetat + e2 * s, tol):
                out.append("theta0 %s thetat %s sigma integer" % ("+-"[e1 < 0], "+-"[e2 < 0]))
            if near_integer(p.theta1 + e1 * p.thetainf + e2 * s, tol):
                out.append("theta1 %s thetainf %s sigma integer" % ("+-"[e1 < 0], "+-"[e2 < 0]))
    if all(abs(th) < tol for th in p.thetas):
        out.append("all local exponents vanish (degenerate monodromy)")
    if not 0.0 < p.t < 1.0:
        out.append("t outside (0, 1)")
    return out


def _validate_garnier(g, tol):
    out = []
    n = g.n
    for k, th in enumerate(g.thetas):
        if near_integer(2 * th, tol) and abs(th) > tol:
            out.append("2 theta_%d nonzero integer" % k)
    for k in range(1, n - 2):
        s = g.sigma(k)
        if abs(s) < tol:
            out.append("sigma_%d = 0" % k)
        elif near_integer(2 * s, tol):
            out.append("2 sigma_%d integer" % k)
    for k in range(1, n - 1):
        for e1 in (1, -1):
            for e2 in (1, -1):
                if near_integer(g.sigma(k - 1) + e1 * g.sigma(k) + e2 * g.thetas[k], tol):
                    out.append("sigma_%d ± sigma_%d ± theta_%d integer" % (k - 1, k, k))
                    break
            else:
                continue
            break
    prev = 0.0
    for k, a in enumerate(g.times, start=1):
        if not prev < a < 1.0:
            out.append("times not ordered 0 < a_1 < ... < 1 at a_%d" % k)
        prev = a
    return out


def _rpow(x, e):
    """x**e for real x > 0 and complex e, principal branch."""
    return cmath.exp(complex(e) * math.log(x))


def pvi_prefactor(params, t=None):
    t = params.t if t is None else t
    p = params
    return _rpow(t, p.sigma ** 2 - p.theta0 ** 2 - p.thetat ** 2) * _rpow(1.0 - t, -2 * p.thetat * p.theta1)


def garnier_prefactor(g):
    th = g.thetas
    n = g.n
    out = _rpow(g.a(1), -th[0] ** 2)
    for k in range(1, n - 1):
        out *= _rpow(g.a(k), -th[k] ** 2)
    for k in range(1, n - 1):
        for l in range(k + 1, n - 1):
            out *= _rpow(1.0 - g.a(k) / g.a(l), -2 * th[k] * th[l])
    return out


def garnier_sigma_weight(g):
    """prod_k (a_k/a_{k+1})^{sigma_k^2}, the charge-zero part of the series weights."""
    out = 1.0 + 0j
    for k in range(1, g.n - 2):
        out *= _rpow(g.a(k) / g.a(k + 1), g.sigma(k) ** 2)
    return out
