"""Combinatorial series: bifundamental factors, three-point C, trinion
weights in Cauchy and Nekrasov form, and the PVI and Garnier series."""

from dataclasses import dataclass
import cmath
import itertools
import math

import numpy as np

from .combinat import (EMPTY_ANNULUS, MINUS, PLUS, Partition, annulus_configs,
                       annulus_from_charged, charged_to_maya, ChargedPartition, hook_arm_leg,
                       partitions_of)
from .errors import ResonanceError
from .fredholm import TauResult
from .kernel3pt import trinion_from_garnier
from .monodromy import _rpow, garnier_prefactor
from .specialfn import barnes_g_ratio, factorial, gamma, pochhammer


def zbif(nu, lam, mu):
    """Z_bif(nu | lam, mu) with extended arm and leg lengths."""
    out = 1.0 + 0j
    for i, j in lam.boxes():
        out *= nu + 1 + (lam.row(i) - j) + (mu.col(j) - i)
    for i, j in mu.boxes():
        out *= nu - 1 - (mu.row(i) - j) - (lam.col(j) - i)
    return out


def hook_product(lam):
    out = 1
    for i, j in lam.boxes():
        out *= hook_arm_leg(lam, i, j)[2]
    return out


def c_three_point(nu, k):
    """C(nu|k) = G(1+nu+k) / (G(1+nu) Gamma(1+nu)^k)."""
    if k == 0:
        return 1.0 + 0j
    return barnes_g_ratio(nu, k) / gamma(1.0 + complex(nu)) ** k


def b_pvi(thetas, sigma, lam, mu):
    """Coefficient B_{lam,mu}(theta, sigma) of the PVI conformal block."""
    th0, tht, th1, thinf = thetas
    s = complex(sigma)
    out = 1.0 + 0j
    for i, j in lam.boxes():
        h = hook_arm_leg(lam, i, j)[2]
        den = h * h * (lam.col(j) - i + mu.row(i) - j + 1 + 2 * s) ** 2
        if abs(den) < 1e-14:
            raise ResonanceError("vanishing denominator in B at sigma=%r" % (s,))
        out *= ((tht + s + i - j) ** 2 - th0 ** 2) * ((th1 + s + i - j) ** 2 - thinf ** 2) / den
    for i, j in mu.boxes():
        h = hook_arm_leg(mu, i, j)[2]
        den = h * h * (mu.col(j) - i + lam.row(i) - j + 1 - 2 * s) ** 2
        if abs(den) < 1e-14:
            raise ResonanceError("vanishing denominator in B at sigma=%r" % (s,))
        out *= ((tht - s + i - j) ** 2 - th0 ** 2) * ((th1 - s + i - j) ** 2 - thinf ** 2) / den
    return out


# Cauchy form of a trinion weight.

def _grouped(entries):
    """Order (index, color) pairs: color + before -, |index| decreasing."""
    return sorted(entries, key=lambda e: (0 if e[1] == PLUS else 1, -abs(e[0])))


def _diag(tk, kind, p2, e):
    """Diagonal factor without powers of a, d_inf or signs; p2 = 2|p|."""
    th, s1, s2 = tk.theta, tk.s_in, tk.s_out
    k = (p2 - 1) // 2
    if kind == "in_particle":
        nums = [th + e * s1 + s2, th + e * s1 - s2]
        l, den = k + 1, pochhammer(2 * e * s1, k + 1)
    elif kind == "in_hole":
        nums = [1 - th - e * s1 + s2, 1 - th - e * s1 - s2]
        l, den = k, pochhammer(1 - 2 * e * s1, k)
    elif kind == "out_hole":
        nums = [th + s1 - e * s2, th - s1 - e * s2]
        l, den = k + 1, pochhammer(-2 * e * s2, k + 1)
    else:
        nums = [1 - th + s1 + e * s2, 1 - th - s1 + e * s2]
        l, den = k, pochhammer(1 + 2 * e * s2, k)
    den *= factorial(k)
    if abs(den) == 0:
        raise ResonanceError("vanishing Pochhammer denominator (%s)" % kind)
    return pochhammer(nums[0], l) * pochhammer(nums[1], l) / den


def z_trinion_cauchy(cfg_in, cfg_out, tk):
    """Trinion weight as diagonal Pochhammer factors times a Cauchy
    determinant. Rows are ordered p'_+, p'_-, q_+, q_-; columns q'_+, q'_-,
    p_+, p_-; each group decreasing."""
    th, s1, s2 = tk.theta, tk.s_in, tk.s_out
    xs, ys = [], []
    diag = 1.0 + 0j
    for p2, e in _grouped(cfg_in.I):
        xs.append(p2 / 2 + e * s1)
        diag *= _diag(tk, "in_particle", p2, e)
    for q2, e in _grouped(cfg_out.J):
        xs.append(q2 / 2 - th + e * s2)
        diag *= _diag(tk, "out_hole", -q2, e)
    for q2, e in _grouped(cfg_in.J):
        ys.append(q2 / 2 + e * s1)
        diag *= _diag(tk, "in_hole", -q2, e)
    for p2, e in _grouped(cfg_out.I):
        ys.append(p2 / 2 - th + e * s2)
        diag *= _diag(tk, "out_particle", p2, e)
    if len(xs) != len(ys):
        return 0j
    num = 1.0 + 0j
    for i in range(len(xs)):
        for j in range(i + 1, len(xs)):
            num *= (xs[i] - xs[j]) * (ys[j] - ys[i])
    den = 1.0 + 0j
    for x in xs:
        for y in ys:
            den *= x - y
    if abs(den) < 1e-300:
        raise ResonanceError("Cauchy denominator vanishes")
    return diag * num / den


# Nekrasov form of a trinion weight.

def _maya_halves(lam, Q):
    m = charged_to_maya(ChargedPartition(lam, Q))
    return [x / 2 for x in m.particles], [-x / 2 for x in m.holes]


def zbif_tilde(nu, Qp, Yp, Q, Y):
    """Z~_bif(nu | Q', Y'; Q, Y) written through particle and hole
    coordinates of the two Maya diagrams."""
    pp, qp = _maya_halves(Yp, Qp)
    p, q = _maya_halves(Y, Q)
    out = 1.0 + 0j
    for x in qp:
        out *= pochhammer(-nu, int(x + 0.5))
    for x in q:
        out *= pochhammer(nu + 1, int(x - 0.5))
    for x in p:
        out *= pochhammer(-nu, int(x + 0.5))
    for x in pp:
        out *= pochhammer(nu + 1, int(x - 0.5))
    for a in qp:
        for b in p:
            out *= nu - a - b
        for b in q:
            out /= nu - a + b
    for a in pp:
        for b in q:
            out *= nu + a + b
        for b in p:
            out /= nu + a - b
    return out


def zbif_tilde_sign(Qp, Yp, Q, Y):
    """Sign relating Z~_bif to C(nu|Q'-Q) Z_bif(nu+Q'-Q|Y',Y): the parity
    of sum(q'_i + 1/2) + sum(p_i + 1/2)."""
    _, qp = _maya_halves(Yp, Qp)
    p, _ = _maya_halves(Y, Q)
    s = sum(int(x + 0.5) for x in qp) + sum(int(x + 0.5) for x in p)
    return -1 if s % 2 else 1


def lsgn(cfg):
    """Logarithmic sign |q_+| |p_+| + sum (q_+ + 1/2) + sum (p_- + 1/2), mod 2."""
    pp = [x for x, c in cfg.I if c == PLUS]
    qp = [x for x, c in cfg.J if c == PLUS]
    pm = [x for x, c in cfg.I if c == MINUS]
    s = len(qp) * len(pp) + sum((-x + 1) // 2 for x in qp) + sum((x + 1) // 2 for x in pm)
    return s % 2


def _eta_shifts(tk):
    th, s1, s2 = tk.theta, tk.s_in, tk.s_out
    dpr = ((th + s1) ** 2 - s2 ** 2) / (2 * s1 * ((th - s1) ** 2 - s2 ** 2))
    d = -((th + s2) ** 2 - s1 ** 2) / (2 * s2 * ((th - s2) ** 2 - s1 ** 2))
    return dpr, d


def zhat(cfg_in, cfg_out, tk):
    """Trinion weight through C factors and Z_bif at shifted arguments."""
    ypi, ymi, mi = cfg_in.charged()
    ypo, ymo, mo = cfg_out.charged()
    th, s1, s2 = tk.theta, tk.s_in, tk.s_out
    sp = (s1, -s1)
    so = (-th + s2, -th - s2)
    Qp = (mi, -mi)
    Qo = (mo, -mo)
    Yp = (ypi, ymi)
    Yo = (ypo, ymo)
    out = 1.0 + 0j
    for a in range(2):
        for b in range(2):
            out *= c_three_point(sp[a] - so[b], Qp[a] - Qo[b])
            out *= zbif(sp[a] + Qp[a] - so[b] - Qo[b], Yp[a], Yo[b])
    out /= c_three_point(sp[0] - sp[1], Qp[0] - Qp[1]) * c_three_point(so[0] - so[1], Qo[0] - Qo[1])
    out /= zbif(sp[0] + Qp[0] - sp[1] - Qp[1], Yp[0], Yp[1])
    out /= zbif(so[0] + Qo[0] - so[1] - Qo[1], Yo[0], Yo[1])
    for y in Yp + Yo:
        out /= hook_product(y)
    dpr, d = _eta_shifts(tk)
    return out * dpr ** mi * d ** mo


# PVI series.

@dataclass
class SeriesTerm:
    """coefficient * t**exponent; config is (n, lam, mu)."""
    config: tuple
    exponent: complex
    coefficient: complex


def reduce_sigma(sigma):
    """(sigma0, shift) with sigma = sigma0 + shift and Re sigma0 in (-1/2, 1/2]."""
    s = complex(sigma)
    shift = math.ceil(s.real - 0.5)
    return s - shift, shift


def n_weight(thetas, sigma0, j):
    """N(sigma0 + j) / N(sigma0) for the Barnes G normalization of a
    charge sector."""
    th0, tht, th1, thinf = thetas
    s = complex(sigma0)
    out = 1.0 + 0j
    for c in (th1 + thinf, -(th1 + thinf), th0 + tht, -(th0 + tht)):
        out *= barnes_g_ratio(s + c, j)
    for c in (th1 - thinf, -(th1 - thinf), th0 - tht, -(th0 - tht)):
        out *= barnes_g_ratio(-s + c, -j)
    out /= barnes_g_ratio(2 * s, 2 * j) * barnes_g_ratio(-2 * s, -2 * j)
    return out


def _pairs_upto(W):
    out = []
    for w in range(W + 1):
        for a in range(w + 1):
            for lam in partitions_of(a):
                for mu in partitions_of(w - a):
                    out.append((lam, mu))
    return out


def pvi_sectors(sigma, W, nmax, n_range=None):
    """Charge sectors n kept by the joint window: sigma + n = sigma0 + j with
    |j| <= nmax (or n in n_range) and Re((sigma+n)^2 - sigma0^2) <= W."""
    s0, shift = reduce_sigma(sigma)
    if n_range is not None:
        ns = list(n_range)
    else:
        ns = [j - shift for j in range(-nmax, nmax + 1)]
    return [n for n in ns if ((sigma + n) ** 2 - s0 ** 2).real <= W + 1e-12]


def pvi_series_terms(params, W, nmax, n_range=None):
    """Terms of sum_n e^{i n eta'} N(sigma+n)/N(sigma0) t^{(sigma+n)^2 -
    theta0^2 - thetat^2} sum B_{lam,mu}(sigma+n) t^{|lam|+|mu|}; the factor
    (1-t)^{2 thetat theta1} is kept apart."""
    if W < 0 or nmax < 0:
        raise ValueError("W and nmax must be non-negative")
    p = params
    s0, shift = reduce_sigma(p.sigma)
    pairs = _pairs_upto(W)
    base = -p.theta0 ** 2 - p.thetat ** 2
    terms = []
    for n in pvi_sectors(p.sigma, W, nmax, n_range):
        s = p.sigma + n
        c = cmath.exp(1j * n * p.eta_prime) * n_weight(p.thetas, s0, n + shift)
        for lam, mu in pairs:
            b = b_pvi(p.thetas, s, lam, mu)
            terms.append(SeriesTerm((n, lam, mu), s * s + base + lam.weight + mu.weight, c * b))
    return terms


def eval_terms(terms, t, order=0):
    """Values of S, S', ..., S^(order) for S = sum c t^e."""
    e = np.array([x.exponent for x in terms], dtype=complex)
    c = np.array([x.coefficient for x in terms], dtype=complex)
    lt = math.log(t)
    pw = c * np.exp(e * lt)
    out = [complex(pw.sum())]
    fall = np.ones_like(e)
    for k in range(1, order + 1):
        fall = fall * (e - (k - 1))
        out.append(complex((fall * pw).sum()) / t ** k)
    return out


def tau_series_pvi(params, W, nmax, n_range=None, t=None):
    """Series tau with relative Barnes G weights between charge sectors."""
    t = params.t if t is None else t
    terms = pvi_series_terms(params, W, nmax, n_range)
    S = eval_terms(terms, t)[0]
    kappa = 2 * params.thetat * params.theta1
    val = _rpow(1.0 - t, kappa) * S
    top = [x for x in terms if x.config[1].weight + x.config[2].weight == W]
    err = abs(_rpow(1.0 - t, kappa) * eval_terms(top, t)[0]) if top else float("nan")
    return TauResult(val, err, {"W": W, "nmax": nmax, "t": t, "terms": len(terms)})


# Garnier series.

def garnier_series_configs(g, W, nmax):
    per = annulus_configs(W, nmax)
    return itertools.product(per, repeat=g.n - 3)


def tau_series_garnier(g, W, nmax, form="cauchy"):
    """Charge-lattice sum of trinion products; each annulus carries
    |Y+| + |Y-| + m^2 <= W and |m| <= nmax."""
    z = z_trinion_cauchy if form == "cauchy" else zhat
    na = g.n - 3
    tks = {k: trinion_from_garnier(g, k) for k in range(1, g.n - 1)}
    cache = {}
    total = 0j
    for combo in garnier_series_configs(g, W, nmax):
        w = 1.0 + 0j
        for k, c in enumerate(combo, start=1):
            yp, ym, m = c.charged()
            s = g.sigma(k)
            w *= cmath.exp(1j * m * g.etas[k - 1]) * _rpow(g.a(k) / g.a(k + 1), (s + m) ** 2 + yp.weight + ym.weight)
        for k in range(1, g.n - 1):
            cin = combo[k - 2] if k >= 2 else EMPTY_ANNULUS
            cout = combo[k - 1] if k <= na else EMPTY_ANNULUS
            key = (k, cin, cout)
            if key not in cache:
                cache[key] = z(cin, cout, tks[k])
            w *= cache[key]
            if w == 0:
                break
        total += w
    return TauResult(garnier_prefactor(g) * total, float("nan"), {"W": W, "nmax": nmax, "form": form})


def eta_shift_factor(params):
    """r with e^{i eta'} = r e^{i eta}: the ratio of the charge-one vacuum
    sectors of the trinion products (at eta = 0) to N(sigma+1)/N(sigma)."""
    from .kernel3pt import pvi_trinions
    L, R = pvi_trinions(params.replace(eta=0j))
    s0, shift = reduce_sigma(params.sigma)
    c = annulus_from_charged(Partition(), Partition(), 1)
    z = zhat(EMPTY_ANNULUS, c, L) * zhat(c, EMPTY_ANNULUS, R)
    return z * n_weight(params.thetas, s0, shift) / n_weight(params.thetas, s0, shift + 1)


def eta_prime_from_eta(params):
    return params.eta - 1j * cmath.log(eta_shift_factor(params))


# Series for the continuous 2F1 kernel (theta0 = sigma, thetat = 0).
# With theta0 = sigma + eps the charge-n sector carries a zero of order
# >= n in eps, while e^{i eta'} ~ 1/eps; only terms of exact order n survive.

def _near_nonpositive_int(z, tol=1e-12):
    z = complex(z)
    if abs(z.imag) > tol or z.real > tol:
        return None
    m = round(-z.real)
    return m if abs(z.real + m) < tol else None


def _gamma_eps(z0, s, inverse):
    """Leading (coefficient, order) of Gamma(z0 + s eps)^{+-1} as eps -> 0."""
    m = _near_nonpositive_int(z0)
    if m is None:
        g = gamma(z0)
        return (1 / g if inverse else g), 0
    c = (-1) ** m * math.factorial(m) * s
    return (c, 1) if inverse else (1 / c, -1)


def _g_ratio_eps(nu0, s, k):
    """barnes_g_ratio(nu0 + s eps, k) to leading order in eps."""
    coef, order = 1.0 + 0j, 0
    if k >= 0:
        for j in range(k):
            c, o = _gamma_eps(1 + nu0 + j, s, False)
            coef, order = coef * c, order + o
    else:
        for j in range(1, -k + 1):
            c, o = _gamma_eps(1 + nu0 - j, s, True)
            coef, order = coef * c, order + o
    return coef, order


def hyp_sector_weight(theta1, thetainf, sigma, n):
    """Leading (coefficient, order) of N(sigma+n)/N(sigma) at theta0 = sigma + eps,
    thetat = 0."""
    s = complex(sigma)
    coef, order = 1.0 + 0j, 0
    for nu0, e, k in ((2 * s, 1, n), (0j, -1, n), (0j, 1, -n), (-2 * s, -1, -n)):
        c, o = _g_ratio_eps(nu0, e, k)
        coef, order = coef * c, order + o
    for c in (theta1 + thetainf, -(theta1 + thetainf)):
        coef *= barnes_g_ratio(s + c, n)
    for c in (theta1 - thetainf, -(theta1 - thetainf)):
        coef *= barnes_g_ratio(-s + c, -n)
    coef /= barnes_g_ratio(2 * s, 2 * n) * barnes_g_ratio(-2 * s, -2 * n)
    return coef, order


def b_hyp(theta1, thetainf, sigma, n, lam, mu):
    """Leading (coefficient, order) of B_{lam,mu}(sigma+n) at theta0 = sigma + eps,
    thetat = 0."""
    s = complex(sigma) + n
    coef, order = 1.0 + 0j, 0
    for i, j in lam.boxes():
        h = hook_arm_leg(lam, i, j)[2]
        x = n + i - j
        if x == 0:
            coef *= -2 * complex(sigma)
            order += 1
        else:
            coef *= x * (2 * sigma + x)
        coef *= ((theta1 + s + i - j) ** 2 - thetainf ** 2)
        coef /= h * h * (lam.col(j) - i + mu.row(i) - j + 1 + 2 * s) ** 2
    for i, j in mu.boxes():
        h = hook_arm_leg(mu, i, j)[2]
        x = -n + i - j
        if x == 0:
            coef *= -2 * complex(sigma)
            order += 1
        else:
            coef *= x * (x - 2 * sigma)
        coef *= ((theta1 - s + i - j) ** 2 - thetainf ** 2)
        coef /= h * h * (mu.col(j) - i + lam.row(i) - j + 1 - 2 * s) ** 2
    return coef, order


def hyp_series_terms(theta1, thetainf, sigma, W):
    """Surviving terms (n, lam, mu), exponent 2 sigma n + n^2 + |lam| + |mu|,
    with coefficients normalized so that e^{i eta'} eps -> 1."""
    sigma = complex(sigma)
    pairs = _pairs_upto(W)
    terms = []
    n = 0
    while (2 * sigma * n + n * n).real <= W:
        cn, on = hyp_sector_weight(theta1, thetainf, sigma, n)
        for lam, mu in pairs:
            cb, ob = b_hyp(theta1, thetainf, sigma, n, lam, mu)
            if on + ob == n:
                e = 2 * sigma * n + n * n + lam.weight + mu.weight
                terms.append(SeriesTerm((n, lam, mu), e, cn * cb))
        n += 1
    return terms


def tau_series_hyp(theta1, thetainf, sigma, lam, t, W=12):
    """Series for det(1 - lam K) of the 2F1 kernel; the sector weight rho^n is
    fixed by the leading behaviour 1 - lam t^{1+2 sigma}/(1+2 sigma)."""
    terms = hyp_series_terms(theta1, thetainf, sigma, W)
    lead = [x for x in terms if x.config[0] == 1 and x.config[1].weight + x.config[2].weight == 0]
    if not lead:
        raise ResonanceError("charge-one sector has no leading term")
    rho = -lam / (1 + 2 * complex(sigma)) / lead[0].coefficient
    scaled = [SeriesTerm(x.config, x.exponent, x.coefficient * rho ** x.config[0]) for x in terms]
    return TauResult(eval_terms(scaled, t)[0], float("nan"), {"W": W, "rho": rho, "terms": len(terms)})
