"""Command line front end.

Every command reads a JSON config, evaluates on a t-grid and writes
<command>.csv and <command>.json into the output directory.
Exit codes: 1 malformed config, 2 genericity violation, 3 numerical failure.
"""

import argparse
import csv
import json
import os
import sys
import time
import warnings

import numpy as np

from .checks import (cross_check, fredholm_log_derivative, grid_map, jimbo_check, report_json,
                     series_zeta, sigma_pvi_sides)
from .combinat import annulus_configs
from .errors import GenericityError, IsotauError
from .fredholm import tau_fredholm_garnier, tau_fredholm_pvi, tau_hyp_kernel
from .kernel3pt import TrinionKernel
from .monodromy import GENERIC_TOL, GarnierParams, PVIParams, validate
from .nekrasov import (eta_prime_from_eta, eval_terms, lsgn, pvi_series_terms, tau_series_garnier,
                       tau_series_hyp, tau_series_pvi, z_trinion_cauchy, zhat)

COMMANDS = ("tau-fredholm", "tau-series", "tau-garnier", "cross-check", "sigma-residual",
            "jimbo", "appendix-identity", "hyp-kernel")
CSV_COLUMNS = ("t", "re_tau", "im_tau", "re_dlogtau", "im_dlogtau", "trunc_err_est")


class ConfigError(Exception):
    pass


def parse_complex(v, name):
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2 and all(isinstance(x, (int, float)) for x in v):
        return complex(v[0], v[1])
    raise ConfigError("field %r must be a number or a [re, im] pair" % name)


def parse_grid(spec):
    """'t0:t1:steps' -> list of floats (steps points, endpoints included)."""
    try:
        a, b, n = spec.split(":")
        a, b, n = float(a), float(b), int(n)
    except (ValueError, AttributeError):
        raise ConfigError("grid must look like t0:t1:steps, got %r" % (spec,))
    if n < 1:
        raise ConfigError("grid needs at least one step")
    if n == 1:
        return [a]
    return [a + (b - a) * k / (n - 1) for k in range(n)]


def load_config(path):
    if path is None:
        return {}
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except OSError as e:
        raise ConfigError("cannot read config: %s" % e)
    except json.JSONDecodeError as e:
        raise ConfigError("config is not valid JSON: %s" % e)
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    return cfg


def pvi_from_config(cfg, tol=GENERIC_TOL):
    d = cfg.get("pvi")
    if not isinstance(d, dict):
        raise ConfigError("missing 'pvi' block")
    kw = {}
    for k in ("theta0", "thetat", "theta1", "thetainf", "sigma"):
        if k not in d:
            raise ConfigError("pvi block lacks %r" % k)
        kw[k] = parse_complex(d[k], k)
    kw["eta"] = parse_complex(d.get("eta", 0), "eta")
    p = PVIParams(**kw)
    ep = d.get("eta_prime", "analytic")
    if ep == "analytic":
        # the analytic map needs the Fredholm genericity conditions
        _check_generic(p, "fredholm", tol)
        p = p.replace(eta_prime=eta_prime_from_eta(p))
    else:
        p = p.replace(eta_prime=parse_complex(ep, "eta_prime"))
    return p


def garnier_from_config(cfg):
    d = cfg.get("garnier")
    if not isinstance(d, dict):
        raise ConfigError("missing 'garnier' block")
    try:
        th = [parse_complex(x, "thetas") for x in d["thetas"]]
        sg = [parse_complex(x, "sigmas") for x in d["sigmas"]]
        et = [parse_complex(x, "etas") for x in d.get("etas", [0] * len(sg))]
        tm = [float(x) for x in d["times"]]
        return GarnierParams(th, sg, et, tm)
    except (KeyError, TypeError) as e:
        raise ConfigError("bad garnier block: %s" % e)
    except ValueError as e:
        raise ConfigError(str(e))


def hyp_from_config(cfg):
    d = cfg.get("hyp")
    if not isinstance(d, dict):
        raise ConfigError("missing 'hyp' block")
    try:
        return {k: parse_complex(d[k], k) for k in ("theta1", "thetainf", "sigma", "lam")}
    except KeyError as e:
        raise ConfigError("hyp block lacks %s" % e)


def _trunc(cfg, args):
    tr = cfg.get("truncation", {})
    if not isinstance(tr, dict):
        raise ConfigError("'truncation' must be an object")
    out = {}
    for k, default in (("Q", 8), ("W", 8), ("nmax", 2)):
        v = getattr(args, k)
        v = tr.get(k, default) if v is None else v
        if not isinstance(v, int) or v < 0:
            raise ConfigError("truncation %s must be a non-negative integer" % k)
        out[k] = v
    return out


def _grid(cfg, args):
    if args.grid:
        return parse_grid(args.grid)
    g = cfg.get("grid", [0.05, 0.25, 5])
    if isinstance(g, str):
        return parse_grid(g)
    if isinstance(g, list) and len(g) == 3 and isinstance(g[2], int):
        return parse_grid("%r:%r:%d" % (float(g[0]), float(g[1]), g[2]))
    raise ConfigError("grid must be 't0:t1:steps' or [t0, t1, steps]")


def _check_generic(params, route, tol):
    bad = validate(params, tol, route) if isinstance(params, PVIParams) else validate(params, tol)
    if bad:
        raise GenericityError(bad)


def _row(t, tau, dlog, err):
    return [repr(float(t)), repr(float(tau.real)), repr(float(tau.imag)),
            repr(float(dlog.real)), repr(float(dlog.imag)), repr(float(err))]


def write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


# commands: each returns (header, rows, meta)

def cmd_tau_fredholm(cfg, args, tr, grid):
    p = pvi_from_config(cfg, args.tol)
    _check_generic(p, "fredholm", args.tol)
    Q = tr["Q"]

    def one(t):
        r = tau_fredholm_pvi(p, Q, t)
        return _row(t, r.value, fredholm_log_derivative(p, Q, t), r.trunc_err)

    return CSV_COLUMNS, grid_map(one, grid, args.threads), {"Q": Q}


def cmd_tau_series(cfg, args, tr, grid):
    p = pvi_from_config(cfg, args.tol)
    _check_generic(p, "series", args.tol)
    W, nmax = tr["W"], tr["nmax"]
    terms = pvi_series_terms(p, W, nmax)
    kappa = 2 * p.thetat * p.theta1

    def one(t):
        r = tau_series_pvi(p, W, nmax, t=t)
        S, S1 = eval_terms(terms, t, 1)
        return _row(t, r.value, S1 / S - kappa / (1 - t), r.trunc_err)

    meta = {"W": W, "nmax": nmax, "eta_prime": [p.eta_prime.real, p.eta_prime.imag]}
    return CSV_COLUMNS, grid_map(one, grid, args.threads), meta


def cmd_tau_garnier(cfg, args, tr, grid):
    """Grid values are a_{n-3}; the other times are scaled proportionally."""
    g = garnier_from_config(cfg)
    route = cfg.get("route", "fredholm")
    if route not in ("fredholm", "series"):
        raise ConfigError("route must be 'fredholm' or 'series'")

    def at(t):
        return g.replace(times=tuple(a * t / g.times[-1] for a in g.times))

    for t in grid:
        _check_generic(at(t), "fredholm", args.tol)

    def value(t):
        h = at(t)
        if route == "fredholm":
            r = tau_fredholm_garnier(h, tr["Q"])
        else:
            r = tau_series_garnier(h, tr["W"], tr["nmax"])
        return r

    def one(t):
        r = value(t)
        e = 1e-5 * t
        dlog = (value(t + e).value - value(t - e).value) / (2 * e) / r.value
        return _row(t, r.value, dlog, r.trunc_err)

    return CSV_COLUMNS, grid_map(one, grid, args.threads), {"route": route, **tr}


def cmd_cross_check(cfg, args, tr, grid):
    """tau column holds tau_F / tau_series, dlog column the difference of
    the two log-derivatives."""
    p = pvi_from_config(cfg, args.tol)
    _check_generic(p, "fredholm", args.tol)
    rep = cross_check(p, grid, tr["Q"], tr["W"], tr["nmax"], eta_prime=p.eta_prime, threads=args.threads)
    terms = pvi_series_terms(p, tr["W"], tr["nmax"])
    kappa = 2 * p.thetat * p.theta1
    rows = []
    for t, r in zip(grid, rep["ratio"]):
        S, S1 = eval_terms(terms, t, 1)
        ds = S1 / S - kappa / (1 - t)
        df = fredholm_log_derivative(p, tr["Q"], t)
        err = tau_series_pvi(p, tr["W"], tr["nmax"], t=t).trunc_err
        rows.append(_row(t, r, df - ds, err))
    meta = {"deviation": rep["deviation"], "passed": rep["deviation"] <= args.tol,
            "report": json.loads(report_json(rep))}
    return CSV_COLUMNS, rows, meta


def cmd_sigma_residual(cfg, args, tr, grid):
    """Series tau on the grid; residuals of the sigma form go to the JSON."""
    p = pvi_from_config(cfg, args.tol)
    _check_generic(p, "series", args.tol)
    W, nmax = tr["W"], tr["nmax"]
    rows, res = [], []
    for t in grid:
        z, z1, z2 = series_zeta(p, W, t, nmax)
        lhs, rhs = sigma_pvi_sides(p, z, z1, z2, t)
        res.append(abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1.0))
        r = tau_series_pvi(p, W, nmax, t=t)
        rows.append(_row(t, r.value, z / (t * (t - 1)), r.trunc_err))
    return CSV_COLUMNS, rows, {"W": W, "nmax": nmax, "residuals": res, "max_residual": max(res)}


def cmd_jimbo(cfg, args, tr, grid):
    p = pvi_from_config(cfg, args.tol)
    _check_generic(p, "fredholm", args.tol)
    rows, reps = [], []
    for t in grid:
        rep = jimbo_check(p, t, tr["Q"])
        reps.append({"t": t, "discrepancy": rep["discrepancy"], "discrepancy_half": rep["discrepancy_half"],
                     "ratio": rep["ratio"]})
        rows.append(_row(t, rep["tau"], fredholm_log_derivative(p, tr["Q"], t), rep["discrepancy"]))
    return CSV_COLUMNS, rows, {"Q": tr["Q"], "jimbo": reps}


def cmd_appendix_identity(cfg, args, tr, grid):
    """Exhaustive scan of the trinion identity; its CSV lists every pair."""
    d = cfg.get("trinion", {"s_in": [0.21, 0.07], "theta": [0.13, -0.05], "s_out": [0.27, 0.04]})
    try:
        tk = TrinionKernel(parse_complex(d["s_in"], "s_in"), parse_complex(d["theta"], "theta"),
                           parse_complex(d["s_out"], "s_out"), 0.5, 0.0, 1.0, 1.0)
    except KeyError as e:
        raise ConfigError("trinion block lacks %s" % e)
    maxw = args.max_weight
    configs = annulus_configs(maxw, 2)
    rows, bad, worst = [], 0, 0.0
    for i, ci in enumerate(configs):
        for j, co in enumerate(configs):
            if ci.weight + co.weight > maxw:
                continue
            a = z_trinion_cauchy(ci, co, tk)
            b = (-1) ** (lsgn(ci) + lsgn(co)) * zhat(ci, co, tk)
            err = abs(a - b) / max(abs(a), 1e-300)
            worst = max(worst, err)
            bad += err > args.tol
            rows.append([str(i), str(j), repr(err)])
    meta = {"max_weight": maxw, "pairs": len(rows), "mismatches": int(bad), "max_rel_err": worst}
    return ("config_in", "config_out", "rel_err"), rows, meta


def cmd_hyp_kernel(cfg, args, tr, grid):
    h = hyp_from_config(cfg)
    nodes = int(cfg.get("nodes", 64))

    def one(t):
        d = tau_hyp_kernel(h["theta1"], h["thetainf"], h["sigma"], h["lam"], t, nodes, check=False)
        d2 = tau_hyp_kernel(h["theta1"], h["thetainf"], h["sigma"], h["lam"], t, 2 * nodes, check=False)
        e = 1e-5 * t
        dp = tau_hyp_kernel(h["theta1"], h["thetainf"], h["sigma"], h["lam"], t + e, nodes, check=False)
        dm = tau_hyp_kernel(h["theta1"], h["thetainf"], h["sigma"], h["lam"], t - e, nodes, check=False)
        return _row(t, d, (dp - dm) / (2 * e) / d, abs(d2 - d))

    rows = grid_map(one, grid, args.threads)
    W = tr["W"] if args.W is not None else 12
    ratios = []
    for t, r in zip(grid, rows):
        s = tau_series_hyp(h["theta1"], h["thetainf"], h["sigma"], h["lam"], t, W).value
        ratios.append(complex(float(r[1]), float(r[2])) / s)
    ratios = np.array(ratios)
    dev = float(np.max(np.abs(ratios - ratios.mean())) / abs(ratios.mean()))
    return CSV_COLUMNS, rows, {"nodes": nodes, "W": W, "series_ratio_deviation": dev}


HANDLERS = {
    "tau-fredholm": cmd_tau_fredholm, "tau-series": cmd_tau_series, "tau-garnier": cmd_tau_garnier,
    "cross-check": cmd_cross_check, "sigma-residual": cmd_sigma_residual, "jimbo": cmd_jimbo,
    "appendix-identity": cmd_appendix_identity, "hyp-kernel": cmd_hyp_kernel,
}


def build_parser():
    ap = argparse.ArgumentParser(prog="isotau", description="Isomonodromic tau functions of PVI and Garnier systems.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config", help="JSON config file")
    ap.add_argument("--out", default=".", help="output directory")
    ap.add_argument("--Q", type=int, help="Fredholm window")
    ap.add_argument("--W", type=int, help="series weight cut")
    ap.add_argument("--nmax", type=int, help="charge sectors")
    ap.add_argument("--grid", help="t0:t1:steps")
    ap.add_argument("--tol", type=float, default=1e-6, help="genericity and pass tolerance")
    ap.add_argument("--threads", type=int, help="worker threads (default $ISOTAU_THREADS or 1)")
    ap.add_argument("--max-weight", type=int, default=4, help="appendix-identity weight cut")
    return ap


def _write_meta(path, meta):
    with open(path, "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True, default=str)
        fh.write("\n")


def run(argv=None):
    args = build_parser().parse_args(argv)
    os.makedirs(args.out, exist_ok=True)
    base = os.path.join(args.out, args.command)
    meta = {"command": args.command, "config": args.config, "tol": args.tol}
    t0 = time.perf_counter()
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            cfg = load_config(args.config)
            tr = _trunc(cfg, args)
            grid = _grid(cfg, args)
            meta.update(truncation=tr, grid=grid, seed=cfg.get("seed"))
            header, rows, extra = HANDLERS[args.command](cfg, args, tr, grid)
        except ConfigError as e:
            print("isotau: malformed config: %s" % e, file=sys.stderr)
            return 1
        except GenericityError as e:
            meta.update(error="genericity", violations=e.violations)
            _write_meta(base + ".json", meta)
            print("isotau: genericity violation: %s" % e, file=sys.stderr)
            return 2
        except (IsotauError, ArithmeticError, np.linalg.LinAlgError, ValueError) as e:
            meta.update(error="numerical", message="%s: %s" % (type(e).__name__, e))
            _write_meta(base + ".json", meta)
            print("isotau: numerical failure: %s" % e, file=sys.stderr)
            return 3
    bad = [r for r in rows if any(x in ("nan", "inf", "-inf") for x in r[1:])]
    meta.update(extra)
    meta["timing_s"] = round(time.perf_counter() - t0, 6)
    meta["warnings"] = [str(w.message) for w in caught]
    write_csv(base + ".csv", header, rows)
    if bad and args.command != "appendix-identity":
        meta.update(error="numerical", message="non-finite values in %d rows" % len(bad))
        _write_meta(base + ".json", meta)
        return 3
    _write_meta(base + ".json", meta)
    return 0


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
