"""Command-line front end.

Every command writes a table (CSV or JSON) to ``--out`` or stdout.  Exit codes:
0 on success, 2 on invalid parameters, 3 when a numerical routine fails to
converge.  ``FRACPSEUDO_THREADS`` bounds the number of worker threads.
"""

from __future__ import annotations

import argparse
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__, fracops, invert, sojourn, specfun, symbols, walks
from .errors import ComputationError, DomainError
from .invert import GridSpec
from .symbols import ModelParams

DEFAULTS = {
    "t": 1.0,
    "beta": 0.5,
    "k": 1,
    "p": 0.7,
    "theta": 0.25,
    "xmin": -10.0,
    "xmax": 10.0,
    "n": 401,
    "ximax": 5.0,
    "nxi": 41,
    "gammas": "0.5,0.1,0.02,0.004",
    "threshold": 1e-2,
    "mc_n": 100000,
    "seed": 0,
    "scale_gamma": 0.1,
    "dt": 1e-3,
    "h": 1e-2,
    "sojourn_xmin": 0.01,
    "sojourn_xmax": 10.0,
    "sojourn_n": 50,
}

COLUMNS = {
    "density": ("x", "t", "value"),
    "cf": ("xi", "t", "re", "im"),
    "symbols": ("xi", "re", "im"),
    "converge": ("gamma", "sup_error"),
    "mc": ("xi", "re", "im", "stderr", "n", "seed"),
    "residual": ("max_norm", "l2_norm", "n_points", "skipped"),
    "sojourn": ("x", "t", "value"),
    "specfun": ("x", "value"),
}


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("FRACPSEUDO_THREADS", "1")))
    except ValueError:
        return 1


def _pmap(fn, xs):
    """Map in index order; scheduling never affects the output order."""
    xs = list(xs)
    if _threads() == 1 or len(xs) < 2:
        return [fn(x) for x in xs]
    with ThreadPoolExecutor(_threads()) as pool:
        return list(pool.map(fn, xs))


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise DomainError(f"expected a comma-separated list of numbers, got {text!r}") from exc


def _model(args, parity=None) -> ModelParams:
    parity = parity or args.parity or ("odd" if args.family == "odd_pq" else "even")
    return ModelParams(args.beta, args.k, parity, p=args.p, theta=args.theta)


def _xgrid(args) -> GridSpec:
    return GridSpec(args.xmin, args.xmax, args.n)


def _xi_grid(args) -> np.ndarray:
    return np.linspace(-args.ximax, args.ximax, args.nxi)


# ---------------------------------------------------------------- commands


def cmd_density(args):
    xs = _xgrid(args).points()
    if args.family is not None:
        m = _model(args)
        vals = invert.density_grid(m, args.family, xs, args.t)
        return [(x, args.t, v) for x, v in zip(xs, vals)], {}
    routes = {
        "cosine": lambda x: invert.density_cosine(args.gamma, x, args.t),
        "series": lambda x: invert.density_series_or_cosine(args.gamma, x, args.t),
        "ml": lambda x: invert.density_ml_integral(args.gamma, x, args.t),
        "probabilistic": lambda x: invert.density_probabilistic(
            ModelParams(args.gamma / (2 * args.k), args.k, "even"), x, args.t
        ),
    }
    vals = _pmap(routes[args.route], xs)
    return [(x, args.t, v) for x, v in zip(xs, vals)], {"tolerance": invert.DENSITY_ATOL}


def cmd_cf(args):
    m = _model(args)
    xi = _xi_grid(args)
    if args.scale_gamma is None:
        vals = symbols.limit_cf(m, args.family, xi, args.t)
    else:
        vals = walks.prelimit_cf(walks.WalkParams(args.scale_gamma, m), args.family, xi, args.t)
    return [(x, args.t, v.real, v.imag) for x, v in zip(xi, vals)], {}


def cmd_symbols(args):
    xi = _xi_grid(args)
    op = args.operator
    if op in ("weyl_plus", "weyl_minus"):
        vals = symbols.weyl_symbol(args.gamma, op.split("_")[1], xi)
    elif op == "riesz":
        vals = symbols.riesz_symbol(args.gamma, xi) + 0j
    elif op == "feller":
        vals = symbols.feller_symbol(args.gamma, args.theta, xi).value
    else:
        vals = symbols.rfrak_symbol(_model(args, "odd"), xi)
    return [(x, v.real, v.imag) for x, v in zip(xi, np.asarray(vals))], {}


def cmd_converge(args):
    m = _model(args)
    rep = walks.convergence_report(m, args.family, _xi_grid(args), _floats(args.gammas), args.t, args.threshold)
    meta = {"decreasing": rep.decreasing, "passed": rep.passed, "threshold": rep.threshold}
    return list(zip(rep.gammas, rep.sup_errors)), meta


def cmd_mc(args):
    m = _model(args)
    w = walks.WalkParams(args.scale_gamma, m)
    rows = []
    for x in _floats(args.xi):
        est = walks.mc_walk_cf(w, args.family, x, args.t, args.samples, args.seed)
        rows.append((x, est.value.real, est.value.imag, est.std_error, est.n_samples, est.seed))
    return rows, {"max_stderr": max(r[3] for r in rows)}


def cmd_residual(args):
    m = _model(args)
    n = int(round((args.xmax - args.xmin) / args.h)) + 1
    rep = fracops.pde_residual(m, args.family, args.t, args.dt, GridSpec(args.xmin, args.xmax, n), args.window)
    return [(rep.max_norm, rep.l2_norm, rep.n_points, int(rep.skipped))], {"reason": rep.reason}


def cmd_sojourn(args):
    grid = GridSpec(args.xmin, args.xmax, args.n, spacing="log")
    xs = grid.points()
    if args.kind == "half_closed":
        fn = lambda x: sojourn.sojourn_half_closed(args.t, x)  # noqa: E731
    else:
        params = sojourn.SojournParams(args.beta, args.k, args.kind, args.t)
        dens = sojourn.sojourn_even_density if args.kind == "even" else sojourn.sojourn_odd_density
        fn = lambda x: dens(params, x)  # noqa: E731
    return [(x, args.t, v) for x, v in zip(xs, _pmap(fn, xs))], {}


def cmd_specfun(args):
    xs = _xgrid(args).points()
    if args.function == "ml":
        ml = specfun.MLParams(args.nu, args.mu)
        vals = [specfun.mittag_leffler(ml, x) for x in xs]
    elif args.function == "airy":
        vals = [specfun.airy_ai(x) for x in xs]
    else:
        if np.any(xs <= 0):
            raise DomainError("subordinator density needs x > 0")
        vals = specfun.subordinator_density(specfun.SubordinatorParams(args.beta), xs, args.t)
    return list(zip(xs, vals)), {}


COMMANDS = {
    "density": cmd_density,
    "cf": cmd_cf,
    "symbols": cmd_symbols,
    "converge": cmd_converge,
    "mc": cmd_mc,
    "residual": cmd_residual,
    "sojourn": cmd_sojourn,
    "specfun": cmd_specfun,
}


# ---------------------------------------------------------------- parsing and output


def _add_model(p, family_default=None, family_required=False):
    p.add_argument("--family", choices=symbols.FAMILIES, default=family_default, required=family_required)
    p.add_argument("--parity", choices=("even", "odd"), default=None)
    p.add_argument("--beta", type=float, default=DEFAULTS["beta"])
    p.add_argument("--k", type=int, default=DEFAULTS["k"])
    p.add_argument("--p", type=float, default=DEFAULTS["p"])
    p.add_argument("--theta", type=float, default=DEFAULTS["theta"])


def _add_xgrid(p, xmin=DEFAULTS["xmin"], xmax=DEFAULTS["xmax"], n=DEFAULTS["n"]):
    p.add_argument("--xmin", type=float, default=xmin)
    p.add_argument("--xmax", type=float, default=xmax)
    p.add_argument("--n", type=int, default=n)


def _add_xi(p):
    p.add_argument("--ximax", type=float, default=DEFAULTS["ximax"])
    p.add_argument("--nxi", type=int, default=DEFAULTS["nxi"])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fracpseudo", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def cmd(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--out", default="-", help="output path, '-' for stdout")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--t", type=float, default=DEFAULTS["t"])
        return p

    p = cmd("density", "signed density on a grid")
    p.add_argument("--gamma", type=float, default=4.0)
    p.add_argument("--route", choices=("cosine", "series", "ml", "probabilistic"), default="cosine")
    _add_model(p)
    _add_xgrid(p)

    p = cmd("cf", "limit or pre-limit characteristic function")
    _add_model(p, family_required=True)
    _add_xi(p)
    p.add_argument("--scale-gamma", type=float, default=None)

    p = cmd("symbols", "operator multipliers")
    p.add_argument("--operator", choices=("weyl_plus", "weyl_minus", "riesz", "feller", "rfrak"), required=True)
    p.add_argument("--gamma", type=float, default=1.5)
    _add_model(p)
    _add_xi(p)

    p = cmd("converge", "walk CF convergence table")
    _add_model(p, family_required=True)
    _add_xi(p)
    p.add_argument("--gammas", default=DEFAULTS["gammas"])
    p.add_argument("--threshold", type=float, default=DEFAULTS["threshold"])

    p = cmd("mc", "Monte Carlo walk CF")
    _add_model(p, family_required=True)
    p.add_argument("--xi", default="1.0", help="comma-separated frequencies")
    p.add_argument("--scale-gamma", type=float, default=DEFAULTS["scale_gamma"])
    p.add_argument("--samples", type=int, default=DEFAULTS["mc_n"])
    p.add_argument("--seed", type=int, default=DEFAULTS["seed"])

    p = cmd("residual", "PDE residual of a density")
    _add_model(p, family_required=True)
    _add_xgrid(p)
    p.add_argument("--h", type=float, default=DEFAULTS["h"])
    p.add_argument("--dt", type=float, default=DEFAULTS["dt"])
    p.add_argument("--window", type=float, default=None)

    p = cmd("sojourn", "sojourn-time density on a log grid")
    p.add_argument("--kind", choices=("even", "odd", "half_closed"), default="even")
    p.add_argument("--beta", type=float, default=DEFAULTS["beta"])
    p.add_argument("--k", type=int, default=DEFAULTS["k"])
    _add_xgrid(p, DEFAULTS["sojourn_xmin"], DEFAULTS["sojourn_xmax"], DEFAULTS["sojourn_n"])

    p = cmd("specfun", "special functions on a grid")
    p.add_argument("--function", choices=("ml", "airy", "subordinator"), required=True)
    p.add_argument("--nu", type=float, default=1.0)
    p.add_argument("--mu", type=float, default=1.0)
    p.add_argument("--beta", type=float, default=DEFAULTS["beta"])
    _add_xgrid(p)
    return parser


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return f"{float(v) + 0.0:.17g}"


def _json_value(v):
    if isinstance(v, (int, np.integer, bool, np.bool_)):
        return int(v)
    return float(v)


def render(command: str, rows, meta: dict, fmt: str) -> str:
    cols = COLUMNS[command]
    if fmt == "csv":
        buf = io.StringIO()
        buf.write(",".join(cols) + "\n")
        for r in rows:
            buf.write(",".join(_fmt(v) for v in r) + "\n")
        return buf.getvalue()
    doc = {"meta": meta, "columns": list(cols), "rows": [[_json_value(v) for v in r] for r in rows]}
    return json.dumps(doc, indent=1) + "\n"


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    config = {k: v for k, v in vars(args).items() if k not in ("out", "format")}
    try:
        rows, extra = COMMANDS[args.command](args)
    except DomainError as exc:
        print(f"fracpseudo: invalid parameters: {exc}", file=sys.stderr)
        return 2
    except ComputationError as exc:
        print(f"fracpseudo: numerical failure: {exc} {getattr(exc, 'diagnostics', {})}", file=sys.stderr)
        return 3
    meta = {"version": __version__, "parameters": config, "error_estimates": extra}
    text = render(args.command, rows, meta, args.format)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"fracpseudo: cannot write output: {exc}", file=sys.stderr)
            return 2
    return 0


def main(argv=None):
    sys.exit(run(argv))
