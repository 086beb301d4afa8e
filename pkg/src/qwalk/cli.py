"""Command-line front end: runs walks and analytic evaluations, writes CSV/JSON.

Exit codes: 0 success, 1 I/O failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import asymptotics, walk1d, walk2d
from .core import EntropySeries, fit_log2_growth


class UsageError(Exception):
    pass


def fmt(value) -> str:
    """12 significant digits, so that output is reproducible byte for byte."""
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.12g}"


def _num(value):
    if isinstance(value, (int, np.integer)):
        return int(value)
    return float(fmt(value))


def worker_count() -> int:
    raw = os.environ.get("QWALK_THREADS")
    if raw:
        try:
            n = int(raw)
        except ValueError:
            raise UsageError(f"QWALK_THREADS must be an integer, got {raw!r}")
        if n < 1:
            raise UsageError("QWALK_THREADS must be >= 1")
        return n
    return os.cpu_count() or 1


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def series_output(series: EntropySeries, fmt_name: str, extra=None) -> str:
    if fmt_name == "csv":
        return csv_text(("t", "entropy"), zip(series.t, series.s))
    obj = {"t": [int(t) for t in series.t], "entropy": [_num(s) for s in series.s]}
    obj.update(extra or {})
    return json_text(obj)


def fit_output(series: EntropySeries, t_min: int) -> str:
    fit = fit_log2_growth(series, t_min)
    used = series.t >= t_min
    return json_text(
        {
            "c": _num(fit.c),
            "intercept": _num(fit.intercept),
            "residual_rms": _num(fit.residual_rms),
            "t_min": int(t_min),
            "points": [[int(t), _num(s)] for t, s in zip(series.t[used], series.s[used])],
        }
    )


# --- subcommands -----------------------------------------------------------


def _initial_1d(args) -> walk1d.WalkState1D:
    if args.sigma is not None:
        cutoff = args.cutoff if args.cutoff is not None else int(np.ceil(6 * args.sigma))
        return walk1d.make_gaussian_state(args.sigma, cutoff, carrier=args.carrier)
    if args.theta is not None or args.phi is not None:
        spec = walk1d.NonlocalSpec(args.theta or 0.0, args.phi or 0.0)
        return walk1d.make_nonlocal_state(spec)
    if args.coin == "chi0":
        return walk1d.make_local_state(walk1d.CoinSpec1D(np.pi / 4, np.pi / 2))
    return walk1d.make_local_state(walk1d.CoinSpec1D(args.alpha, args.beta))


def cmd_walk1d(args) -> str:
    state = _initial_1d(args)
    if args.distribution:
        final = walk1d.evolve(state, args.steps)
        x, p = walk1d.position_distribution(final)
        if args.format == "csv":
            return csv_text(("x", "p"), zip(x, p))
        return json_text({"x": [int(v) for v in x], "p": [_num(v) for v in p]})
    series, _ = walk1d.entropy_series(state, args.steps)
    return series_output(series, args.format, {"tail_mean": _num(series.tail_mean(0.25))})


def cmd_asymptotic_local(args) -> str:
    if args.grid:
        alphas = np.linspace(-np.pi / 2, np.pi / 2, args.grid)
        betas = [args.beta] if args.beta is not None else [0.0, np.pi / 4, np.pi / 2]
        rows = []
        for beta in betas:
            for alpha in alphas:
                coin = walk1d.CoinSpec1D(alpha, beta)
                rows.append(
                    (alpha, beta, asymptotics.asymptotic_delta_local(coin),
                     asymptotics.asymptotic_entropy_local(coin))
                )
        if args.format == "csv":
            return csv_text(("alpha", "beta", "delta", "entropy"), rows)
        return json_text([dict(zip(("alpha", "beta", "delta", "entropy"), map(_num, r))) for r in rows])
    coin = walk1d.CoinSpec1D(args.alpha, args.beta if args.beta is not None else 0.0)
    out = {
        "alpha": _num(coin.alpha),
        "beta": _num(coin.beta),
        "delta": _num(asymptotics.asymptotic_delta_local(coin)),
        "entropy": _num(asymptotics.asymptotic_entropy_local(coin)),
    }
    if args.quadrature:
        rho = asymptotics.asymptotic_density_quadrature(asymptotics.local_profile(coin), args.n_k)
        out["quadrature_delta"] = _num(rho.delta)
        out["quadrature_entropy"] = _num(rho.entropy())
    return _single_output(out, args.format)


def cmd_asymptotic_nonlocal(args) -> str:
    spec = walk1d.NonlocalSpec(args.theta, args.phi)
    r1, r2 = asymptotics.asymptotic_eigenvalues_nonlocal(spec)
    out = {
        "theta": _num(spec.theta),
        "phi": _num(spec.phi),
        "r1": _num(r1),
        "r2": _num(r2),
        "entropy": _num(asymptotics.asymptotic_entropy_nonlocal(spec)),
    }
    if args.quadrature:
        profile = asymptotics.profile_from_state(walk1d.make_nonlocal_state(spec))
        rho = asymptotics.asymptotic_density_quadrature(profile, args.n_k)
        out["quadrature_entropy"] = _num(rho.entropy())
    return _single_output(out, args.format)


def _single_output(out: dict, fmt_name: str) -> str:
    if fmt_name == "csv":
        keys = list(out)
        return csv_text(keys, [[out[k] for k in keys]])
    return json_text(out)


def _simulated_nonlocal(point, steps):
    theta, phi = point
    state = walk1d.make_nonlocal_state(walk1d.NonlocalSpec(theta, phi))
    return walk1d.tail_mean_entropy(state, steps)


def cmd_sweep_nonlocal(args) -> str:
    thetas = np.linspace(-np.pi / 2, np.pi / 2, args.grid)
    if args.phi is not None:
        walk1d.NonlocalSpec(0.0, args.phi)  # range check
        phis = np.array([args.phi])
    else:
        phis = np.linspace(-np.pi, np.pi, args.grid)
    tt, pp = np.meshgrid(thetas, phis, indexing="ij")
    if args.simulate:
        points = list(zip(tt.ravel(), pp.ravel()))
        with ThreadPoolExecutor(max_workers=worker_count()) as pool:
            ent = list(pool.map(lambda q: _simulated_nonlocal(q, args.steps), points))
        ent = np.array(ent).reshape(tt.shape)
    else:
        ent = asymptotics.nonlocal_entropy_surface(tt, pp)
    rows = zip(tt.ravel(), pp.ravel(), ent.ravel())
    if args.format == "csv":
        return csv_text(("theta", "phi", "entropy"), rows)
    return json_text([{"theta": _num(t), "phi": _num(p), "entropy": _num(e)} for t, p, e in rows])


def cmd_walk2d(args) -> str:
    coin = walk2d.COINS[args.coin]()
    state = walk2d.make_local_state2(walk2d.INITIAL_COINS[args.init])
    if args.distribution:
        final = walk2d.evolve2(state, coin, args.steps)
        p = walk2d.joint_distribution(final)
        ix, iy = np.nonzero(p > 1e-15)
        xs, ys = final.xs[ix], final.ys[iy]
        if args.format == "csv":
            return csv_text(("x", "y", "p"), zip(xs, ys, p[ix, iy]))
        return json_text(
            {"x": xs.tolist(), "y": ys.tolist(), "p": [_num(v) for v in p[ix, iy]]}
        )
    sample_at = walk2d.FIT_SCHEDULE if args.schedule == "log" else None
    series, _ = walk2d.entropy_series2(state, coin, args.steps, sample_at)
    if args.fit:
        return fit_output(series, args.t_min)
    return series_output(series, args.format)


def cmd_fit(args) -> str:
    try:
        with open(args.input, newline="") as fh:
            reader = csv.DictReader(fh)
            rows = [(int(r["t"]), float(r["entropy"])) for r in reader]
    except (KeyError, ValueError) as exc:
        raise UsageError(f"malformed entropy CSV: {exc}")
    t, s = zip(*rows) if rows else ((), ())
    return fit_output(EntropySeries(np.array(t), np.array(s)), args.t_min)


HANDLERS = {
    "walk1d": cmd_walk1d,
    "asymptotic-local": cmd_asymptotic_local,
    "asymptotic-nonlocal": cmd_asymptotic_nonlocal,
    "sweep-nonlocal": cmd_sweep_nonlocal,
    "walk2d": cmd_walk2d,
    "fit": cmd_fit,
}


# --- argument parsing ------------------------------------------------------


def _nonneg_int(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return value


def _n_k(text):
    value = int(text)
    if value < 256 or value & (value - 1):
        raise argparse.ArgumentTypeError("must be a power of two >= 256")
    return value


def _add_common(p, default_format="csv"):
    p.add_argument("-o", "--output", default="-", help="output file ('-' for stdout)")
    p.add_argument("--format", choices=("csv", "json"), default=default_format)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qwalk", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("walk1d", help="single Hadamard walker: entropy series or distribution")
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--coin", choices=("chi0",), help="named preset for the initial coin")
    p.add_argument("--theta", type=float, help="two-site non-local start")
    p.add_argument("--phi", type=float)
    p.add_argument("--sigma", type=float, help="Gaussian packet spread")
    p.add_argument("--cutoff", type=int)
    p.add_argument("--carrier", type=float, default=np.pi / 2,
                   help="packet phase per site (default pi/2)")
    p.add_argument("--steps", type=_nonneg_int, default=400)
    p.add_argument("--distribution", action="store_true", help="write x,p at the final step")
    _add_common(p)

    p = sub.add_parser("asymptotic-local", help="long-time entropy for a localized coin")
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--beta", type=float)
    p.add_argument("--grid", type=int, default=0, help="scan alpha on N points")
    p.add_argument("--quadrature", action="store_true")
    p.add_argument("--n-k", dest="n_k", type=_n_k, default=4096)
    _add_common(p, "json")

    p = sub.add_parser("asymptotic-nonlocal", help="long-time entropy for a two-site start")
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--phi", type=float, default=0.0)
    p.add_argument("--quadrature", action="store_true")
    p.add_argument("--n-k", dest="n_k", type=_n_k, default=4096)
    _add_common(p, "json")

    p = sub.add_parser("sweep-nonlocal", help="long-time entropy over the (theta, phi) square")
    p.add_argument("--grid", type=int, default=101)
    p.add_argument("--phi", type=float, help="fix phi and scan theta only")
    p.add_argument("--simulate", action="store_true",
                   help="use simulated late-time means instead of the closed form")
    p.add_argument("--steps", type=_nonneg_int, default=400)
    _add_common(p)

    p = sub.add_parser("walk2d", help="two walkers: A|B entropy, growth fit or distribution")
    p.add_argument("--coin", choices=tuple(walk2d.COINS), default="grover")
    p.add_argument("--init", choices=tuple(walk2d.INITIAL_COINS), default="chi1")
    p.add_argument("--steps", type=_nonneg_int, default=100)
    p.add_argument("--fit", action="store_true", help="write the log2 growth fit as JSON")
    p.add_argument("--t-min", dest="t_min", type=int, default=10)
    p.add_argument("--schedule", choices=("log", "every"), default="log",
                   help="entropy sampling: log-uniform steps or every step")
    p.add_argument("--distribution", action="store_true", help="write x,y,p at the final step")
    _add_common(p)

    p = sub.add_parser("fit", help="fit S = c log2 t + b to a t,entropy CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--t-min", dest="t_min", type=int, default=10)
    _add_common(p, "json")
    return parser


def _validate(parser, args):
    if args.command == "sweep-nonlocal" and args.grid < 2:
        parser.error("--grid must be >= 2")
    if args.command == "asymptotic-local" and args.grid and args.grid < 2:
        parser.error("--grid must be >= 2")
    if args.command == "walk1d" and args.sigma is not None and args.sigma <= 0:
        parser.error("--sigma must be positive")


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _validate(parser, args)
    try:
        text = HANDLERS[args.command](args)
    except (UsageError, ValueError) as exc:
        print(f"qwalk: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"qwalk: {exc}", file=sys.stderr)
        return 1
    try:
        if args.output == "-":
            sys.stdout.write(text)
        else:
            with open(args.output, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
    except OSError as exc:
        print(f"qwalk: cannot write {args.output}: {exc}", file=sys.stderr)
        return 1
    return 0


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
