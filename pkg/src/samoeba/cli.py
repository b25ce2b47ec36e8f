"""Command-line front end.

Subcommands: newton | amoeba | ronkin | order | sval | strop | limit.
Defaults may come from a key=value config file (--config); flags override.
Sampling commands require a seed, so identical invocations are
byte-identical.  Exit codes: 0 success, 2 inconclusive/uncertified,
1 error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import glpoly
from .glpoly import ParseError, RegularFunction, parse
from .numerics import (
    MembershipOptions,
    amoeba_grid,
    membership,
    order_of_component,
    ronkin_mc,
)
from .puiseux import parse_series_matrix, slog_limit_report, smith_sval
from .support import snewt, support
from .tropical import limit_experiment, strop_hypersurface

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INCONCLUSIVE = 2


def read_config(path: str) -> dict:
    """key=value lines; '#' starts a comment; values stay strings."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def _add_common(p: argparse.ArgumentParser, sampling: bool):
    p.add_argument("--n", type=int, help="matrix dimension")
    p.add_argument("--config", help="key=value config file")
    p.add_argument("--seed", type=int,
                   help="RNG seed" + (" (required)" if sampling else ""))
    p.add_argument("--samples", type=int, help="Monte-Carlo sample count")
    p.add_argument("--restarts", type=int, help="membership restarts")
    p.add_argument("--out", help="output path (basename for svg format)")
    p.add_argument("--format", choices=["csv", "json", "svg"],
                   default=None, help="output format (default json)")


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="samoeba",
        description="matrix amoebas, Newton polytopes and tropical limits "
                    "for regular functions on GL_n")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("newton", help="support and Newton polytope")
    p.add_argument("expr")
    p.add_argument("--trials", type=int, default=None)
    _add_common(p, sampling=False)

    p = sub.add_parser("amoeba", help="membership grid over a box")
    p.add_argument("expr")
    p.add_argument("--box", default=None, help="LO:HI (same for each axis)")
    p.add_argument("--res", type=int, default=None, help="points per axis")
    _add_common(p, sampling=True)

    p = sub.add_parser("ronkin", help="Monte-Carlo Ronkin value at a point")
    p.add_argument("expr")
    p.add_argument("--x", default=None, help="comma-separated coordinates")
    _add_common(p, sampling=True)

    p = sub.add_parser("order", help="order of the complement component at x")
    p.add_argument("expr")
    p.add_argument("--x", default=None)
    p.add_argument("--step", type=float, default=None)
    _add_common(p, sampling=True)

    p = sub.add_parser("sval", help="invariant-factor valuations of a "
                                    "Puiseux series matrix")
    p.add_argument("matrix",
                   help="JSON array of arrays of series literals, or @file")
    p.add_argument("--s-values", default=None,
                   help="comma-separated t values for the sLog ratio table")
    _add_common(p, sampling=False)

    p = sub.add_parser("strop", help="closed-form scaling limit (negated "
                                     "spherical tropical variety)")
    p.add_argument("expr")
    _add_common(p, sampling=False)

    p = sub.add_parser("limit", help="rescaled-amoeba vs limit-set experiment")
    p.add_argument("expr")
    p.add_argument("--rhos", default=None, help="descending, comma-separated")
    p.add_argument("--box", default=None)
    p.add_argument("--res", type=int, default=None)
    p.add_argument("--eps", type=float, default=None)
    _add_common(p, sampling=True)

    return top


class CliError(Exception):
    pass


def _setting(args, config, name, cast, default=None, required=False):
    value = getattr(args, name.replace("-", "_"), None)
    if value is None and name in config:
        value = config[name]
    if value is None:
        if required:
            raise CliError(f"--{name} is required")
        return default
    try:
        return cast(value)
    except (TypeError, ValueError) as exc:
        raise CliError(f"invalid --{name}: {exc}") from None


def _positive(cast):
    def inner(v):
        out = cast(v)
        if out <= 0:
            raise ValueError("must be positive")
        return out
    return inner


def _parse_box(text) -> tuple:
    if isinstance(text, tuple):
        return text
    lo, hi = str(text).split(":")
    lo, hi = float(lo), float(hi)
    if hi <= lo:
        raise ValueError("box upper bound must exceed the lower bound")
    return lo, hi


def _parse_point(text):
    return tuple(float(c) for c in str(text).split(","))


def _parse_floats(text):
    return [float(c) for c in str(text).split(",")]


def _emit(args, config, payload: dict, csv_text=None, figure=None) -> None:
    """Write the primary JSON (stdout or --out); csv/svg variants write the
    delimited output and, for svg, the figure next to it."""
    fmt = _setting(args, config, "format", str, default="json")
    out = _setting(args, config, "out", str)
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if fmt == "json":
        if out:
            Path(out).write_text(text)
        else:
            sys.stdout.write(text)
        return
    if csv_text is None:
        raise CliError(f"format {fmt} is not available for this command")
    if not out:
        raise CliError(f"--out is required for format {fmt}")
    base = Path(out)
    if fmt == "csv":
        csv_path = base if base.suffix == ".csv" else base.with_suffix(".csv")
        csv_path.write_text(csv_text)
        return
    # svg: figure plus the csv alongside
    if figure is None:
        raise CliError("no figure available for this command")
    svg_path = base if base.suffix == ".svg" else base.with_suffix(".svg")
    csv_path = svg_path.with_suffix(".csv")
    csv_path.write_text(csv_text)
    figure(str(svg_path))


def _function(args, config) -> RegularFunction:
    n = _setting(args, config, "n", _positive(int), required=True)
    return parse(args.expr, n)


def _membership_options(args, config, require_seed=True) -> MembershipOptions:
    seed = _setting(args, config, "seed", int, required=require_seed)
    opts = MembershipOptions(seed=0 if seed is None else seed)
    restarts = _setting(args, config, "restarts", _positive(int))
    if restarts:
        opts.restarts = restarts
    return opts


def cmd_newton(args, config) -> int:
    f = _function(args, config)
    trials = _setting(args, config, "trials", _positive(int), default=2)
    s = support(f, trials=trials)
    payload = {"support": s.to_dict()}
    if s.points:
        payload["polytope"] = snewt(f, trials=trials).to_dict()
    _emit(args, config, payload)
    return EXIT_OK


def cmd_amoeba(args, config) -> int:
    from .plotting import render_grid

    f = _function(args, config)
    box = _setting(args, config, "box", _parse_box, required=True)
    res = _setting(args, config, "res", _positive(int), required=True)
    opts = _membership_options(args, config)
    grid = amoeba_grid(f, box, res, opts, f_text=args.expr)
    _emit(args, config, grid.to_dict(), csv_text=grid.to_csv(),
          figure=lambda path: render_grid(grid, path))
    return EXIT_OK


def cmd_ronkin(args, config) -> int:
    f = _function(args, config)
    x = _setting(args, config, "x", _parse_point, required=True)
    samples = _setting(args, config, "samples", _positive(int), default=10000)
    seed = _setting(args, config, "seed", int, required=True)
    est = ronkin_mc(f, x, samples=samples, seed=seed)
    _emit(args, config, {
        "x": list(est.x),
        "mean": est.mean,
        "stderr": est.stderr,
        "samples": est.samples,
        "zeros_hit": est.zeros_hit,
    })
    return EXIT_OK


def cmd_order(args, config) -> int:
    f = _function(args, config)
    x = _setting(args, config, "x", _parse_point, required=True)
    samples = _setting(args, config, "samples", _positive(int), default=20000)
    seed = _setting(args, config, "seed", int, required=True)
    step = _setting(args, config, "step", _positive(float), default=0.25)
    verdict = membership(f, x, _membership_options(args, config))
    if verdict.verdict == "inconclusive":
        _emit(args, config, {
            "x": list(verdict.x), "membership": verdict.verdict,
            "min_abs": verdict.min_abs,
        })
        return EXIT_INCONCLUSIVE
    if verdict.verdict == "member":
        raise CliError(
            "x lies in the amoeba; orders are defined on complement "
            "components only")
    res = order_of_component(f, x, step=step, samples=samples, seed=seed)
    _emit(args, config, {
        "x": list(x),
        "order": list(res.vector),
        "gradient": list(res.gradient),
        "residual": res.residual,
    })
    return EXIT_OK


def cmd_sval(args, config) -> int:
    spec = args.matrix
    if spec.startswith("@"):
        spec = Path(spec[1:]).read_text()
    rows = json.loads(spec)
    matrix = parse_series_matrix(rows)
    result = smith_sval(matrix)
    payload = {"sval": result.to_dict()}
    s_values = _setting(args, config, "s-values", _parse_floats)
    if s_values:
        payload["slog_limit"] = slog_limit_report(matrix, s_values)
    _emit(args, config, payload)
    return EXIT_OK if result.certified else EXIT_INCONCLUSIVE


def cmd_strop(args, config) -> int:
    f = _function(args, config)
    d = strop_hypersurface(f)
    _emit(args, config, d.to_dict())
    return EXIT_OK


def cmd_limit(args, config) -> int:
    from .plotting import render_limit

    f = _function(args, config)
    rhos = _setting(args, config, "rhos", _parse_floats, required=True)
    box = _setting(args, config, "box", _parse_box, required=True)
    res = _setting(args, config, "res", _positive(int), required=True)
    eps = _setting(args, config, "eps", _positive(float), default=0.2)
    opts = _membership_options(args, config)
    report = limit_experiment(
        f, rhos, box, res, opts, epsilon=eps, f_text=args.expr)
    _emit(args, config, report.to_dict(), csv_text=report.grid.to_csv(),
          figure=lambda path: render_limit(report, path))
    return EXIT_OK


_COMMANDS = {
    "newton": cmd_newton,
    "amoeba": cmd_amoeba,
    "ronkin": cmd_ronkin,
    "order": cmd_order,
    "sval": cmd_sval,
    "strop": cmd_strop,
    "limit": cmd_limit,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = read_config(args.config) if args.config else {}
        return _COMMANDS[args.command](args, config)
    except (CliError, ParseError, ValueError, ArithmeticError, OSError,
            json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
