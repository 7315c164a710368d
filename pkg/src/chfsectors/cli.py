"""Command-line front end.

    chfsectors eval -a 2.5 -c 2.5 -x 1
    chfsectors check kummer --samples 100 --seed 7
    chfsectors classify -4 1
    chfsectors orbit A1 0 0 --steps 3
    chfsectors wavefn coulomb --N 3 --ell 0 --spectrum --levels 3
    chfsectors crossmap morse --nO 2 --ellO 1 --alpha 1

Exit codes: 0 success, 1 a check failed, 2 usage or domain error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from .checks import SUITES, run_suite
from .core import KernelElement, SeriesConfig, eval_kernel
from .errors import ChfError, NotBoundState
from .lattice import PrimedParams, classify, orbit
from .operators import Kind
from .schrodinger import (
    CoulombN,
    Morse,
    Oscillator1D,
    OscillatorN,
    bound_states,
    count_nodes,
    cross_map_oscillator_coulomb,
    cross_map_oscillator_morse,
    oscillator_state,
    schrodinger_residual,
    support,
    wavefunction,
)

RESIDUAL_TOL = 1e-5
# argparse only treats "-1" and "-.5" as numbers; let "-1/2" through as well
# negative rationals, decimals and "a',c'" pairs that start with a minus sign
_NUMBER = r"-?(\d+(/\d+)?|\d*\.\d+)"
_NEGATIVE = re.compile(rf"^-(\d+(/\d+)?|\d*\.\d+)(,{_NUMBER})?$")


class UsageError(ValueError):
    pass


# -- output ---------------------------------------------------------------------

def _cell(v):
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return "%.17g" % v if math.isfinite(v) else "NA"
    return str(v)


def _json_cell(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return float(v) if math.isfinite(v) else "NA"
    return str(v)


def render(schema: str, rows: list[dict], fmt: str = "csv", seed: int | None = None) -> str:
    if fmt == "json":
        doc = {
            "schema": schema,
            "meta": {"seed": seed, "version": __version__},
            "rows": [{k: _json_cell(v) for k, v in r.items()} for r in rows],
        }
        return json.dumps(doc, indent=1) + "\n"
    buf = io.StringIO()
    if rows:
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(rows[0].keys())
        for r in rows:
            writer.writerow([_cell(v) for v in r.values()])
    return buf.getvalue()


def _emit(args, schema, rows, seed=None):
    text = render(schema, rows, args.format, seed)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- argument types ----------------------------------------------------------------

def rational(text: str) -> Fraction:
    """Exact ``p`` or ``p/q``; decimals are rejected."""
    if not re.fullmatch(r"[+-]?\d+(/\d+)?", text.strip()):
        raise argparse.ArgumentTypeError(f"expected an exact rational p or p/q, got {text!r}")
    return Fraction(text.strip())


def grid(text: str) -> np.ndarray:
    try:
        lo, hi, n = text.split(":")
        lo, hi, n = float(lo), float(hi), int(n)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi:n, got {text!r}") from None
    if n < 1 or not hi >= lo:
        raise argparse.ArgumentTypeError("grid needs n >= 1 and hi >= lo")
    return np.linspace(lo, hi, n)


def _point(text: str) -> PrimedParams:
    try:
        a, c = text.split(",")
        return PrimedParams(rational(a), rational(c))
    except (ValueError, argparse.ArgumentTypeError):
        raise argparse.ArgumentTypeError(f"expected a',c' as rationals, got {text!r}") from None


# -- subcommands ----------------------------------------------------------------------

def cmd_eval(args) -> int:
    cfg = SeriesConfig.from_env()
    alpha, beta = args.alpha, args.beta
    if args.second:
        alpha, beta = 0.0, 1.0
    f = KernelElement.first(args.a, args.c, 1.0)
    f = KernelElement(f.params, alpha, beta)
    if args.x_range is None and args.x is None:
        raise UsageError("give -x or --x-range")
    xs = args.x_range if args.x_range is not None else [args.x]
    rows = [{"a": args.a, "c": args.c, "x": float(x), "value": eval_kernel(f, x, cfg)} for x in xs]
    _emit(args, "grid_table" if args.x_range is not None else "scalar", rows)
    return 0


def cmd_check(args) -> int:
    cfg = SeriesConfig.from_env()
    rows, failed = [], []
    for r in run_suite(args.suite, args.samples, args.seed, cfg):
        rows.append({
            "suite": args.suite, "identity": r.identity, "max_residual": r.max_residual,
            "tolerance": r.tolerance, "samples": r.samples, "skipped": r.skipped,
            "status": "pass" if r.passed else "fail",
        })
        if not r.passed:
            failed.append(r.identity)
    _emit(args, "check_report", rows, args.seed)
    if failed:
        print(f"failed identities: {', '.join(failed)}", file=sys.stderr)
        return 1
    return 0


def cmd_classify(args) -> int:
    q = PrimedParams(args.a_p, args.c_p)
    cls = classify(q)
    m, n = (cls.indices + (None, None))[:2] if cls.indices else (None, None)
    rows = [{
        "a_p": str(q.a_p), "c_p": str(q.c_p), "variant": cls.variant.value, "label": cls.label,
        "m": "" if m is None else m, "n": "" if n is None else n, "on_spine": cls.on_spine,
        "lines": " ".join(k.value for k in cls.lines), "summary": str(cls),
    }]
    _emit(args, "scalar", rows)
    return 0


def cmd_orbit(args) -> int:
    o = orbit(args.op, PrimedParams(args.a_p, args.c_p), args.steps)
    last = len(o.points) - 1
    rows = [{
        "step": k, "a_p": str(p.a_p), "c_p": str(p.c_p), "class": str(classify(p)),
        "annihilated": o.annihilated and k == last,
    } for k, p in enumerate(o.points)]
    _emit(args, "orbit_list", rows)
    return 0


def _spec(args):
    if args.potential == "osc1d":
        return Oscillator1D()
    if args.potential in ("oscN", "coulomb"):
        if args.N is None or args.ell is None:
            raise UsageError(f"{args.potential} needs --N and --ell")
        return (OscillatorN if args.potential == "oscN" else CoulombN)(args.N, args.ell)
    if args.alpha is None or args.lam is None:
        raise UsageError("morse needs --alpha and --lambda")
    return Morse(args.alpha, args.lam)


def _state_row(w, residual: bool, nodes: bool) -> dict:
    row = dict(w.labels)
    if nodes:
        row["nodes"] = count_nodes(w)
    if residual:
        r = schrodinger_residual(w)
        row["residual"] = r
        row["residual_ok"] = r <= RESIDUAL_TOL
    return row


def cmd_wavefn(args) -> int:
    spec = _spec(args)
    if args.spectrum:
        states = bound_states(spec, args.branch, args.levels)
        _emit(args, "spectrum", [_state_row(w, args.residual, args.nodes) for w in states])
        return 0
    w = wavefunction(spec, args.branch, state=args.state, point=args.point)
    if args.normalize:
        w = w.normalized()
    if args.grid is None and (args.residual or args.nodes):
        _emit(args, "spectrum", [_state_row(w, args.residual, args.nodes)])
        return 0
    ys = args.grid if args.grid is not None else np.linspace(*support(w), 201)
    vals = np.real(w(ys))
    rows = [{"y": float(y), "psi": float(v)} for y, v in zip(ys, vals)]
    _emit(args, "grid_table", rows)
    if args.residual or args.nodes:
        row = _state_row(w, args.residual, args.nodes)
        print(" ".join(f"{k}={_cell(v)}" for k, v in row.items()), file=sys.stderr)
    return 0


def cmd_crossmap(args) -> int:
    source = oscillator_state(args.nO, args.ellO)
    if args.kind == "morse":
        if args.alpha is None:
            raise UsageError("crossmap morse needs --alpha")
        image = cross_map_oscillator_morse(source, args.alpha)
    else:
        image = cross_map_oscillator_coulomb(source)
    n_src, n_img = count_nodes(source), count_nodes(image)
    res = schrodinger_residual(image)
    summary = dict(image.labels, E=image.energy, nodes_source=n_src, nodes_image=n_img,
                   nodes_preserved=n_src == n_img, residual=res, residual_ok=res <= RESIDUAL_TOL)
    if args.grid is not None:
        rows = [{"y": float(y), "psi": float(v)} for y, v in zip(args.grid, image(args.grid))]
        _emit(args, "grid_table", rows)
        print(" ".join(f"{k}={_cell(v)}" for k, v in summary.items()), file=sys.stderr)
    else:
        _emit(args, "check_report", [summary])
    return 0 if summary["nodes_preserved"] and summary["residual_ok"] else 1


# -- parser --------------------------------------------------------------------------

def _subparser(subs, name, help_):
    p = subs.add_parser(name, help=help_)
    p._negative_number_matcher = _NEGATIVE
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", help="write to this file instead of stdout")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chfsectors", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    p = _subparser(subs, "eval", "evaluate a kernel element")
    p.add_argument("-a", type=float, required=True)
    p.add_argument("-c", type=float, required=True)
    p.add_argument("-x", type=float)
    p.add_argument("--x-range", type=grid, help="lo:hi:n")
    p.add_argument("--second", action="store_true", help="evaluate u(a, c; x)")
    p.add_argument("--alpha", type=float, default=1.0, help="coefficient of 1F1")
    p.add_argument("--beta", type=float, default=0.0, help="coefficient of u")
    p.set_defaults(func=cmd_eval)

    p = _subparser(subs, "check", "run an identity suite")
    p.add_argument("suite", choices=SUITES)
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_check)

    p = _subparser(subs, "classify", "classify a primed lattice point")
    p.add_argument("a_p", type=rational)
    p.add_argument("c_p", type=rational)
    p.set_defaults(func=cmd_classify)

    p = _subparser(subs, "orbit", "iterate an operator's induced action")
    p.add_argument("op", type=Kind.parse)
    p.add_argument("a_p", type=rational)
    p.add_argument("c_p", type=rational)
    p.add_argument("--steps", type=int, default=5)
    p.set_defaults(func=cmd_orbit)

    p = _subparser(subs, "wavefn", "build and verify a bound state")
    p.add_argument("potential", choices=("osc1d", "oscN", "coulomb", "morse"))
    p.add_argument("--N", type=int)
    p.add_argument("--ell", type=int)
    p.add_argument("--alpha", type=float)
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--branch", choices=("plus", "minus"), default="plus")
    sel = p.add_mutually_exclusive_group()
    sel.add_argument("--state", type=int)
    sel.add_argument("--point", type=_point, help="a',c' as rationals")
    sel.add_argument("--spectrum", action="store_true")
    p.add_argument("--levels", type=int, default=3)
    p.add_argument("--grid", type=grid, help="lo:hi:n")
    p.add_argument("--normalize", action="store_true")
    p.add_argument("--residual", action="store_true")
    p.add_argument("--nodes", action="store_true")
    p.set_defaults(func=cmd_wavefn)

    p = _subparser(subs, "crossmap", "map an N=2 oscillator state to Morse or Coulomb")
    p.add_argument("kind", choices=("morse", "coulomb"))
    p.add_argument("--nO", type=int, required=True)
    p.add_argument("--ellO", type=int, required=True)
    p.add_argument("--alpha", type=float)
    p.add_argument("--grid", type=grid, help="lo:hi:n")
    p.set_defaults(func=cmd_crossmap)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    parser._negative_number_matcher = _NEGATIVE
    args = parser.parse_args(argv)
    try:
        with np.errstate(all="ignore"):
            return args.func(args)
    except NotBoundState as exc:
        print(f"error: NotBoundState: {exc}", file=sys.stderr)
        return 2
    except (ChfError, UsageError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
