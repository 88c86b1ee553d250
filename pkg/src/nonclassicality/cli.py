"""Command-line entry point ``nonclass``.

Exit codes: 0 success, 1 invalid input, 2 numerical failure (divergent
series, channel outside the valid regime). Failures are also reported as
``{"error": ..., "kind": ...}``: on stdout (or ``--out``) in JSON mode, on
stderr in CSV mode.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
from pathlib import Path

import numpy as np

from .bochner import certify, parse_points
from .channel import ChannelParams, apply_channel_charfn, apply_channel_dm, output_s_distribution, thermal_threshold
from .errors import NumericalError, ThresholdError, ValidationError
from .grid import PhaseSpaceGrid
from .homodyne import count_distribution, modified_series, reconstruct_with_shot_noise, sample_counts, wall_series
from .states import DEFAULT_DIM, build_density_matrix, char_fn, parse_state_spec, s_distribution
from .witness import (
    GaussianWitness,
    compensate_gaussian,
    compensated_witness_mean,
    gaussian_witness_mean,
    uncompensated_noisy_mean,
)

log = logging.getLogger("nonclassicality")

LOG_LEVELS = {"quiet": logging.WARNING, "info": logging.INFO, "debug": logging.DEBUG}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(message)


def _num(x: float) -> str:
    return format(float(x), ".17g")


def _read_text(arg: str, what: str) -> str:
    stripped = arg.lstrip()
    if stripped.startswith(("{", "[")):
        return arg
    path = Path(arg)
    if not path.is_file():
        raise ValidationError(f"{what} file not found: {arg}")
    return path.read_text()


def _channel(args) -> ChannelParams | None:
    if args.eta is None:
        if args.nbar:
            raise ValidationError("--nbar requires --eta")
        return None
    return ChannelParams(args.eta, args.nbar or 0.0)


def _gamma(args) -> complex:
    return complex(args.gamma_re, args.gamma_im)


def cmd_threshold(args):
    return {"eta": args.eta, "nbar_max": thermal_threshold(args.eta)}


def cmd_pfunc(args):
    spec = parse_state_spec(_read_text(args.state, "state"))
    ch = _channel(args)
    grid = PhaseSpaceGrid(args.grid_radius, args.grid_step, _gamma(args))
    pts = grid.points()
    if ch is None:
        if args.s is None:
            raise ValidationError("pfunc needs --s, or --eta/--nbar for a channel output P-function")
        values = np.asarray(s_distribution(spec, pts, args.s))
        s_used = args.s
    else:
        s_used = 1.0 if args.s is None else args.s
        values = np.asarray(output_s_distribution(spec, ch, pts, s_used))
    rows = [(p.real, p.imag, v) for p, v in zip(pts.ravel(), values.ravel())]
    if args.format == "csv":
        return ("csv", ["re", "im", "value"], rows)
    return {"s": s_used, "min": float(values.min()), "rows": [list(r) for r in rows]}


def cmd_witness(args):
    spec = parse_state_spec(_read_text(args.state, "state"))
    w = GaussianWitness(args.a2, _gamma(args))
    ch = _channel(args)
    out = {"clean_mean": gaussian_witness_mean(spec, w)}
    if ch is None:
        out["scondition_ok"] = True
        return out
    out["uncompensated_mean"] = uncompensated_noisy_mean(spec, ch, w)
    try:
        cw = compensate_gaussian(w, ch)
    except ThresholdError:
        out["compensated_mean"] = None
        out["scondition_ok"] = False
        return out
    out["compensated_mean"] = compensated_witness_mean(spec, cw, ch)
    out["scondition_ok"] = True
    return out


def cmd_homodyne(args):
    spec = parse_state_spec(_read_text(args.state, "state"))
    gamma = _gamma(args)
    w = GaussianWitness(args.a2, gamma)
    ch = _channel(args)
    dm = build_density_matrix(spec, args.dim)
    if ch is None:
        counts = count_distribution(dm, gamma, args.eta_h)
    else:
        counts = count_distribution(apply_channel_dm(dm, ch), gamma * math.sqrt(ch.eta), args.eta_h)
    if args.format == "csv":
        return ("csv", ["n", "p"], [(n, p) for n, p in enumerate(counts.probs)])
    if ch is None:
        series = wall_series(counts, args.a2, args.eta_h, args.tolerance)
    else:
        series = modified_series(counts, w, ch, args.eta_h, args.tolerance)
    out = series.to_json_obj()
    out["reference"] = s_distribution(spec, gamma, w.s)
    if args.shots is not None:
        hist = sample_counts(counts, args.shots, args.seed)
        est, err = reconstruct_with_shot_noise(hist, args.a2, args.eta_h, ch)
        out["shot_noise"] = {"shots": args.shots, "seed": args.seed, "estimate": est, "stderr": err}
    return out


def cmd_bochner(args):
    spec = parse_state_spec(_read_text(args.state, "state"))
    if args.points is None:
        raise ValidationError("bochner needs --points")
    points = parse_points(_read_text(args.points, "points"))
    phi = char_fn(spec)
    ch = _channel(args)
    if ch is not None:
        phi = apply_channel_charfn(phi, ch)
    return certify(phi, points).to_json_obj()


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="nonclass", description="Nonclassicality tests for noisy single-mode states.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, fmt="json"):
        p.add_argument("--format", choices=["csv", "json"], default=fmt)
        p.add_argument("--out", help="write output here instead of stdout")

    def state_and_channel(p):
        p.add_argument("--state", required=True, help="state spec as inline JSON or a file path")
        p.add_argument("--eta", type=float, help="channel efficiency")
        p.add_argument("--nbar", type=float, help="bath mean photon number")

    def gamma(p):
        p.add_argument("--gamma-re", type=float, default=0.0)
        p.add_argument("--gamma-im", type=float, default=0.0)

    p = sub.add_parser("threshold", help="thermal threshold of nonclassicality")
    p.add_argument("--eta", type=float, required=True)
    common(p)
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("pfunc", help="s-distribution or noisy P-function on a grid")
    state_and_channel(p)
    gamma(p)
    p.add_argument("--s", type=float)
    p.add_argument("--grid-radius", type=float, default=4.0)
    p.add_argument("--grid-step", type=float, default=0.05)
    common(p, fmt="csv")
    p.set_defaults(func=cmd_pfunc)

    p = sub.add_parser("witness", help="Gaussian witness means")
    state_and_channel(p)
    gamma(p)
    p.add_argument("--a2", type=float, required=True)
    common(p)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("homodyne", help="unbalanced homodyne reconstruction")
    state_and_channel(p)
    gamma(p)
    p.add_argument("--a2", type=float, required=True)
    p.add_argument("--eta-h", type=float, default=1.0)
    p.add_argument("--dim", type=int, default=DEFAULT_DIM)
    p.add_argument("--tolerance", type=float, default=1e-10)
    p.add_argument("--shots", type=int)
    p.add_argument("--seed", type=int, default=0)
    common(p)
    p.set_defaults(func=cmd_homodyne)

    p = sub.add_parser("bochner", help="discrete Bochner certification")
    state_and_channel(p)
    p.add_argument("--points", help="JSON array of {re, im} (inline or file)")
    common(p)
    p.set_defaults(func=cmd_bochner)
    return parser


def _render(result) -> str:
    if isinstance(result, tuple) and result[0] == "csv":
        _, header, rows = result
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([v if isinstance(v, (int, np.integer)) else _num(v) for v in row])
        return buf.getvalue()
    return json.dumps(result, indent=2) + "\n"


def _emit(text, out):
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    level = os.environ.get("NONCLASS_LOG", "quiet")
    logging.basicConfig(level=LOG_LEVELS.get(level, logging.WARNING), format="%(levelname)s %(name)s: %(message)s")
    args = None
    try:
        args = build_parser().parse_args(argv)
        _emit(_render(args.func(args)), args.out)
        return 0
    except ValidationError as exc:
        code, kind = 1, "validation"
        message = str(exc)
    except NumericalError as exc:
        code, kind = 2, "numerical"
        message = str(exc)
    log.error(message)
    report = json.dumps({"error": message, "kind": kind}) + "\n"
    if args is None or getattr(args, "format", "json") == "json":
        _emit(report, getattr(args, "out", None))
    else:
        # keep stdout a clean table; the report goes to stderr
        sys.stderr.write(report)
    return code


if __name__ == "__main__":
    sys.exit(main())
