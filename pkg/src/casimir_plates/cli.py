"""Command-line front end.

Subcommands: ``pressure``, ``ratio-sweep``, ``cutoff-scan``, ``green-check``
and ``modes-check``.  Every subcommand accepts ``--format``, ``--out``,
``--rel-tol`` and ``--seed``.

Exit codes: 0 success, 1 numerical or runtime failure (including failed
self-checks and unwritable output), 2 usage error.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from typing import Callable

import numpy as np

from . import lifshitz as lf
from . import standing_wave as sw
from .checks import CheckReport, green_check, modes_check
from .constants import CONSTANTS_VERSION, constants_codata
from .numerics import ConvergenceError, Tolerance
from .svg import line_plot

DEFAULT_GAPS = [5e-7, 1e-6, 2e-6, 5e-6]
DEFAULT_LAMBDA_RATIOS = [1e-1, 5e-2, 2e-2, 1e-2, 5e-3, 2e-3, 1e-3]
SWEEP_COMMANDS = {"ratio-sweep", "cutoff-scan"}


class CommandFailed(Exception):
    """A command ran but its outcome is a failure (exit 1)."""

    def __init__(self, message: str, text: str = ""):
        super().__init__(message)
        self.text = text


def _positive(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not (v > 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"must be a positive number: {text!r}")
    return v


def _non_negative(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not (v >= 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"must be >= 0: {text!r}")
    return v


def _count(minimum: int) -> Callable[[str], int]:
    def parse(text: str) -> int:
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
        if v < minimum:
            raise argparse.ArgumentTypeError(f"must be >= {minimum}: {text!r}")
        return v

    return parse


def _add_common(parser: argparse.ArgumentParser, suppress: bool) -> None:
    # Registered on the top-level parser (real defaults) and on every
    # subcommand (suppressed defaults) so the flags work in either position.
    def d(value):
        return argparse.SUPPRESS if suppress else value

    parser.add_argument("--format", choices=["text", "csv", "json", "svg"], default=d("text"))
    parser.add_argument("--out", default=d("-"), help="output file (default: stdout)")
    parser.add_argument("--rel-tol", type=_positive, default=d(1e-10),
                        help="relative tolerance of quadratures and series")
    parser.add_argument("--seed", type=int, default=d(42),
                        help="seed of the random sampler (check commands)")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    _add_common(common, suppress=True)

    parser = argparse.ArgumentParser(
        prog="casimir-plates",
        description="Casimir pressure between perfectly reflecting parallel plates.",
    )
    _add_common(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("pressure", parents=[common],
                       help="Casimir pressure, and the finite-T Lifshitz pressure")
    p.add_argument("--gap", type=_positive, required=True, help="plate separation (m)")
    p.add_argument("--temp", type=_non_negative, help="temperature (K)")

    p = sub.add_parser("ratio-sweep", parents=[common],
                       help="R = F(T)/F(0) over a temperature grid, per gap")
    p.add_argument("--gaps", type=_positive, nargs="+", default=DEFAULT_GAPS,
                   help="plate separations (m)")
    p.add_argument("--temp-min", type=_non_negative, default=0.0, help="K")
    p.add_argument("--temp-max", type=_positive, default=300.0, help="K")
    p.add_argument("--points", type=_count(2), default=61)
    p.add_argument("--scale", choices=["linear", "log"], default="linear")

    p = sub.add_parser("cutoff-scan", parents=[common],
                       help="cutoff-regularised mode sum versus cutoff length")
    p.add_argument("--gap", type=_positive, nargs="+", required=True,
                   help="plate separation(s) (m)")
    lam = p.add_mutually_exclusive_group()
    lam.add_argument("--lambdas", type=_positive, nargs="+", help="cutoff lengths (m)")
    lam.add_argument("--lambda-ratios", type=_positive, nargs="+",
                     help=f"cutoff lengths in units of the gap (default {DEFAULT_LAMBDA_RATIOS})")

    p = sub.add_parser("green-check", parents=[common],
                       help="verify the Green's function stress assembly on random samples")
    p.add_argument("--samples", type=_count(1), default=1000)

    p = sub.add_parser("modes-check", parents=[common],
                       help="verify the cavity mode identities on random modes")
    p.add_argument("--samples", type=_count(1), default=200)
    p.add_argument("--inject-longitudinal", action="store_true", help=argparse.SUPPRESS)
    return parser


# --------------------------------------------------------------------------- commands


def _envelope(args, inputs: dict, outputs) -> dict:
    return {
        "command": args.command,
        "inputs": inputs,
        "outputs": outputs,
        "tolerances": {"rel": args.rel_tol, "abs": 0.0},
        "constants_version": CONSTANTS_VERSION,
    }


def cmd_pressure(args, tol: Tolerance):
    a, T = args.gap, args.temp
    casimir = sw.casimir_pressure(a)
    row = {"a_m": a, "T_K": T, "casimir_Pa": casimir, "lifshitz_Pa": None, "R": None}
    if T is not None:
        if T == 0:
            row["lifshitz_Pa"], row["R"] = casimir, 1.0
        else:
            row["lifshitz_Pa"] = lf.force_pspace(a, T, tol).pressure
            row["R"] = row["lifshitz_Pa"] / lf.zero_T_force(a, tol)
    columns = ["a_m", "T_K", "casimir_Pa", "lifshitz_Pa", "R"]
    lines = [f"gap a                  = {a!r} m",
             f"Casimir pressure (T=0) = {casimir:.6e} Pa"]
    if T is not None:
        lines.append(f"temperature T          = {T!r} K")
        lines.append(f"reduced t = kappa a T  = {lf.reduced_temperature(a, T):.6g}")
        lines.append(f"Lifshitz pressure      = {row['lifshitz_Pa']:.6e} Pa")
        lines.append(f"R = F(T)/F(0)          = {row['R']:.10f}")
    inputs = {"gap_m": a, "temp_K": T}
    return inputs, row, columns, [row], "\n".join(lines) + "\n", None


def _temperatures(args) -> list[float]:
    if args.temp_max <= args.temp_min:
        raise argparse.ArgumentTypeError("--temp-max must exceed --temp-min")
    if args.scale == "log":
        if args.temp_min <= 0:
            raise argparse.ArgumentTypeError("--scale log needs --temp-min > 0")
        return [float(v) for v in np.geomspace(args.temp_min, args.temp_max, args.points)]
    return [float(v) for v in np.linspace(args.temp_min, args.temp_max, args.points)]


def cmd_ratio_sweep(args, tol: Tolerance):
    temps = _temperatures(args)
    rows = []
    for a in args.gaps:
        for T in temps:
            t = lf.reduced_temperature(a, T)
            rows.append({"a_m": a, "T_K": T, "t": t, "R": lf.ratio_R(t, tol)})
    columns = ["a_m", "T_K", "t", "R"]
    text = "\n".join(
        [f"{'a_m':>12} {'T_K':>12} {'t':>12} {'R':>14}"]
        + [f"{r['a_m']:12.4e} {r['T_K']:12.4f} {r['t']:12.6f} {r['R']:14.10f}" for r in rows]
    ) + "\n"

    def figure() -> str:
        series = []
        for a in args.gaps:
            sel = [r for r in rows if r["a_m"] == a]
            series.append((f"a = {a * 1e6:g} um", [r["T_K"] for r in sel], [r["R"] for r in sel]))
        return line_plot(series, "T (K)", "R = F(T) / F(0)",
                         title="Thermal ratio of the Casimir pressure",
                         logx=args.scale == "log")

    inputs = {"gaps_m": args.gaps, "temp_min_K": args.temp_min, "temp_max_K": args.temp_max,
              "points": args.points, "scale": args.scale}
    return inputs, {"rows": rows}, columns, rows, text, figure


def cmd_cutoff_scan(args, tol: Tolerance):
    rows = []
    for a in args.gap:
        if args.lambdas:
            lams = list(args.lambdas)
        else:
            lams = [r * a for r in (args.lambda_ratios or DEFAULT_LAMBDA_RATIOS)]
        for lam in lams:
            cutoff = sw.CutoffParam(lam)
            split = sw.asymptotic_pressure(a, cutoff)
            row = {"a_m": a, "lambda_m": lam, "lambda_over_a": lam / a,
                   "regulated_Pa": None, "divergent_Pa": split.divergent_term,
                   "residual_Pa": None, "casimir_Pa": split.finite_term, "flag": "ok"}
            try:
                row["regulated_Pa"] = sw.regulated_pressure(a, cutoff)
                row["residual_Pa"] = sw.regulated_finite_part(a, cutoff)
            except sw.CutoffRangeError:
                row["flag"] = "below-guard"
            rows.append(row)
    columns = ["a_m", "lambda_m", "lambda_over_a", "regulated_Pa", "divergent_Pa",
               "residual_Pa", "casimir_Pa", "flag"]

    def _e(v):
        return f"{v:14.6e}" if v is not None else f"{'-':>14}"

    text = "\n".join(
        [f"{'a_m':>11} {'lambda/a':>10} {'regulated_Pa':>14} {'divergent_Pa':>14} "
         f"{'residual_Pa':>14} {'casimir_Pa':>14} flag"]
        + [f"{r['a_m']:11.4e} {r['lambda_over_a']:10.3e} {_e(r['regulated_Pa'])} "
           f"{_e(r['divergent_Pa'])} {_e(r['residual_Pa'])} {_e(r['casimir_Pa'])} {r['flag']}"
           for r in rows]
    ) + "\n"

    def figure() -> str:
        series = []
        for a in args.gap:
            sel = [r for r in rows if r["a_m"] == a and r["flag"] == "ok"]
            series.append((f"a = {a:g} m", [r["lambda_over_a"] for r in sel],
                           [r["residual_Pa"] / r["casimir_Pa"] for r in sel]))
        return line_plot(series, "lambda / a", "(regulated - divergent) / Casimir",
                         title="Cutoff dependence of the mode sum", logx=True)

    inputs = {"gaps_m": args.gap, "lambdas_m": args.lambdas,
              "lambda_ratios": None if args.lambdas else (args.lambda_ratios or DEFAULT_LAMBDA_RATIOS)}
    return inputs, {"rows": rows}, columns, rows, text, figure


def _check_outputs(report: CheckReport):
    outputs = {"passed": report.passed, "checks": []}
    rows = []
    lines = [f"samples = {report.samples}, seed = {report.seed}"]
    for r in report.results:
        outputs["checks"].append({"name": r.name, "threshold": r.threshold, "worst": r.worst,
                                  "failures": r.failures, "passed": r.passed,
                                  "worst_sample": r.worst_sample})
        rows.append({"check": r.name, "threshold": r.threshold, "worst": r.worst,
                     "failures": r.failures, "passed": r.passed})
        status = "PASS" if r.passed else "FAIL"
        lines.append(f"{status}  {r.name}: worst {r.worst:.3e} (threshold {r.threshold:.0e}, "
                     f"{r.failures} failures)")
        if not r.passed:
            lines.append(f"      worst offender: {json.dumps(r.worst_sample, sort_keys=True)}")
    lines.append("all checks passed" if report.passed else "CHECKS FAILED")
    columns = ["check", "threshold", "worst", "failures", "passed"]
    return outputs, columns, rows, "\n".join(lines) + "\n"


def cmd_green_check(args, tol: Tolerance):
    report = green_check(args.samples, args.seed, rel=args.rel_tol)
    outputs, columns, rows, text = _check_outputs(report)
    return {"samples": args.samples, "seed": args.seed}, outputs, columns, rows, text, None


def cmd_modes_check(args, tol: Tolerance):
    report = modes_check(args.samples, args.seed, inject_longitudinal=args.inject_longitudinal)
    outputs, columns, rows, text = _check_outputs(report)
    inputs = {"samples": args.samples, "seed": args.seed}
    return inputs, outputs, columns, rows, text, None


COMMANDS = {
    "pressure": cmd_pressure,
    "ratio-sweep": cmd_ratio_sweep,
    "cutoff-scan": cmd_cutoff_scan,
    "green-check": cmd_green_check,
    "modes-check": cmd_modes_check,
}

UNITS = {
    "a_m": "m", "T_K": "K", "t": "1", "R": "1", "casimir_Pa": "Pa", "lifshitz_Pa": "Pa",
    "lambda_m": "m", "lambda_over_a": "1", "regulated_Pa": "Pa", "divergent_Pa": "Pa",
    "residual_Pa": "Pa",
}


# --------------------------------------------------------------------------- output


def _csv_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def render_csv(columns: list[str], rows: list[dict]) -> str:
    buf = io.StringIO(newline="")
    buf.write("# col: " + ", ".join(columns) + "\n")
    units = [UNITS.get(c) for c in columns]
    if any(units):
        buf.write("# units: " + ", ".join(u or "-" for u in units) + "\n")
    for row in rows:
        buf.write(",".join(_csv_value(row[c]) for c in columns) + "\n")
    return buf.getvalue()


def _json_safe(obj):
    # JSON has no inf/nan; a non-finite number (an unusable sample) becomes null
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    return obj


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format == "svg" and args.command not in SWEEP_COMMANDS:
        parser.error("--format svg is only available for ratio-sweep and cutoff-scan")
    tol = Tolerance(rel=args.rel_tol)
    try:
        inputs, outputs, columns, rows, text, figure = COMMANDS[args.command](args, tol)
    except argparse.ArgumentTypeError as exc:
        parser.error(str(exc))
    except ConvergenceError as exc:
        print(f"casimir-plates: numerical failure: {exc}", file=sys.stderr)
        return 1

    if args.format == "json":
        payload = json.dumps(_json_safe(_envelope(args, inputs, outputs)), indent=2, sort_keys=False,
                             allow_nan=False) + "\n"
    elif args.format == "csv":
        payload = render_csv(columns, rows)
    elif args.format == "svg":
        payload = figure()
    else:
        payload = text
    try:
        _write(args.out, payload)
    except OSError as exc:
        print(f"casimir-plates: cannot write {args.out}: {exc}", file=sys.stderr)
        return 1

    if isinstance(outputs, dict) and outputs.get("passed") is False:
        if args.format != "text" or args.out != "-":
            sys.stderr.write(text)
        return 1
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
