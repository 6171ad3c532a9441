"""Command-line front end: bounds, figure sweeps and oracle verification.

Exit codes: 0 success, 1 verification tolerance failure, 2 usage error,
3 truncation error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .coherent import phi_opt
from .errors import DomainError, TruncationError
from .fock import overlap_numeric, spoof_mixture, success_probability_numeric, suggest_dim
from .gaussian import conjugate_pair, db_to_r, overlap_squeezed
from .helstrom import bound_summary, gamma_opt, helstrom_gamma, success_probability
from .optimize import OptimizationConfig, sweep_photons, sweep_prior, sweep_squeezing
from .restricted import restricted_scenario, restricted_success

SCHEMA_VERSION = "1"
VERIFY_TOL = 1e-6

EXIT_OK = 0
EXIT_TOLERANCE = 1
EXIT_USAGE = 2
EXIT_TRUNCATION = 3

GAIN_MAP_COLUMNS = ("p", "gamma", "gain", "gamma_opt_flag")
COHERENT_COLUMNS = ("n", "phi_opt", "tau2_pi", "tau2_opt", "ps_pi", "ps_opt")
PRIOR_COLUMNS = ("p", "r", "ps_bar", "ps_bound", "ps_classical")
RSWEEP_COLUMNS = ("r", "n", "ps_bar_restricted", "ps_unrestricted", "feasible")


class UsageError(Exception):
    pass


def format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return "%.17g" % value
    return str(value)


def _jsonable(value):
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def render_csv(records, columns) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for rec in records:
        writer.writerow([format_value(rec[c]) for c in columns])
    return buf.getvalue()


def envelope(command: str, records) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "generated_at": datetime.now(timezone.utc).isoformat(timespec="seconds").replace("+00:00", "Z"),
        "records": _jsonable(records),
    }


def render_json(command: str, records) -> str:
    return json.dumps(envelope(command, records), indent=2) + "\n"


def _emit(args, text: str):
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_table(args, records, columns):
    if args.format == "json":
        rows = [{c: rec[c] for c in columns} for rec in records]
        _emit(args, render_json(args.command_line, rows))
    else:
        _emit(args, render_csv(records, columns))


# --- argument helpers -------------------------------------------------------


def _open_prior(value: float, flag: str = "--p") -> float:
    if not 0.0 < value < 1.0:
        raise UsageError(f"{flag} must lie strictly between 0 and 1 (got {value!r})")
    return value


def _squeezings(args) -> list[float]:
    if args.squeezing_db is not None:
        if any(db < 0 for db in args.squeezing_db):
            raise UsageError("--squeezing-db values must be non-negative")
        return [db_to_r(db) for db in args.squeezing_db]
    if any(r < 0 for r in args.r):
        raise UsageError("--r values must be non-negative")
    return list(args.r)


def _config(args) -> OptimizationConfig:
    if args.grid < 3:
        raise UsageError("--grid must be at least 3")
    return OptimizationConfig(grid_phi=args.grid, grid_theta=args.grid)


def _threads(args) -> int:
    if args.threads < 1:
        raise UsageError("--threads must be at least 1")
    return args.threads


# --- subcommands ------------------------------------------------------------


def cmd_bound(args) -> int:
    p = _open_prior(args.p)
    summary = bound_summary(p)
    if args.format == "csv":
        _emit(args, render_csv([summary], tuple(summary)))
    else:
        _emit(args, render_json(args.command_line, summary))
    return EXIT_OK


def gain_map_records(p_steps: int, gamma_steps: int) -> list[dict]:
    records = []
    gammas = np.linspace(0.5, 1.0, gamma_steps)
    half_step = 0.25 / (gamma_steps - 1)
    for p in np.linspace(0.0, 1.0, p_steps):
        g_opt = gamma_opt(p)
        for g in gammas:
            records.append(
                {
                    "p": float(p),
                    "gamma": float(g),
                    "gain": success_probability(p, g).gain,
                    "gamma_opt_flag": bool(abs(g - g_opt) <= half_step),
                }
            )
    return records


def cmd_gain_map(args) -> int:
    if args.p_steps < 2 or args.gamma_steps < 2:
        raise UsageError("--p-steps and --gamma-steps must be at least 2")
    _emit_table(args, gain_map_records(args.p_steps, args.gamma_steps), GAIN_MAP_COLUMNS)
    return EXIT_OK


def cmd_coherent(args) -> int:
    p = _open_prior(args.p)
    if not 0.0 < args.n_min <= args.n_max:
        raise UsageError("--n-min and --n-max must satisfy 0 < n_min <= n_max")
    if args.points < 2:
        raise UsageError("--points must be at least 2")
    if args.n_min == args.n_max:
        raise UsageError("--n-min must be smaller than --n-max when --points >= 2")
    if args.log:
        grid = np.geomspace(args.n_min, args.n_max, args.points)
    else:
        grid = np.linspace(args.n_min, args.n_max, args.points)
    table = sweep_photons(p, grid, workers=_threads(args))
    _emit_table(args, table.records, COHERENT_COLUMNS)
    return EXIT_OK


def cmd_squeezed(args) -> int:
    config = _config(args)
    workers = _threads(args)
    rs = _squeezings(args)
    if any(n < 0 for n in args.n):
        raise UsageError("--n values must be non-negative")
    if args.mode == "prior-sweep":
        if len(args.n) != 1:
            raise UsageError("prior-sweep takes exactly one --n value")
        if args.p_steps < 1:
            raise UsageError("--p-steps must be at least 1")
        lo, hi = _open_prior(args.p_min, "--p-min"), _open_prior(args.p_max, "--p-max")
        if lo > hi:
            raise UsageError("--p-min must not exceed --p-max")
        grid = np.linspace(lo, hi, args.p_steps) if args.p_steps > 1 else np.array([lo])
        records = []
        for r in sorted(set(rs)):
            records.extend(sweep_prior(args.n[0], r, grid, config, workers=workers).records)
        _emit_table(args, records, PRIOR_COLUMNS)
    else:
        p = _open_prior(args.p)
        table = sweep_squeezing(p, args.n, rs, config, workers=workers)
        _emit_table(args, table.records, RSWEEP_COLUMNS)
    return EXIT_OK


def _pair_diff(analytic: float, numeric: float) -> dict:
    return {"analytic": analytic, "numeric": numeric, "abs_diff": abs(analytic - numeric)}


def verify_report(p: float, n: float, phi: float, r: float, theta: float, dim: int) -> dict:
    """Closed forms against the Fock-space oracle for one scenario.

    Raises :class:`TruncationError` when ``dim`` is too small.
    """
    first, second = conjugate_pair(n, phi, r, theta)
    ov_a = overlap_squeezed(first, second)
    ov_n = overlap_numeric(first, second, dim)
    gamma_a = helstrom_gamma(min(abs(ov_a) ** 2, 1.0))
    gamma_n = helstrom_gamma(min(abs(ov_n) ** 2, 1.0))
    spoof = spoof_mixture(gamma_n, first.coherent_part(), second.coherent_part())
    ps_n = success_probability_numeric(p, first, spoof, dim)
    if r == 0.0:
        label, ps_a = "ps", success_probability(p, gamma_a).ps
    else:
        label, ps_a = "ps_bar", restricted_success(restricted_scenario(p, n, phi, r, theta))
    checks = {
        "overlap": {
            "analytic": [ov_a.real, ov_a.imag],
            "numeric": [ov_n.real, ov_n.imag],
            "abs_diff": abs(ov_a - ov_n),
        },
        "gamma": _pair_diff(gamma_a, gamma_n),
        label: _pair_diff(ps_a, ps_n),
    }
    return {
        "inputs": {"p": p, "n": n, "phi": phi, "r": r, "theta": theta, "dim": dim},
        **checks,
        "tolerance": VERIFY_TOL,
        "passed": all(c["abs_diff"] < VERIFY_TOL for c in checks.values()),
    }


def cmd_verify(args) -> int:
    p = _open_prior(args.p)
    if args.n < 0:
        raise UsageError("--n must be non-negative")
    rs = _squeezings(args)
    if len(rs) != 1:
        raise UsageError("verify takes a single squeezing value")
    r = rs[0]
    phi = args.phi if args.phi is not None else phi_opt(args.n, p)
    first, second = conjugate_pair(args.n, phi, r, args.theta)
    dim = args.dim if args.dim is not None else suggest_dim(first, second)
    if dim < 2:
        raise UsageError("--dim must be at least 2")
    try:
        report = verify_report(p, args.n, phi, r, args.theta, dim)
    except TruncationError as exc:
        print(f"qspoof verify: truncation error: {exc}", file=sys.stderr)
        return EXIT_TRUNCATION
    _emit(args, render_json(args.command_line, report))
    return EXIT_OK if report["passed"] else EXIT_TOLERANCE


# --- parser -----------------------------------------------------------------


def _add_output(sub, default_format: str):
    sub.add_argument("--format", choices=("csv", "json"), default=default_format)
    sub.add_argument("--out", metavar="FILE", help="write output to FILE instead of stdout")
    sub.add_argument("--threads", type=int, default=1, help="worker processes for sweeps")


def _add_squeezing(sub, default_r):
    group = sub.add_mutually_exclusive_group()
    group.add_argument("--r", type=float, nargs="+", default=default_r, help="squeezing coefficient(s)")
    group.add_argument("--squeezing-db", type=float, nargs="+", help="squeezing in dB instead of --r")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qspoof", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("bound", help="universal detection bound at a prior p")
    sub.add_argument("--p", type=float, required=True)
    _add_output(sub, "json")
    sub.set_defaults(func=cmd_bound)

    sub = subs.add_parser("sweep-fig2", help="quantum gain over the (p, gamma) plane")
    sub.add_argument("--p-steps", type=int, default=101)
    sub.add_argument("--gamma-steps", type=int, default=101)
    _add_output(sub, "csv")
    sub.set_defaults(func=cmd_gain_map)

    sub = subs.add_parser("coherent", help="conjugate coherent pair versus photon number")
    sub.add_argument("--p", type=float, default=0.5)
    sub.add_argument("--n-min", type=float, default=1e-3)
    sub.add_argument("--n-max", type=float, default=100.0)
    sub.add_argument("--points", type=int, default=200)
    sub.add_argument("--log", action="store_true", help="logarithmic photon-number spacing")
    _add_output(sub, "csv")
    sub.set_defaults(func=cmd_coherent)

    sub = subs.add_parser("squeezed", help="squeezed transmitter against a coherent-only spoofer")
    sub.add_argument("--mode", choices=("prior-sweep", "r-sweep"), default="r-sweep")
    sub.add_argument("--n", type=float, nargs="+", default=[100.0])
    _add_squeezing(sub, [0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 3.9])
    sub.add_argument("--p", type=float, default=0.5, help="prior for r-sweep")
    sub.add_argument("--p-min", type=float, default=0.01)
    sub.add_argument("--p-max", type=float, default=0.99)
    sub.add_argument("--p-steps", type=int, default=50)
    sub.add_argument("--grid", type=int, default=121, help="angle grid points per axis")
    _add_output(sub, "csv")
    sub.set_defaults(func=cmd_squeezed)

    sub = subs.add_parser("verify", help="check closed forms against the Fock-space oracle")
    sub.add_argument("--p", type=float, required=True)
    sub.add_argument("--n", type=float, required=True)
    sub.add_argument("--phi", type=float, default=None, help="displacement phase (default: optimal)")
    _add_squeezing(sub, [0.0])
    sub.add_argument("--theta", type=float, default=0.0)
    sub.add_argument("--dim", type=int, default=None, help="Fock truncation (default: heuristic)")
    _add_output(sub, "json")
    sub.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    args.command_line = " ".join(["qspoof", *argv])
    try:
        return args.func(args)
    except (UsageError, DomainError) as exc:
        parser.error(str(exc))
    return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
