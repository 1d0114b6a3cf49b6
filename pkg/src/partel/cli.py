"""Command-line front end.

Every command writes exactly one CSV table or one JSON object to stdout.
Exit codes: 0 ok, 2 invalid input, 3 solver did not converge, 4 requested
conditional outcome has zero probability.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys

import numpy as np

from . import __version__
from .bounds import ConvergenceError, solve_symmetric_schedule
from .hilbert import bloch_state, fidelity, orthogonal, overlap
from .montecarlo import ShotConfig, mc_clone_chain, mc_partial_teleport
from .protocols import (
    ZeroProbabilityError,
    clone_chain,
    locc_reverse_alice,
    locc_reverse_bob,
    partial_teleport,
    sequential_teleport,
    teleport_joint,
    timebin_equivalence,
    unot_local,
)

SWEEP_COLUMNS = ["R", "F_S", "F_Sprime", "F_I", "P_success", "ineq_residual"]
DEFAULT_THETA = 1.0
DEFAULT_PHI = 0.5
SIG_DIGITS = 12
RESIDUAL_FLOOR = 1e-13


def _fmt(x) -> str:
    return format(float(x), f".{SIG_DIGITS}g")


def _round(obj):
    if isinstance(obj, float):
        return float(_fmt(obj))
    if isinstance(obj, dict):
        return {k: _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    return obj


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _flatten(v, f"{prefix}{k}.")
    elif isinstance(obj, (list, tuple)):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}{i}.")
    else:
        yield prefix[:-1], obj


def _cell(v) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return _fmt(v)
    return str(v)


def _schedule(text: str) -> tuple[float, ...]:
    try:
        return tuple(parse_fraction(t) for t in text.split(",") if t.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def parse_fraction(token: str) -> float:
    """Parse ``"0.375"`` or ``"3/8"``."""
    token = token.strip()
    if "/" in token:
        num, den = token.split("/", 1)
        return float(num) / float(den)
    return float(token)


def _reflectivity(text: str) -> float:
    try:
        return parse_fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad reflectivity {text!r}: {exc}") from None


# -- commands -----------------------------------------------------------------


def _denoise(x: float) -> float:
    # residuals below this are rounding noise; zero them so tables are reproducible
    return 0.0 if abs(x) < RESIDUAL_FLOOR else x


def _report_row(r, rep):
    return {
        "R": r,
        "F_S": rep.fidelity_s,
        "F_Sprime": rep.fidelity_sprime,
        "F_I": rep.fidelity_i,
        "P_success": rep.success_probability,
        "ineq_residual": _denoise(rep.inequality_residual),
    }


def cmd_teleport(args, psi):
    return _report_row(args.r, partial_teleport(psi, args.r))


def cmd_sweep(args, psi):
    if args.steps < 2:
        raise ValueError("--steps must be at least 2")
    grid = np.linspace(args.rmin, args.rmax, args.steps)
    rows = [_report_row(float(r), partial_teleport(psi, float(r))) for r in grid]
    return {"columns": SWEEP_COLUMNS, "rows": rows}


def cmd_chain(args, psi):
    rep = clone_chain(psi, args.n, args.schedule)
    return {
        "clone_fidelities": [f for _, f in rep.per_mode_fidelities],
        "anticlone_fidelity": rep.fidelity_i,
        "success_probability": rep.success_probability,
        "error_probabilities": dict(rep.error_probabilities),
    }


def cmd_sequence(args, psi):
    rep = sequential_teleport(psi, args.schedule)
    anti = [p for role, p in rep.error_probabilities if role.startswith("I")]
    return {
        "clone_fidelities": [f for _, f in rep.per_mode_fidelities],
        "anticlone_fidelities": anti,
        "success_probability": rep.success_probability,
    }


def cmd_reverse(args, psi):
    joint, p_proj = teleport_joint(psi, args.r)
    restore = locc_reverse_bob if args.side == "bob" else locc_reverse_alice
    state, p = restore(joint, args.outcome, args.r)
    return {
        "restored_fidelity": overlap(state, psi),
        "probability": p,
        "projection_probability": p_proj,
    }


def cmd_unot(args, psi):
    rho, p = unot_local(psi, args.n)
    return {"anticlone_fidelity": fidelity(orthogonal(psi), rho), "success_probability": p}


def cmd_timebin(args, psi):
    rep = timebin_equivalence(psi, args.r, correct=not args.no_correction)
    row = _report_row(args.r, rep)
    row["corrected"] = not args.no_correction
    return row


def _est(e):
    return {"mean": e.mean, "std_error": e.std_error, "n_accepted": e.n_accepted, "n_total": e.n_total}


def cmd_mc(args, psi):
    if args.protocol == "teleport":
        est = mc_partial_teleport(psi, ShotConfig(args.shots, args.seed, args.r))
        return {
            "F_S": _est(est.fidelity_s),
            "F_Sprime": _est(est.fidelity_sprime),
            "F_I": _est(est.fidelity_i),
            "P_success": _est(est.success),
        }
    est = mc_clone_chain(psi, args.n, ShotConfig(args.shots, args.seed))
    return {
        "clone_fidelities": [_est(e) for e in est.clones],
        "anticlone_fidelity": _est(est.anticlone),
        "success_probability": _est(est.success),
    }


def cmd_solve_schedule(args, psi):
    sched = solve_symmetric_schedule(args.m, tol=args.tol)
    rep = sequential_teleport(bloch_state(args.theta, args.phi), sched)
    fids = [f for _, f in rep.per_mode_fidelities]
    return {
        "schedule": list(sched),
        "common_fidelity": float(np.mean(fids)),
        "max_gap": _denoise(max(fids) - min(fids)),
    }


COMMANDS = {
    "teleport": cmd_teleport,
    "sweep": cmd_sweep,
    "chain": cmd_chain,
    "sequence": cmd_sequence,
    "reverse": cmd_reverse,
    "unot": cmd_unot,
    "timebin": cmd_timebin,
    "mc": cmd_mc,
    "solve-schedule": cmd_solve_schedule,
}


# -- plumbing -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--theta", type=float, default=DEFAULT_THETA, help="Bloch polar angle of the input")
    common.add_argument("--phi", type=float, default=DEFAULT_PHI, help="Bloch azimuth of the input")
    common.add_argument("--format", choices=["csv", "json"], default="json")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="partel", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("teleport", parents=[common], help="1 -> 2 partial teleportation")
    s.add_argument("--r", type=_reflectivity, default=1 / 3)

    s = sub.add_parser("sweep", parents=[common], help="sweep the reflectivity")
    s.add_argument("--rmin", type=float, default=0.0)
    s.add_argument("--rmax", type=float, default=0.5)
    s.add_argument("--steps", type=int, default=101)

    s = sub.add_parser("chain", parents=[common], help="N -> N+1 cloning chain")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--schedule", type=_schedule, default=None, help="comma-separated R_1..R_N")

    s = sub.add_parser("sequence", parents=[common], help="sequential distribution to several Bobs")
    s.add_argument("--schedule", type=_schedule, required=True, help="comma-separated R_1..R_{M-1}")

    s = sub.add_parser("reverse", parents=[common], help="conditional LOCC reversal")
    s.add_argument("--side", choices=["bob", "alice"], default="bob")
    s.add_argument("--outcome", choices=["VH", "HV"], default="VH")
    s.add_argument("--r", type=_reflectivity, default=1 / 3)

    s = sub.add_parser("unot", parents=[common], help="local universal-NOT from N replicas")
    s.add_argument("--n", type=int, default=1)

    s = sub.add_parser("timebin", parents=[common], help="time-bin encoding with shared |Phi+>")
    s.add_argument("--r", type=_reflectivity, default=1 / 3)
    s.add_argument("--no-correction", action="store_true")

    s = sub.add_parser("mc", parents=[common], help="shot-based Monte Carlo")
    s.add_argument("--protocol", choices=["teleport", "chain"], default="teleport")
    s.add_argument("--r", type=_reflectivity, default=1 / 3)
    s.add_argument("--n", type=int, default=1)
    s.add_argument("--shots", type=int, default=100_000)

    s = sub.add_parser("solve-schedule", parents=[common], help="equal-fidelity sequential schedule")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--tol", type=float, default=1e-10)
    return p


def _params(args) -> dict:
    skip = {"command", "format", "seed", "verbose"}
    out = {}
    for k, v in vars(args).items():
        if k in skip:
            continue
        out[k] = list(v) if isinstance(v, tuple) else v
    return out


def render(command: str, args, results) -> str:
    if args.format == "json":
        obj = {
            "command": command,
            "params": _params(args),
            "results": results,
            "meta": {"seed": args.seed, "version": __version__},
        }
        return json.dumps(_round(obj), separators=(",", ":")) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if command == "sweep":
        w.writerow(results["columns"])
        for row in results["rows"]:
            w.writerow([_cell(row[c]) for c in results["columns"]])
    else:
        w.writerow(["quantity", "value"])
        for key, val in _flatten(results):
            w.writerow([key, _cell(val)])
    return buf.getvalue()


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    if not 0.0 <= args.theta <= math.pi or not 0.0 <= args.phi < 2 * math.pi:
        parser.print_usage(sys.stderr)
        print("partel: error: need 0 <= theta <= pi and 0 <= phi < 2 pi", file=sys.stderr)
        return 2
    psi = bloch_state(args.theta, args.phi)
    try:
        results = COMMANDS[args.command](args, psi)
    except ZeroProbabilityError as exc:
        print(f"partel: zero-probability outcome: {exc}", file=sys.stderr)
        return 4
    except ConvergenceError as exc:
        print(f"partel: {exc}; best schedule {exc.best_schedule}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"partel: error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(render(args.command, args, results))
    return 0


if __name__ == "__main__":
    sys.exit(main())
