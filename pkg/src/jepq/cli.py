"""Command-line front end.

Subcommands: stationary, verify, simulate, converge, limits, rook. Output
is JSON (default) or CSV; every rational quantity is emitted both as an
exact "p/r" string and as a float, so reports can be re-parsed without
losing exactness. The environment variable JEPQ_STATE_CAP overrides the
default cap on enumerated state-space sizes.

Exit codes: 0 success, 1 verification failure, 2 usage or parameter error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

from .qcomb import Scalar, parse_scalar
from .jep import (
    BoundedGeometric,
    BoundedUniform,
    UnboundedGeometric,
    closed_form_stats,
    enumerate_states,
    stationary_distribution,
    stationary_prob,
    stationary_weight,
)
from .mc import coupled_simulate, empirical_distribution, simulate
from .oracle import (
    DEFAULT_STATE_CAP,
    limit_rows_fixed_n,
    limit_rows_growing_n,
    total_variation,
    tv_to_unbounded,
)
from .qcomb import gould_stirling, partition_z
from .rook import circ, enumerate_configs
from .verify import DEFAULT_QS, run_checks

__all__ = ["main"]


def _state_cap() -> int:
    raw = os.environ.get("JEPQ_STATE_CAP")
    return int(raw) if raw else DEFAULT_STATE_CAP


def _state_key(state) -> str:
    return "-".join(str(h) for h in state) if state else "empty"


def _scalar_fields(value: Scalar) -> dict:
    if isinstance(value, float):
        return {"exact": None, "float": value}
    return {"exact": str(Fraction(value)), "float": float(value)}


def _scalar_cell(value: Scalar) -> str:
    return repr(value) if isinstance(value, float) else str(Fraction(value))


def _emit(report: dict, rows: list[dict], columns: list[str], args) -> None:
    """Write the report as JSON (summary plus rows) or CSV (rows only)."""
    if args.format == "json":
        text = json.dumps({**report, "rows": rows}, indent=2, default=str) + "\n"
    else:
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=columns, extrasaction="ignore")
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
        text = buffer.getvalue()
    if args.out:
        with open(args.out, "w") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _build_model(args) -> BoundedGeometric | BoundedUniform | UnboundedGeometric:
    name = args.model
    if name == "bounded-geometric":
        return BoundedGeometric(args.m, args.n, args.q_value)
    if name == "bounded-uniform":
        return BoundedUniform(args.m, args.n)
    return UnboundedGeometric(args.n, args.q_value)


def _cmd_stationary(args) -> int:
    if args.model == "unbounded-geometric":
        raise ValueError("stationary tables need a bounded model")
    model = _build_model(args)
    law = stationary_distribution(model)
    rows = []
    for state in enumerate_states(model.m, model.n):
        prob = law[state]
        rows.append(
            {
                "state": _state_key(state),
                "weight": _scalar_cell(stationary_weight(state, model)),
                "prob": _scalar_cell(prob),
                "prob_float": float(prob),
            }
        )
    summary: dict = {"m": args.m, "n": args.n, "model": args.model}
    if isinstance(model, BoundedGeometric):
        stats = closed_form_stats(model.m, model.n, model.q)
        summary.update(
            q=_scalar_fields(model.q),
            Z=_scalar_fields(partition_z(model.m, model.n, model.q)),
            ground=_scalar_fields(stats.ground),
            top=_scalar_fields(stats.top),
            throw_fraction=_scalar_fields(stats.throw_fraction),
            throw_fraction_uncorrected=_scalar_fields(stats.throw_fraction_uncorrected),
        )
    _emit({"summary": summary}, rows, ["state", "weight", "prob", "prob_float"], args)
    return 0


def _cmd_verify(args) -> int:
    qs = (args.q_value,) if args.q else DEFAULT_QS
    results = run_checks(max_m=args.max_m, qs=qs)
    if args.format == "json":
        payload = [
            {"name": r.name, "passed": r.passed, "detail": r.detail} for r in results
        ]
        text = json.dumps({"max_m": args.max_m, "checks": payload}, indent=2) + "\n"
    elif args.format == "csv":
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=["name", "passed", "detail"])
        writer.writeheader()
        for r in results:
            writer.writerow({"name": r.name, "passed": r.passed, "detail": r.detail})
        text = buffer.getvalue()
    else:
        text = "".join(
            f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.detail}\n" for r in results
        )
    if args.out:
        with open(args.out, "w") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return 0 if all(r.passed for r in results) else 1


def _cmd_simulate(args) -> int:
    model = _build_model(args)
    initial = tuple(range(model.n))
    traj = simulate(model, initial, args.steps, args.seed)
    empirical = empirical_distribution(traj, args.burn_in)
    summary = {
        "model": args.model,
        "m": args.m,
        "n": args.n,
        "seed": args.seed,
        "steps": args.steps,
        "burn_in": args.burn_in,
        "throw_count": traj.throw_count,
        "throw_fraction_empirical": traj.throw_fraction,
        "states_visited": len(empirical),
    }
    if not isinstance(model, UnboundedGeometric):
        exact = {s: float(p) for s, p in stationary_distribution(model).items()}
        summary["tv_empirical_vs_exact"] = total_variation(empirical, exact)
    else:
        mass = sum(
            float(stationary_prob(s, model)) for s in empirical
        )
        tv = total_variation(
            empirical,
            {s: float(stationary_prob(s, model)) for s in empirical},
            nu_tail=1.0 - mass,
        )
        summary["tv_empirical_vs_exact"] = tv
    if isinstance(model, BoundedGeometric):
        stats = closed_form_stats(model.m, model.n, model.q)
        summary["throw_fraction_exact"] = float(stats.throw_fraction)
    rows = [
        {"state": _state_key(s), "frequency": f}
        for s, f in sorted(empirical.items())
    ]
    _emit({"summary": summary}, rows, ["state", "frequency"], args)
    return 0


def _cmd_converge(args) -> int:
    lo, hi = args.m_range
    rows = []
    for m in range(max(lo, args.n), hi + 1):
        row = tv_to_unbounded(m, args.n, args.q_value, state_cap=_state_cap())
        rows.append(
            {
                "m": m,
                "n": args.n,
                "q": _scalar_cell(args.q_value),
                "tv": _scalar_cell(row.tv),
                "tv_float": float(row.tv),
                "bound_exact": float(row.bound_exact),
                "bound_simple": float(row.bound_simple),
            }
        )
    report = {"summary": {"n": args.n, "q": _scalar_fields(args.q_value)}}
    _emit(report, rows, ["m", "n", "q", "tv", "tv_float", "bound_exact", "bound_simple"], args)
    return 0


def _cmd_limits(args) -> int:
    lo, hi = args.m_range
    if args.n is not None:
        rows = limit_rows_fixed_n(args.n, args.q_value, range(max(lo, args.n), hi + 1))
        mode = "fixed-n"
    else:
        rows = limit_rows_growing_n(args.q_value, range(max(lo, 1), hi + 1))
        mode = "growing-n"
    out = []
    for row in rows:
        shown = row.value_uncorrected if args.paper_literal else row.value
        out.append(
            {
                "m": row.m,
                "n": row.n,
                "value": _scalar_cell(shown),
                "value_float": float(shown),
                "target": float(row.target),
                "abs_error": abs(float(shown) - float(row.target)),
            }
        )
    report = {
        "summary": {
            "mode": mode,
            "uncorrected": bool(args.paper_literal),
            "q": _scalar_fields(args.q_value),
        }
    }
    _emit(report, out, ["m", "n", "value", "value_float", "target", "abs_error"], args)
    return 0


def _cmd_rook(args) -> int:
    configs = enumerate_configs(args.m, args.n)
    histogram: dict[int, int] = {}
    for config in configs:
        value = circ(args.m, config)
        histogram[value] = histogram.get(value, 0) + 1
    total = sum(
        count * args.q_value**value for value, count in histogram.items()
    )
    gould = gould_stirling(args.m + 1, args.m - args.n + 1, args.q_value)
    rows = [
        {"circ": value, "count": count}
        for value, count in sorted(histogram.items())
    ]
    report = {
        "summary": {
            "m": args.m,
            "n": args.n,
            "configs": len(configs),
            "q": _scalar_fields(args.q_value),
            "circ_sum": _scalar_fields(total),
            "gould_value": _scalar_fields(gould),
            "match": total == gould,
        }
    }
    _emit(report, rows, ["circ", "count"], args)
    return 0


def _parse_m_range(text: str) -> tuple[int, int]:
    try:
        lo, hi = text.split(":")
        lo_i, hi_i = int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A:B, got {text!r}")
    if lo_i > hi_i:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return lo_i, hi_i


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--m", type=int, default=None, help="number of admissible heights")
    parser.add_argument("--n", type=int, default=None, help="number of particles")
    parser.add_argument("--q", type=str, default=None, help='throw parameter, "p/r" or decimal')
    parser.add_argument(
        "--model",
        choices=["bounded-geometric", "unbounded-geometric", "bounded-uniform"],
        default="bounded-geometric",
    )
    parser.add_argument("--seed", type=int, default=0, help="64-bit simulation seed")
    parser.add_argument("--steps", type=int, default=100_000)
    parser.add_argument("--burn-in", dest="burn_in", type=int, default=1000)
    parser.add_argument("--m-range", dest="m_range", type=_parse_m_range, default=None)
    parser.add_argument("--max-m", dest="max_m", type=int, default=6)
    parser.add_argument("--format", choices=["json", "csv"], default=None)
    parser.add_argument("--exact", action="store_true", help="keep q as an exact rational")
    parser.add_argument(
        "--paper-literal",
        dest="paper_literal",
        action="store_true",
        help="report the uncorrected published forms instead of the corrected ones",
    )
    parser.add_argument("--out", type=str, default=None, help="write the report to a file")


_COMMANDS = {
    "stationary": _cmd_stationary,
    "verify": _cmd_verify,
    "simulate": _cmd_simulate,
    "converge": _cmd_converge,
    "limits": _cmd_limits,
    "rook": _cmd_rook,
}

_REQUIRED = {
    "stationary": ("m", "n"),
    "verify": (),
    "simulate": ("n",),
    "converge": ("n", "q", "m_range"),
    "limits": ("q", "m_range"),
    "rook": ("m", "n", "q"),
}

# Identity-facing commands always keep q exact; --exact opts in elsewhere.
_EXACT_COMMANDS = {"stationary", "verify", "rook"}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="jepq",
        description="Stationary laws, identity verification, and simulation "
        "for juggling exclusion chains.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for command in _COMMANDS:
        _add_common(sub.add_parser(command))
    args = parser.parse_args(argv)

    if args.format is None:
        args.format = "text" if args.command == "verify" else "json"
    for field in _REQUIRED[args.command]:
        if getattr(args, field) is None:
            parser.error(f"{args.command} requires --{field.replace('_', '-')}")
    if args.command in ("stationary", "simulate"):
        if args.model != "unbounded-geometric" and args.m is None:
            parser.error(f"bounded {args.command} requires --m")
        if args.model != "bounded-uniform" and args.q is None:
            parser.error(f"geometric {args.command} requires --q")

    args.q_value = None
    if args.q is not None:
        try:
            args.q_value = parse_scalar(
                args.q, exact=args.exact or args.command in _EXACT_COMMANDS
            )
        except (ValueError, ZeroDivisionError):
            parser.error(f"cannot parse q={args.q!r}")
    try:
        return _COMMANDS[args.command](args)
    except ValueError as err:
        print(f"jepq: error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
