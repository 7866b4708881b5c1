"""Command-line entry point.

Subcommands: solve, converge, local-error, bourgain-norm, regime-check.
Exit codes: 0 success, 2 usage or configuration error, 3 numerical abort
(blow-up guard or non-finite state).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from . import __version__
from .bourgain import RegimeQuery, discrete_bourgain_norm, regime_check
from .harness import (
    ExperimentPlan,
    PlanError,
    load_plan,
    parse_step,
    run_convergence,
    run_local_error,
)
from .initial_data import RoughDataSpec, rough_data
from .integrators import BlowUpError, StepperConfig, evolve
from .spectral import make_grid, set_fft_workers
from . import stateio


def _jsonable(value):
    """JSON-safe copy: non-finite floats become strings."""
    if isinstance(value, float) and not math.isfinite(value):
        return "inf" if value > 0 else ("-inf" if value < 0 else "nan")
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def _print_json(doc) -> None:
    print(json.dumps(_jsonable(doc), indent=2, sort_keys=True))


def _apply_threads(args) -> None:
    if getattr(args, "threads", None):
        set_fft_workers(args.threads)


def _cmd_solve(args) -> int:
    _apply_threads(args)
    if args.init_file:
        u0 = stateio.load_field(args.init_file)
        grid = u0.grid
    else:
        missing = [n for n in ("dim", "n", "s") if getattr(args, n) is None]
        if missing:
            raise PlanError(f"solve needs --init-file or all of --dim/--n/--s (missing {missing})")
        grid = make_grid(args.dim, args.n)
        u0 = rough_data(RoughDataSpec(
            grid=grid, s=args.s, eps=args.eps, seed=args.seed, target_l2=args.target_l2,
        ))
    if args.T < 0:
        raise PlanError(f"--T must be >= 0, got {args.T}")
    n_steps = round(args.T / args.tau) if args.T > 0 else 0
    if args.T > 0 and abs(n_steps * args.tau - args.T) > 1e-9 * args.T:
        raise PlanError(f"--tau {args.tau} does not divide --T {args.T}")
    cfg = StepperConfig(
        grid=grid, tau=args.tau, mu=args.mu,
        filtered=args.filtered, dealias_policy=args.dealias,
    )
    traj = evolve(u0, cfg, n_steps, stride=max(n_steps, 1))
    if args.out:
        stateio.save_field(args.out, traj.final)
    summary = {
        "steps": n_steps,
        "tau": args.tau,
        "T": args.T,
        "filtered": args.filtered,
        "mass_start": traj.mass[0],
        "mass_end": traj.mass[-1],
        "out": args.out,
    }
    if args.json:
        _print_json(summary)
    else:
        for key in ("steps", "tau", "T", "filtered", "mass_start", "mass_end", "out"):
            print(f"{key}: {summary[key]}")
    return 0


def _plan_with_overrides(args) -> ExperimentPlan:
    plan = load_plan(args.plan)
    updates = {}
    if args.seeds is not None:
        updates["seeds"] = tuple(int(x) for x in args.seeds.split(","))
    if args.s is not None:
        updates["s_values"] = tuple(float(x) for x in args.s.split(","))
    if args.T is not None:
        updates["T"] = parse_step(args.T)
    if updates:
        from dataclasses import replace
        plan = replace(plan, **updates)
    return plan


def _run_report(args, runner, need_reference: bool) -> int:
    plan = _plan_with_overrides(args)
    plan.validate(need_reference=need_reference)
    if args.dry_run:
        _print_json(plan.to_dict())
        return 0
    progress = None if args.quiet else (lambda msg: print(msg, flush=True))
    report = runner(plan, progress=progress)
    out_json = args.out_json or plan.output_json
    out_csv = args.out_csv or plan.output_csv
    if out_json:
        report.save_json(out_json)
        print(f"wrote {out_json}")
    if out_csv:
        report.save_csv(out_csv)
        print(f"wrote {out_csv}")
    for c in report.curves:
        slope = "n/a" if c.slope is None else f"{c.slope:.4f}"
        print(
            f"s={c.s} seed={c.seed}: slope={slope} "
            f"(theoretical {c.theoretical_slope}), residual={c.residual}"
        )
    return 0


def _cmd_converge(args) -> int:
    _apply_threads(args)
    return _run_report(args, run_convergence, need_reference=True)


def _cmd_local_error(args) -> int:
    _apply_threads(args)
    return _run_report(args, run_local_error, need_reference=False)


def _cmd_regime_check(args) -> int:
    report = regime_check(RegimeQuery(d=args.dim, s0=args.s0, b0=args.b0))
    row = None
    if report.table1_row is not None:
        r = report.table1_row
        row = {
            "case": r.case,
            "s0_interval": list(r.s0_interval),
            "p": r.p,
            "q": r.q,
            "p_crude": r.p_crude,
            "q_crude": r.q_crude,
        }
    doc = {
        "d": report.d,
        "s0": report.s0,
        "admissible": report.admissible,
        "s0_condition": report.s0_condition,
        "b0_interval": list(report.b0_interval),
        "b0_interval_empty": report.b0_interval_empty,
        "b0": report.b0,
        "b0_admissible": report.b0_admissible,
        "b1": report.b1,
        "table1_row": row,
    }
    if args.json:
        _print_json(doc)
        return 0
    print("admissible" if report.admissible else "inadmissible", f"({report.s0_condition})")
    if report.b0_interval_empty:
        print("b0 interval: empty")
    else:
        print(f"b0 in ({report.b0_interval[0]}, {report.b0_interval[1]})")
    if report.b0 is not None:
        ok = "admissible" if report.b0_admissible else "inadmissible"
        print(f"b0 = {report.b0} is {ok}; b1 = {report.b1}")
    if row is not None:
        print(
            f"case {row['case']}: s0 in ({row['s0_interval'][0]:g}, {row['s0_interval'][1]:g}], "
            f"p={row['p']:g}, q={row['q']:g}, crude p={row['p_crude']:g}, q={row['q_crude']:g}"
        )
    return 0


def _cmd_bourgain_norm(args) -> int:
    seq = stateio.load_sequence_json(args.input)
    value = discrete_bourgain_norm(seq, s=args.s, b=args.b, sigma_samples=args.sigma_samples)
    doc = {
        "norm": value,
        "s": args.s,
        "b": args.b,
        "sequence_length": seq.length,
        "sigma_samples": args.sigma_samples or 2 * seq.length,
        "tau": seq.tau,
    }
    if args.json:
        _print_json(doc)
    else:
        print(f"X^(s={args.s}, b={args.b}) norm = {value!r} "
              f"(M={seq.length}, sigma_samples={doc['sigma_samples']})")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="torusnls",
        description="Filtered Lie splitting for the cubic Schrodinger equation on the torus",
    )
    parser.add_argument("--version", action="version", version=f"torusnls {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    env_threads = os.environ.get("TORUSNLS_THREADS")
    default_threads = int(env_threads) if env_threads and env_threads.isdigit() else None

    def add_threads(p):
        p.add_argument("--threads", type=int, default=default_threads,
                       help="transform worker cap (env TORUSNLS_THREADS)")

    p = sub.add_parser("solve", help="march one trajectory and dump the final state")
    p.add_argument("--dim", type=int)
    p.add_argument("--n", type=int, help="grid points per axis (power of two)")
    p.add_argument("--s", type=float, help="Sobolev exponent of the rough data")
    p.add_argument("--eps", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--target-l2", type=float, default=0.1)
    p.add_argument("--init-file", help="load the initial state instead of drawing it")
    p.add_argument("--tau", type=parse_step, required=True)
    p.add_argument("--T", type=parse_step, required=True)
    p.add_argument("--mu", type=int, default=-1, choices=(1, -1))
    p.add_argument("--filtered", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--dealias", choices=("strict", "warn", "off"), default="warn")
    p.add_argument("--out", help="state dump path (.json for JSON, else binary)")
    p.add_argument("--json", action="store_true", help="machine-readable run summary")
    add_threads(p)
    p.set_defaults(func=_cmd_solve)

    for name, help_text, func in (
        ("converge", "final-time error study over a time-step ladder", _cmd_converge),
        ("local-error", "one-step defect study over a time-step ladder", _cmd_local_error),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("plan", help="JSON plan file")
        p.add_argument("--dry-run", action="store_true", help="print the resolved plan, run nothing")
        p.add_argument("--seeds", help="override: comma-separated seed list")
        p.add_argument("--s", help="override: comma-separated s list")
        p.add_argument("--T", help="override: final time")
        p.add_argument("--out-json")
        p.add_argument("--out-csv")
        p.add_argument("--quiet", action="store_true")
        add_threads(p)
        p.set_defaults(func=func)

    p = sub.add_parser("regime-check", help="admissibility of (d, s0) and the b0 interval")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--s0", type=float, required=True)
    p.add_argument("--b0", type=float)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_regime_check)

    p = sub.add_parser("bourgain-norm", help="weighted space-time norm of a stored sequence")
    p.add_argument("--input", required=True, help="sequence JSON file")
    p.add_argument("--s", type=float, default=0.0)
    p.add_argument("--b", type=float, default=0.0)
    p.add_argument("--sigma-samples", type=int)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_bourgain_norm)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BlowUpError as err:
        print(f"numerical abort: {err}", file=sys.stderr)
        return 3
    except (PlanError, ValueError, OSError, json.JSONDecodeError, KeyError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
