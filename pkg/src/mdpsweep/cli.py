"""Command-line benchmark harness.

Subcommands:
    solve     one problem, one solver; prints the run summary
    suite     all (problem, solver) pairs to a CSV plus residual traces
    scale     glued-copies scaling table to a CSV
    backends  time the compiled vs pure-Python kernels on one problem

Exit codes: 0 success, 1 usage error, 2 run failure.
"""
from __future__ import annotations

import argparse
import sys

from .bench import (SOLVER_NAMES, ProblemLoadError, compare_backends,
                    emit_scaling_table, resolve_problem, run_suite,
                    timed_pipeline)
from .layouts import layout, layout_names
from .mdp import is_eps_contracted
from .problems import NOISE_PROFILES
from .solvers import SolverConfig

_DEFAULT_SUITE_SOLVERS = "vi,gs,pvi,dvi,pvi1"


class _Parser(argparse.ArgumentParser):
    # the harness reserves exit code 2 for run failures; argparse's default
    # usage-error exit code is 2, so remap to 1
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(1)


def _add_config_flags(p):
    p.add_argument("--eps", type=float, default=1e-3,
                   help="residual termination threshold (default 0.001)")
    p.add_argument("--delta", type=float, default=1e-3,
                   help="skip-test threshold (default 0.001)")
    p.add_argument("--discount", type=float, default=None,
                   help="discount for generated problems (default 0.99; "
                        "fixtures default to 0.9; files keep their own)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mdpsweep",
                     description="Solve and benchmark goal-directed MDPs.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_solve = sub.add_parser("solve", help="run one solver on one problem")
    p_solve.add_argument("--layout", choices=layout_names(), help="generated layout name")
    p_solve.add_argument("--noise", choices=tuple(NOISE_PROFILES), default="standard")
    p_solve.add_argument("--file", help="path to an .mdp problem file")
    p_solve.add_argument("--solver", required=True, choices=SOLVER_NAMES)
    p_solve.add_argument("--out", help="write the residual trace to this file")
    _add_config_flags(p_solve)

    p_suite = sub.add_parser("suite", help="run a problem x solver matrix")
    p_suite.add_argument("problems", nargs="*",
                         help="problem tokens: chain3, split, <layout>:<noise>, "
                              "or .mdp file paths (default: all shipped layouts "
                              "under both noise profiles)")
    p_suite.add_argument("--solver", default=_DEFAULT_SUITE_SOLVERS,
                         help=f"comma-separated solvers or 'all' "
                              f"(default {_DEFAULT_SUITE_SOLVERS})")
    p_suite.add_argument("--out", default="suite.csv", help="output CSV path")
    _add_config_flags(p_suite)

    p_scale = sub.add_parser("scale", help="glued-copies scaling experiment")
    p_scale.add_argument("--layout", choices=layout_names(), required=True)
    p_scale.add_argument("--noise", choices=tuple(NOISE_PROFILES), default="standard")
    p_scale.add_argument("--copies", default="1,2,4",
                         help="comma-separated copy counts (default 1,2,4)")
    p_scale.add_argument("--solver", default="vi,pvi1",
                         help="comma-separated solvers (default vi,pvi1)")
    p_scale.add_argument("--out", default="scale.csv", help="output CSV path")
    _add_config_flags(p_scale)

    p_back = sub.add_parser("backends", help="compare kernel backends")
    p_back.add_argument("--layout", choices=layout_names(), default="B")
    p_back.add_argument("--noise", choices=tuple(NOISE_PROFILES), default="standard")
    p_back.add_argument("--solver", default="vi", choices=SOLVER_NAMES)
    p_back.add_argument("--repeats", type=int, default=3)
    _add_config_flags(p_back)

    return parser


def _config(args) -> SolverConfig:
    return SolverConfig(eps=args.eps, delta=args.delta)


def _solver_list(arg: str) -> list[str]:
    if arg.strip() == "all":
        return list(SOLVER_NAMES)
    return [s for s in (tok.strip() for tok in arg.split(",")) if s]


def _cmd_solve(args) -> int:
    if (args.layout is None) == (args.file is None):
        print("error: pass exactly one of --layout or --file", file=sys.stderr)
        return 1
    token = f"{args.layout}:{args.noise}" if args.layout else args.file
    try:
        name, gmdp = resolve_problem(token, args.discount)
    except ProblemLoadError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    cfg = _config(args)
    report, wall_ms = timed_pipeline(args.solver, gmdp, cfg)
    contracted = is_eps_contracted(gmdp.mdp, report.value, cfg.eps)
    print(f"problem {name}  solver {args.solver}  states {gmdp.mdp.num_states}  "
          f"discount {gmdp.mdp.discount}")
    print(f"iterations {report.iterations}  backups {report.backups}  "
          f"skip_tests {report.skip_tests}")
    print(f"converged {str(report.converged).lower()}  "
          f"final_residual {report.residual_trace[-1]:.6g}  "
          f"eps_contracted {str(contracted).lower()}  wall_ms {wall_ms:.3f}")
    if args.out:
        with open(args.out, "w") as fh:
            for r in report.residual_trace:
                fh.write(f"{r!r}\n")
        print(f"trace written to {args.out}")
    return 0 if report.converged and contracted else 2


def _cmd_suite(args) -> int:
    solvers = _solver_list(args.solver)
    problems = args.problems or [f"{name}:{noise}" for name in layout_names()
                                 for noise in NOISE_PROFILES]
    try:
        rows, ok = run_suite(problems, solvers, _config(args), args.out, args.discount)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    converged = sum(r.converged for r in rows)
    print(f"{len(rows)} runs, {converged} converged; CSV written to {args.out}")
    return 0 if ok else 2


def _cmd_scale(args) -> int:
    solvers = _solver_list(args.solver)
    try:
        ks = [int(tok) for tok in args.copies.split(",") if tok.strip()]
        spec = layout(args.layout, args.noise)
        rows, ok = emit_scaling_table(spec, ks, solvers, _config(args),
                                      args.out, args.discount)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"{len(rows)} runs across {len(ks)} sizes; CSV written to {args.out}")
    return 0 if ok else 2


def _cmd_backends(args) -> int:
    token = f"{args.layout}:{args.noise}"
    _, gmdp = resolve_problem(token, args.discount)
    try:
        records, identical = compare_backends(gmdp, args.solver, _config(args),
                                              args.repeats)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"problem {token}  solver {args.solver}  states {gmdp.mdp.num_states}")
    base_ms = max(rec["best_ms"] for rec in records)
    for rec in records:
        speedup = base_ms / rec["best_ms"] if rec["best_ms"] > 0 else float("inf")
        print(f"  backend {rec['backend']:<7} best_ms {rec['best_ms']:>10.3f}  "
              f"iterations {rec['iterations']}  backups {rec['backups']}  "
              f"speedup x{speedup:.1f}")
    if len(records) == 1:
        print("  (compiled kernels not installed; only the pure-Python backend ran)")
    print(f"values bit-identical across backends: {str(identical).lower()}")
    return 0 if identical else 2


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    handlers = {"solve": _cmd_solve, "suite": _cmd_suite,
                "scale": _cmd_scale, "backends": _cmd_backends}
    return handlers[args.command](args)


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
