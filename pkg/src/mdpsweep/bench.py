"""Benchmark harness: solver pipelines, suite/scaling runs, CSV output.

The unit of comparison is the backup count (max-over-actions evaluations),
a machine-independent cost proxy; wall time is recorded for curiosity but
nothing asserts on it.
"""
from __future__ import annotations

import re
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from . import kernels
from .fixtures import chain3, split
from .layouts import layout, layout_names
from .mdp import apply_T, is_eps_contracted, sup_norm_diff
from .mdpfile import parse_mdp_file
from .problems import NOISE_PROFILES, GoalDirectedMdp, GridSpec, gen_gridworld, glue_copies
from .reachability import compute_distance_map
from .solvers import (SolveReport, SolverConfig, refine_with_vi, run_gvi,
                      solve_dvi, solve_gauss_seidel, solve_pvi, solve_pvi1,
                      solve_vi)

SOLVER_NAMES = ("vi", "gs", "pvi", "gvi", "dvi", "pvi1")

CSV_COLUMNS = ("problem", "solver", "num_states", "eps", "delta", "discount",
               "iterations", "backups", "skip_tests", "converged",
               "final_residual", "wall_time_ms")


@dataclass
class BenchRun:
    """One row of the suite CSV."""
    problem: str
    solver: str
    num_states: int
    eps: float
    delta: float
    discount: float
    iterations: int
    backups: int
    skip_tests: int
    converged: bool
    final_residual: float
    wall_time_ms: float
    residual_trace: list[float] | None = None

    def csv_fields(self) -> list[str]:
        return [self.problem, self.solver, str(self.num_states), repr(self.eps),
                repr(self.delta), repr(self.discount), str(self.iterations),
                str(self.backups), str(self.skip_tests),
                "true" if self.converged else "false",
                repr(self.final_residual), f"{self.wall_time_ms:.3f}"]


def combine_reports(first: SolveReport, second: SolveReport) -> SolveReport:
    """Merge a preprocessing run and its refinement into one report."""
    return SolveReport(value=second.value,
                       iterations=first.iterations + second.iterations,
                       backups=first.backups + second.backups,
                       skip_tests=first.skip_tests + second.skip_tests,
                       residual_trace=first.residual_trace + second.residual_trace,
                       converged=second.converged)


def run_pipeline(solver: str, gmdp: GoalDirectedMdp,
                 cfg: SolverConfig = SolverConfig()) -> SolveReport:
    """Run one named solver pipeline from the zero vector.

    pvi and pvi1 are automatically refined with plain value iteration so
    their final values carry the residual guarantee. gvi is the single
    goal-outward sweep; it has no residual loop, so its report marks
    converged by whether that one sweep already left the value
    eps-contracted.
    """
    mdp = gmdp.mdp
    v0 = np.zeros(mdp.num_states)
    if solver == "vi":
        return solve_vi(mdp, v0, cfg)
    if solver == "gs":
        return solve_gauss_seidel(mdp, v0, np.arange(mdp.num_states), cfg)
    if solver == "pvi":
        first = solve_pvi(mdp, cfg)
        return combine_reports(first, refine_with_vi(mdp, first.value, cfg))
    if solver == "gvi":
        dmap = compute_distance_map(mdp, gmdp.goal)
        value = run_gvi(mdp, dmap, v0)
        # no residual loop here, so the run's residual is the backup
        # residual of the single sweep's result
        residual = sup_norm_diff(value, apply_T(mdp, value))
        return SolveReport(value=value, iterations=1, backups=mdp.num_states,
                           skip_tests=0, residual_trace=[residual],
                           converged=residual <= cfg.eps)
    if solver == "dvi":
        dmap = compute_distance_map(mdp, gmdp.goal)
        return solve_dvi(mdp, dmap, v0, cfg)
    if solver == "pvi1":
        dmap = compute_distance_map(mdp, gmdp.goal)
        first = solve_pvi1(mdp, dmap, cfg)
        return combine_reports(first, refine_with_vi(mdp, first.value, cfg))
    raise ValueError(f"unknown solver {solver!r} (have {', '.join(SOLVER_NAMES)})")


class ProblemLoadError(Exception):
    pass


def resolve_problem(token: str, discount: float | None = None) -> tuple[str, GoalDirectedMdp]:
    """Materialize a problem from a token.

    Tokens: 'chain3' / 'split' (fixtures, canonical discount 0.9),
    '<layout>:<noise>' such as 'A:standard' (generated, default discount
    0.99), or a path to an .mdp file (the file's own discount applies).
    """
    if token == "chain3":
        return token, chain3(0.9 if discount is None else discount)
    if token == "split":
        return token, split(0.9 if discount is None else discount)
    if ":" in token:
        name, _, noise = token.partition(":")
        if name in layout_names() and noise in NOISE_PROFILES:
            return token, gen_gridworld(layout(name, noise),
                                        0.99 if discount is None else discount)
        raise ProblemLoadError(
            f"unknown generated problem {token!r}; expected <layout>:<noise> with "
            f"layout in {{{', '.join(layout_names())}}} and noise in "
            f"{{{', '.join(NOISE_PROFILES)}}}")
    path = Path(token)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ProblemLoadError(f"cannot read {token!r}: {exc}") from exc
    try:
        return token, parse_mdp_file(text)
    except ValueError as exc:
        raise ProblemLoadError(f"cannot parse {token!r}: {exc}") from exc


def _safe_name(token: str) -> str:
    return re.sub(r"[^A-Za-z0-9._-]+", "-", token)


def timed_pipeline(solver, gmdp, cfg):
    """run_pipeline plus its wall time in milliseconds."""
    t0 = time.perf_counter()
    report = run_pipeline(solver, gmdp, cfg)
    return report, (time.perf_counter() - t0) * 1000.0


def run_suite(problems: Sequence[str], solvers: Sequence[str],
              cfg: SolverConfig, out_csv: str | Path,
              discount: float | None = None) -> tuple[list[BenchRun], bool]:
    """Run every (problem, solver) pair, write the CSV and one residual
    trace file per run next to it.

    Returns the rows and an all-clear flag: True only when every problem
    loaded, every run converged, and every final value passed the
    eps-contraction check. Rows are written in canonical (problem, solver)
    order regardless of execution order.
    """
    if not problems:
        raise ValueError("at least one problem is required")
    if not solvers:
        raise ValueError("at least one solver is required")
    for s in solvers:
        if s not in SOLVER_NAMES:
            raise ValueError(f"unknown solver {s!r} (have {', '.join(SOLVER_NAMES)})")

    out_csv = Path(out_csv)
    rows: list[BenchRun] = []
    ok = True
    for token in sorted(set(problems)):
        try:
            name, gmdp = resolve_problem(token, discount)
        except ProblemLoadError as exc:
            print(f"error: {exc}", file=sys.stderr)
            rows.append(BenchRun(problem=token, solver="load", num_states=0,
                                 eps=cfg.eps, delta=cfg.delta, discount=float("nan"),
                                 iterations=0, backups=0, skip_tests=0,
                                 converged=False, final_residual=float("nan"),
                                 wall_time_ms=0.0))
            ok = False
            continue
        for solver in sorted(set(solvers), key=SOLVER_NAMES.index):
            report, wall_ms = timed_pipeline(solver, gmdp, cfg)
            contracted = is_eps_contracted(gmdp.mdp, report.value, cfg.eps)
            ok = ok and report.converged and contracted
            rows.append(BenchRun(problem=name, solver=solver,
                                 num_states=gmdp.mdp.num_states,
                                 eps=cfg.eps, delta=cfg.delta,
                                 discount=gmdp.mdp.discount,
                                 iterations=report.iterations,
                                 backups=report.backups,
                                 skip_tests=report.skip_tests,
                                 converged=report.converged,
                                 final_residual=report.residual_trace[-1],
                                 wall_time_ms=wall_ms,
                                 residual_trace=report.residual_trace))

    rows.sort(key=lambda r: (r.problem, SOLVER_NAMES.index(r.solver)
                             if r.solver in SOLVER_NAMES else -1))
    out_csv.parent.mkdir(parents=True, exist_ok=True)
    with open(out_csv, "w") as fh:
        fh.write(",".join(CSV_COLUMNS) + "\n")
        for row in rows:
            fh.write(",".join(row.csv_fields()) + "\n")
    for row in rows:
        if row.residual_trace is None:
            continue
        trace_path = out_csv.parent / (f"{out_csv.stem}__{_safe_name(row.problem)}"
                                       f"__{row.solver}.trace")
        with open(trace_path, "w") as fh:
            for r in row.residual_trace:
                fh.write(f"{r!r}\n")
    return rows, ok


SCALE_COLUMNS = ("copies", "solver", "num_states", "iterations", "backups",
                 "skip_tests", "converged", "final_residual", "wall_time_ms",
                 "vi_over_pvi1_backups")


def emit_scaling_table(spec: GridSpec, ks: Sequence[int], solvers: Sequence[str],
                       cfg: SolverConfig, out_csv: str | Path,
                       discount: float | None = None) -> tuple[list[dict], bool]:
    """Solve the glued-copies family for each k and write one CSV row per
    (k, solver): backup counts versus problem size. When both vi and pvi1
    are selected, every row of a given k also carries their backup ratio —
    reported for inspection, never asserted on."""
    if not ks or list(ks) != sorted(set(ks)) or min(ks) < 1:
        raise ValueError("k values must be distinct, ascending, and >= 1")
    if not solvers:
        raise ValueError("at least one solver is required")
    for s in solvers:
        if s not in SOLVER_NAMES:
            raise ValueError(f"unknown solver {s!r} (have {', '.join(SOLVER_NAMES)})")
    solvers = sorted(set(solvers), key=SOLVER_NAMES.index)

    rows: list[dict] = []
    ok = True
    for k in ks:
        gmdp = glue_copies(spec, k, 0.99 if discount is None else discount)
        per_k: list[dict] = []
        backups: dict[str, int] = {}
        for solver in solvers:
            report, wall_ms = timed_pipeline(solver, gmdp, cfg)
            ok = ok and report.converged
            per_k.append({"copies": k, "solver": solver,
                          "num_states": gmdp.mdp.num_states,
                          "iterations": report.iterations,
                          "backups": report.backups,
                          "skip_tests": report.skip_tests,
                          "converged": "true" if report.converged else "false",
                          "final_residual": repr(report.residual_trace[-1]),
                          "wall_time_ms": f"{wall_ms:.3f}"})
            backups[solver] = report.backups
        ratio = (repr(backups["vi"] / backups["pvi1"])
                 if "vi" in backups and "pvi1" in backups else "")
        for row in per_k:
            row["vi_over_pvi1_backups"] = ratio
        rows.extend(per_k)

    out_csv = Path(out_csv)
    out_csv.parent.mkdir(parents=True, exist_ok=True)
    with open(out_csv, "w") as fh:
        fh.write(",".join(SCALE_COLUMNS) + "\n")
        for row in rows:
            fh.write(",".join(str(row[c]) for c in SCALE_COLUMNS) + "\n")
    return rows, ok


def compare_backends(gmdp: GoalDirectedMdp, solver: str = "vi",
                     cfg: SolverConfig = SolverConfig(),
                     repeats: int = 3) -> tuple[list[dict], bool]:
    """Run one pipeline on every available kernel backend and time it.

    Returns per-backend records (best wall ms over `repeats`) and whether
    all backends produced bit-identical value functions — they must, since
    the backends promise identical numerics.
    """
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    records = []
    for backend in sorted(kernels.available_backends()):
        with kernels.override(backend):
            best_ms = float("inf")
            report = None
            for _ in range(repeats):
                report, wall_ms = timed_pipeline(solver, gmdp, cfg)
                best_ms = min(best_ms, wall_ms)
        records.append({"backend": backend, "best_ms": best_ms,
                        "iterations": report.iterations,
                        "backups": report.backups, "value": report.value})
    reference = records[0]["value"]
    identical = all(np.array_equal(rec["value"], reference) for rec in records)
    return records, identical
