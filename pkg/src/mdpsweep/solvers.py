"""Value-iteration solvers.

Six variants share the sweep kernels:

* solve_vi            — synchronous sweeps until the residual drops.
* solve_gauss_seidel  — in-place sweeps in a caller-supplied state order.
* solve_pvi           — synchronous sweeps that skip states whose one-step
                        successors barely moved between the previous two
                        iterates.
* run_gvi             — a single goal-outward sweep in distance order.
* solve_dvi           — run_gvi iterated to convergence.
* solve_pvi1          — distance-ordered in-place sweeps with the skip test.

All solvers terminate when consecutive iterates differ by at most eps in
sup norm, report converged=False instead of raising when the iteration cap
is hit, and are deterministic (bit-reproducible) for identical inputs.
solve_pvi/solve_pvi1 returns are close to, but not guaranteed, eps-backup
-residual quality; follow them with refine_with_vi to certify.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .mdp import SparseMdp, _check_value
from .reachability import DistanceMap


@dataclass(frozen=True)
class SolverConfig:
    """Termination thresholds shared by all solvers.

    eps is the successive-iterate sup-norm threshold; delta is the
    skip-test threshold on successor movement (defaults to eps's value so
    the skipped-state drift stays commensurate with the residual target).
    """
    eps: float = 1e-3
    delta: float = 1e-3
    max_iterations: int = 100_000

    def __post_init__(self):
        if self.eps <= 0.0:
            raise ValueError("eps must be > 0")
        if self.delta <= 0.0:
            raise ValueError("delta must be > 0")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")


@dataclass
class SolveReport:
    """Outcome of one solver run.

    backups counts max-over-actions evaluations only; skipped states do not
    count. skip_tests counts skip-test evaluations, passed or failed.
    residual_trace has one entry per iteration; when converged is True its
    last entry is <= the eps used.
    """
    value: np.ndarray
    iterations: int
    backups: int
    skip_tests: int
    residual_trace: list[float] = field(default_factory=list)
    converged: bool = False


def _residual(u: np.ndarray, v: np.ndarray) -> float:
    return float(np.max(np.abs(u - v)))


def solve_vi(mdp: SparseMdp, v0: np.ndarray, cfg: SolverConfig = SolverConfig()) -> SolveReport:
    """Plain value iteration: synchronous sweeps from v0."""
    v = np.array(_check_value(mdp, v0), copy=True)
    out = np.empty_like(v)
    trace: list[float] = []
    backups = 0
    converged = False
    iterations = 0
    for iterations in range(1, cfg.max_iterations + 1):
        backups += kernels.sweep_sync(mdp, v, out)
        r = _residual(out, v)
        trace.append(r)
        v, out = out, v
        if r <= cfg.eps:
            converged = True
            break
    return SolveReport(value=v, iterations=iterations, backups=backups,
                       skip_tests=0, residual_trace=trace, converged=converged)


def refine_with_vi(mdp: SparseMdp, v0: np.ndarray, cfg: SolverConfig = SolverConfig()) -> SolveReport:
    """Run solve_vi from a warm start, typically a skip-test solver's
    output; the report's iteration count shows how much polishing the
    start needed."""
    return solve_vi(mdp, v0, cfg)


def solve_gauss_seidel(mdp: SparseMdp, v0: np.ndarray, ordering,
                       cfg: SolverConfig = SolverConfig()) -> SolveReport:
    """In-place sweeps in a fixed state ordering; within a sweep, later
    states read the already-updated values of earlier ones."""
    order = np.ascontiguousarray(ordering, dtype=np.int64)
    if not np.array_equal(np.sort(order), np.arange(mdp.num_states, dtype=np.int64)):
        raise ValueError("ordering must be a permutation of all states")
    v = np.array(_check_value(mdp, v0), copy=True)
    trace: list[float] = []
    backups = 0
    converged = False
    iterations = 0
    for iterations in range(1, cfg.max_iterations + 1):
        nv = v.copy()
        backups += kernels.sweep_ordered(mdp, nv, order)
        r = _residual(nv, v)
        trace.append(r)
        v = nv
        if r <= cfg.eps:
            converged = True
            break
    return SolveReport(value=v, iterations=iterations, backups=backups,
                       skip_tests=0, residual_trace=trace, converged=converged)


def run_gvi(mdp: SparseMdp, dmap: DistanceMap, v0: np.ndarray) -> np.ndarray:
    """One goal-outward sweep: update distance-0 states first, then each
    farther layer reading the layers already updated, then unreachable
    states in index order. Costs exactly num_states backups — the same
    work as a single synchronous sweep — and returns the new vector."""
    v = np.array(_check_value(mdp, v0), copy=True)
    kernels.sweep_ordered(mdp, v, dmap.sweep_order)
    return v


def solve_dvi(mdp: SparseMdp, dmap: DistanceMap, v0: np.ndarray,
              cfg: SolverConfig = SolverConfig()) -> SolveReport:
    """Goal-outward sweeps iterated until the residual drops; equivalent to
    solve_gauss_seidel with the distance ordering (a tested identity)."""
    v = np.array(_check_value(mdp, v0), copy=True)
    trace: list[float] = []
    backups = 0
    converged = False
    iterations = 0
    for iterations in range(1, cfg.max_iterations + 1):
        nv = run_gvi(mdp, dmap, v)
        backups += mdp.num_states
        r = _residual(nv, v)
        trace.append(r)
        v = nv
        if r <= cfg.eps:
            converged = True
            break
    return SolveReport(value=v, iterations=iterations, backups=backups,
                       skip_tests=0, residual_trace=trace, converged=converged)


def solve_pvi(mdp: SparseMdp, cfg: SolverConfig = SolverConfig()) -> SolveReport:
    """Skip-test value iteration from the zero vector.

    From the second iteration on, a state whose one-step successors all
    moved by at most delta between the previous two iterates keeps its
    value instead of being backed up. The skip test reads clean synchronous
    snapshots; buffers rotate so no sweep pollutes them.
    """
    v_prev = np.zeros(mdp.num_states)
    v_cur = np.zeros(mdp.num_states)
    out = np.empty(mdp.num_states)
    trace: list[float] = []
    backups = 0
    tests = 0
    converged = False
    iterations = 0
    for iterations in range(1, cfg.max_iterations + 1):
        b, t = kernels.sweep_skip_sync(mdp, v_prev, v_cur, out, cfg.delta,
                                       iterations >= 2)
        backups += b
        tests += t
        r = _residual(out, v_cur)
        trace.append(r)
        v_prev, v_cur, out = v_cur, out, v_prev
        if r <= cfg.eps:
            converged = True
            break
    return SolveReport(value=v_cur, iterations=iterations, backups=backups,
                       skip_tests=tests, residual_trace=trace, converged=converged)


def solve_pvi1(mdp: SparseMdp, dmap: DistanceMap,
               cfg: SolverConfig = SolverConfig()) -> SolveReport:
    """Skip-test value iteration with goal-outward in-place sweeps, from
    the zero vector.

    Each outer iteration sweeps in distance order; non-skipped states get
    an in-place backup (reading already-updated earlier states) while the
    skip test itself always compares the previous two outer iterates.
    """
    v_prev = np.zeros(mdp.num_states)
    v_cur = np.zeros(mdp.num_states)
    trace: list[float] = []
    backups = 0
    tests = 0
    converged = False
    iterations = 0
    for iterations in range(1, cfg.max_iterations + 1):
        v_work = v_cur.copy()
        b, t = kernels.sweep_skip_ordered(mdp, v_prev, v_cur, v_work,
                                          dmap.sweep_order, cfg.delta,
                                          iterations >= 2)
        backups += b
        tests += t
        r = _residual(v_work, v_cur)
        trace.append(r)
        v_prev, v_cur = v_cur, v_work
        if r <= cfg.eps:
            converged = True
            break
    return SolveReport(value=v_cur, iterations=iterations, backups=backups,
                       skip_tests=tests, residual_trace=trace, converged=converged)
