"""Solvers and benchmarks for goal-directed Markov decision processes."""

from .fixtures import chain3, split
from .layouts import layout, layout_names, office_layout
from .mdp import (SparseMdp, apply_T, bellman_backup_state,
                  evaluate_policy_exact, induce_policy, is_eps_contracted,
                  policy_error_bound, sup_norm_diff)
from .mdpfile import MdpFileError, parse_mdp_file, write_mdp_file
from .problems import (NOISE_PROFILES, GoalDirectedMdp, GridSpec, NoiseProfile,
                       gen_gridworld, glue_copies, make_goal_directed,
                       random_layered_acyclic_mdp, random_mdp)
from .reachability import (UNREACHABLE, DistanceMap, compute_distance_map,
                           ideal_successors, one_step_successors)
from .solvers import (SolveReport, SolverConfig, refine_with_vi, run_gvi,
                      solve_dvi, solve_gauss_seidel, solve_pvi, solve_pvi1,
                      solve_vi)

__version__ = "0.1.0"

__all__ = [
    "SparseMdp", "apply_T", "bellman_backup_state", "evaluate_policy_exact",
    "induce_policy", "is_eps_contracted", "policy_error_bound", "sup_norm_diff",
    "DistanceMap", "UNREACHABLE", "compute_distance_map", "ideal_successors",
    "one_step_successors",
    "SolverConfig", "SolveReport", "solve_vi", "solve_gauss_seidel",
    "solve_pvi", "refine_with_vi", "run_gvi", "solve_dvi", "solve_pvi1",
    "GoalDirectedMdp", "GridSpec", "NoiseProfile", "NOISE_PROFILES",
    "make_goal_directed", "gen_gridworld", "glue_copies", "random_mdp",
    "random_layered_acyclic_mdp",
    "chain3", "split", "layout", "layout_names", "office_layout",
    "parse_mdp_file", "write_mdp_file", "MdpFileError",
    "__version__",
]
