"""Core MDP machinery: backups, norms, policies, the exact-evaluation oracle."""
import numpy as np
import pytest

import mdpsweep
from mdpsweep import (SparseMdp, apply_T, bellman_backup_state,
                      evaluate_policy_exact, induce_policy, is_eps_contracted,
                      policy_error_bound, sup_norm_diff)
from mdpsweep.fixtures import CHAIN3_G, CHAIN3_S1, CHAIN3_S2, SPLIT_S0
from mdpsweep.solvers import SolverConfig, solve_dvi, solve_vi
from mdpsweep.reachability import compute_distance_map

CHAIN3_VSTAR = np.array([1.0, 0.9, 0.81, 0.0])  # g, s1, s2, done at discount 0.9


def dense_backup(mdp, v, s):
    """Brute-force backup summing over a dense successor vector; the
    independent cross-check for the sparse kernel."""
    best = float("-inf")
    for a in range(mdp.num_actions):
        p = np.zeros(mdp.num_states)
        for sp, pr in mdp.successors(s, a):
            p[sp] = pr
        best = max(best, mdp.reward(s, a) + mdp.discount * float(p @ v))
    return best


class TestSparseMdp:
    def test_rejects_bad_probability_sum(self):
        with pytest.raises(ValueError, match="sum"):
            SparseMdp(2, 1, [[[(0, 0.5), (1, 0.4)]], [[(1, 1.0)]]],
                      np.zeros((2, 1)), 0.9)

    def test_rejects_duplicate_successor(self):
        with pytest.raises(ValueError, match="duplicate"):
            SparseMdp(2, 1, [[[(0, 0.5), (0, 0.5)]], [[(1, 1.0)]]],
                      np.zeros((2, 1)), 0.9)

    def test_rejects_out_of_range_successor(self):
        with pytest.raises(ValueError, match="out of range"):
            SparseMdp(2, 1, [[[(2, 1.0)]], [[(1, 1.0)]]], np.zeros((2, 1)), 0.9)

    def test_rejects_negative_probability(self):
        with pytest.raises(ValueError, match="negative"):
            SparseMdp(2, 1, [[[(0, 1.2), (1, -0.2)]], [[(1, 1.0)]]],
                      np.zeros((2, 1)), 0.9)

    def test_rejects_discount_one(self):
        with pytest.raises(ValueError, match="discount"):
            SparseMdp(1, 1, [[[(0, 1.0)]]], np.zeros((1, 1)), 1.0)

    def test_zero_entries_dropped(self):
        mdp = SparseMdp(2, 1, [[[(0, 1.0), (1, 0.0)]], [[(1, 1.0)]]],
                        np.zeros((2, 1)), 0.9)
        assert mdp.successors(0, 0) == [(0, 1.0)]

    def test_arrays_read_only(self, chain3_g):
        with pytest.raises(ValueError):
            chain3_g.mdp.prob[0] = 0.5


class TestBellmanBackup:
    def test_chain3_goal_from_zero(self, chain3_g):
        # zero value function: the backup reduces to the best immediate reward
        assert bellman_backup_state(chain3_g.mdp, np.zeros(4), CHAIN3_G) == 1.0

    def test_chain3_fixed_point_at_s2(self, chain3_g):
        got = bellman_backup_state(chain3_g.mdp, CHAIN3_VSTAR, CHAIN3_S2)
        assert got == pytest.approx(0.81, abs=1e-12)

    def test_split_hand_value_and_dense_oracle(self, split_g):
        v = np.array([1.0, 0.0, 0.0])  # g=1, s0=0, done=0
        got = bellman_backup_state(split_g.mdp, v, SPLIT_S0)
        assert got == pytest.approx(0.9 * (0.7 * 1.0 + 0.3 * 0.0), abs=1e-15)
        assert got == pytest.approx(dense_backup(split_g.mdp, v, SPLIT_S0), abs=1e-15)

    def test_matches_dense_oracle_on_random_mdps(self):
        rng = np.random.default_rng(11)
        for _ in range(10):
            mdp = mdpsweep.random_mdp(15, 3, 0.9, rng)
            v = rng.uniform(-2, 2, 15)
            for s in range(15):
                assert bellman_backup_state(mdp, v, s) == pytest.approx(
                    dense_backup(mdp, v, s), abs=1e-12)


class TestApplyT:
    def test_chain3_first_sweep(self, chain3_g):
        out = apply_T(chain3_g.mdp, np.zeros(4))
        assert np.array_equal(out, [1.0, 0.0, 0.0, 0.0])

    def test_chain3_second_sweep(self, chain3_g):
        out = apply_T(chain3_g.mdp, apply_T(chain3_g.mdp, np.zeros(4)))
        assert np.array_equal(out, [1.0, 0.9, 0.0, 0.0])

    def test_input_not_modified(self, chain3_g):
        v = np.zeros(4)
        apply_T(chain3_g.mdp, v)
        assert np.array_equal(v, np.zeros(4))

    def test_fixed_point_of_tight_solve(self, split_g):
        v = solve_vi(split_g.mdp, np.zeros(3), SolverConfig(eps=1e-12)).value
        assert sup_norm_diff(apply_T(split_g.mdp, v), v) <= 1e-12

    def test_deterministic(self, grid_a):
        v = np.linspace(0, 1, grid_a.mdp.num_states)
        assert np.array_equal(apply_T(grid_a.mdp, v), apply_T(grid_a.mdp, v))


class TestSupNorm:
    def test_identical_vectors(self):
        assert sup_norm_diff(np.array([1.0, 2.0]), np.array([1.0, 2.0])) == 0.0

    def test_hand_value(self):
        # max(|1 - 0.5|, |2 - 3|) = max(0.5, 1)
        assert sup_norm_diff(np.array([1.0, 2.0]), np.array([0.5, 3.0])) == 1.0

    def test_length_mismatch_raises(self):
        with pytest.raises(ValueError, match="mismatch"):
            sup_norm_diff(np.zeros(2), np.zeros(3))

    def test_contraction_along_vi_run(self, split_g):
        report = solve_vi(split_g.mdp, np.zeros(3), SolverConfig(eps=1e-6))
        v_final = report.value
        assert sup_norm_diff(apply_T(split_g.mdp, v_final), v_final) <= \
            split_g.mdp.discount * report.residual_trace[-1]


class TestContractionProperty:
    def test_random_triples(self):
        rng = np.random.default_rng(23)
        for _ in range(30):
            gamma = float(rng.uniform(0.5, 0.99))
            mdp = mdpsweep.random_mdp(int(rng.integers(2, 30)), int(rng.integers(1, 4)),
                                      gamma, rng)
            u = rng.uniform(-10, 10, mdp.num_states)
            v = rng.uniform(-10, 10, mdp.num_states)
            lhs = sup_norm_diff(apply_T(mdp, u), apply_T(mdp, v))
            assert lhs <= gamma * sup_norm_diff(u, v) + 1e-12

    def test_monotone_iterates_from_zero(self, grid_a):
        v = np.zeros(grid_a.mdp.num_states)
        for _ in range(30):
            nv = apply_T(grid_a.mdp, v)
            assert np.all(nv >= v - 1e-15)
            v = nv


class TestInducePolicy:
    def test_chain3_optimal_policy(self, chain3_g):
        pi = induce_policy(chain3_g.mdp, CHAIN3_VSTAR)
        declare = chain3_g.declare_action
        assert pi[CHAIN3_G] == declare
        assert pi[CHAIN3_S1] == 0 and pi[CHAIN3_S2] == 0  # move

    def test_tie_breaks_to_lowest_action(self):
        # two identical actions everywhere: argmax must pick action 0
        mdp = SparseMdp(2, 2,
                        [[[(1, 1.0)], [(1, 1.0)]], [[(1, 1.0)], [(1, 1.0)]]],
                        np.ones((2, 2)), 0.9)
        assert np.array_equal(induce_policy(mdp, np.array([0.3, 0.7])), [0, 0])

    def test_split_prefers_risky_move(self, split_g):
        pi = induce_policy(split_g.mdp, np.array([1.0, 0.0, 0.0]))
        assert pi[SPLIT_S0] == 0  # 0.63 beats declaring for 0


class TestEvaluatePolicyExact:
    def test_chain3_optimal_policy_values(self, chain3_g):
        pi = induce_policy(chain3_g.mdp, CHAIN3_VSTAR)
        v = evaluate_policy_exact(chain3_g.mdp, pi)
        assert np.allclose(v, CHAIN3_VSTAR, atol=1e-12)

    def test_split_closed_form(self, split_g):
        pi = np.array([split_g.declare_action, 0, 0])
        v = evaluate_policy_exact(split_g.mdp, pi)
        assert v[SPLIT_S0] == pytest.approx(0.63 / 0.73, abs=1e-12)

    def test_zero_reward_policy_is_zero(self, chain3_g):
        v = evaluate_policy_exact(chain3_g.mdp, np.zeros(4, dtype=np.int64))
        assert np.array_equal(v, np.zeros(4))

    def test_iterative_path_matches_dense(self):
        # same policy through both routes must agree
        rng = np.random.default_rng(5)
        mdp = mdpsweep.random_mdp(30, 2, 0.95, rng)
        pi = rng.integers(0, 2, size=30)
        dense = evaluate_policy_exact(mdp, pi)

        from scipy.sparse import csr_matrix
        rows, cols, vals = [], [], []
        for s in range(30):
            for sp, p in mdp.successors(s, int(pi[s])):
                rows.append(s), cols.append(sp), vals.append(p)
        p_mat = csr_matrix((vals, (rows, cols)), shape=(30, 30))
        r_pi = np.array([mdp.reward(s, int(pi[s])) for s in range(30)])
        v = np.zeros(30)
        for _ in range(100_000):
            nv = r_pi + 0.95 * (p_mat @ v)
            if np.max(np.abs(nv - v)) <= 1e-13:
                break
            v = nv
        assert np.allclose(dense, v, atol=1e-10)

    def test_rejects_bad_policy(self, chain3_g):
        with pytest.raises(ValueError):
            evaluate_policy_exact(chain3_g.mdp, np.array([0, 0, 0, 5]))

    def test_sparse_route_agrees_with_dense_above_threshold(self):
        # same MDP evaluated just below and above the dense/sparse cutoff
        rng = np.random.default_rng(9)
        mdp = mdpsweep.random_mdp(2100, 2, 0.95, rng)
        pi = rng.integers(0, 2, size=2100)
        via_sparse = evaluate_policy_exact(mdp, pi)  # n > 2000: iterative

        import mdpsweep.mdp as core
        p_mat = np.zeros((2100, 2100))
        for s in range(2100):
            for sp, p in mdp.successors(s, int(pi[s])):
                p_mat[s, sp] = p
        r_pi = np.array([mdp.reward(s, int(pi[s])) for s in range(2100)])
        via_dense = np.linalg.solve(np.eye(2100) - 0.95 * p_mat, r_pi)
        assert np.max(np.abs(via_sparse - via_dense)) <= 1e-9


class TestEpsContraction:
    def test_tight_solution_is_contracted(self, split_g):
        v = solve_vi(split_g.mdp, np.zeros(3), SolverConfig(eps=1e-12)).value
        assert is_eps_contracted(split_g.mdp, v, 1e-6)

    def test_zero_vector_is_not(self, chain3_g):
        assert not is_eps_contracted(chain3_g.mdp, np.zeros(4), 0.5)

    def test_distance_swept_solution_is_contracted(self, split_g):
        dmap = compute_distance_map(split_g.mdp, split_g.goal)
        report = solve_dvi(split_g.mdp, dmap, np.zeros(3), SolverConfig(eps=1e-4))
        assert is_eps_contracted(split_g.mdp, report.value, 1e-4)

    def test_rejects_nonpositive_eps(self, chain3_g):
        with pytest.raises(ValueError):
            is_eps_contracted(chain3_g.mdp, np.zeros(4), 0.0)


class TestPolicyErrorBound:
    def test_benchmark_constants(self):
        assert policy_error_bound(0.001, 0.99) == pytest.approx(0.198, abs=1e-15)

    def test_zero_eps(self):
        assert policy_error_bound(0.0, 0.7) == 0.0

    def test_hand_value(self):
        # 2 * 0.5 * 0.5 / (1 - 0.5)
        assert policy_error_bound(0.5, 0.5) == pytest.approx(1.0, abs=1e-15)

    def test_rejects_gamma_one(self):
        with pytest.raises(ValueError):
            policy_error_bound(0.001, 1.0)

    def test_bound_holds_for_perturbed_optimum(self, split_g, split_vstar):
        rng = np.random.default_rng(3)
        for scale in (1e-4, 1e-3, 1e-2):
            v = split_vstar + rng.uniform(-scale, scale, 3)
            eps = sup_norm_diff(v, apply_T(split_g.mdp, v))
            v_pi = evaluate_policy_exact(split_g.mdp, induce_policy(split_g.mdp, v))
            bound = policy_error_bound(eps, split_g.mdp.discount)
            assert sup_norm_diff(v_pi, split_vstar) <= bound + 1e-8
