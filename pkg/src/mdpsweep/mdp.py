"""Sparse MDP representation and the Bellman machinery built on it.

A value function is a plain float64 numpy vector of length ``num_states``;
a policy is a plain int64 numpy vector of action indices. Both are kept as
bare arrays rather than wrapper types.
"""
from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from . import kernels


class SparseMdp:
    """Finite MDP with per-(state, action) sparse successor lists.

    transitions[s][a] is an iterable of (successor, probability) pairs;
    each list must sum to 1 within 1e-9, contain no duplicate successor,
    and carry no negative probability (exact zeros are dropped). Rewards
    are stored densely, one real per (state, action). The discount must
    satisfy 0 <= discount < 1.

    After construction the instance is immutable and safe to share across
    threads; solvers never mutate it.
    """

    def __init__(self, num_states: int, num_actions: int,
                 transitions: Sequence[Sequence[Iterable[tuple[int, float]]]],
                 rewards, discount: float):
        if num_states < 1:
            raise ValueError("num_states must be >= 1")
        if num_actions < 1:
            raise ValueError("num_actions must be >= 1")
        if not (0.0 <= discount < 1.0):
            raise ValueError(f"discount must satisfy 0 <= discount < 1, got {discount}")
        self.num_states = int(num_states)
        self.num_actions = int(num_actions)
        self.discount = float(discount)

        rew = np.asarray(rewards, dtype=np.float64)
        if rew.shape != (num_states, num_actions):
            raise ValueError(f"rewards must have shape ({num_states}, {num_actions}), got {rew.shape}")
        if not np.all(np.isfinite(rew)):
            raise ValueError("rewards must be finite")

        if len(transitions) != num_states:
            raise ValueError("transitions must have one row per state")
        sa_ptr = np.zeros(num_states * num_actions + 1, dtype=np.int64)
        succ_chunks: list[list[int]] = []
        prob_chunks: list[list[float]] = []
        pos = 0
        for s in range(num_states):
            row = transitions[s]
            if len(row) != num_actions:
                raise ValueError(f"state {s}: expected {num_actions} action lists, got {len(row)}")
            for a in range(num_actions):
                entries = [(int(sp), float(p)) for sp, p in row[a] if p != 0.0]
                entries.sort()
                total = 0.0
                seen = -1
                for sp, p in entries:
                    if sp < 0 or sp >= num_states:
                        raise ValueError(f"state {s} action {a}: successor {sp} out of range")
                    if p < 0.0:
                        raise ValueError(f"state {s} action {a}: negative probability {p}")
                    if sp == seen:
                        raise ValueError(f"state {s} action {a}: duplicate successor {sp}")
                    seen = sp
                    total += p
                if abs(total - 1.0) > 1e-9:
                    raise ValueError(f"state {s} action {a}: probabilities sum to {total!r}, not 1")
                succ_chunks.append([sp for sp, _ in entries])
                prob_chunks.append([p for _, p in entries])
                pos += len(entries)
                sa_ptr[s * num_actions + a + 1] = pos

        self.sa_ptr = sa_ptr
        self.succ = np.array([sp for chunk in succ_chunks for sp in chunk], dtype=np.int64)
        self.prob = np.array([p for chunk in prob_chunks for p in chunk], dtype=np.float64)
        self.rewards = rew.reshape(-1).copy()

        # Union of supports per state, used by the skip-test solvers; cheap
        # to probe, so built eagerly.
        nbr_ptr = np.zeros(num_states + 1, dtype=np.int64)
        nbr_chunks: list[list[int]] = []
        pos = 0
        for s in range(num_states):
            union = sorted({int(sp) for a in range(num_actions)
                            for sp in self.succ[sa_ptr[s * num_actions + a]:
                                                sa_ptr[s * num_actions + a + 1]]})
            nbr_chunks.append(union)
            pos += len(union)
            nbr_ptr[s + 1] = pos
        self.nbr_ptr = nbr_ptr
        self.nbr = np.array([t for chunk in nbr_chunks for t in chunk], dtype=np.int64)

        for arr in (self.sa_ptr, self.succ, self.prob, self.rewards,
                    self.nbr_ptr, self.nbr):
            arr.setflags(write=False)
        self._lists: tuple | None = None

    def lists(self) -> tuple:
        """Array contents as plain Python lists, cached; the pure-Python
        kernels run on these."""
        if self._lists is None:
            self._lists = (self.sa_ptr.tolist(), self.succ.tolist(),
                           self.prob.tolist(), self.rewards.tolist(),
                           self.nbr_ptr.tolist(), self.nbr.tolist())
        return self._lists

    def successors(self, s: int, a: int) -> list[tuple[int, float]]:
        """Stored (successor, probability) pairs for one (state, action)."""
        lo = self.sa_ptr[s * self.num_actions + a]
        hi = self.sa_ptr[s * self.num_actions + a + 1]
        return [(int(sp), float(p)) for sp, p in zip(self.succ[lo:hi], self.prob[lo:hi])]

    def reward(self, s: int, a: int) -> float:
        return float(self.rewards[s * self.num_actions + a])

    def rewards_table(self) -> np.ndarray:
        """Rewards as a (num_states, num_actions) array (a copy)."""
        return self.rewards.reshape(self.num_states, self.num_actions).copy()

    def __eq__(self, other):
        if not isinstance(other, SparseMdp):
            return NotImplemented
        return (self.num_states == other.num_states
                and self.num_actions == other.num_actions
                and self.discount == other.discount
                and np.array_equal(self.sa_ptr, other.sa_ptr)
                and np.array_equal(self.succ, other.succ)
                and np.array_equal(self.prob, other.prob)
                and np.array_equal(self.rewards, other.rewards))

    def __repr__(self):
        return (f"SparseMdp(num_states={self.num_states}, num_actions={self.num_actions}, "
                f"nnz={len(self.succ)}, discount={self.discount})")


def _check_value(mdp: SparseMdp, v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=np.float64)
    if v.shape != (mdp.num_states,):
        raise ValueError(f"value function has shape {v.shape}, expected ({mdp.num_states},)")
    if not np.all(np.isfinite(v)):
        raise ValueError("value function entries must be finite")
    return v


def bellman_backup_state(mdp: SparseMdp, v: np.ndarray, s: int) -> float:
    """One max-over-actions backup at state s: the best of
    r(s,a) + discount * sum_s' P(s'|s,a) v(s'), iterating only stored
    sparse entries."""
    return float(kernels.backup_state(mdp, _check_value(mdp, v), s))


def apply_T(mdp: SparseMdp, v: np.ndarray) -> np.ndarray:
    """Full synchronous backup sweep. Returns a new vector; v is untouched,
    so successive iterates stay clean for skip tests that compare them."""
    v = _check_value(mdp, v)
    out = np.empty_like(v)
    kernels.sweep_sync(mdp, v, out)
    return out


def sup_norm_diff(u: np.ndarray, v: np.ndarray) -> float:
    """max_s |u(s) - v(s)|."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise ValueError(f"length mismatch: {u.shape} vs {v.shape}")
    return float(np.max(np.abs(u - v)))


def is_eps_contracted(mdp: SparseMdp, v: np.ndarray, eps: float) -> bool:
    """Whether one full backup sweep moves v by at most eps in sup norm."""
    if eps <= 0.0:
        raise ValueError("eps must be > 0")
    return sup_norm_diff(v, apply_T(mdp, v)) <= eps


def policy_error_bound(eps: float, gamma: float) -> float:
    """Worst-case sup-norm loss of the policy greedy w.r.t. any value
    function whose backup residual is at most eps: 2*eps*gamma/(1-gamma)."""
    if not (0.0 <= gamma < 1.0):
        raise ValueError(f"gamma must satisfy 0 <= gamma < 1, got {gamma}")
    if eps < 0.0:
        raise ValueError("eps must be >= 0")
    return 2.0 * eps * gamma / (1.0 - gamma)


def induce_policy(mdp: SparseMdp, v: np.ndarray) -> np.ndarray:
    """Greedy policy w.r.t. v; ties break toward the lowest action index."""
    v = _check_value(mdp, v)
    sa_ptr, succ, prob, rewards, _, _ = mdp.lists()
    vl = v.tolist()
    gamma = mdp.discount
    na = mdp.num_actions
    pi = np.empty(mdp.num_states, dtype=np.int64)
    for s in range(mdp.num_states):
        base = s * na
        best = float("-inf")
        best_a = 0
        for a in range(na):
            acc = 0.0
            for i in range(sa_ptr[base + a], sa_ptr[base + a + 1]):
                acc = acc + prob[i] * vl[succ[i]]
            q = rewards[base + a] + gamma * acc
            if q > best:
                best = q
                best_a = a
        pi[s] = best_a
    return pi


def evaluate_policy_exact(mdp: SparseMdp, pi: np.ndarray) -> np.ndarray:
    """Value of a fixed policy, solved from its linear system.

    Dense LU elimination up to 2000 states, sparse fixed-point iteration to
    sup-norm residual 1e-12 above that. Deliberately independent of the
    backup kernels so it can serve as an oracle for them.
    """
    pi = np.asarray(pi, dtype=np.int64)
    if pi.shape != (mdp.num_states,):
        raise ValueError(f"policy has shape {pi.shape}, expected ({mdp.num_states},)")
    if np.any(pi < 0) or np.any(pi >= mdp.num_actions):
        raise ValueError("policy contains an out-of-range action index")
    n = mdp.num_states
    gamma = mdp.discount
    r_pi = np.array([mdp.reward(s, int(pi[s])) for s in range(n)])

    if n <= 2000:
        p_mat = np.zeros((n, n))
        for s in range(n):
            for sp, p in mdp.successors(s, int(pi[s])):
                p_mat[s, sp] = p
        return np.linalg.solve(np.eye(n) - gamma * p_mat, r_pi)

    from scipy.sparse import csr_matrix

    rows, cols, vals = [], [], []
    for s in range(n):
        for sp, p in mdp.successors(s, int(pi[s])):
            rows.append(s)
            cols.append(sp)
            vals.append(p)
    p_mat = csr_matrix((vals, (rows, cols)), shape=(n, n))
    v = np.zeros(n)
    for _ in range(10_000_000):
        v_next = r_pi + gamma * (p_mat @ v)
        if np.max(np.abs(v_next - v)) <= 1e-12:
            return v_next
        v = v_next
    raise RuntimeError("policy evaluation failed to reach residual 1e-12")
