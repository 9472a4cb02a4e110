# cython: boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled sweep kernels.

Semantics (including floating-point evaluation order) mirror
``mdpsweep.kernels._pysweeps`` exactly; the cross-backend equality tests
rely on that. Keep the two files in lockstep.
"""
from libc.stdint cimport int64_t
from libc.math cimport INFINITY


cdef inline double _backup(const int64_t[::1] sa_ptr, const int64_t[::1] succ,
                           const double[::1] prob, const double[::1] rewards,
                           double gamma, Py_ssize_t num_actions,
                           const double[::1] v, Py_ssize_t s) noexcept nogil:
    # max over actions of r(s,a) + gamma * sum_i p_i * v[succ_i]
    cdef Py_ssize_t a, i
    cdef Py_ssize_t base = s * num_actions
    cdef double best = -INFINITY
    cdef double acc, q
    for a in range(num_actions):
        acc = 0.0
        for i in range(sa_ptr[base + a], sa_ptr[base + a + 1]):
            acc = acc + prob[i] * v[succ[i]]
        q = rewards[base + a] + gamma * acc
        if q > best:
            best = q
    return best


cdef inline bint _settled(const int64_t[::1] nbr_ptr, const int64_t[::1] nbr,
                          const double[::1] v_prev, const double[::1] v_cur,
                          double delta, Py_ssize_t s) noexcept nogil:
    # True when every one-step successor of s moved by at most delta
    # between the two given iterates.
    cdef Py_ssize_t j
    cdef double d
    for j in range(nbr_ptr[s], nbr_ptr[s + 1]):
        d = v_cur[nbr[j]] - v_prev[nbr[j]]
        if d < 0.0:
            d = -d
        if d > delta:
            return False
    return True


def backup_state(mdp, const double[::1] v, Py_ssize_t s):
    """Value of one max-over-actions backup at state s, reading v."""
    cdef const int64_t[::1] sa_ptr = mdp.sa_ptr
    cdef const int64_t[::1] succ = mdp.succ
    cdef const double[::1] prob = mdp.prob
    cdef const double[::1] rewards = mdp.rewards
    cdef double gamma = mdp.discount
    cdef Py_ssize_t num_actions = mdp.num_actions
    return _backup(sa_ptr, succ, prob, rewards, gamma, num_actions, v, s)


def sweep_sync(mdp, const double[::1] v_in, double[::1] v_out):
    """Full synchronous sweep: v_out[s] = backup of s reading v_in only.

    Returns the number of backups performed (= num_states).
    """
    cdef const int64_t[::1] sa_ptr = mdp.sa_ptr
    cdef const int64_t[::1] succ = mdp.succ
    cdef const double[::1] prob = mdp.prob
    cdef const double[::1] rewards = mdp.rewards
    cdef double gamma = mdp.discount
    cdef Py_ssize_t num_actions = mdp.num_actions
    cdef Py_ssize_t n = v_in.shape[0]
    cdef Py_ssize_t s
    with nogil:
        for s in range(n):
            v_out[s] = _backup(sa_ptr, succ, prob, rewards, gamma, num_actions, v_in, s)
    return n


def sweep_ordered(mdp, double[::1] v, const int64_t[::1] order):
    """In-place sweep in the given state order; later backups read the
    already-updated values of earlier ones.

    Returns the number of backups performed (= len(order)).
    """
    cdef const int64_t[::1] sa_ptr = mdp.sa_ptr
    cdef const int64_t[::1] succ = mdp.succ
    cdef const double[::1] prob = mdp.prob
    cdef const double[::1] rewards = mdp.rewards
    cdef double gamma = mdp.discount
    cdef Py_ssize_t num_actions = mdp.num_actions
    cdef Py_ssize_t n = order.shape[0]
    cdef Py_ssize_t k, s
    with nogil:
        for k in range(n):
            s = order[k]
            v[s] = _backup(sa_ptr, succ, prob, rewards, gamma, num_actions, v, s)
    return n


def sweep_skip_sync(mdp, const double[::1] v_prev, const double[::1] v_cur,
                    double[::1] v_out, double delta, bint apply_test):
    """Synchronous sweep with the settled-successors skip test.

    When apply_test is set, a state whose one-step successors all moved by
    at most delta between v_prev and v_cur keeps its v_cur value instead of
    being backed up. Returns (backups, tests evaluated).
    """
    cdef const int64_t[::1] sa_ptr = mdp.sa_ptr
    cdef const int64_t[::1] succ = mdp.succ
    cdef const double[::1] prob = mdp.prob
    cdef const double[::1] rewards = mdp.rewards
    cdef const int64_t[::1] nbr_ptr = mdp.nbr_ptr
    cdef const int64_t[::1] nbr = mdp.nbr
    cdef double gamma = mdp.discount
    cdef Py_ssize_t num_actions = mdp.num_actions
    cdef Py_ssize_t n = v_cur.shape[0]
    cdef Py_ssize_t s
    cdef Py_ssize_t backups = 0, tests = 0
    with nogil:
        for s in range(n):
            if apply_test:
                tests += 1
                if _settled(nbr_ptr, nbr, v_prev, v_cur, delta, s):
                    v_out[s] = v_cur[s]
                    continue
            v_out[s] = _backup(sa_ptr, succ, prob, rewards, gamma, num_actions, v_cur, s)
            backups += 1
    return backups, tests


def sweep_skip_ordered(mdp, const double[::1] v_prev, const double[::1] v_cur,
                       double[::1] v_work, const int64_t[::1] order,
                       double delta, bint apply_test):
    """Ordered in-place sweep with the settled-successors skip test.

    v_work must enter as a copy of v_cur; skipped states keep that value,
    backed-up states read v_work (already-updated earlier states). The skip
    test itself always reads the two previous outer iterates v_prev/v_cur.
    Returns (backups, tests evaluated).
    """
    cdef const int64_t[::1] sa_ptr = mdp.sa_ptr
    cdef const int64_t[::1] succ = mdp.succ
    cdef const double[::1] prob = mdp.prob
    cdef const double[::1] rewards = mdp.rewards
    cdef const int64_t[::1] nbr_ptr = mdp.nbr_ptr
    cdef const int64_t[::1] nbr = mdp.nbr
    cdef double gamma = mdp.discount
    cdef Py_ssize_t num_actions = mdp.num_actions
    cdef Py_ssize_t n = order.shape[0]
    cdef Py_ssize_t k, s
    cdef Py_ssize_t backups = 0, tests = 0
    with nogil:
        for k in range(n):
            s = order[k]
            if apply_test:
                tests += 1
                if _settled(nbr_ptr, nbr, v_prev, v_cur, delta, s):
                    continue
            v_work[s] = _backup(sa_ptr, succ, prob, rewards, gamma, num_actions, v_work, s)
            backups += 1
    return backups, tests
