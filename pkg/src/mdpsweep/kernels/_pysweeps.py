"""Pure-Python sweep kernels, the fallback when the compiled extension is
unavailable.

Semantics (including floating-point evaluation order) mirror
``mdpsweep.kernels._csweeps`` exactly; the cross-backend equality tests
rely on that. Keep the two files in lockstep.
"""

_NEG_INF = float("-inf")


def _backup(sa_ptr, succ, prob, rewards, gamma, num_actions, vl, s):
    base = s * num_actions
    best = _NEG_INF
    for a in range(num_actions):
        acc = 0.0
        for i in range(sa_ptr[base + a], sa_ptr[base + a + 1]):
            acc = acc + prob[i] * vl[succ[i]]
        q = rewards[base + a] + gamma * acc
        if q > best:
            best = q
    return best


def _settled(nbr_ptr, nbr, pl, cl, delta, s):
    for j in range(nbr_ptr[s], nbr_ptr[s + 1]):
        d = cl[nbr[j]] - pl[nbr[j]]
        if d < 0.0:
            d = -d
        if d > delta:
            return False
    return True


def backup_state(mdp, v, s):
    sa_ptr, succ, prob, rewards, _, _ = mdp.lists()
    return _backup(sa_ptr, succ, prob, rewards, mdp.discount, mdp.num_actions,
                   v.tolist(), s)


def sweep_sync(mdp, v_in, v_out):
    sa_ptr, succ, prob, rewards, _, _ = mdp.lists()
    gamma = mdp.discount
    na = mdp.num_actions
    vl = v_in.tolist()
    v_out[:] = [_backup(sa_ptr, succ, prob, rewards, gamma, na, vl, s)
                for s in range(len(vl))]
    return len(vl)


def sweep_ordered(mdp, v, order):
    sa_ptr, succ, prob, rewards, _, _ = mdp.lists()
    gamma = mdp.discount
    na = mdp.num_actions
    vl = v.tolist()
    for s in order.tolist():
        vl[s] = _backup(sa_ptr, succ, prob, rewards, gamma, na, vl, s)
    v[:] = vl
    return len(order)


def sweep_skip_sync(mdp, v_prev, v_cur, v_out, delta, apply_test):
    sa_ptr, succ, prob, rewards, nbr_ptr, nbr = mdp.lists()
    gamma = mdp.discount
    na = mdp.num_actions
    pl = v_prev.tolist()
    cl = v_cur.tolist()
    out = cl[:]
    backups = 0
    tests = 0
    for s in range(len(cl)):
        if apply_test:
            tests += 1
            if _settled(nbr_ptr, nbr, pl, cl, delta, s):
                continue
        out[s] = _backup(sa_ptr, succ, prob, rewards, gamma, na, cl, s)
        backups += 1
    v_out[:] = out
    return backups, tests


def sweep_skip_ordered(mdp, v_prev, v_cur, v_work, order, delta, apply_test):
    sa_ptr, succ, prob, rewards, nbr_ptr, nbr = mdp.lists()
    gamma = mdp.discount
    na = mdp.num_actions
    pl = v_prev.tolist()
    cl = v_cur.tolist()
    wl = v_work.tolist()
    backups = 0
    tests = 0
    for s in order.tolist():
        if apply_test:
            tests += 1
            if _settled(nbr_ptr, nbr, pl, cl, delta, s):
                continue
        wl[s] = _backup(sa_ptr, succ, prob, rewards, gamma, na, wl, s)
        backups += 1
    v_work[:] = wl
    return backups, tests
