"""Compiled inner loops: the online admission engine and the offline search.

Both functions only take arrays and scalars so they compile under numba and
also run unchanged as plain Python when numba is disabled.
"""
import numpy as np

from ._jit import njit

FCFS, LINRP, EXPRP = 0, 1, 2


@njit
def _normalized(u, capacities, kind, lin_scale, exp_scale, q):
    m = u.shape[0]
    for j in range(m):
        if kind == LINRP:
            q[j] = np.int64(np.floor((u[j] / capacities[j]) * lin_scale))
        elif kind == EXPRP:
            q[j] = np.int64(np.floor((u[j] / capacities[j]) * exp_scale[j]))
        else:
            q[j] = 0


@njit
def _release_bucket(b, head, nxt, demands, u):
    """Subtract every slice queued in bucket ``b``; return how many were released."""
    k = head[b]
    released = 0
    while k >= 0:
        for j in range(u.shape[0]):
            u[j] -= demands[k, j]
        released += 1
        k = nxt[k]
    return released


@njit
def simulate(timestamps, lifetimes, demands, revenues, capacities, kind, lin_scale, lin_coef, exp_scale):
    """Run the online admission loop over a fixed request stream.

    Slices admitted at slot t with lifetime d hold their resources during
    slots t .. t+d-1 and are released at the start of slot t+d. Releases are
    kept in a ring of per-slot FIFO lists so that the subtraction order
    matches admission order.

    Returns (accepted, phi, u_after, q_after, u_final) where u_final is the
    utilization once every admitted slice has been released.
    """
    n, m = demands.shape
    accepted = np.zeros(n, dtype=np.bool_)
    phi = np.zeros(n)
    u_after = np.zeros((n, m))
    q_after = np.zeros((n, m), dtype=np.int64)

    ring = 2
    for i in range(n):
        if lifetimes[i] + 1 > ring:
            ring = lifetimes[i] + 1
    head = np.full(ring, -1, dtype=np.int64)
    tail = np.full(ring, -1, dtype=np.int64)
    nxt = np.full(max(n, 1), -1, dtype=np.int64)

    u = np.zeros(m)
    q = np.zeros(m, dtype=np.int64)
    active = 0
    slot = 0

    for h in range(n):
        t = timestamps[h]
        if t > slot:
            # slot boundaries between the previous request and this one
            while slot < t:
                slot += 1
                if active == 0:
                    slot = t
                    break
                b = slot % ring
                if head[b] >= 0:
                    active -= _release_bucket(b, head, nxt, demands, u)
                    head[b] = -1
                    tail[b] = -1
                    if active == 0:
                        u[:] = 0.0
                    else:
                        for j in range(m):
                            if u[j] < 0.0:
                                u[j] = 0.0
            _normalized(u, capacities, kind, lin_scale, exp_scale, q)

        r = demands[h]
        cost = 0.0
        if kind == LINRP:
            for j in range(m):
                c = q[j] * lin_coef[j] * r[j]
                if c > cost:
                    cost = c
        elif kind == EXPRP:
            for j in range(m):
                cost += (2.0 ** q[j] - 1.0) * r[j]
        phi[h] = cost

        ok = revenues[h] >= cost
        if ok:
            for j in range(m):
                if not r[j] <= capacities[j] - u[j]:
                    ok = False
                    break
        if ok:
            accepted[h] = True
            for j in range(m):
                u[j] += r[j]
            b = (t + lifetimes[h]) % ring
            if tail[b] >= 0:
                nxt[tail[b]] = h
            else:
                head[b] = h
            tail[b] = h
            nxt[h] = -1
            active += 1
        # Nothing released at slot t is still pending here: everything due by
        # t went at the boundary and new slices end strictly after t.
        _normalized(u, capacities, kind, lin_scale, exp_scale, q)
        for j in range(m):
            u_after[h, j] = u[j]
            q_after[h, j] = q[j]

    while active > 0:
        slot += 1
        b = slot % ring
        if head[b] >= 0:
            active -= _release_bucket(b, head, nxt, demands, u)
            head[b] = -1
            tail[b] = -1
    # no reset to zero here: u_final exposes any floating drift
    u_final = u.copy()
    return accepted, phi, u_after, q_after, u_final


@njit
def offline_search(timestamps, lifetimes, demands, revenues, capacities, horizon, tol):
    """Exhaustive include/exclude search with per-slot occupancy pruning.

    Requests are branched in index order with "exclude" first, and an
    incumbent is only replaced by a strictly larger revenue, so among optimal
    vectors the lexicographically smallest one is returned.
    """
    n, m = demands.shape
    last = horizon
    for i in range(n):
        end = timestamps[i] + lifetimes[i] - 1
        if end > last:
            last = end
    usage = np.zeros((last + 1, m))
    x = np.zeros(n, dtype=np.int64)
    best_x = np.zeros(n, dtype=np.int64)
    best = 0.0
    if n == 0:
        return best_x, best

    # iterative DFS; state[i]: 0 fresh, 1 exclude branch taken, 2 include branch taken
    state = np.zeros(n, dtype=np.int64)
    val = np.zeros(n + 1)
    i = 0
    while i >= 0:
        if i == n:
            if val[n] > best:
                best = val[n]
                best_x[:] = x
            i -= 1
            continue
        s = state[i]
        if s == 0:
            state[i] = 1
            x[i] = 0
            val[i + 1] = val[i]
            i += 1
        elif s == 1:
            state[i] = 2
            t0 = timestamps[i]
            t1 = t0 + lifetimes[i]
            fits = True
            for t in range(t0, t1):
                for j in range(m):
                    if usage[t, j] + demands[i, j] > capacities[j] + tol:
                        fits = False
                        break
                if not fits:
                    break
            if fits:
                for t in range(t0, t1):
                    for j in range(m):
                        usage[t, j] += demands[i, j]
                x[i] = 1
                val[i + 1] = val[i] + revenues[i]
                i += 1
        else:
            if x[i] == 1:
                for t in range(timestamps[i], timestamps[i] + lifetimes[i]):
                    for j in range(m):
                        usage[t, j] -= demands[i, j]
                x[i] = 0
            state[i] = 0
            i -= 1
    return best_x, best
