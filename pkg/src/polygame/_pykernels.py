"""Pure numpy implementations of the subset-enumeration kernels.

Every routine here has a twin in ``_ckernels.pyx``. The two must agree
bit for bit: the loop orders and the order of floating point additions
are the same in both, which is why some of the numpy below is less
clever than it could be.
"""

import numpy as np


def subset_sums(values):
    """Return ``out`` with ``out[mask] = sum(values[i] for i in mask)``."""
    v = np.ascontiguousarray(values, dtype=np.float64)
    out = np.zeros(1 << v.size, dtype=np.float64)
    size = 1
    for x in v:
        np.add(out[:size], x, out=out[size:2 * size])
        size <<= 1
    return out


def submask_index(elements):
    """Map each local mask over ``elements`` to the corresponding global mask."""
    el = np.ascontiguousarray(elements, dtype=np.int64)
    out = np.zeros(1 << el.size, dtype=np.int64)
    size = 1
    for e in el:
        np.bitwise_or(out[:size], np.int64(1) << e, out=out[size:2 * size])
        size <<= 1
    return out


def ratio_extremize(num, den, maximize, rtol):
    """Extremize ``num[m] / den[m]`` over nonempty masks ``m``.

    Returns ``(value, family)`` where ``family`` holds every mask whose
    ratio is within ``rtol * max(1, |value|)`` of the extremum, in
    ascending order.
    """
    num = np.asarray(num, dtype=np.float64)
    den = np.asarray(den, dtype=np.float64)
    r = num[1:] / den[1:]
    value = float(r.max() if maximize else r.min())
    thr = rtol * max(1.0, abs(value))
    family = np.flatnonzero(np.abs(r - value) <= thr).astype(np.int64) + 1
    return value, family


def pairwise_violation(table, n, submodular, tol):
    """First ``(S, i, j)`` violating the pairwise sub/supermodular inequality.

    Scan order is ``i < j`` lexicographic, then ``S`` ascending.
    """
    t = np.asarray(table, dtype=np.float64)
    masks = np.arange(1 << n, dtype=np.int64)
    for i in range(n):
        bi = 1 << i
        for j in range(i + 1, n):
            bj = 1 << j
            s = masks[(masks & (bi | bj)) == 0]
            lhs = t[s | bi] + t[s | bj]
            rhs = t[s | bi | bj] + t[s]
            bad = lhs < rhs - tol if submodular else lhs > rhs + tol
            hit = np.flatnonzero(bad)
            if hit.size:
                return int(s[hit[0]]), i, j
    return None


def monotone_violation(table, n, tol):
    """First ``(S, i)`` with ``f(S | i) < f(S)``; ``i`` outer, ``S`` ascending."""
    t = np.asarray(table, dtype=np.float64)
    masks = np.arange(1 << n, dtype=np.int64)
    for i in range(n):
        bi = 1 << i
        s = masks[(masks & bi) == 0]
        hit = np.flatnonzero(t[s | bi] < t[s] - tol)
        if hit.size:
            return int(s[hit[0]]), i
    return None


def _subset_extreme(values, n, use_max):
    """Subset-min (or max) transform with argument tracking.

    ``best[U] = min(values[S] for S subset of U)``; ties keep the earlier
    candidate, so the argument is deterministic.
    """
    best = values.copy()
    arg = np.arange(1 << n, dtype=np.int64)
    masks = arg.copy()
    for b in range(n):
        hi = masks[((masks >> b) & 1) == 1]
        lo = hi ^ (1 << b)
        cand = best[lo]
        better = cand > best[hi] if use_max else cand < best[hi]
        upd = hi[better]
        best[upd] = cand[better]
        arg[upd] = arg[lo[better]]
    return best, arg


def zeta_violation(table, n, zp, increasing, tol):
    """First witness ``(S, i, T, j)`` against marginal zeta-monotonicity.

    The decreasing condition is
    ``zp[j] * (f(S+i) - f(S)) >= zp[i] * (f(T+j) - f(T))`` for all
    ``S + i`` contained in ``T`` with ``j`` outside ``T``; the increasing
    condition flips the inequality. Scan order: ``i``, ``j != i``, ``T``
    ascending.
    """
    t = np.asarray(table, dtype=np.float64)
    zp = np.asarray(zp, dtype=np.float64)
    size = 1 << n
    masks = np.arange(size, dtype=np.int64)
    inf = -np.inf if increasing else np.inf
    marg = []
    for i in range(n):
        bi = 1 << i
        m = np.full(size, np.nan)
        out = (masks & bi) == 0
        m[out] = t[masks[out] | bi] - t[masks[out]]
        marg.append(m)
    for i in range(n):
        bi = 1 << i
        init = np.where((masks & bi) == 0, marg[i], inf)
        best, arg = _subset_extreme(init, n, increasing)
        for j in range(n):
            if j == i:
                continue
            bj = 1 << j
            tt = masks[((masks & bi) != 0) & ((masks & bj) == 0)]
            lhs = zp[j] * best[tt]
            rhs = zp[i] * marg[j][tt]
            bad = lhs > rhs + tol if increasing else lhs < rhs - tol
            hit = np.flatnonzero(bad)
            if hit.size:
                tm = int(tt[hit[0]])
                return int(arg[tm]), i, tm, j
    return None
