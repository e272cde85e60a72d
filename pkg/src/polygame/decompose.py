"""Write a base point as a convex combination of greedy vertices."""

from __future__ import annotations

import numpy as np
from scipy.optimize import linprog

from polygame.errors import InvalidInput, NotInBase
from polygame.setfunc import (
    DEFAULT_TOL,
    SetFunction,
    all_permutations,
    base_violation,
    check_cap,
    vertex_matrix,
)

DECOMPOSE_CAP = 7


def _reduce_support(points: np.ndarray, weights: np.ndarray, max_support: int):
    """Caratheodory reduction: drop points until at most ``max_support`` remain.

    Each pass moves along a null vector of the lifted point matrix until a
    weight hits zero, which keeps the weighted sum fixed.
    """
    pts = points.copy()
    wts = weights.copy()
    keep = np.arange(len(wts))
    while len(keep) > max_support:
        lifted = np.vstack([pts[keep].T, np.ones(len(keep))])
        _, s, vt = np.linalg.svd(lifted)
        null = vt[-1]
        if np.all(null <= 0):
            null = -null
        pos = null > 1e-14
        if not np.any(pos):
            break
        ratios = np.full(len(keep), np.inf)
        ratios[pos] = wts[keep][pos] / null[pos]
        k = int(np.argmin(ratios))
        wts[keep] = np.maximum(wts[keep] - ratios[k] * null, 0.0)
        wts[keep[k]] = 0.0
        keep = keep[wts[keep] > 0.0]
    return keep, wts[keep]


def decompose_base_point(fn: SetFunction, x, tol: float = DEFAULT_TOL,
                         cap: int = DECOMPOSE_CAP):
    """Return ``[(theta, sigma), ...]`` with ``sum theta * x^sigma == x``.

    Uses at most ``n`` vertices. Works by a feasibility LP over all ``n!``
    vertices followed by a support reduction, so the ground set is capped
    at 7 by default.
    """
    check_cap(fn.n, cap)
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (fn.n,):
        raise InvalidInput(f"point has length {x.size}, expected {fn.n}")
    table = fn.table(cap=cap)
    scale = max(1.0, float(np.max(np.abs(table))))
    bad = base_violation(fn, x, tol * scale, cap=cap)
    if bad is not None:
        raise NotInBase(f"point violates the base constraint of mask {bad[0]} by {bad[1]:.3g}",
                        mask=bad[0], excess=bad[1])
    perms = all_permutations(fn.n)
    verts = vertex_matrix(fn, perms, cap=cap)
    hit = np.flatnonzero(np.max(np.abs(verts - x), axis=1) <= 1e-12 * scale)
    if hit.size:
        return [(1.0, tuple(int(e) for e in perms[hit[0]]))]

    a_eq = np.vstack([verts.T, np.ones(len(perms))])
    b_eq = np.append(x, 1.0)
    res = linprog(np.zeros(len(perms)), A_eq=a_eq / scale, b_eq=b_eq / scale,
                  bounds=(0, None), method="highs-ds",
                  options={"primal_feasibility_tolerance": 1e-10})
    if res.status != 0:
        raise NotInBase("no convex combination of vertices reproduces the point")
    keep, wts = _reduce_support(verts, np.maximum(res.x, 0.0), fn.n)

    # polish the weights on the final support
    lifted = np.vstack([verts[keep].T, np.ones(len(keep))])
    polished, *_ = np.linalg.lstsq(lifted, b_eq, rcond=None)
    if np.all(polished >= 0) and (np.max(np.abs(lifted @ polished - b_eq))
                                  <= np.max(np.abs(lifted @ wts - b_eq))):
        wts = polished
    wts = np.maximum(wts, 0.0)
    wts = wts / wts.sum()
    out = [(float(t), tuple(int(e) for e in perms[k])) for k, t in zip(keep, wts) if t > 0]
    out.sort(key=lambda item: item[1])
    return out


def recombine(fn: SetFunction, terms) -> np.ndarray:
    """``sum theta * x^sigma`` for a decomposition."""
    perms = np.array([sigma for _, sigma in terms], dtype=np.int64)
    thetas = np.array([t for t, _ in terms])
    return thetas @ vertex_matrix(fn, perms, cap=max(fn.n, DECOMPOSE_CAP))
