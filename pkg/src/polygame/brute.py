"""Independent linear-programming oracles.

These build the full ``n! x n`` payoff matrix and solve it as an ordinary
zero-sum matrix game. They exist to check the combinatorial solvers and
are only practical for small ground sets.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from polygame.errors import InvalidInput
from polygame.setfunc import all_permutations, check_cap, vertex_matrix

BRUTE_CAP = 6
_LP_OPTIONS = {"primal_feasibility_tolerance": 1e-10, "dual_feasibility_tolerance": 1e-10}


@dataclass
class MatrixGameResult:
    value: float
    row_guarantee: float
    column_guarantee: float
    rows: np.ndarray
    columns: np.ndarray


def solve_matrix_game(payoff, row_maximizes: bool = True) -> MatrixGameResult:
    """Solve a zero-sum matrix game by a primal and a dual LP.

    The reported guarantees are what each mixture secures exactly against
    every pure reply, so they bracket the true value.
    """
    a = np.asarray(payoff, dtype=np.float64)
    if a.ndim != 2 or a.size == 0:
        raise InvalidInput("payoff must be a nonempty matrix")
    scale = max(1.0, float(np.max(np.abs(a))))
    sign = 1.0 if row_maximizes else -1.0
    m = sign * a / scale  # row player maximizes m
    rows_n, cols_n = m.shape

    # rows: max v  s.t.  m^T p >= v, sum p = 1
    c = np.zeros(rows_n + 1)
    c[-1] = -1.0
    a_ub = np.hstack([-m.T, np.ones((cols_n, 1))])
    a_eq = np.append(np.ones(rows_n), 0.0)[None, :]
    bounds = [(0, None)] * rows_n + [(None, None)]
    r = linprog(c, A_ub=a_ub, b_ub=np.zeros(cols_n), A_eq=a_eq, b_eq=[1.0],
                bounds=bounds, method="highs-ds", options=_LP_OPTIONS)
    # columns: min u  s.t.  m q <= u, sum q = 1
    c2 = np.zeros(cols_n + 1)
    c2[-1] = 1.0
    a_ub2 = np.hstack([m, -np.ones((rows_n, 1))])
    a_eq2 = np.append(np.ones(cols_n), 0.0)[None, :]
    bounds2 = [(0, None)] * cols_n + [(None, None)]
    q = linprog(c2, A_ub=a_ub2, b_ub=np.zeros(rows_n), A_eq=a_eq2, b_eq=[1.0],
                bounds=bounds2, method="highs-ds", options=_LP_OPTIONS)
    if r.status != 0 or q.status != 0:
        raise RuntimeError(f"matrix game LP failed: {r.message} / {q.message}")

    rows = np.maximum(r.x[:-1], 0.0)
    rows /= rows.sum()
    cols = np.maximum(q.x[:-1], 0.0)
    cols /= cols.sum()
    if row_maximizes:
        row_g = float(np.min(rows @ a))
        col_g = float(np.max(a @ cols))
    else:
        row_g = float(np.max(rows @ a))
        col_g = float(np.min(a @ cols))
    return MatrixGameResult(0.5 * (row_g + col_g), row_g, col_g, rows, cols)


@dataclass
class BruteSolution:
    value: float
    gap: float
    rows: dict
    theta: np.ndarray


def payoff_matrix(spec, cap: int = BRUTE_CAP):
    """``P[sigma, j] = w_j * x^sigma_j`` over all permutations."""
    check_cap(spec.n, cap)
    perms = all_permutations(spec.n)
    return perms, vertex_matrix(spec.fn, perms, cap=cap) * spec.w


def brute_solve(spec, cap: int = BRUTE_CAP) -> BruteSolution:
    """Solve the game as a dense matrix game over all vertices."""
    perms, pay = payoff_matrix(spec, cap)
    res = solve_matrix_game(pay, row_maximizes=spec.variant.player1_maximizes)
    rows = {tuple(int(e) for e in perms[k]): float(res.rows[k])
            for k in np.flatnonzero(res.rows > 1e-12)}
    return BruteSolution(res.value, abs(res.row_guarantee - res.column_guarantee),
                         rows, res.columns)


def throughput_lp(p, r):
    """Max-throughput routing LP solved directly over all visit orders.

    Returns ``(throughput, {order: rate})``.
    """
    p = np.asarray(p, dtype=np.float64)
    r = np.asarray(r, dtype=np.float64)
    n = p.size
    check_cap(n, BRUTE_CAP)
    orders = list(itertools.permutations(range(n)))
    load = np.zeros((n, len(orders)))
    for k, sigma in enumerate(orders):
        reach = 1.0
        for e in sigma:
            load[e, k] = reach
            reach *= p[e]
    res = linprog(-np.ones(len(orders)), A_ub=load, b_ub=r, bounds=(0, None),
                  method="highs-ds", options=_LP_OPTIONS)
    if res.status != 0:
        raise RuntimeError(res.message)
    rates = {orders[k]: float(v) for k, v in enumerate(res.x) if v > 1e-12}
    return float(-res.fun), rates
