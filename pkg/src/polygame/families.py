"""Closed-form set functions used by the applications.

Each is an :class:`AggregateFunction`, so it answers oracle queries from
running sums and never needs a ``2**n`` table.
"""

import numpy as np

from polygame.errors import InvalidInput, UnstableSystem
from polygame.setfunc import SUBMODULAR, SUPERMODULAR, AggregateFunction


def _vec(name, values, n=None):
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise InvalidInput(f"{name} must be a nonempty list of numbers")
    if n is not None and arr.size != n:
        raise InvalidInput(f"{name} has length {arr.size}, expected {n}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInput(f"{name} must be finite")
    return arr


def _survival(s):
    return -np.expm1(s)


def rescue_function(p) -> AggregateFunction:
    """``f(S) = 1 - prod_{i in S} p_i``, with ``0 < p_i < 1``."""
    p = _vec("p", p)
    if np.any(p <= 0) or np.any(p >= 1):
        raise InvalidInput("probabilities p must lie strictly between 0 and 1")
    return AggregateFunction(np.log(p)[:, None], _survival, SUBMODULAR,
                             name="search_rescue", params={"p": p.tolist()})


def _schedule(s, s2):
    return 0.5 * (s * s + s2)


def scheduling_function(t) -> AggregateFunction:
    """``g(S) = (t(S)**2 + sum of t_i**2 over S) / 2``; the scheduling polyhedron."""
    t = _vec("t", t)
    if np.any(t <= 0):
        raise InvalidInput("search times t must be positive")
    return AggregateFunction(np.column_stack([t, t * t]), _schedule, SUPERMODULAR,
                             name="scheduling", params={"t": t.tolist()})


def variable_speed_function(a, b) -> AggregateFunction:
    """``g(S) = (t(S)**2 + sum of (a_j - b_j) t_j over S) / 2`` with ``t = a + b``."""
    a = _vec("a", a)
    b = _vec("b", b, a.size)
    if np.any(a <= 0) or np.any(b < 0):
        raise InvalidInput("outbound times a must be positive and return times b non-negative")
    t = a + b
    return AggregateFunction(np.column_stack([t, (a - b) * t]), _schedule, SUPERMODULAR,
                             name="variable_speed", params={"a": a.tolist(), "b": b.tolist()})


def _queue(work, load):
    return work / (1.0 - load)


def queueing_function(lam, mu) -> AggregateFunction:
    """``g(S) = (sum of rho_i / mu_i over S) / (1 - rho(S))`` for an M/M/1 queue."""
    lam = _vec("lambda", lam)
    mu = _vec("mu", mu, lam.size)
    if np.any(lam <= 0) or np.any(mu <= 0):
        raise InvalidInput("arrival and service rates must be positive")
    rho = lam / mu
    if rho.sum() >= 1:
        raise UnstableSystem(f"total traffic intensity {rho.sum():.17g} is not below 1",
                             rho=float(rho.sum()))
    return AggregateFunction(np.column_stack([rho / mu, rho]), _queue, SUPERMODULAR,
                             name="queueing", params={"lambda": lam.tolist(), "mu": mu.tolist()})
