"""Reductions of search, testing and queueing problems to base-polytope games."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from polygame.decompose import DECOMPOSE_CAP, decompose_base_point
from polygame.errors import InvalidInput, UnstableSystem
from polygame.families import (
    queueing_function,
    rescue_function,
    scheduling_function,
    variable_speed_function,
)
from polygame.fastpaths import ZetaIndex, zeta_solve
from polygame.games import GameSpec, Solution, Variant, solve
from polygame.setfunc import DEFAULT_TOL


def _positive(name, values, n=None, allow_zero=False):
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise InvalidInput(f"{name} must be a nonempty list of numbers")
    if n is not None and arr.size != n:
        raise InvalidInput(f"{name} has length {arr.size}, expected {n}")
    bad = arr < 0 if allow_zero else arr <= 0
    if not np.all(np.isfinite(arr)) or np.any(bad):
        raise InvalidInput(f"{name} must be {'non-negative' if allow_zero else 'positive'}")
    return arr


@dataclass
class SearchInstance:
    t: np.ndarray
    d: np.ndarray

    def __post_init__(self):
        self.t = _positive("t", self.t)
        self.d = _positive("d", self.d, self.t.size)


@dataclass
class VariableSpeedInstance:
    a: np.ndarray
    b: np.ndarray
    d: np.ndarray

    def __post_init__(self):
        self.a = _positive("a", self.a)
        self.b = _positive("b", self.b, self.a.size, allow_zero=True)
        self.d = _positive("d", self.d, self.a.size)

    @property
    def t(self):
        return self.a + self.b


@dataclass
class RescueInstance:
    p: np.ndarray
    q: np.ndarray

    def __post_init__(self):
        self.p = _positive("p", self.p)
        self.q = _positive("q", self.q, self.p.size)
        if np.any(self.p >= 1):
            raise InvalidInput("survival probabilities p must be below 1")
        if np.any(self.q > 1):
            raise InvalidInput("detection probabilities q must be at most 1")


@dataclass
class ThroughputInstance:
    p: np.ndarray
    r: np.ndarray

    def __post_init__(self):
        self.p = _positive("p", self.p)
        self.r = _positive("r", self.r, self.p.size)
        if np.any(self.p >= 1):
            raise InvalidInput("pass probabilities p must be below 1")


@dataclass
class QueueInstance:
    lam: np.ndarray
    mu: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        self.lam = _positive("lambda", self.lam)
        self.mu = _positive("mu", self.mu, self.lam.size)
        self.c = _positive("c", self.c, self.lam.size)
        if self.rho.sum() >= 1:
            raise UnstableSystem(f"total traffic intensity {self.rho.sum():.17g} is not below 1",
                                 rho=float(self.rho.sum()))

    @property
    def rho(self):
        return self.lam / self.mu


@dataclass
class AppGame:
    """A reduced application: the game, its payoff index, and the instance."""

    name: str
    spec: GameSpec
    zeta: ZetaIndex | None
    instance: object
    notes: dict = field(default_factory=dict)

    def solve(self, fast: bool = True, tol: float = DEFAULT_TOL, cap=None) -> Solution:
        if fast and self.zeta is not None:
            return zeta_solve(self.spec, self.zeta, tol)
        return solve(self.spec, tol, cap)


def weighted_search(inst: SearchInstance) -> AppGame:
    """Hider picks a location, Searcher an order; payoff ``d_i`` times the find time."""
    fn = scheduling_function(inst.t)
    spec = GameSpec(Variant.MINMAX_CONTRA, fn, inst.d / inst.t)
    return AppGame("search", spec, ZetaIndex(inst.d, "increasing"), inst)


def variable_speed_search(inst: VariableSpeedInstance) -> AppGame:
    fn = variable_speed_function(inst.a, inst.b)
    t = inst.t
    spec = GameSpec(Variant.MINMAX_CONTRA, fn, inst.d / t)
    return AppGame("varspeed", spec, ZetaIndex(inst.d, "increasing"), inst,
                   notes={"translation": (inst.b * t).tolist()})


def search_rescue(inst: RescueInstance) -> AppGame:
    fn = rescue_function(inst.p)
    w = inst.q * inst.p / (1 - inst.p)
    spec = GameSpec(Variant.MAXMIN_POLY, fn, w)
    return AppGame("rescue", spec, ZetaIndex(inst.q, "decreasing"), inst)


def throughput_game(inst: ThroughputInstance) -> AppGame:
    """Min-max game whose value ``v`` gives throughput ``1 / v``.

    Column ``i`` pays the load on operator ``i`` relative to its limit,
    ``prod_{j before i} p_j / r_i``, hence ``w_i = 1 / (r_i (1 - p_i))``.
    """
    fn = rescue_function(inst.p)
    w = 1.0 / (inst.r * (1 - inst.p))
    zeta = ZetaIndex(1.0 / (inst.p * inst.r), "decreasing")
    return AppGame("throughput", GameSpec(Variant.MINMAX_POLY, fn, w), zeta, inst)


def queue_game(inst: QueueInstance) -> AppGame:
    fn = queueing_function(inst.lam, inst.mu)
    spec = GameSpec(Variant.MINMAX_CONTRA, fn, inst.c / inst.rho)
    return AppGame("queue", spec, None, inst)


# performance vectors computed directly from the domain model, for cross-checks

def search_performance(inst: SearchInstance, sigma) -> np.ndarray:
    """``t_i C_i`` where ``C_i`` is the time location ``i`` has been searched."""
    x = np.empty(inst.t.size)
    clock = 0.0
    for e in sigma:
        clock += inst.t[e]
        x[e] = inst.t[e] * clock
    return x


def variable_speed_performance(inst: VariableSpeedInstance, sigma) -> np.ndarray:
    """``t_i`` times the time the Searcher first reaches location ``i``."""
    t = inst.t
    x = np.empty(t.size)
    clock = 0.0
    for e in sigma:
        x[e] = t[e] * (clock + inst.a[e])
        clock += t[e]
    return x


def rescue_performance(inst: RescueInstance, sigma) -> np.ndarray:
    """``(1 - p_i) / p_i`` times the probability of surviving through location ``i``."""
    x = np.empty(inst.p.size)
    survive = 1.0
    for e in sigma:
        survive *= inst.p[e]
        x[e] = (1 - inst.p[e]) / inst.p[e] * survive
    return x


def queue_performance(inst: QueueInstance, sigma) -> np.ndarray:
    """``rho_i W_i`` under preemptive priority in the order ``sigma``."""
    rho = inst.rho
    x = np.empty(rho.size)
    load = 0.0
    work = 0.0
    for e in sigma:
        before = load
        load += rho[e]
        work += rho[e] / inst.mu[e]
        sojourn = (1.0 / inst.mu[e]) / (1 - before) + work / ((1 - before) * (1 - load))
        x[e] = rho[e] * sojourn
    return x


def _mixture(fn, x, n):
    if n > DECOMPOSE_CAP:
        return None
    return [{"probability": t, "order": list(sigma)} for t, sigma in decompose_base_point(fn, x)]


def search_report(app: AppGame, sol: Solution) -> dict:
    inst = app.instance
    t = inst.t
    out = {
        "application": app.name,
        "value": sol.value,
        "hider_probabilities": sol.y.theta.tolist(),
        "x": sol.x.tolist(),
        "searcher_mixture": _mixture(app.spec.fn, sol.x, t.size),
    }
    if app.name == "varspeed":
        out["expected_reach_times"] = (sol.x / t).tolist()
    else:
        out["expected_find_times"] = (sol.x / t).tolist()
    return out


def variable_speed_mixture(app: AppGame, x) -> list:
    """Decompose a variable-speed strategy through the untranslated scheduling polyhedron."""
    inst = app.instance
    base = scheduling_function(inst.t)
    shift = inst.b * inst.t
    return decompose_base_point(base, np.asarray(x) + shift)


def rescue_report(app: AppGame, sol: Solution) -> dict:
    inst = app.instance
    survive = sol.x * inst.p / (1 - inst.p)
    return {
        "application": app.name,
        "value": sol.value,
        "rescue_probability": sol.value,
        "hiding_probabilities": sol.y.theta.tolist(),
        "survival_probabilities": survive.tolist(),
        "find_probabilities": (inst.q * survive).tolist(),
        "x": sol.x.tolist(),
        "searcher_mixture": _mixture(app.spec.fn, sol.x, inst.p.size),
    }


@dataclass
class ThroughputResult:
    value: float
    throughput: float
    routing: list | None
    loads: list | None

    def to_json(self):
        return {
            "application": "throughput",
            "value": self.value,
            "throughput": self.throughput,
            "routing": self.routing,
            "loads": self.loads,
        }


def operator_loads(p, routing) -> np.ndarray:
    """Tuple rate reaching each operator under ``[(rate, order), ...]``."""
    p = np.asarray(p, dtype=np.float64)
    loads = np.zeros(p.size)
    for rate, sigma in routing:
        reach = rate
        for e in sigma:
            loads[e] += reach
            reach *= p[e]
    return loads


def max_throughput(inst: ThroughputInstance, fast: bool = True, tol: float = DEFAULT_TOL,
                   routing: bool = True) -> ThroughputResult:
    app = throughput_game(inst)
    sol = app.solve(fast=fast, tol=tol)
    v = sol.value
    if not routing or inst.p.size > DECOMPOSE_CAP:
        return ThroughputResult(v, 1.0 / v, None, None)
    terms = decompose_base_point(app.spec.fn, sol.x)
    rates = [(theta / v, sigma) for theta, sigma in terms]
    loads = operator_loads(inst.p, rates)
    if np.any(loads > inst.r * (1 + 1e-8) + 1e-8):
        raise ArithmeticError("routing exceeds an operator rate limit")
    return ThroughputResult(
        v, 1.0 / v,
        [{"rate": rate, "order": list(sigma)} for rate, sigma in rates],
        loads.tolist(),
    )


def queue_priority(inst: QueueInstance, tol: float = DEFAULT_TOL, cap=None):
    """Min-max weighted holding cost and a randomized priority rule."""
    app = queue_game(inst)
    sol = app.solve(fast=False, tol=tol, cap=cap)
    rho = inst.rho
    report = {
        "application": "queue",
        "value": sol.value,
        "sojourn_times": (sol.x / rho).tolist(),
        "holding_costs": (inst.c * sol.x / rho).tolist(),
        "x": sol.x.tolist(),
        "critical_classes": sol.decomposition.blocks[0],
        "priority_rule": _mixture(app.spec.fn, sol.x, rho.size),
    }
    return app.spec, report
