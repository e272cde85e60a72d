"""Shortcuts for zeta-monotone payoffs and the O(n) pure-strategy sampler."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from polygame import kernels
from polygame.errors import InvalidInput
from polygame.games import Decomposition, GameSpec, Player2Strategy, Solution
from polygame.setfunc import (
    DEFAULT_TOL,
    SUBMODULAR,
    AggregateFunction,
    SetFunction,
    as_weights,
    mask_of,
)

DECREASING = "decreasing"
INCREASING = "increasing"


@dataclass(frozen=True)
class ZetaIndex:
    """Caller-supplied index making the payoff zeta-decreasing or zeta-increasing."""

    zeta: np.ndarray
    direction: str = DECREASING

    def __post_init__(self):
        z = np.asarray(self.zeta, dtype=np.float64)
        if z.ndim != 1 or not np.all(np.isfinite(z)) or np.any(z < 0):
            raise InvalidInput("zeta must be a finite non-negative vector")
        if self.direction not in (DECREASING, INCREASING):
            raise InvalidInput(f"unknown direction {self.direction!r}")
        object.__setattr__(self, "zeta", z)

    @classmethod
    def for_kind(cls, zeta, kind: str) -> "ZetaIndex":
        """Submodular payoffs pair with decreasing, supermodular with increasing."""
        return cls(zeta, DECREASING if kind == SUBMODULAR else INCREASING)


def zeta_witness(fn: SetFunction, w, zeta: ZetaIndex, tol: float = DEFAULT_TOL,
                 cap: int | None = None):
    """First ``(S, i, T, j)`` breaking zeta-monotonicity of ``P_{fn,w}``, or ``None``.

    ``S + i`` is the prefix up to ``i`` and ``T`` the prefix before ``j`` in a
    permutation visiting ``i`` before ``j``.
    """
    w = as_weights(w, fn.n)
    if zeta.zeta.shape != (fn.n,):
        raise InvalidInput(f"zeta has length {zeta.zeta.size}, expected {fn.n}")
    table = fn.table(cap=cap)
    scale = max(1.0, float(np.max(np.abs(table))), float(np.max(zeta.zeta / w)))
    return kernels.zeta_violation(table, fn.n, zeta.zeta / w,
                                  zeta.direction == INCREASING, tol * scale * scale)


def check_zeta_monotone(fn: SetFunction, w, zeta: ZetaIndex, tol: float = DEFAULT_TOL,
                        cap: int | None = None) -> bool:
    return zeta_witness(fn, w, zeta, tol, cap) is None


def _expected_direction(spec: GameSpec) -> str:
    return DECREASING if spec.fn.kind == SUBMODULAR else INCREASING


def zeta_solve(spec: GameSpec, zeta: ZetaIndex, tol: float = DEFAULT_TOL) -> Solution:
    """Solve a zeta-monotone game from the ``n`` zeta-sorted prefixes.

    The optimal set is a zeta-threshold set, so only prefixes of the
    sorted order are candidates, and each later block of the
    decomposition is a contiguous run of that order. ``n`` oracle calls.
    """
    n = spec.n
    if zeta.zeta.shape != (n,):
        raise InvalidInput(f"zeta has length {zeta.zeta.size}, expected {n}")
    if zeta.direction != _expected_direction(spec):
        raise InvalidInput(
            f"variant {spec.variant.value} needs a {_expected_direction(spec)} payoff index"
        )
    z = zeta.zeta
    sign = 1.0 if spec.variant.player1_maximizes else -1.0
    order = sorted(range(n), key=lambda i: (sign * z[i], i))
    g = np.concatenate([[0.0], spec.governing.chain_values(order)])
    winv = np.concatenate([[0.0], np.cumsum(1.0 / spec.w[order])])
    maximize = spec.sense == "max"

    blocks, ratios, family = [], [], []
    start = 0
    while start < n:
        r = (g[start + 1:] - g[start]) / (winv[start + 1:] - winv[start])
        value = float(r.max() if maximize else r.min())
        thr = tol * max(1.0, abs(value))
        hits = np.flatnonzero(np.abs(r - value) <= thr)
        stop = start + int(hits[-1]) + 1
        if start == 0:
            family = [mask_of(order[:start + int(h) + 1]) for h in hits]
        blocks.append(tuple(sorted(order[start:stop])))
        ratios.append(value)
        start = stop

    decomp = Decomposition(blocks, ratios)
    s_star = mask_of(blocks[0])
    return Solution(
        variant=spec.variant,
        value=ratios[0],
        x=decomp.block_ratio_per_element(n) / spec.w,
        y=Player2Strategy.uniform_on(s_star, spec.w),
        decomposition=decomp,
        family=family,
        s_star=s_star,
        method="zeta",
    )


def monotone_value(spec: GameSpec):
    """Value and strategies when the payoff is decreasing (or increasing).

    The whole ground set is optimal: the value is ``fn(V) / w^{-1}(V)``,
    Player 1 equalizes with ``x_i = value / w_i`` and Player 2 plays
    ``y^V``.
    """
    full = spec.fn.full
    value = float(spec.fn(full) / np.sum(1.0 / spec.w))
    decomp = Decomposition([tuple(range(spec.n))], [value])
    sol = Solution(
        variant=spec.variant,
        value=value,
        x=value / spec.w,
        y=Player2Strategy.uniform_on(full, spec.w),
        decomposition=decomp,
        family=[full],
        s_star=full,
        method="monotone",
    )
    return value, sol


class PermutationSampler:
    """Draws permutations whose vertices average to the equalizing strategy.

    Valid when ``P_{fn,w}`` is decreasing (submodular ``fn``) or
    increasing (supermodular ``fn``). Each draw peels off the highest
    remaining element, appending it after the rest or prepending it
    before, with the probability that equalizes the two pure payoffs.
    Each draw makes ``2n - 1`` oracle calls; ``oracle_calls`` accumulates
    them.
    """

    def __init__(self, fn: SetFunction, w, tol: float = DEFAULT_TOL):
        self.fn = fn
        self.n = fn.n
        self.w = as_weights(w, fn.n).tolist()
        self.tol = tol
        self.submodular = fn.kind == SUBMODULAR
        inv = np.concatenate([[0.0], np.cumsum(1.0 / np.asarray(self.w))])
        self._winv_prefix = inv.tolist()
        self._aggregate = isinstance(fn, AggregateFunction)
        if self._aggregate:
            rows = fn.terms
            self._rows = [tuple(r) for r in rows.tolist()]
            cum = np.vstack([np.zeros(rows.shape[1]), np.cumsum(rows, axis=0)])
            self._prefix = [tuple(r) for r in cum.tolist()]
            self._combine = fn.combine
        self.oracle_calls = 0

    # set handles: a bitmask, or a tuple of aggregates for closed-form functions
    def _empty(self):
        return tuple(0.0 for _ in self._rows[0]) if self._aggregate else 0

    def _with(self, handle, k):
        if self._aggregate:
            return tuple(a + b for a, b in zip(handle, self._rows[k]))
        return handle | (1 << k)

    def _eval(self, handle) -> float:
        self.oracle_calls += 1
        if self._aggregate:
            return float(self._combine(*handle))
        return self.fn(handle)

    def _eval_with_prefix(self, handle, k) -> float:
        """Value at ``handle`` united with elements ``0 .. k-1``."""
        self.oracle_calls += 1
        if self._aggregate:
            return float(self._combine(*(a + b for a, b in zip(handle, self._prefix[k]))))
        return self.fn(handle | ((1 << k) - 1))

    def mix_probability(self, f_a, f_all, f_rest, f_top, k) -> float:
        """Probability of appending element ``k`` after the rest.

        ``f_a`` is the value of the prepended set ``A``; ``f_all``, ``f_rest``
        and ``f_top`` are the values of ``A`` united with ``{0..k}``,
        ``{0..k-1}`` and ``{k}``.
        """
        h_all = f_all - f_a
        h_rest = f_rest - f_a
        h_top = f_top - f_a
        wk = self.w[k]
        winv_rest = self._winv_prefix[k]
        a1 = wk * (h_all - h_rest)
        a2 = wk * h_top
        v1 = h_rest / winv_rest
        v2 = (h_all - h_top) / winv_rest
        num = a2 - v2
        other = v1 - a1
        slack = self.tol * max(1.0, abs(a1), abs(a2), abs(v1), abs(v2))
        if self.submodular:
            ok = num >= -slack and other >= -slack
        else:
            ok = num <= slack and other <= slack
        if not ok:
            raise InvalidInput(
                f"payoff is not {'de' if self.submodular else 'in'}creasing at element {k}",
                element=k,
            )
        den = num + other
        if abs(den) <= slack * 1e-3:
            return 1.0
        return min(1.0, max(0.0, num / den))

    def draw(self, u) -> tuple:
        """One permutation from uniforms ``u`` (``n - 1`` of them)."""
        n = self.n
        if n == 1:
            return (0,)
        a = self._empty()
        f_a = 0.0
        f_all = self._eval_with_prefix(a, n)
        head, tail = [], []
        for level, k in enumerate(range(n - 1, 0, -1)):
            f_rest = self._eval_with_prefix(a, k)
            a_top = self._with(a, k)
            f_top = self._eval(a_top)
            if u[level] < self.mix_probability(f_a, f_all, f_rest, f_top, k):
                tail.append(k)
                f_all = f_rest
            else:
                head.append(k)
                a, f_a = a_top, f_top
        return tuple(head + [0] + tail[::-1])

    def sample(self, rng) -> tuple:
        return self.draw(rng.random(max(self.n - 1, 1)))

    def distribution(self) -> dict:
        """Exact probability of every reachable permutation (``2**(n-1)`` leaves)."""
        out: dict = {}

        def walk(a, f_a, f_all, k, prob, head, tail):
            if k == 0:
                sigma = tuple(head + [0] + tail[::-1])
                out[sigma] = out.get(sigma, 0.0) + prob
                return
            f_rest = self._eval_with_prefix(a, k)
            a_top = self._with(a, k)
            f_top = self._eval(a_top)
            p = self.mix_probability(f_a, f_all, f_rest, f_top, k)
            if p > 0:
                walk(a, f_a, f_rest, k - 1, prob * p, head, tail + [k])
            if p < 1:
                walk(a_top, f_top, f_all, k - 1, prob * (1 - p), head + [k], tail)

        a0 = self._empty()
        walk(a0, 0.0, self._eval_with_prefix(a0, self.n), self.n - 1, 1.0, [], [])
        return out


def sample_sigma(fn: SetFunction, w, seed) -> tuple:
    """Draw one permutation; ``seed`` is an int or a ``numpy.random.Generator``."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    return PermutationSampler(fn, w).sample(rng)


def sample_many(fn: SetFunction, w, count: int, seed) -> list:
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    sampler = PermutationSampler(fn, w)
    return [sampler.sample(rng) for _ in range(count)]
