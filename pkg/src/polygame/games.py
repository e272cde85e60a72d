"""Exact solutions of the four base-polytope games by subset enumeration.

Player 1 picks a vertex ``x^sigma`` of the base of a polymatroid (or
contrapolymatroid), Player 2 picks a coordinate ``j``, and the payoff is
``w_j * x^sigma_j``. The four variants differ in which player maximizes
and in the structure of the set function; two of them are solved through
the dual set function, so only a min-ratio and a max-ratio engine exist.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from polygame import kernels
from polygame.errors import InvalidInput, InvalidSpec
from polygame.setfunc import (
    DEFAULT_TOL,
    SUBMODULAR,
    SUPERMODULAR,
    SetFunction,
    as_weights,
    dual,
    elements_of,
    inverse_weight_sums,
)


class Variant(str, enum.Enum):
    MAXMIN_POLY = "maxmin-poly"
    MAXMIN_CONTRA = "maxmin-contra"
    MINMAX_CONTRA = "minmax-contra"
    MINMAX_POLY = "minmax-poly"

    @property
    def player1_maximizes(self) -> bool:
        return self in (Variant.MAXMIN_POLY, Variant.MAXMIN_CONTRA)

    @property
    def base_kind(self) -> str:
        return SUBMODULAR if self in (Variant.MAXMIN_POLY, Variant.MINMAX_POLY) else SUPERMODULAR

    @property
    def sense(self) -> str:
        """Sense of the ratio whose extremum is the game value."""
        return "min" if self.player1_maximizes else "max"

    @property
    def uses_dual(self) -> bool:
        return self in (Variant.MAXMIN_CONTRA, Variant.MINMAX_POLY)

    @classmethod
    def parse(cls, value) -> "Variant":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("_", "-")
        aliases = {
            "maxmin-polymatroid": "maxmin-poly",
            "maxmin-contrapolymatroid": "maxmin-contra",
            "minmax-contrapolymatroid": "minmax-contra",
            "minmax-polymatroid": "minmax-poly",
        }
        try:
            return cls(aliases.get(key, key))
        except ValueError:
            raise InvalidInput(f"unknown variant {value!r}") from None

    @classmethod
    def default_for(cls, kind: str) -> "Variant":
        return cls.MAXMIN_POLY if kind == SUBMODULAR else cls.MINMAX_CONTRA


@dataclass
class GameSpec:
    variant: Variant
    fn: SetFunction
    w: np.ndarray

    def __post_init__(self):
        self.variant = Variant.parse(self.variant)
        if self.fn.kind != self.variant.base_kind:
            raise InvalidSpec(
                f"variant {self.variant.value} needs a {self.variant.base_kind} function, "
                f"got {self.fn.kind}"
            )
        self.w = as_weights(self.w, self.fn.n)
        self._governing = None

    @property
    def n(self) -> int:
        return self.fn.n

    @property
    def governing(self) -> SetFunction:
        """The set function whose ratio to ``w^{-1}`` gives the value."""
        if self._governing is None:
            self._governing = dual(self.fn) if self.variant.uses_dual else self.fn
        return self._governing

    @property
    def sense(self) -> str:
        return self.variant.sense


@dataclass
class Decomposition:
    """Ordered partition of the ground set with per-block ratios."""

    blocks: list
    ratios: list

    def block_ratio_per_element(self, n: int) -> np.ndarray:
        out = np.empty(n)
        for block, r in zip(self.blocks, self.ratios):
            out[list(block)] = r
        return out


@dataclass
class Player2Strategy:
    """A point ``y`` of the simplex ``C``; ``theta = y / w`` are the probabilities."""

    y: np.ndarray
    theta: np.ndarray

    @classmethod
    def from_theta(cls, theta, w) -> "Player2Strategy":
        theta = np.asarray(theta, dtype=np.float64)
        return cls(theta * np.asarray(w, dtype=np.float64), theta)

    @classmethod
    def from_y(cls, y, w) -> "Player2Strategy":
        y = np.asarray(y, dtype=np.float64)
        return cls(y, y / np.asarray(w, dtype=np.float64))

    @classmethod
    def uniform_on(cls, mask: int, w) -> "Player2Strategy":
        """``y^S``: equal mass ``1 / w^{-1}(S)`` on each coordinate of ``S``."""
        w = np.asarray(w, dtype=np.float64)
        members = elements_of(mask)
        y = np.zeros(w.size)
        y[members] = 1.0 / np.sum(1.0 / w[members])
        return cls.from_y(y, w)


@dataclass
class RatioResult:
    value: float
    family: np.ndarray
    s_star: int


@dataclass
class Solution:
    variant: Variant
    value: float
    x: np.ndarray
    y: Player2Strategy
    decomposition: Decomposition
    family: list
    s_star: int
    method: str = "enumerate"
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {
            "variant": self.variant.value,
            "method": self.method,
            "value": float(self.value),
            "x": [float(v) for v in self.x],
            "y": [float(v) for v in self.y.y],
            "theta": [float(v) for v in self.y.theta],
            "blocks": [[int(e) for e in b] for b in self.decomposition.blocks],
            "ratios": [float(r) for r in self.decomposition.ratios],
            "family": [int(m) for m in self.family],
            "s_star": int(self.s_star),
        }
        out.update(self.extra)
        return out


def _union(masks) -> int:
    out = 0
    for m in masks:
        out |= int(m)
    return out


def _contains(sorted_masks: np.ndarray, mask: int) -> bool:
    k = np.searchsorted(sorted_masks, mask)
    return bool(k < sorted_masks.size and sorted_masks[k] == mask)


def ratio_extremize(f: SetFunction, w, sense: str = "min", tol: float = DEFAULT_TOL,
                    cap: int | None = None) -> RatioResult:
    """Extremize ``f(S) / w^{-1}(S)`` over nonempty ``S`` by full enumeration.

    The family holds every set within ``tol * max(1, |value|)`` of the
    extremum; ``s_star`` is its union, which lattice closure puts back in
    the family.
    """
    if sense not in ("min", "max"):
        raise InvalidInput(f"sense must be 'min' or 'max', got {sense!r}")
    w = as_weights(w, f.n)
    value, family = kernels.ratio_extremize(f.table(cap=cap), inverse_weight_sums(w),
                                            sense == "max", tol)
    s_star = _union(family)
    if not _contains(family, s_star):
        raise InvalidInput(
            "extremizing sets are not closed under union; the declared kind is violated",
            kind=f.kind,
        )
    return RatioResult(value, family, s_star)


def _pick(local_family: np.ndarray, tie: str) -> int:
    if tie == "maximal":
        pick = _union(local_family)
        if not _contains(local_family, pick):
            raise InvalidInput("extremizing sets are not closed under union; "
                               "the declared kind is violated")
        return pick
    if tie == "minimal":
        counts = [int(m).bit_count() for m in local_family]
        return int(local_family[int(np.argmin(counts))])
    raise InvalidInput(f"tie must be 'maximal' or 'minimal', got {tie!r}")


def fw_decomposition(fn: SetFunction, w, sense: str = "min", tol: float = DEFAULT_TOL,
                     cap: int | None = None, tie: str = "maximal") -> Decomposition:
    """Greedy ratio decomposition of the ground set.

    Each step extremizes ``h_T(S) = (fn(T | S) - fn(T)) / w^{-1}(S)`` over
    nonempty ``S`` outside the covered set ``T``. ``sense="min"`` gives the
    min-ratio decomposition, ``"max"`` the max-decomposition.
    """
    if sense not in ("min", "max"):
        raise InvalidInput(f"sense must be 'min' or 'max', got {sense!r}")
    w = as_weights(w, fn.n)
    table = fn.table(cap=cap)
    winv = inverse_weight_sums(w)
    covered = 0
    blocks, ratios = [], []
    while covered != fn.full:
        remaining = elements_of(fn.full & ~covered)
        idx = kernels.submask_index(remaining)
        num = table[covered | idx] - table[covered]
        value, local = kernels.ratio_extremize(num, winv[idx], sense == "max", tol)
        chosen = int(idx[_pick(local, tie)])
        blocks.append(tuple(elements_of(chosen)))
        ratios.append(value)
        covered |= chosen
    return Decomposition(blocks, ratios)


def strategy_from_decomposition(decomp: Decomposition, w) -> np.ndarray:
    """Player 1's ``x^S``: ``x_i = (ratio of i's block) / w_i``."""
    w = np.asarray(w, dtype=np.float64)
    return decomp.block_ratio_per_element(w.size) / w


def player1_optimal(spec: GameSpec, tol: float = DEFAULT_TOL, cap: int | None = None,
                    tie: str = "maximal") -> np.ndarray:
    decomp = fw_decomposition(spec.governing, spec.w, spec.sense, tol, cap, tie)
    return strategy_from_decomposition(decomp, spec.w)


def player2_optimal(spec: GameSpec, tol: float = DEFAULT_TOL,
                    cap: int | None = None) -> Player2Strategy:
    res = ratio_extremize(spec.governing, spec.w, spec.sense, tol, cap)
    return Player2Strategy.uniform_on(res.s_star, spec.w)


def game_value(spec: GameSpec, tol: float = DEFAULT_TOL, cap: int | None = None) -> float:
    return ratio_extremize(spec.governing, spec.w, spec.sense, tol, cap).value


def solve(spec: GameSpec, tol: float = DEFAULT_TOL, cap: int | None = None) -> Solution:
    """Value, both optimal strategies and the optimal family, by enumeration."""
    res = ratio_extremize(spec.governing, spec.w, spec.sense, tol, cap)
    decomp = fw_decomposition(spec.governing, spec.w, spec.sense, tol, cap)
    x = strategy_from_decomposition(decomp, spec.w)
    return Solution(
        variant=spec.variant,
        value=res.value,
        x=x,
        y=Player2Strategy.uniform_on(res.s_star, spec.w),
        decomposition=decomp,
        family=[int(m) for m in res.family],
        s_star=res.s_star,
    )


def expected_payoff(x, y, w) -> float:
    """``sum_j theta_j w_j x_j``; ``y`` may be a pure column index."""
    x = np.asarray(x, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    if x.shape != w.shape:
        raise InvalidInput("x and w differ in length")
    if isinstance(y, (int, np.integer)):
        if not 0 <= y < x.size:
            raise InvalidInput(f"column {y} out of range")
        return float(w[y] * x[y])
    yv = y.y if isinstance(y, Player2Strategy) else np.asarray(y, dtype=np.float64)
    if yv.shape != x.shape:
        raise InvalidInput("x and y differ in length")
    return float(x @ yv)


def is_player2_optimal(y, spec: GameSpec, tol: float = DEFAULT_TOL, cap: int | None = None,
                       family=None) -> bool:
    """Decide whether ``y`` lies in the hull of ``{y^S : S in F}``.

    Sort ``y`` decreasingly and write it as a mixture of ``y^{[k]}`` over
    the sorted prefixes; ``y`` is optimal exactly when every prefix with
    positive weight is an optimal set.
    """
    yv = y.y if isinstance(y, Player2Strategy) else np.asarray(y, dtype=np.float64)
    w = spec.w
    if yv.shape != w.shape:
        raise InvalidInput(f"y has length {yv.size}, expected {w.size}")
    theta = yv / w
    if np.any(theta < -tol) or abs(theta.sum() - 1.0) > tol:
        raise InvalidInput("y is not in the simplex C", theta_sum=float(theta.sum()))
    if family is None:
        family = ratio_extremize(spec.governing, w, spec.sense, tol, cap).family
    family = np.sort(np.asarray(family, dtype=np.int64))
    order = np.argsort(-yv, kind="stable")
    ys = np.append(yv[order], 0.0)
    lam = (ys[:-1] - ys[1:]) * np.cumsum(1.0 / w[order])
    prefix = 0
    for k, e in enumerate(order):
        prefix |= 1 << int(e)
        if lam[k] > tol and not _contains(family, prefix):
            return False
    return True


def lattice_violations(family) -> list:
    """Pairs whose union or nonempty intersection falls outside the family."""
    fam = sorted(int(m) for m in family)
    members = set(fam)
    bad = []
    for a_i, a in enumerate(fam):
        for b in fam[a_i + 1:]:
            if a | b not in members:
                bad.append((a, b, "union"))
            inter = a & b
            if inter and inter not in members:
                bad.append((a, b, "intersection"))
    return bad
