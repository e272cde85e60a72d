"""Set functions over a finite ground set and greedy vertices of their bases.

Subsets are bitmask integers: bit ``i`` set means element ``i`` is in the
set, so the index ``b`` of an explicit table encodes
``S = {i : (b >> i) & 1}``. Elements are ``0 .. n-1``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from polygame import kernels
from polygame.errors import CapExceeded, InvalidInput

DEFAULT_CAP = 24
DEFAULT_TOL = 1e-9

SUBMODULAR = "submodular"
SUPERMODULAR = "supermodular"
KINDS = (SUBMODULAR, SUPERMODULAR)


def mask_of(elements: Iterable[int]) -> int:
    m = 0
    for e in elements:
        m |= 1 << int(e)
    return m


def elements_of(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def check_cap(n: int, cap: int | None) -> None:
    cap = DEFAULT_CAP if cap is None else cap
    if n > cap:
        raise CapExceeded(
            f"ground set of size {n} exceeds the enumeration cap {cap}", n=n, cap=cap
        )


def flip_kind(kind: str) -> str:
    return SUPERMODULAR if kind == SUBMODULAR else SUBMODULAR


def as_weights(w, n: int | None = None) -> np.ndarray:
    """Validate a strictly positive weight vector."""
    arr = np.asarray(w, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise InvalidInput("weights must be a nonempty 1-d array")
    if n is not None and arr.size != n:
        raise InvalidInput(f"expected {n} weights, got {arr.size}")
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
        raise InvalidInput("weights must be finite and strictly positive")
    return arr


def inverse_weight_sums(w) -> np.ndarray:
    """``w^{-1}(S)`` for every mask ``S``."""
    return kernels.subset_sums(1.0 / np.asarray(w, dtype=np.float64))


def as_permutation(sigma: Sequence[int], n: int) -> tuple[int, ...]:
    sig = tuple(int(s) for s in sigma)
    if len(sig) != n or sorted(sig) != list(range(n)):
        raise InvalidInput(f"{sigma!r} is not a permutation of 0..{n - 1}")
    return sig


class SetFunction:
    """Oracle over subsets of ``range(n)``, with a declared structure kind.

    The kind is trusted by the solvers; use :func:`verify_structure` to
    check it.
    """

    provenance = "oracle"

    def __init__(self, n: int, kind: str):
        if int(n) < 1:
            raise InvalidInput("ground set must have at least one element")
        if kind not in KINDS:
            raise InvalidInput(f"unknown kind {kind!r}")
        self.n = int(n)
        self.kind = kind
        self._table = None

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def __call__(self, mask: int) -> float:
        raise NotImplementedError

    def table(self, cap: int | None = None) -> np.ndarray:
        """All ``2**n`` values, indexed by bitmask (cached, read-only)."""
        check_cap(self.n, cap)
        if self._table is None:
            t = np.ascontiguousarray(self._compute_table(), dtype=np.float64)
            t.flags.writeable = False
            self._table = t
        return self._table

    def _compute_table(self) -> np.ndarray:
        return np.fromiter((self(m) for m in range(1 << self.n)), float, 1 << self.n)

    def chain_values(self, order: Sequence[int]) -> np.ndarray:
        """Values at the growing prefixes ``{order[0]}, {order[0], order[1]}, ...``."""
        out = np.empty(len(order))
        m = 0
        for k, e in enumerate(order):
            m |= 1 << int(e)
            out[k] = self(m)
        return out

    def __repr__(self):
        return f"{type(self).__name__}(n={self.n}, kind={self.kind!r})"


class TableFunction(SetFunction):
    """Explicit table of ``2**n`` values."""

    provenance = "explicit-table"

    def __init__(self, table, kind: str):
        t = np.array(table, dtype=np.float64)
        size = t.size
        if t.ndim != 1 or size < 2 or size & (size - 1):
            raise InvalidInput("table length must be 2**n with n >= 1")
        if not np.all(np.isfinite(t)):
            raise InvalidInput("table values must be finite")
        super().__init__(size.bit_length() - 1, kind)
        t.flags.writeable = False
        self._table = t

    def __call__(self, mask):
        return float(self._table[mask])

    def table(self, cap=None):
        check_cap(self.n, cap)
        return self._table


class OracleFunction(SetFunction):
    """Wraps an arbitrary callable ``mask -> float``."""

    def __init__(self, n: int, func: Callable[[int], float], kind: str):
        super().__init__(n, kind)
        self.func = func

    def __call__(self, mask):
        return float(self.func(mask))


class AggregateFunction(SetFunction):
    """``f(S) = combine(sum of per-element terms over S)``.

    ``terms`` has one row per element and one column per aggregate;
    ``combine`` takes one positional argument per column and must work on
    floats and on numpy arrays alike. Evaluating a set given its
    aggregates is O(1), which the sampler relies on.
    """

    provenance = "parametric-family"

    def __init__(self, terms, combine, kind: str, name: str = "aggregate",
                 params: dict | None = None):
        terms = np.asarray(terms, dtype=np.float64)
        if terms.ndim != 2:
            raise InvalidInput("terms must have shape (n, k)")
        super().__init__(terms.shape[0], kind)
        self.terms = terms
        self.combine = combine
        self.name = name
        self.params = params or {}
        self._rows = [tuple(float(v) for v in row) for row in terms]

    def aggregates(self, mask: int) -> tuple:
        acc = [0.0] * self.terms.shape[1]
        i = 0
        while mask:
            if mask & 1:
                row = self._rows[i]
                for c in range(len(acc)):
                    acc[c] += row[c]
            mask >>= 1
            i += 1
        return tuple(acc)

    def __call__(self, mask):
        return float(self.combine(*self.aggregates(mask)))

    def _compute_table(self):
        cols = [kernels.subset_sums(self.terms[:, c]) for c in range(self.terms.shape[1])]
        return self.combine(*cols)

    def chain_values(self, order):
        cum = np.cumsum(self.terms[list(order)], axis=0)
        return np.asarray(self.combine(*cum.T), dtype=np.float64)

    def __repr__(self):
        return f"AggregateFunction({self.name}, n={self.n}, kind={self.kind!r})"


class DualFunction(SetFunction):
    """``h#(S) = h(V) - h(V \\ S)``; flips sub/supermodularity."""

    provenance = "transform-of(dual)"

    def __init__(self, parent: SetFunction):
        super().__init__(parent.n, flip_kind(parent.kind))
        self.parent = parent
        self._top = None

    def _parent_full(self):
        if self._top is None:
            self._top = self.parent(self.parent.full)
        return self._top

    def __call__(self, mask):
        return self._parent_full() - self.parent(self.full ^ mask)

    def _compute_table(self):
        t = self.parent.table(cap=self.n)
        return t[-1] - t[::-1]

    def chain_values(self, order):
        # h(V \ prefix_k) is h on the suffix of length n-k; h(empty) taken as 0.
        rev = self.parent.chain_values(list(order)[::-1])
        top = rev[-1]
        tail = np.concatenate([rev[-2::-1], [0.0]])
        return top - tail


class RestrictedFunction(SetFunction):
    """``f|_A`` on the ground set ``A``, relabeled ``0 .. |A|-1`` in element order."""

    provenance = "transform-of(restrict)"

    def __init__(self, parent: SetFunction, A: int):
        self.elements = elements_of(A)
        super().__init__(len(self.elements), parent.kind)
        self.parent = parent
        self._bits = [1 << e for e in self.elements]

    def to_parent(self, mask: int) -> int:
        m = 0
        i = 0
        while mask:
            if mask & 1:
                m |= self._bits[i]
            mask >>= 1
            i += 1
        return m

    def __call__(self, mask):
        return self.parent(self.to_parent(mask))

    def _compute_table(self):
        if self.parent.n <= DEFAULT_CAP:
            return self.parent.table(cap=self.parent.n)[kernels.submask_index(self.elements)]
        return super()._compute_table()

    def chain_values(self, order):
        return self.parent.chain_values([self.elements[i] for i in order])


class ContractedFunction(RestrictedFunction):
    """``f_A(S) = f(S | A) - f(A)`` on the ground set ``V \\ A``."""

    provenance = "transform-of(contract)"

    def __init__(self, parent: SetFunction, A: int):
        super().__init__(parent, parent.full & ~A)
        self.anchor = A
        self._base = parent(A)

    def __call__(self, mask):
        return self.parent(self.anchor | self.to_parent(mask)) - self._base

    def _compute_table(self):
        if self.parent.n <= DEFAULT_CAP:
            t = self.parent.table(cap=self.parent.n)
            return t[self.anchor | kernels.submask_index(self.elements)] - self._base
        return SetFunction._compute_table(self)

    def chain_values(self, order):
        return SetFunction.chain_values(self, order)


class CountingFunction(SetFunction):
    """Counts oracle calls made on the wrapped function."""

    def __init__(self, inner: SetFunction):
        super().__init__(inner.n, inner.kind)
        self.inner = inner
        self.calls = 0

    def __call__(self, mask):
        self.calls += 1
        return self.inner(mask)


def dual(h: SetFunction) -> SetFunction:
    return DualFunction(h)


def restrict(f: SetFunction, A: int) -> SetFunction:
    if A & ~f.full:
        raise InvalidInput(f"mask {A} is not a subset of the ground set")
    if A == 0:
        raise InvalidInput("cannot restrict to the empty set")
    return RestrictedFunction(f, A)


def contract(f: SetFunction, A: int) -> SetFunction:
    if A & ~f.full:
        raise InvalidInput(f"mask {A} is not a subset of the ground set")
    if A == f.full:
        raise InvalidInput("cannot contract the whole ground set")
    return ContractedFunction(f, A)


def greedy_vertex(f: SetFunction, sigma: Sequence[int]) -> np.ndarray:
    """The vertex ``x^sigma``: element ``sigma[k]`` gets the k-th marginal."""
    sig = as_permutation(sigma, f.n)
    chain = f.chain_values(sig)
    x = np.empty(f.n)
    x[list(sig)] = np.diff(chain, prepend=0.0)
    return x


def greedy_order(c, kind: str, sense: str) -> tuple[int, ...]:
    """Visit order of the greedy optimizer of ``c @ x`` over the base.

    Large coefficients go first when maximizing over a submodular base or
    minimizing over a supermodular one; otherwise small ones go first.
    Ties are broken by ascending element index.
    """
    c = np.asarray(c, dtype=np.float64)
    if sense not in ("max", "min"):
        raise InvalidInput(f"sense must be 'max' or 'min', got {sense!r}")
    descending = (sense == "max") == (kind == SUBMODULAR)
    sign = -1.0 if descending else 1.0
    return tuple(sorted(range(c.size), key=lambda i: (sign * c[i], i)))


def linear_optimize(f: SetFunction, c, sense: str = "max"):
    """Edmonds' greedy algorithm: optimize ``c @ x`` over the base of ``f``."""
    c = np.asarray(c, dtype=np.float64)
    if c.shape != (f.n,):
        raise InvalidInput(f"objective has length {c.size}, expected {f.n}")
    sigma = greedy_order(c, f.kind, sense)
    return sigma, greedy_vertex(f, sigma)


def all_permutations(n: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(n))), dtype=np.int64).reshape(-1, n)


def vertex_matrix(f: SetFunction, perms=None, cap: int = 8) -> np.ndarray:
    """Rows ``x^sigma`` for each permutation (all of them by default)."""
    check_cap(f.n, cap)
    if perms is None:
        perms = all_permutations(f.n)
    perms = np.asarray(perms, dtype=np.int64)
    t = f.table(cap=cap)
    prefix = np.bitwise_or.accumulate(np.int64(1) << perms, axis=1)
    vals = t[prefix]
    marg = np.diff(vals, axis=1, prepend=t[0])
    x = np.empty_like(marg)
    np.put_along_axis(x, perms, marg, axis=1)
    return x


@dataclass
class StructureReport:
    normalized: bool
    non_decreasing: bool
    matches_kind: bool
    kind: str
    witnesses: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.normalized and self.non_decreasing and self.matches_kind

    def to_json(self):
        return {
            "ok": self.ok,
            "kind": self.kind,
            "normalized": self.normalized,
            "non_decreasing": self.non_decreasing,
            "matches_kind": self.matches_kind,
            "witnesses": self.witnesses,
        }


def verify_structure(f: SetFunction, tol: float = DEFAULT_TOL, cap: int | None = None
                     ) -> StructureReport:
    """Check normalization, monotonicity and the declared kind by enumeration."""
    t = f.table(cap=cap)
    witnesses = {}
    normalized = bool(abs(t[0]) <= tol)
    if not normalized:
        witnesses["normalized"] = {"S": 0, "value": float(t[0])}
    mono = kernels.monotone_violation(t, f.n, tol)
    if mono is not None:
        s, i = mono
        witnesses["non_decreasing"] = {"S": s, "i": i, "subsets": [s, s | (1 << i)]}
    pair = kernels.pairwise_violation(t, f.n, f.kind == SUBMODULAR, tol)
    if pair is not None:
        s, i, j = pair
        witnesses["matches_kind"] = {
            "S": s, "i": i, "j": j, "subsets": [s | (1 << i), s | (1 << j)]
        }
    return StructureReport(normalized, mono is None, pair is None, f.kind, witnesses)


def base_violation(f: SetFunction, x, tol: float = DEFAULT_TOL, cap: int | None = None):
    """Most violated base constraint as ``(mask, excess)``, or ``None``.

    For a submodular ``f`` the constraints are ``x(S) <= f(S)``; for a
    supermodular one ``x(S) >= f(S)``; both with ``x(V) = f(V)``.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (f.n,):
        raise InvalidInput(f"point has length {x.size}, expected {f.n}")
    t = f.table(cap=cap)
    xs = kernels.subset_sums(x)
    excess = xs - t if f.kind == SUBMODULAR else t - xs
    excess[-1] = abs(xs[-1] - t[-1])
    worst = int(np.argmax(excess))
    if excess[worst] > tol:
        return worst, float(excess[worst])
    return None


def membership(f: SetFunction, x, tol: float = DEFAULT_TOL, cap: int | None = None) -> bool:
    return base_violation(f, x, tol, cap) is None
