import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corpus import random_submodular, random_supermodular
from polygame.brute import brute_solve, payoff_matrix, solve_matrix_game, throughput_lp
from polygame.decompose import decompose_base_point, recombine
from polygame.errors import CapExceeded, NotInBase
from polygame.games import GameSpec, Variant
from polygame.setfunc import SUBMODULAR, TableFunction, all_permutations, vertex_matrix


def test_vertex_is_single_term(rescue_f):
    assert decompose_base_point(rescue_f, [0.25, 0.5]) == [(1.0, (1, 0))]


def test_rescue_midpoint(rescue_f):
    terms = decompose_base_point(rescue_f, [0.375, 0.375])
    assert [s for _, s in terms] == [(0, 1), (1, 0)]
    assert [t for t, _ in terms] == pytest.approx([0.5, 0.5], abs=1e-12)


def test_scheduling_mixtures(sched_g):
    # vertices (1, 6) and (3, 4)
    terms = decompose_base_point(sched_g, [2.0, 5.0])
    assert [t for t, _ in terms] == pytest.approx([0.5, 0.5], abs=1e-12)
    terms = decompose_base_point(sched_g, [2.5, 4.5])
    assert dict((s, t) for t, s in terms) == pytest.approx({(0, 1): 0.25, (1, 0): 0.75})


def test_outside_base_rejected(rescue_f):
    with pytest.raises(NotInBase):
        decompose_base_point(rescue_f, [0.6, 0.15])
    with pytest.raises(NotInBase):
        decompose_base_point(rescue_f, [0.3, 0.3])


def test_cap():
    f = TableFunction([bin(m).count("1") for m in range(256)], SUBMODULAR)
    with pytest.raises(CapExceeded):
        decompose_base_point(f, np.ones(8))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_round_trip(n, seed):
    rng = np.random.default_rng(seed)
    fn = random_submodular(rng, n) if seed % 2 else random_supermodular(rng, n)
    perms = all_permutations(n)
    pick = rng.choice(len(perms), size=min(len(perms), 4), replace=False)
    x = rng.dirichlet(np.ones(pick.size)) @ vertex_matrix(fn, perms[pick])
    terms = decompose_base_point(fn, x)
    assert len(terms) <= n
    assert sum(t for t, _ in terms) == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(recombine(fn, terms), x, atol=1e-8)


def test_matrix_game_known():
    # matching pennies
    res = solve_matrix_game([[1, -1], [-1, 1]])
    assert res.value == pytest.approx(0, abs=1e-12)
    assert res.rows == pytest.approx([0.5, 0.5])


def test_brute_examples(rescue_f, sched_g):
    assert brute_solve(GameSpec(Variant.MAXMIN_POLY, rescue_f, [1, 1])).value == \
        pytest.approx(0.375, abs=1e-12)
    assert brute_solve(GameSpec(Variant.MINMAX_CONTRA, sched_g, [1, 0.5])).value == \
        pytest.approx(7 / 3, abs=1e-12)
    f = TableFunction([0, 2.0], SUBMODULAR)
    assert brute_solve(GameSpec(Variant.MAXMIN_POLY, f, [3.0])).value == pytest.approx(6.0)


def test_payoff_matrix_shape(rescue_f):
    perms, pay = payoff_matrix(GameSpec(Variant.MAXMIN_POLY, rescue_f, [1, 2]))
    assert pay.shape == (2, 2)
    assert pay[0].tolist() == pytest.approx([0.5, 0.5])


def test_throughput_lp_two_operators():
    lam, rates = throughput_lp([0.5, 0.5], [1, 1])
    assert lam == pytest.approx(4 / 3)
