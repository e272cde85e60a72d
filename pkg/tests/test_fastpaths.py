import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corpus import VARIANTS, random_application
from polygame import applications as apps
from polygame.errors import InvalidInput
from polygame.families import rescue_function, scheduling_function
from polygame.fastpaths import (
    PermutationSampler,
    ZetaIndex,
    check_zeta_monotone,
    monotone_value,
    sample_many,
    sample_sigma,
    zeta_solve,
    zeta_witness,
)
from polygame.games import GameSpec, Variant, solve
from polygame.setfunc import SUBMODULAR, CountingFunction, TableFunction, vertex_matrix


def rescue_spec(p, q):
    return apps.search_rescue(apps.RescueInstance(p, q))


def test_zeta_flags_for_applications():
    app = rescue_spec([0.5, 0.5], [1, 1])
    assert check_zeta_monotone(app.spec.fn, app.spec.w, app.zeta)
    app = apps.weighted_search(apps.SearchInstance([1, 2], [1, 1]))
    assert check_zeta_monotone(app.spec.fn, app.spec.w, app.zeta)


def test_zeta_modular_both_directions():
    f = TableFunction([0, 1, 1, 2], SUBMODULAR)
    for direction in ("decreasing", "increasing"):
        assert check_zeta_monotone(f, [1, 1], ZetaIndex([1, 1], direction))


def test_zeta_witness_reported():
    # rescue payoff is decreasing in q, so the reversed index must fail
    app = rescue_spec([0.3, 0.6, 0.8], [1.0, 0.5, 0.2])
    wrong = ZetaIndex(1.0 / app.zeta.zeta, "decreasing")
    wit = zeta_witness(app.spec.fn, app.spec.w, wrong)
    assert wit is not None and len(wit) == 4


def test_zeta_solve_examples():
    app = rescue_spec([0.5, 0.5], [1, 0.1])
    sol = zeta_solve(app.spec, app.zeta)
    assert sol.value == pytest.approx(0.05)
    assert sol.s_star == 0b10
    app = apps.weighted_search(apps.SearchInstance([1, 2], [1, 1]))
    sol = zeta_solve(app.spec, app.zeta)
    assert sol.value == pytest.approx(7 / 3) and sol.s_star == 0b11


def test_zeta_solve_direction_checked():
    app = rescue_spec([0.5, 0.5], [1, 1])
    with pytest.raises(InvalidInput):
        zeta_solve(app.spec, ZetaIndex([1, 1], "increasing"))


def test_zeta_solve_single_element():
    app = rescue_spec([0.4], [0.7])
    sol = zeta_solve(app.spec, app.zeta)
    assert sol.s_star == 1
    assert sol.value == pytest.approx(app.spec.fn(1) * app.spec.w[0])


def test_zeta_solve_counts_calls():
    app = rescue_spec([0.3, 0.6, 0.8, 0.5, 0.9], [1.0, 0.5, 0.2, 0.7, 0.4])
    for variant in (Variant.MAXMIN_POLY, Variant.MINMAX_POLY):
        counted = CountingFunction(app.spec.fn)
        spec = GameSpec(variant, counted, app.spec.w)
        zeta_solve(spec, app.zeta)
        assert counted.calls <= 5


def test_monotone_value_examples():
    app = rescue_spec([0.5, 0.5], [1, 1])
    value, sol = monotone_value(app.spec)
    assert value == pytest.approx(0.375)
    for n in range(1, 7):
        app = apps.weighted_search(apps.SearchInstance(np.ones(n), np.ones(n)))
        assert monotone_value(app.spec)[0] == pytest.approx((n + 1) / 2)
    f = TableFunction([0, 2.0], SUBMODULAR)
    assert monotone_value(GameSpec(Variant.MAXMIN_POLY, f, [3.0]))[0] == pytest.approx(6.0)


@pytest.mark.parametrize("variant", VARIANTS, ids=lambda v: v.value)
@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 6))
def test_zeta_solve_matches_enumeration(variant, seed, n):
    rng = np.random.default_rng(seed)
    while True:
        app = random_application(rng, n)
        if app.zeta is not None and app.spec.fn.kind == variant.base_kind:
            break
    spec = GameSpec(variant, app.spec.fn, app.spec.w)
    fast = zeta_solve(spec, app.zeta)
    full = solve(spec)
    scale = max(1.0, abs(full.value))
    assert fast.value == pytest.approx(full.value, abs=1e-9 * scale)
    assert np.allclose(fast.x, full.x, atol=1e-9 * scale, rtol=0)
    assert fast.s_star == full.s_star


def test_sampler_hand_example():
    app = rescue_spec([0.5, 0.5], [1, 1])
    s = PermutationSampler(app.spec.fn, app.spec.w)
    p = s.mix_probability(0.0, 0.75, 0.5, 0.5, 1)
    assert p == pytest.approx(0.5)
    dist = s.distribution()
    assert dist == pytest.approx({(0, 1): 0.5, (1, 0): 0.5})


def test_sampler_single_element():
    f = rescue_function([0.4])
    assert sample_sigma(f, [1.0], 3) == (0,)


def test_sampler_modular_degenerate():
    f = TableFunction([0, 1, 1, 2], SUBMODULAR)
    s = PermutationSampler(f, [1, 1])
    assert s.mix_probability(0.0, 2.0, 1.0, 1.0, 1) == 1.0
    x = vertex_matrix(f, np.array(sample_many(f, [1, 1], 20, 0)))
    assert np.allclose(x, 1.0)


def test_sampler_rejects_non_monotone_payoff():
    app = rescue_spec([0.2, 0.9], [1.0, 0.05])
    s = PermutationSampler(app.spec.fn, app.spec.w)
    with pytest.raises(InvalidInput):
        s.distribution()


def test_sampler_seeded():
    app = rescue_spec([0.3, 0.6, 0.8, 0.5], [1, 1, 1, 1])
    a = sample_many(app.spec.fn, app.spec.w, 50, 11)
    b = sample_many(app.spec.fn, app.spec.w, 50, 11)
    assert a == b


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(0.05, 0.95), min_size=2, max_size=5), st.integers(0, 1))
def test_sampler_distribution_equalizes(p, family):
    n = len(p)
    if family == 0:
        fn, w = rescue_function(p), np.array(p) / (1 - np.array(p))
    else:
        t = 4 * np.array(p)
        fn, w = scheduling_function(t), 1.0 / t
    dist = PermutationSampler(fn, w).distribution()
    perms = np.array(list(dist))
    theta = np.array(list(dist.values()))
    x = theta @ vertex_matrix(fn, perms)
    value = fn(fn.full) / np.sum(1.0 / w)
    assert theta.sum() == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(x, value / w, atol=1e-9)
