import itertools

import numpy as np
import pytest

from polygame import applications as apps
from polygame.brute import brute_solve, throughput_lp
from polygame.decompose import recombine
from polygame.errors import InvalidInput, UnstableSystem
from polygame.fastpaths import check_zeta_monotone
from polygame.families import scheduling_function
from polygame.setfunc import greedy_vertex, vertex_matrix

rng = np.random.default_rng(7)


def random_instances(kind, count=25):
    for _ in range(count):
        n = int(rng.integers(1, 6))
        if kind == "search":
            yield apps.SearchInstance(rng.uniform(0.2, 2, n), rng.uniform(0.2, 2, n))
        elif kind == "varspeed":
            yield apps.VariableSpeedInstance(rng.uniform(0.2, 1.5, n), rng.uniform(0, 1, n),
                                             rng.uniform(0.2, 2, n))
        elif kind == "rescue":
            yield apps.RescueInstance(rng.uniform(0.05, 0.95, n), rng.uniform(0.05, 1, n))
        else:
            lam, mu = rng.uniform(0.1, 1, n), rng.uniform(0.5, 2, n)
            lam *= rng.uniform(0.2, 0.9) / np.sum(lam / mu)
            yield apps.QueueInstance(lam, mu, rng.uniform(0.2, 2, n))


REDUCTIONS = [
    ("search", apps.weighted_search, apps.search_performance),
    ("varspeed", apps.variable_speed_search, apps.variable_speed_performance),
    ("rescue", apps.search_rescue, apps.rescue_performance),
    ("queue", apps.queue_game, apps.queue_performance),
]


@pytest.mark.parametrize("kind,reduce,perf", REDUCTIONS, ids=[r[0] for r in REDUCTIONS])
def test_reduction_faithful(kind, reduce, perf):
    for inst in random_instances(kind):
        fn = reduce(inst).spec.fn
        for sigma in itertools.permutations(range(fn.n)):
            direct = perf(inst, sigma)
            assert np.allclose(greedy_vertex(fn, sigma), direct, rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("kind,reduce", [("search", apps.weighted_search),
                                         ("varspeed", apps.variable_speed_search),
                                         ("rescue", apps.search_rescue)])
def test_zeta_flags(kind, reduce):
    for inst in random_instances(kind):
        app = reduce(inst)
        assert check_zeta_monotone(app.spec.fn, app.spec.w, app.zeta)


def test_search_examples():
    app = apps.weighted_search(apps.SearchInstance([1, 2], [1, 1]))
    assert app.solve().value == pytest.approx(7 / 3)
    app = apps.weighted_search(apps.SearchInstance([1, 1], [1, 1]))
    assert app.solve().value == pytest.approx(1.5)
    app = apps.weighted_search(apps.SearchInstance([2.5], [0.4]))
    assert app.solve().value == pytest.approx(1.0)


def test_search_report():
    app = apps.weighted_search(apps.SearchInstance([1, 2], [1, 1]))
    rep = apps.search_report(app, app.solve())
    assert rep["hider_probabilities"] == pytest.approx([1 / 3, 2 / 3])
    mix = {tuple(m["order"]): m["probability"] for m in rep["searcher_mixture"]}
    assert mix == pytest.approx({(0, 1): 1 / 3, (1, 0): 2 / 3})
    assert rep["expected_find_times"] == pytest.approx([7 / 3, 7 / 3])


def test_rescue_rejects_degenerate():
    with pytest.raises(InvalidInput):
        apps.RescueInstance([1.0, 0.5], [1, 1])
    with pytest.raises(InvalidInput):
        apps.RescueInstance([0.5, 0.5], [0.0, 1])


def test_varspeed_examples():
    inst = apps.VariableSpeedInstance([1, 1], [1, 1], [1, 1])
    app = apps.variable_speed_search(inst)
    assert app.spec.fn(1) == pytest.approx(2) and app.spec.fn(3) == pytest.approx(8)
    assert app.solve().value == pytest.approx(2.0)
    assert brute_solve(app.spec).value == pytest.approx(2.0, abs=1e-10)
    inst = apps.VariableSpeedInstance([1.0], [1.0], [1.0])
    assert apps.variable_speed_search(inst).solve().value == pytest.approx(1.0)


def test_varspeed_zero_b_is_plain_search():
    t = np.array([0.7, 1.3, 2.0])
    a = apps.variable_speed_search(apps.VariableSpeedInstance(t, np.zeros(3), np.ones(3)))
    b = apps.weighted_search(apps.SearchInstance(t, np.ones(3)))
    assert np.allclose(a.spec.fn.table(), b.spec.fn.table(), rtol=1e-14)


def test_varspeed_translation_paths_agree():
    inst = apps.VariableSpeedInstance([0.5, 1.2, 0.8], [0.3, 0.6, 0.1], [1.0, 2.0, 0.5])
    app = apps.variable_speed_search(inst)
    sol = app.solve(fast=False)
    terms = apps.variable_speed_mixture(app, sol.x)
    base = scheduling_function(inst.t)
    assert np.allclose(recombine(base, terms) - inst.b * inst.t, sol.x, atol=1e-9)
    # the same mixture read on the translated polytope
    assert np.allclose(recombine(app.spec.fn, terms), sol.x, atol=1e-9)


def test_rescue_examples():
    app = apps.search_rescue(apps.RescueInstance([0.5, 0.5], [1, 1]))
    rep = apps.rescue_report(app, app.solve())
    assert rep["value"] == pytest.approx(0.375)
    assert rep["x"] == pytest.approx([0.375, 0.375])
    assert rep["hiding_probabilities"] == pytest.approx([0.5, 0.5])
    app = apps.search_rescue(apps.RescueInstance([0.5, 0.5], [1, 0.1]))
    sol = app.solve()
    assert sol.value == pytest.approx(0.05) and sol.s_star == 0b10


def test_rescue_value_formula():
    for inst in random_instances("rescue"):
        app = apps.search_rescue(inst)
        p, q = inst.p, inst.q
        best = min((1 - np.prod(p[list(s)])) / np.sum((1 - p[list(s)]) / (q[list(s)] * p[list(s)]))
                   for k in range(1, p.size + 1) for s in itertools.combinations(range(p.size), k))
        assert app.solve().value == pytest.approx(best, rel=1e-12)


def test_throughput_examples():
    res = apps.max_throughput(apps.ThroughputInstance([0.5, 0.5], [1, 1]))
    assert res.value == pytest.approx(0.75)
    assert res.throughput == pytest.approx(4 / 3)
    assert [r["rate"] for r in res.routing] == pytest.approx([2 / 3, 2 / 3])
    assert res.loads == pytest.approx([1, 1])
    res = apps.max_throughput(apps.ThroughputInstance([0.5], [1]))
    assert res.throughput == pytest.approx(1.0)


def test_throughput_scales_with_rates():
    p = np.array([0.3, 0.7, 0.5])
    r = np.array([1.0, 0.4, 2.0])
    base = apps.max_throughput(apps.ThroughputInstance(p, r), routing=False).throughput
    for k in (0.5, 3.0):
        lam = apps.max_throughput(apps.ThroughputInstance(p, k * r), routing=False).throughput
        assert lam == pytest.approx(k * base, rel=1e-12)


def test_throughput_feasible_and_optimal():
    for _ in range(30):
        n = int(rng.integers(1, 6))
        inst = apps.ThroughputInstance(rng.uniform(0.05, 0.95, n), rng.uniform(0.2, 2, n))
        res = apps.max_throughput(inst)
        rates = [(r["rate"], r["order"]) for r in res.routing]
        loads = apps.operator_loads(inst.p, rates)
        assert np.all(inst.r - loads >= -1e-8)
        assert sum(r for r, _ in rates) == pytest.approx(res.throughput, abs=1e-8)
        assert res.throughput == pytest.approx(throughput_lp(inst.p, inst.r)[0], abs=1e-8)


def test_queue_examples():
    spec, rep = apps.queue_priority(apps.QueueInstance([0.2, 0.2], [1, 1], [1, 1]))
    assert rep["value"] == pytest.approx(5 / 3)
    assert brute_solve(spec).value == pytest.approx(5 / 3, abs=1e-10)
    lam, mu, c = 0.3, 1.5, 2.0
    spec, rep = apps.queue_priority(apps.QueueInstance([lam], [mu], [c]))
    assert rep["value"] == pytest.approx(c / (mu * (1 - lam / mu)))
    with pytest.raises(UnstableSystem):
        apps.QueueInstance([0.6, 0.5], [1, 1], [1, 1])


def test_queue_conservation():
    for inst in random_instances("queue", 10):
        fn = apps.queue_game(inst).spec.fn
        x = vertex_matrix(fn)
        assert np.allclose(x.sum(axis=1), fn(fn.full), rtol=1e-12)
