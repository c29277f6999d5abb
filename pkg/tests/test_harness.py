from __future__ import annotations

import pytest

from thetagraph import PointSet, UnknownProperty, build, general_position_violations, sinks, strongly_connected_components
from thetagraph.errors import ExhaustedRetries
from thetagraph.harness import (
    DISTRIBUTIONS,
    PROPERTIES,
    GenSpec,
    Trial,
    batch,
    evaluate,
    generate,
    minimize,
    run_property,
    run_suite,
)

TRIO = PointSet([(0, 0), (10, 1), (6, -20)], ["a", "b", "c"])


def test_generate_is_deterministic():
    spec = GenSpec(42, 10, 10, "uniform", 10**6)
    assert generate(spec) == generate(spec)
    assert len(generate(spec)) == 10


def test_single_point():
    for d in DISTRIBUTIONS:
        assert len(generate(GenSpec(7, 1, 1, d))) == 1


@pytest.mark.parametrize("dist", DISTRIBUTIONS)
def test_generated_sets_are_valid(dist):
    for seed in range(30):
        spec = GenSpec(seed, 1, 64, dist)
        ps = generate(spec)
        assert general_position_violations(ps, 3) == []
        assert all(abs(c) <= spec.bound and c.denominator == 1 for p in ps for c in p.xy)


def test_jittered_collinear_example_validates():
    ps = generate(GenSpec(9, 50, 50, "jittered-collinear", 10**6))
    assert len(ps) == 50
    assert general_position_violations(ps, 3) == []


def test_generation_limits():
    with pytest.raises(ValueError):
        generate(GenSpec(1, 10, 10, bound=5))
    with pytest.raises(ExhaustedRetries):
        generate(GenSpec(1, 40, 40, "jittered-collinear", bound=40, max_retries=1))


def test_batch_is_reproducible_and_rotates_distributions():
    a, b = batch(3, 8), batch(3, 8)
    assert a == b
    assert [s.distribution for s in a[:4]] == list(DISTRIBUTIONS)
    assert len({s.seed for s in a}) == 8


def test_minimize_examples():
    two_zero_sinks = lambda ps: len(sinks(build(ps, 3))[0]) >= 2
    assert minimize(TRIO, two_zero_sinks).coords == TRIO.subset([0, 1]).coords
    pair = PointSet([(0, 0), (10, 1)])
    assert minimize(pair, lambda ps: len(build(ps, 3).edges) >= 1) == pair
    not_strong = lambda ps: len(strongly_connected_components(build(ps, 3))) > 1
    assert minimize(TRIO, not_strong) == TRIO


def test_minimizer_soundness():
    for seed in range(20):
        ps = generate(GenSpec(seed, 8, 40))
        failing = lambda s: len(sinks(build(s, 3))[1]) >= 3
        if not failing(ps):
            continue
        w = minimize(ps, failing)
        assert failing(w)
        for k in range(len(w)):
            rest = [j for j in range(len(w)) if j != k]
            assert not rest or not failing(w.subset(rest))
        assert minimize(ps, failing) == w


def test_registered_properties():
    for name in ("theta3-connected", "yao3-connected", "even-m-connected", "i-edge-noncrossing",
                 "empty-cone-uncrossed", "i-path-monotone-sink", "barrier-separates",
                 "sink-triple-connected", "naive-sweep-equal", "arc-enclosure"):
        assert name in PROPERTIES
    with pytest.raises(UnknownProperty):
        run_property("no-such-property", batch(1, 1))


def test_properties_pass_on_small_batch():
    names = [n for n in PROPERTIES if n != "even-m-connected"]
    for name, res in run_suite(names, batch(10, 60)).items():
        assert res.trials == 60 and res.failures == 0, (name, res.messages[:3])
    res = run_property("even-m-connected", batch(11, 40, m=4))
    assert res.passed


def test_failures_produce_minimized_witnesses(monkeypatch):
    monkeypatch.setitem(PROPERTIES, "fake-two-zero-sinks",
                        lambda t: ["too many 0-sinks"] if len(t.sinks()[0]) >= 2 else [])
    res = run_property("fake-two-zero-sinks", batch(2, 10, n_min=5, n_max=20))
    assert res.trials == 10 and res.failures >= 1
    assert len(res.witnesses) == res.failures
    for w in res.witnesses:
        assert len(w) == 2
        assert evaluate("fake-two-zero-sinks", Trial(w))
        assert not evaluate("fake-two-zero-sinks", Trial(w.subset([0])))
    assert res.to_dict()["passed"] is False


def test_same_seed_same_result():
    r1 = run_property("theta3-connected", batch(5, 30))
    r2 = run_property("theta3-connected", batch(5, 30))
    assert (r1.trials, r1.failures, r1.messages) == (r2.trials, r2.failures, r2.messages)
