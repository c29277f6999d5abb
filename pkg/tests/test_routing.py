from __future__ import annotations

import pytest

from thetagraph import CYCLED, REACHED, YAO, Degenerate, PointSet, build, theta_route
from thetagraph.harness import GenSpec, batch, generate

A, B, C = 0, 1, 2
TRIO = PointSet([(0, 0), (10, 1), (6, -20)], ["a", "b", "c"])


def test_trio_routing():
    g = build(TRIO, 3)
    r = theta_route(g, A, C)
    assert r.outcome == CYCLED and r.visited == (A, B, A) and r.repeated == A
    r = theta_route(g, C, A)
    assert r.reached and r.visited == (C, A)
    r = theta_route(g, B, B)
    assert r.outcome == REACHED and r.visited == (B,)


def test_yao_graph_rejected():
    with pytest.raises(ValueError):
        theta_route(build(TRIO, 3, YAO), A, C)


def test_boundary_target_is_degenerate():
    # lenient graph on a point pair sharing x: the target sits on the -y ray
    g = build(PointSet([(0, 0), (0, -7), (5, 1)]), 3, lenient=True)
    with pytest.raises(Degenerate):
        theta_route(g, 0, 1)


def test_traces_are_walks_and_terminate():
    cycled = 0
    for spec in batch(8, 40):
        g = build(generate(spec), 3)
        for s in range(g.n):
            for t in range(0, g.n, 3):
                r = theta_route(g, s, t)
                assert len(r.visited) <= g.n + 1
                for u, v in zip(r.visited, r.visited[1:]):
                    assert v in g.out[u]
                if r.reached:
                    assert r.visited[-1] == t
                else:
                    assert r.outcome == CYCLED
                    assert r.visited.count(r.repeated) == 2 and r.visited[-1] == r.repeated
                    assert len(set(r.visited)) == len(r.visited) - 1
                    cycled += 1
    assert cycled > 0  # theta_3 routing does fail in practice


@pytest.mark.parametrize("m", [4, 6])
def test_even_m_routing_reaches_rightmost(m):
    for seed in range(60):
        ps = generate(GenSpec(seed, 2, 40, m=m))
        g = build(ps, m)
        t = max(range(len(ps)), key=lambda v: ps[v].x)
        for s in range(g.n):
            assert theta_route(g, s, t).reached
