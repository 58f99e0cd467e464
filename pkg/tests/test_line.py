import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from brute import random_graph, seeded
from idpclaw.graph import Graph, complete_graph, cycle_graph, line_graph, path_graph, star_graph
from idpclaw.instance import Instance, verify_solution
from idpclaw.line import LineStats, NotLineGraphError, solve_line_graph_instance
from idpclaw.oracle import solve_idp_exact


def check(inst):
    stats = LineStats()
    sol = solve_line_graph_instance(inst, stats=stats)
    truth = solve_idp_exact(inst, cap=None)
    assert (sol is not None) == (truth is not None)
    if sol is not None:
        assert verify_solution(inst, sol) == []
    assert stats.preimage_instances <= 4 ** inst.k
    return sol


def test_path_end_to_end():
    g, pm = line_graph(path_graph(5))
    assert len(g) == 4 and g.num_edges() == 3
    ends = [v for v in g if g.degree(v) == 1]
    sol = check(Instance.build(g, [tuple(ends)]))
    assert sol is not None and len(sol.paths[0]) == 4


def test_octahedron_disjoint_pairs():
    g, _ = line_graph(complete_graph(4))
    # in L(K4) each vertex misses exactly one other (the opposite edge)
    opp = {}
    for u in g:
        (w,) = [x for x in g if x != u and not g.has_edge(u, x)]
        opp[u] = w
    u = min(g)
    v = min(x for x in g if x not in (u, opp[u]))
    check(Instance.build(g, [(u, opp[u]), (v, opp[v])]))


def test_overlapping_pairs_eight_vertices():
    h = cycle_graph(6).add_edges([(0, 3), (1, 4)])
    g, pm = line_graph(h)
    assert len(g) == 8
    vs = sorted(g, key=repr)
    found = 0
    for a, b, c in itertools.permutations(vs, 3):
        if g.has_edge(a, b) or g.has_edge(a, c):
            continue
        check(Instance.build(g, [(a, b), (a, c)]))
        found += 1
        if found > 20:
            break
    assert found


def test_not_line_graph():
    g = complete_graph(5).remove_edges([(0, 1)])  # claw-free, yet not a line graph
    with pytest.raises(NotLineGraphError):
        solve_line_graph_instance(Instance.build(g, [(0, 1)]))


def test_no_pairs():
    g, _ = line_graph(star_graph(3))
    assert solve_line_graph_instance(Instance.build(g, [])).paths == ()


@st.composite
def line_instances(draw):
    rng = seeded(draw(st.integers(0, 10 ** 6)))
    while True:
        h = random_graph(rng, rng.randint(3, 9), rng.uniform(0.25, 0.6))
        h = h.remove_vertices([v for v in h if h.degree(v) == 0])
        if h.num_edges() < 2 or h.num_edges() > 12:
            continue
        g, _ = line_graph(h)
        vs = sorted(g, key=repr)
        pairs = set()
        for _ in range(rng.randint(1, 3)):
            s, t = rng.sample(vs, 2)
            if (t, s) not in pairs:
                pairs.add((s, t))
        return Instance.build(g, sorted(pairs, key=repr))


@settings(max_examples=80, deadline=None)
@given(line_instances())
def test_matches_oracle(inst):
    check(inst)
