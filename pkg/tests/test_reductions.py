import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from brute import random_claw_free, seeded
from idpclaw.graph import Graph, complete_graph, cycle_graph, find_proper_w_join, is_twin_free, path_graph, star_graph
from idpclaw.instance import Instance, Solution, is_independent, verify_solution
from idpclaw.oracle import solve_idp_exact
from idpclaw.reductions import (DeleteEdge, DeleteVertex, DropPair, PreconditionError, Transcript, lift_solution,
                                make_independent, overloaded_vertex, reduce_all, remove_twins, remove_w_joins,
                                replay)


def yes(inst):
    return solve_idp_exact(inst, cap=None) is not None


# -- rules 1-4 -------------------------------------------------------------------------
def test_rule1_and_rule3_on_triangle():
    g = Graph.from_edges([("u", "v"), ("v", "w"), ("u", "w")])
    red, tr = make_independent(Instance.build(g, [("u", "v")]))
    assert DeleteVertex("w", "rule1") in tr.steps
    assert any(isinstance(s, DropPair) for s in tr.steps)
    assert red.k == 0
    sol = lift_solution(Instance.build(g, [("u", "v")]), tr, red, Solution(()))
    assert sol.paths == (("u", "v"),)


def test_independent_input_unchanged():
    inst = Instance.build(path_graph(3, 1), [(1, 3)])
    red, tr = make_independent(inst)
    assert len(tr) == 0 and red == inst


def test_rule2_pendant():
    g = Graph.from_edges([("u", "v"), ("u", "x")])
    red, tr = make_independent(Instance.build(g, [("u", "v")]))
    assert DeleteVertex("x", "rule2") in tr.steps
    assert red.k == 0


def test_rule4_cuts_edge_between_terminals():
    # 1 and 2 are adjacent terminals of different pairs
    g = Graph.from_edges([(5, 4), (4, 1), (1, 2), (2, 6), (6, 7), (7, 5)])
    inst = Instance.build(g, [(1, 5), (2, 7)])
    red, tr = make_independent(inst)
    assert DeleteEdge(1, 2) in tr.steps and is_independent(red)
    assert yes(red) == yes(inst)


def test_claw_rejected():
    with pytest.raises(PreconditionError):
        make_independent(Instance.build(star_graph(3), [(1, 2)]))


# -- twins -------------------------------------------------------------------------
def test_diamond_twins():
    diamond = complete_graph(4).remove_edges([(0, 3)])
    red, tr = remove_twins(Instance.build(diamond, [(0, 3)]))
    assert len(tr) == 1 and len(red.graph) == 3 and yes(red)


def test_twin_free_identity():
    inst = Instance.build(cycle_graph(5), [(0, 2)])
    red, tr = remove_twins(inst)
    assert len(tr) == 0 and red == inst


def test_terminal_twin_kept():
    g = Graph.from_edges([("u", "a"), ("u", "b"), ("a", "b"), ("u", "c"), ("c", "x")])
    red, tr = remove_twins(Instance.build(g, [("u", "x")]))
    assert "u" in red.graph and len(tr) == 1
    assert len({"a", "b"} & red.graph.vertices) == 1


def test_twins_need_independence():
    with pytest.raises(PreconditionError):
        remove_twins(Instance.build(path_graph(2), [(0, 1)]))


# -- W-joins -----------------------------------------------------------------------
def test_w_join_case4_c4():
    g = Graph.from_edges([("a1", "a2"), ("b1", "b2"), ("a1", "b1"), ("a2", "b2")])
    red, tr = remove_w_joins(Instance(g, ()))
    assert len(red.graph) == 3 and find_proper_w_join(red.graph) is None
    assert all(s.reason == "wjoin-case4" for s in tr.steps)


def test_w_join_case2_same_pair():
    # A = {u, a}, B = {v, b}; u and v carry the pair, u sees b, a sees v
    g = Graph.from_edges([("u", "a"), ("v", "b"), ("u", "b"), ("a", "v"),
                          ("x", "u"), ("x", "a"), ("y", "v"), ("y", "b")])
    inst = Instance.build(g, [("u", "v")])
    red, tr = remove_w_joins(inst)
    drops = [s for s in tr.steps if isinstance(s, DropPair)]
    assert len(drops) == 1 and drops[0].splice == ("u", "b", "v")
    assert red.k == 0
    sol = lift_solution(inst, tr, red, Solution(()))
    assert sol.paths == (("u", "b", "v"),) and verify_solution(inst, sol) == []


def test_w_join_free_identity():
    inst = Instance.build(cycle_graph(6), [(0, 3)])
    red, tr = remove_w_joins(inst)
    assert len(tr) == 0 and red == inst


# -- lifting and transcripts -------------------------------------------------------------
def test_identity_lift():
    inst = Instance.build(path_graph(3), [(0, 2)])
    sol = Solution(((0, 1, 2),))
    assert lift_solution(inst, Transcript(), inst, sol) == sol


def test_rule3_lift_adjacent_pair():
    g = path_graph(4)
    inst = Instance.build(g, [(1, 2)])
    red, tr = make_independent(inst)
    assert lift_solution(inst, tr, red, Solution(())).paths == ((1, 2),)


@st.composite
def claw_free_instances(draw):
    rng = seeded(draw(st.integers(0, 10 ** 6)))
    g = random_claw_free(rng, 11)
    vs = sorted(g)
    pairs = []
    for _ in range(rng.randint(1, 3)):
        s, t = rng.sample(vs, 2)
        if (s, t) not in pairs and (t, s) not in pairs:
            pairs.append((s, t))
    return Instance.build(g, pairs)


@settings(max_examples=80, deadline=None)
@given(claw_free_instances())
def test_reduce_all_preserves_answer_and_lifts(inst):
    red, tr = reduce_all(inst)
    assert replay(inst, tr).graph == red.graph
    assert yes(red) == yes(inst)
    if overloaded_vertex(red) is not None:
        assert not yes(inst)
        return
    assert is_independent(red) and is_twin_free(red.graph) and find_proper_w_join(red.graph) is None
    sol = solve_idp_exact(red, cap=None)
    if sol is not None:
        assert verify_solution(inst, lift_solution(inst, tr, red, sol)) == []
