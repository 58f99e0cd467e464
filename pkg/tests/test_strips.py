import pytest
from hypothesis import example, given, settings
from hypothesis import strategies as st

import idpclaw.branching as branching
from idpclaw.branching import branch_strips, solve_leaves, solve_strip_subproblem
from idpclaw.circular_arc import ArcModel
from idpclaw.generators import gen_random
from idpclaw.graph import (Graph, complete_graph, cycle_graph, find_claw, line_graph, path_graph, star_graph,
                           two_clique_neighborhoods)
from idpclaw.instance import Instance, is_independent, verify_solution
from idpclaw.oracle import solve_idp_exact
from idpclaw.reductions import make_independent, overloaded_vertex, remove_w_joins
from idpclaw.strips import (Strip, StripError, StripStructure, classify_strip, format_strip_structure,
                            parse_strip_structure, restrict_structure, strip_structure_from_line_graph,
                            validate_strip_structure)


def yes(inst):
    return solve_idp_exact(inst, cap=None) is not None


def spot(x, a, b):
    return Strip(Graph.from_edges([(("z", x, a), x), (x, ("z", x, b))]), {a: ("z", x, a), b: ("z", x, b)})


def path_stripe(interior, a, b=None):
    """A stripe whose interior is a path; z_a sees the first vertex, z_b the last."""
    za = ("z", interior[0], a)
    edges = [(za, interior[0])] + list(zip(interior, interior[1:]))
    z_of = {a: za}
    if b is not None:
        zb = ("z", interior[-1], b)
        edges.append((interior[-1], zb))
        z_of[b] = zb
    return Strip(Graph.from_edges(edges), z_of)


def case2c_fixture():
    """C_8 x1-p-q-r-x2-b-c-a as one stripe (R-vertices 0, 1) and three spots."""
    strips = {0: path_stripe(["x1", "p", "q", "r", "x2"], 0, 1),
              1: spot("a", 0, 2), 2: spot("b", 1, 3), 3: spot("c", 2, 3)}
    S = StripStructure((0, 1, 2, 3), ((0, (0, 1)), (1, (0, 2)), (2, (1, 3)), (3, (2, 3))), strips)
    g = Graph.from_edges([("x1", "p"), ("p", "q"), ("q", "r"), ("r", "x2"), ("x2", "b"), ("b", "c"),
                          ("c", "a"), ("a", "x1")])
    return g, S


# -- structures ------------------------------------------------------------------------
def test_builder_on_p3():
    S = strip_structure_from_line_graph(path_graph(3))
    assert len(S.r_vertices) == 4 and len(S.hyperedges) == 3
    assert all(classify_strip(st).kind == "spot" for st in S.strips.values())
    assert validate_strip_structure(path_graph(3), S) == []


def test_builder_on_octahedron():
    g = line_graph(complete_graph(4))[0]
    S = strip_structure_from_line_graph(g)
    assert len(S.r_vertices) == 4 and len(S.hyperedges) == 6
    assert validate_strip_structure(g, S) == []


def test_builder_rejects_claw():
    with pytest.raises(StripError):
        strip_structure_from_line_graph(star_graph(3))


def test_non_clique_attachment_named():
    g, S = case2c_fixture()
    bad = validate_strip_structure(g.remove_edges([("a", "x1")]), S)
    assert any("0" in b for b in bad)
    S2 = StripStructure(S.r_vertices, S.hyperedges, dict(S.strips))
    # make C_0 = {x1, a, q}: q is not adjacent to a
    J = S.strips[0].J.add_edges([(("z", "x1", 0), "q")])
    S2.strips[0] = Strip(J, S.strips[0].z_of)
    assert validate_strip_structure(g, S2)


def test_adjacent_z_rejected():
    st_ = path_stripe(["p", "q"], 0, 1)
    J = st_.J.add_edges([(st_.z_of[0], st_.z_of[1])])
    assert classify_strip(Strip(J, st_.z_of)) is None


def test_file_round_trip():
    gen = gen_random("stripe-fixture", 12, 2, 7)
    S = gen.strips
    again = parse_strip_structure(format_strip_structure(S))
    assert validate_strip_structure(gen.inst.graph, again) == []
    assert again.hyperedges == S.hyperedges


# -- side solver dispatch ----------------------------------------------------------------
def test_dispatch_to_arc_solver(monkeypatch):
    calls = []
    real = branching.solve_with_arcs
    monkeypatch.setattr(branching, "solve_with_arcs", lambda *a, **k: calls.append(1) or real(*a, **k))
    m = ArcModel(20, {i: (2 * i, 2 * i + 3) for i in range(6)}, True)
    inst = Instance.build(m.graph(), [(0, 4)])
    sol = solve_strip_subproblem(inst, m.graph(), m)
    assert calls and sol is not None and verify_solution(inst, sol) == []


def test_dispatch_to_oracle(monkeypatch):
    calls = []
    real = branching.solve_idp_exact
    monkeypatch.setattr(branching, "solve_idp_exact", lambda *a, **k: calls.append(1) or real(*a, **k))
    g = cycle_graph(7)          # independence number 3
    inst = Instance.build(g, [(0, 2), (3, 5)])
    sol = solve_strip_subproblem(inst)
    assert calls and (sol is not None) == yes(inst)


def test_dispatch_refused():
    g = path_graph(9)           # independence number 5, no model
    with pytest.raises(StripError):
        solve_strip_subproblem(Instance.build(g, [(0, 8)]))


# -- branching ------------------------------------------------------------------------
def test_all_spots_single_leaf():
    h = cycle_graph(6).add_edges([(0, 3)])
    g = line_graph(h)[0]
    vs = sorted(g)
    inst = Instance.build(g, [(vs[0], vs[4])])
    S = strip_structure_from_line_graph(g)
    res = branch_strips(inst, S)
    assert len(res.leaves) == 1 and res.leaves[0].inst == inst


def test_terminal_free_one_sided_stripe_deleted():
    # a 5-cycle a-b-c-e-d with a pendant path y1-y2 on the clique {a, d}
    strips = {0: path_stripe(["y1", "y2"], 0), 1: spot("a", 0, 1), 2: spot("b", 1, 2),
              3: spot("c", 2, 3), 4: spot("e", 3, 4), 5: spot("d", 4, 0)}
    S = StripStructure((0, 1, 2, 3, 4), ((0, (0,)), (1, (0, 1)), (2, (1, 2)), (3, (2, 3)), (4, (3, 4)),
                                         (5, (4, 0))), strips)
    g = Graph.from_edges([("y1", "y2"), ("y1", "a"), ("y1", "d"), ("a", "d"), ("a", "b"), ("b", "c"),
                          ("c", "e"), ("e", "d")])
    assert validate_strip_structure(g, S) == []
    inst = Instance.build(g, [("a", "c")])
    res = branch_strips(inst, S)
    assert len(res.leaves) == 1
    assert not {"y1", "y2"} & res.leaves[0].inst.graph.vertices
    assert yes(res.leaves[0].inst) == yes(inst)


def test_case2c_two_unpaired_terminals():
    g, S = case2c_fixture()
    assert validate_strip_structure(g, S) == []
    inst = Instance.build(g, [("p", "b"), ("r", "a")])
    res = branch_strips(inst, S)
    assert res.stats.cases.get("case2c", 0) >= 1
    assert len(res.leaves) <= 6
    assert any(yes(lf.inst) for lf in res.leaves) == yes(inst)
    ans, sol = solve_leaves(inst, res)
    assert ans == yes(inst)
    if sol is not None:
        assert verify_solution(inst, sol) == []


def test_branch_rejects_bad_input():
    g, S = case2c_fixture()
    with pytest.raises(StripError):
        branch_strips(Instance.build(g, [("p", "q")]), S)


def _fixture(seed):
    gen = gen_random("stripe-fixture", 8 + seed % 7, 1 + seed % 3, seed)
    red, _ = make_independent(gen.inst)
    if overloaded_vertex(red) is not None or red.k == 0:
        return None
    red, _ = remove_w_joins(red)
    S = restrict_structure(gen.strips, red.graph.vertices)
    if validate_strip_structure(red.graph, S, allow_empty=True):
        return None
    return gen.inst, red, S


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
@example(73196)
def test_leaf_properties(seed):
    case = _fixture(seed)
    if case is None:
        return
    original, red, S = case
    res = branch_strips(red, S, oracle_cap=None)
    for lf in res.leaves:
        g = lf.inst.graph
        assert two_clique_neighborhoods(g)
        assert lf.inst.k <= red.k
        assert is_independent(lf.inst) and find_claw(g) is None
    truth = yes(original)
    assert any(yes(lf.inst) for lf in res.leaves) == truth
    ans, sol = solve_leaves(red, res)
    assert ans == truth
    if sol is not None:
        assert verify_solution(red, sol) == []


# seed 73196 hits a two-vertex strip whose gadget adds three vertices
@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
@example(73196)
def test_leaf_size_bound(seed):
    case = _fixture(seed)
    if case is None:
        return
    _, red, S = case
    res = branch_strips(red, S, oracle_cap=None)
    for lf in res.leaves:
        assert len(lf.inst.graph) <= len(red.graph)
