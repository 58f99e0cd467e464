import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from brute import random_claw_free, seeded
from idpclaw.circular_arc import ArcModel
from idpclaw.generators import gen_random
from idpclaw.graph import Graph, complete_graph, cycle_graph, independence_number, line_graph, star_graph
from idpclaw.instance import Instance, verify_solution
from idpclaw.oracle import solve_idp_exact
from idpclaw.pipeline import VDP_NOTE, SolveOptions, solve
from idpclaw.reductions import PreconditionError


def truth(inst):
    return solve_idp_exact(inst, cap=None) is not None


def squared_cycle(n):
    return Graph.from_edges([(i, (i + d) % n) for i in range(n) for d in (1, 2)])


def test_line_graph_route():
    h = cycle_graph(7).add_edges([(0, 3)])
    g, _ = line_graph(h)
    vs = sorted(g, key=repr)
    inst = Instance.build(g, [(vs[0], vs[5])])
    res = solve(inst, SolveOptions(alpha_cutoff=0))
    assert any(d.startswith("line graph") for d in res.diagnostics)
    assert VDP_NOTE in res.diagnostics
    assert (res.status == "YES") == truth(inst)


def test_small_alpha_route():
    g, _ = line_graph(Graph.from_edges([(a, b) for a in "abc" for b in "xyz"]))
    assert len(g) == 9 and independence_number(g) == 3
    vs = sorted(g, key=repr)
    inst = Instance.build(g, [(vs[0], vs[8])])
    res = solve(inst)
    assert any("independence number 3" in d for d in res.diagnostics)
    assert (res.status == "YES") == truth(inst)


def test_arc_model_route():
    m = ArcModel(16, {i: (2 * i, (2 * i + 3) % 16) for i in range(8)}, True)
    inst = Instance.build(m.graph(), [(1, 3), (5, 7)])
    res = solve(inst, SolveOptions(arc_model=m))
    assert "circular-arc solver on supplied model" in res.diagnostics
    assert res.status == "YES" and verify_solution(inst, res.solution) == []


def test_unsupported_beyond_cap():
    g = squared_cycle(18)       # claw-free, not a line graph, independence number 6
    res = solve(Instance.build(g, [(0, 9)]), SolveOptions(oracle_cap=12))
    assert res.status == "UNSUPPORTED" and "oracle cap" in res.reason
    assert solve(Instance.build(g, [(0, 9)]), SolveOptions(oracle_cap=None)).status == "YES"


def test_claw_rejected():
    with pytest.raises(PreconditionError):
        solve(Instance.build(star_graph(3), [(1, 2)]))


def test_unknown_mode():
    with pytest.raises(ValueError):
        solve(Instance.build(complete_graph(2), []), SolveOptions(mode="fast"))


def test_pair_across_components():
    g = Graph.from_edges([(1, 2), (3, 4)])
    assert solve(Instance.build(g, [(1, 3)])).status == "NO"


def test_decision_only():
    inst = Instance.build(cycle_graph(6), [(0, 3)])
    res = solve(inst, SolveOptions(decision_only=True))
    assert res.status == "YES" and res.solution is None


@pytest.mark.parametrize("mode", ["oracle", "line", "auto"])
def test_forced_modes_agree(mode):
    g, _ = line_graph(cycle_graph(8).add_edges([(0, 4)]))
    vs = sorted(g, key=repr)
    inst = Instance.build(g, [(vs[0], vs[4]), (vs[2], vs[7])])
    res = solve(inst, SolveOptions(mode=mode))
    assert (res.status == "YES") == truth(inst)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_generated_instances_match_oracle(seed):
    fam = ("line", "proper-ca", "stripe-fixture")[seed % 3]
    gen = gen_random(fam, 6 + seed % 8, 1 + seed % 3, seed)
    res = solve(gen.inst, SolveOptions(arc_model=gen.arc_model, strips=gen.strips))
    assert res.status in ("YES", "NO")
    assert (res.status == "YES") == truth(gen.inst)
    if res.solution is not None:
        assert verify_solution(gen.inst, res.solution) == []


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_random_claw_free_match_oracle(seed):
    rng = seeded(seed)
    g = random_claw_free(rng, 10)
    vs = sorted(g)
    pairs = []
    for _ in range(rng.randint(1, 3)):
        s, t = rng.sample(vs, 2)
        if (s, t) not in pairs and (t, s) not in pairs:
            pairs.append((s, t))
    inst = Instance.build(g, pairs)
    res = solve(inst)
    assert res.status in ("YES", "NO")
    assert (res.status == "YES") == truth(inst)
    if res.solution is not None:
        assert verify_solution(inst, res.solution) == []
