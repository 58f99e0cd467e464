import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from brute import anchored_brute, k_in_a_brute, random_claw_free, seeded
from idpclaw.derived import (DerivedError, anchored_itm, is_induced_cycle, is_induced_path, k_in_a,
                             solve_multiset_exact, solve_with_duplicates, verify_multiset)
from idpclaw.graph import Graph, complete_graph, cycle_graph, path_graph, star_graph
from idpclaw.instance import Instance
from idpclaw.oracle import check_witness, find_induced_subdivision, solve_idp_exact
from idpclaw.reductions import PreconditionError


def test_three_in_a_path():
    g = path_graph(5, 1)
    res = k_in_a(g, [1, 3, 5], "path")
    assert res.found and res.witness in ([1, 2, 3, 4, 5], [5, 4, 3, 2, 1])


def test_three_in_a_cycle():
    res = k_in_a(cycle_graph(6), [0, 2, 4], "cycle")
    assert res.found and sorted(res.witness) == list(range(6))
    assert is_induced_cycle(cycle_graph(6), res.witness)


def test_tree_mode_is_path_mode():
    g = cycle_graph(7)
    for U in itertools.combinations(range(7), 3):
        assert k_in_a(g, list(U), "tree").found == k_in_a(g, list(U), "path").found


def test_k_in_a_claw_rejected():
    with pytest.raises(PreconditionError):
        k_in_a(star_graph(3), [1, 2, 3], "path")


def test_cycle_through_two():
    res = k_in_a(cycle_graph(5), [0, 2], "cycle")
    assert res.found and is_induced_cycle(cycle_graph(5), res.witness)
    assert not k_in_a(path_graph(5), [0, 4], "cycle").found


def test_anchored_single_edge():
    g = Graph.from_edges([("a", "c"), ("c", "b")])
    w = anchored_itm(g, complete_graph(2), {0: "a", 1: "b"})
    assert w is not None
    (path,) = w.path_map.values()
    assert path in (["a", "c", "b"], ["b", "c", "a"])


def test_anchored_isolated_vertex():
    g = path_graph(4)
    h = Graph.from_edges([("x", "y")]).add_vertex("z", [])
    w = anchored_itm(g, h, {"x": 0, "y": 1, "z": 3})
    assert w is not None and check_witness(g, h, w, {"x": 0, "y": 1, "z": 3}) == []


def test_anchored_adjacent_anchors_for_non_edge():
    g = path_graph(3)
    h = Graph.from_edges([]).add_vertex("x", []).add_vertex("y", [])
    assert anchored_itm(g, h, {"x": 0, "y": 1}) is None


def test_anchored_duplicate_anchor():
    with pytest.raises(DerivedError):
        anchored_itm(path_graph(3), complete_graph(2), {0: 1, 1: 1})


def test_duplicate_pair_on_c6():
    ans, paths = solve_with_duplicates(cycle_graph(6), [(0, 3), (0, 3)])
    assert ans and verify_multiset(cycle_graph(6), [(0, 3), (0, 3)], paths) == []


def test_duplicate_pair_on_p4():
    ans, _ = solve_with_duplicates(path_graph(4), [(0, 3), (0, 3)])
    assert not ans


def test_no_duplicates_same_as_solve():
    g = cycle_graph(7)
    for pairs in ([(0, 2)], [(0, 3), (4, 6)], [(0, 2), (1, 4)]):
        ans, _ = solve_with_duplicates(g, pairs)
        assert ans == (solve_idp_exact(Instance.build(g, pairs), cap=None) is not None)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_k_in_a_matches_brute(seed):
    rng = seeded(seed)
    g = random_claw_free(rng, 9)
    U = rng.sample(sorted(g), min(len(g), rng.randint(2, 4)))
    for mode, cyclic in (("path", False), ("cycle", True)):
        if cyclic and len(U) < 2:
            continue
        res = k_in_a(g, U, mode)
        assert res.found == k_in_a_brute(g, set(U), cyclic)
        if res.found:
            check = is_induced_cycle if cyclic else is_induced_path
            assert check(g, res.witness) and set(U) <= set(res.witness)
        # the answer does not depend on the order of U
        assert k_in_a(g, U[::-1], mode).found == res.found


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_anchored_triangle_matches_subdivision_search(seed):
    rng = seeded(seed)
    g = random_claw_free(rng, 10)
    if len(g) < 3:
        return
    anchors = dict(zip(range(3), rng.sample(sorted(g), 3)))
    h = complete_graph(3)
    w = anchored_itm(g, h, anchors)
    other = find_induced_subdivision(g, h, anchors)
    assert (w is None) == (other is None) == (not anchored_brute(g, h, anchors))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_duplicates_match_direct_search(seed):
    rng = seeded(seed)
    g = random_claw_free(rng, 9)
    vs = sorted(g)
    s, t = rng.sample(vs, 2)
    pairs = [(s, t), (s, t)]
    if rng.random() < 0.5:
        a, b = rng.sample(vs, 2)
        if {a, b} != {s, t}:
            pairs.append((a, b))
    ans, paths = solve_with_duplicates(g, pairs)
    assert ans == (solve_multiset_exact(g, pairs) is not None)
    if ans and paths is not None:
        assert verify_multiset(g, pairs, paths) == []
