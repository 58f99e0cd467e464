"""Exact reference solvers for desk-scale inputs.

These are deliberately simple exhaustive searches; the pipeline is checked
against them, and the line-graph endgame uses ``solve_vdp_exact`` in place
of a cubic-time disjoint paths algorithm.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph import Graph, SizeLimitError, order_key, sort_vertices
from .instance import Instance, Solution, verify_solution

DEFAULT_CAP = 20
VDP_CAP = 60
SUBDIVISION_CAP = 40


def _check_cap(n: int, cap: int | None, what: str):
    if cap is not None and n > cap:
        raise SizeLimitError(f"{what}: {n} vertices exceeds cap {cap}")


def _pair_order(inst: Instance) -> list[int]:
    g = inst.graph
    return sorted(range(inst.k), key=lambda i: (g.distance(inst.pairs[i].s, inst.pairs[i].t), i))


def solve_idp_exact(inst: Instance, cap: int | None = DEFAULT_CAP) -> Solution | None:
    """A mutually induced linkage for ``inst`` or None.

    Pairs are routed one at a time (closest first); each candidate path is
    an induced path whose inner vertices avoid every terminal vertex, every
    vertex adjacent to a terminal other than its own ends, and everything
    already placed.
    """
    g = inst.graph
    _check_cap(len(g), cap, "solve_idp_exact")
    if not inst.pairs:
        return Solution(())
    order = _pair_order(inst)
    terminals = inst.terminal_vertices()
    chosen: dict[int, list] = {}

    def compatible_ends(i, path) -> bool:
        # ends of the new path against placed paths
        s, t = path[0], path[-1]
        for j, q in chosen.items():
            q_ends = {q[0], q[-1]}
            q_inner = q[1:-1]
            for x in {s, t}:
                if x in q_inner:
                    return False
                if any(g.has_edge(x, w) for w in q_inner) and x not in q_ends:
                    return False
        return True

    def inner_ok(i, w, ends) -> bool:
        if w in terminals:
            return False
        for x in g.neighbors(w):
            if x in terminals and x not in ends:
                return False
        for q in chosen.values():
            if w in q:
                return False
            q_ends = {q[0], q[-1]}
            for x in q:
                if g.has_edge(w, x) and not (x in ends and x in q_ends):
                    return False
        return True

    def rec(pos: int) -> bool:
        if pos == len(order):
            return True
        i = order[pos]
        p = inst.pairs[i]
        if p.s == p.t:
            cands = [[p.s]]
        else:
            cands = induced_paths(g, p.s, p.t, lambda w, ends=(p.s, p.t): inner_ok(i, w, ends))
        for path in cands:
            if not compatible_ends(i, path):
                continue
            chosen[i] = path
            if rec(pos + 1):
                return True
            del chosen[i]
        return False

    if not rec(0):
        return None
    sol = Solution(tuple(tuple(chosen[i]) for i in range(inst.k)))
    assert not verify_solution(inst, sol), verify_solution(inst, sol)
    return sol


def induced_paths(g: Graph, s, t, inner_ok=lambda w: True):
    """Yield every induced s-t path (as a list) whose inner vertices pass ``inner_ok``."""
    if s == t:
        yield [s]
        return
    if g.has_edge(s, t):
        yield [s, t]
        return
    path = [s]
    on_path = {s}

    def extend():
        last = path[-1]
        for w in sort_vertices(g.neighbors(last)):
            if w in on_path:
                continue
            # w may only touch the last vertex of the current path
            if any(g.has_edge(w, x) for x in path[:-1]):
                continue
            if w == t:
                yield list(path) + [t]
                continue
            if not inner_ok(w):
                continue
            path.append(w)
            on_path.add(w)
            if g.has_edge(w, t):
                yield list(path) + [t]
            else:
                yield from extend()
            path.pop()
            on_path.discard(w)

    yield from extend()


def solve_vdp_exact(g: Graph, pairs, cap: int | None = VDP_CAP) -> list[list] | None:
    """Vertex-disjoint paths joining each pair, or None.

    Paths may meet only in a vertex that is an end of both. Chordless paths
    suffice (any path shortcuts to one on a subset of its vertices), which
    keeps the enumeration small.
    """
    _check_cap(len(g), cap, "solve_vdp_exact")
    pairs = [tuple(p) for p in pairs]
    if not pairs:
        return []
    terminals = {x for p in pairs for x in p}
    order = sorted(range(len(pairs)), key=lambda i: (g.distance(*pairs[i]), i))
    used: set = set()
    chosen: dict[int, list] = {}

    def rec(pos: int) -> bool:
        if pos == len(order):
            return True
        i = order[pos]
        s, t = pairs[i]
        if s == t:
            chosen[i] = [s]
            if rec(pos + 1):
                return True
            del chosen[i]
            return False
        for path in induced_paths(g, s, t, lambda w: w not in terminals and w not in used):
            inner = path[1:-1]
            used.update(inner)
            chosen[i] = path
            if rec(pos + 1):
                return True
            del chosen[i]
            used.difference_update(inner)
        return False

    if not rec(0):
        return None
    return [chosen[i] for i in range(len(pairs))]


@dataclass(frozen=True)
class SubdivisionWitness:
    branch_map: dict
    path_map: dict

    def vertices(self) -> set:
        out = set(self.branch_map.values())
        for path in self.path_map.values():
            out.update(path)
        return out


def subdivision_graph(h: Graph, witness: SubdivisionWitness) -> Graph:
    """The subdivision of H that the witness claims, on G's vertex ids."""
    edges = []
    for path in witness.path_map.values():
        edges += list(zip(path, path[1:]))
    return Graph.from_edges(edges, witness.branch_map.values())


def check_witness(g: Graph, h: Graph, witness: SubdivisionWitness, anchors=None) -> list[str]:
    out = []
    bm = witness.branch_map
    if set(bm) != set(h.vertices):
        out.append("branch map does not cover V(H)")
    if len(set(bm.values())) != len(bm):
        out.append("branch map is not injective")
    if anchors:
        for x, u in anchors.items():
            if bm.get(x) != u:
                out.append(f"anchor {x!r} not mapped to {u!r}")
    for (x, y) in h.edges():
        path = witness.path_map.get((x, y))
        if path is None or path[0] != bm[x] or path[-1] != bm[y]:
            out.append(f"edge {x!r}-{y!r} has no realising path")
    if out:
        return out
    vs = witness.vertices()
    expected = subdivision_graph(h, witness)
    if len(vs) != len(expected) or g.subgraph(vs) != expected:
        out.append("witness does not induce the subdivision")
    return out


def _subdivision_steps(h: Graph, anchors: dict) -> list[tuple]:
    """Order the work: each edge step has its first end already placed."""
    steps = [("root", x) for x in sort_vertices(anchors)]
    seen = set(anchors)
    done_edges = set()
    queue = list(steps and [x for _, x in steps])
    rank = lambda y: (-h.degree(y), order_key(y))

    def drain():
        while queue:
            x = queue.pop(0)
            for y in sorted(h.neighbors(x), key=rank):
                e = frozenset((x, y))
                if e in done_edges:
                    continue
                done_edges.add(e)
                steps.append(("edge", x, y))
                if y not in seen:
                    seen.add(y)
                    queue.append(y)

    drain()
    for r in sorted(h.vertices, key=rank):
        if r not in seen:
            seen.add(r)
            steps.append(("root", r))
            queue.append(r)
            drain()
    return steps


def find_induced_subdivision(g: Graph, h: Graph, anchors: dict | None = None,
                             cap: int | None = SUBDIVISION_CAP) -> SubdivisionWitness | None:
    """Induced subgraph of G isomorphic to a subdivision of H, or None.

    With ``anchors`` (H-vertex -> G-vertex) the branch vertices named there
    are fixed. The image is grown one vertex at a time; the invariant is that
    every edge of G among used vertices is an intended edge of the image.
    """
    _check_cap(len(g), cap, "find_induced_subdivision")
    anchors = dict(anchors or {})
    if len(h) > len(g):
        return None
    if len(set(anchors.values())) != len(anchors) or any(u not in g for u in anchors.values()):
        return None
    steps = _subdivision_steps(h, anchors)
    gverts = sort_vertices(g)
    bm: dict = {}
    owner: dict = {}      # G-vertex -> H-vertex for branch images
    used: set = set()
    paths: dict = {}      # frozenset H-edge -> path in G (from the first end)

    def used_nbrs(v) -> set:
        return g.neighbors(v) & used

    def branch_forced(y, v, via):
        """H-edges forced direct if v becomes y's image; None when v is not allowed."""
        forced = []
        for u in used_nbrs(v):
            if u == via:
                continue
            z = owner.get(u)
            if z is None or not h.has_edge(y, z) or frozenset((y, z)) in paths:
                return None
            forced.append(z)
        return forced

    def place_branch(y, v, forced):
        bm[y] = v
        owner[v] = y
        used.add(v)
        for z in forced:
            paths[frozenset((y, z))] = [bm[z], v]

    def unplace_branch(y, v, forced):
        for z in forced:
            del paths[frozenset((y, z))]
        del owner[v]
        del bm[y]
        used.discard(v)

    def step(i) -> bool:
        if i == len(steps):
            return True
        s = steps[i]
        if s[0] == "root":
            x = s[1]
            cands = [anchors[x]] if x in anchors else gverts
            for v in cands:
                if v in used or g.degree(v) < h.degree(x):
                    continue
                forced = branch_forced(x, v, None)
                if forced is None:
                    continue
                place_branch(x, v, forced)
                if step(i + 1):
                    return True
                unplace_branch(x, v, forced)
            return False
        _, x, y = s
        e = frozenset((x, y))
        if e in paths:
            return step(i + 1)
        a = bm[x]
        if y in bm:
            b = bm[y]
            if g.has_edge(a, b):
                return False  # would have been forced already
            return route_to(i, e, [a], b)
        return route_new(i, e, [a], y)

    def route_to(i, e, path, b) -> bool:
        last = path[-1]
        for w in sort_vertices(g.neighbors(last) - used):
            nb = used_nbrs(w)
            if nb == {last, b}:
                used.add(w)
                paths[e] = path + [w, b]
                if step(i + 1):
                    return True
                del paths[e]
                used.discard(w)
            elif nb == {last}:
                used.add(w)
                if route_to(i, e, path + [w], b):
                    return True
                used.discard(w)
        return False

    def route_new(i, e, path, y) -> bool:
        last = path[-1]
        for w in sort_vertices(g.neighbors(last) - used):
            # w next to the path's start would be a chord, not a second edge x-y
            if g.degree(w) >= h.degree(y) and (len(path) == 1 or not g.has_edge(w, path[0])):
                forced = branch_forced(y, w, last)
                if forced is not None:
                    place_branch(y, w, forced)
                    paths[e] = path + [w]
                    if step(i + 1):
                        return True
                    del paths[e]
                    unplace_branch(y, w, forced)
            if used_nbrs(w) == {last}:
                used.add(w)
                if route_new(i, e, path + [w], y):
                    return True
                used.discard(w)
        return False

    if not step(0):
        return None
    path_map = {}
    for (x, y) in h.edges():
        p = paths[frozenset((x, y))]
        path_map[(x, y)] = p if p[0] == bm[x] else list(reversed(p))
    witness = SubdivisionWitness(dict(bm), path_map)
    problems = check_witness(g, h, witness, anchors)
    assert not problems, problems
    return witness


def subdivide_all_edges(inst_graph: Graph, start: int | None = None) -> tuple[Graph, dict]:
    """Replace every edge uv by u-w-v; returns the new graph and edge -> new vertex."""
    nxt = inst_graph.fresh_vertex() if start is None else start
    edges = []
    mid = {}
    for u, v in inst_graph.edges():
        mid[(u, v)] = nxt
        edges += [(u, nxt), (nxt, v)]
        nxt += 1
    return Graph.from_edges(edges, list(inst_graph.vertices) + list(mid.values())), mid


def count_induced_paths(g: Graph, s, t) -> int:
    return sum(1 for _ in induced_paths(g, s, t))


__all__ = [
    "solve_idp_exact", "solve_vdp_exact", "find_induced_subdivision", "SubdivisionWitness",
    "induced_paths", "check_witness", "subdivide_all_edges", "DEFAULT_CAP",
]
