"""Problems that reduce to Induced Disjoint Paths: k-in-a-path/cycle/tree,
anchored induced topological minors and instances with repeated pairs."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from types import SimpleNamespace

from .graph import Graph, find_claw, sort_vertices
from .instance import Instance, Solution, TerminalPair, verify_solution
from .oracle import SubdivisionWitness, check_witness, induced_paths
from .pipeline import SolveOptions, solve
from .reductions import PreconditionError


class DerivedError(ValueError):
    pass


def _require_claw_free(g: Graph):
    claw = find_claw(g)
    if claw is not None:
        raise PreconditionError(f"graph has a claw centred at {claw[0]!r}")


def _decide(inst: Instance, options: SolveOptions | None):
    res = solve(inst, options)
    if res.status == "UNSUPPORTED":
        raise DerivedError("solver could not decide a sub-instance: " + res.reason)
    return res


def _cert(inst: Instance, res):
    """The certificate of a YES result; decision-only results are re-solved exactly."""
    if res.solution is not None:
        return res.solution
    return _decide(inst, SolveOptions(mode="oracle", oracle_cap=None)).solution


# -- k in a path / cycle / tree ---------------------------------------------------------
@dataclass
class KInAResult:
    found: bool
    witness: list | None = None     # the path, or the cycle as a closed walk without repetition
    orderings_tried: int = 0


def _orderings(U: list, cyclic: bool):
    """Orderings up to reversal (and rotation for cycles)."""
    if cyclic:
        first, rest = U[0], U[1:]
        for perm in itertools.permutations(rest):
            if len(perm) >= 2 and perm[0] > perm[-1]:
                continue
            yield [first, *perm]
    else:
        for perm in itertools.permutations(U):
            if perm[0] <= perm[-1]:
                yield list(perm)


def _far_apart(g: Graph, order: list, cyclic: bool) -> bool:
    """Vertices that are not consecutive in the order must be non-adjacent."""
    k = len(order)
    for i in range(k):
        for j in range(i + 2, k):
            if cyclic and i == 0 and j == k - 1:
                continue
            if g.has_edge(order[i], order[j]):
                return False
    return True


def k_in_a(g: Graph, U, mode: str = "path", options: SolveOptions | None = None) -> KInAResult:
    """Induced path (or cycle) through every vertex of U, trying all orderings of U."""
    _require_claw_free(g)
    if mode == "tree":
        # in a claw-free graph an induced tree through U can be trimmed to an induced path
        mode = "path"
    if mode not in ("path", "cycle"):
        raise DerivedError(f"unknown mode {mode!r}")
    U = sort_vertices(set(U))
    for u in U:
        if u not in g:
            raise DerivedError(f"vertex {u!r} not in the graph")
    if mode == "path" and len(U) <= 1:
        return KInAResult(bool(U), list(U))
    if mode == "cycle" and len(U) <= 2:
        w = _small_cycle(g, U)
        return KInAResult(w is not None, w)
    cyclic = mode == "cycle"
    tried = 0
    idx = {u: i for i, u in enumerate(U)}
    for order in _orderings(list(range(len(U))), cyclic):
        order = [U[i] for i in order]
        if not _far_apart(g, order, cyclic):
            continue
        tried += 1
        pairs = list(zip(order, order[1:]))
        if cyclic:
            pairs.append((order[-1], order[0]))
        inst = Instance.build(g, pairs)
        res = _decide(inst, options)
        if res.status != "YES":
            continue
        sol = _cert(inst, res)
        walk = [order[0]]
        for p, path in zip(inst.pairs, sol.paths):
            path = list(path) if path[0] == p.s else list(path)[::-1]
            walk += path[1:]
        if cyclic:
            walk.pop()
        assert all(u in walk for u in idx)
        return KInAResult(True, walk, tried)
    return KInAResult(False, None, tried)


def _small_cycle(g: Graph, U: list):
    """Induced cycle through one or two given vertices, by direct search."""
    if not U:
        return None
    a = U[0]
    if len(U) == 1:
        for x, y in itertools.combinations(sort_vertices(g.neighbors(a)), 2):
            if g.has_edge(x, y):
                return [a, x, y]
            allowed = g.vertices - g.closed_neighbors(a)
            path = g.shortest_path(x, y, allowed=allowed)
            if path is not None:
                return [a] + path
        return None
    b = U[1]
    if g.has_edge(a, b):
        # the edge ab is on the cycle; a shortest a-b path avoiding it closes an induced cycle
        return g.remove_edges([(a, b)]).shortest_path(a, b)
    paths = list(induced_paths(g, a, b))
    for P, Q in itertools.combinations(paths, 2):
        ip, iq = set(P[1:-1]), set(Q[1:-1])
        if ip & iq or any(g.neighbors(v) & iq for v in ip):
            continue
        return P + Q[-2:0:-1]
    return None


def is_induced_path(g: Graph, walk: list) -> bool:
    if len(set(walk)) != len(walk):
        return False
    sub = g.subgraph(walk)
    return sub.num_edges() == len(walk) - 1 and all(g.has_edge(a, b) for a, b in zip(walk, walk[1:]))


def is_induced_cycle(g: Graph, walk: list) -> bool:
    if len(walk) < 3 or len(set(walk)) != len(walk):
        return False
    sub = g.subgraph(walk)
    return (sub.num_edges() == len(walk) and all(sub.degree(v) == 2 for v in sub)
            and all(g.has_edge(x, y) for x, y in zip(walk, walk[1:] + walk[:1])))


# -- anchored induced topological minor ---------------------------------------------------
def anchored_itm(g: Graph, h: Graph, anchors: dict, options: SolveOptions | None = None):
    """Induced subdivision of H in G with each x of H sent to anchors[x], or None."""
    _require_claw_free(g)
    if set(anchors) != set(h.vertices):
        raise DerivedError("every vertex of H needs an anchor")
    if len(set(anchors.values())) != len(anchors):
        raise DerivedError("anchors must be distinct")
    for u in anchors.values():
        if u not in g:
            raise DerivedError(f"anchor {u!r} not in the graph")
    # branch vertices of non-adjacent H vertices must not be adjacent in G
    for x, y in itertools.combinations(sort_vertices(h), 2):
        if not h.has_edge(x, y) and g.has_edge(anchors[x], anchors[y]):
            return None
    edges = h.edges()
    pairs = [(anchors[x], anchors[y]) for x, y in edges]
    pairs += [(anchors[x], anchors[x]) for x in sort_vertices(h) if h.degree(x) == 0]
    inst = Instance.build(g, pairs)
    res = _decide(inst, options)
    if res.status != "YES":
        return None
    sol = _cert(inst, res)
    path_map = {}
    for (x, y), p, path in zip(edges, inst.pairs, sol.paths):
        path_map[(x, y)] = list(path) if path[0] == p.s else list(path)[::-1]
    w = SubdivisionWitness(dict(anchors), path_map)
    bad = check_witness(g, h, w, anchors)
    assert not bad, bad
    return w


# -- repeated pairs ---------------------------------------------------------------------
def verify_multiset(g: Graph, pairs, paths) -> list[str]:
    """verify_solution for a pair list that may contain the same pair twice."""
    fake = SimpleNamespace(graph=g, pairs=[TerminalPair(s, t, i) for i, (s, t) in enumerate(pairs)])
    return verify_solution(fake, Solution(tuple(tuple(p) for p in paths)))


def solve_multiset_exact(g: Graph, pairs) -> list | None:
    """Direct search over induced paths for a pair list with repetitions."""
    pairs = list(pairs)
    chosen: list = []

    def rec(i):
        if i == len(pairs):
            return True
        s, t = pairs[i]
        for path in induced_paths(g, s, t):
            chosen.append(path)
            if not verify_multiset(g, pairs[:i + 1], chosen):
                if rec(i + 1):
                    return True
            chosen.pop()
        return False

    return [list(p) for p in chosen] if rec(0) else None


def solve_with_duplicates(g: Graph, pairs, options: SolveOptions | None = None):
    """Decide an instance whose pair list may repeat a pair; returns (answer, paths or None).

    A pair occurring twice is replaced by two pairs between distinct non-adjacent
    neighbours of its ends; every choice of neighbours is tried. If all pairs
    are the same pair the question is whether an induced cycle runs through
    both ends.
    """
    _require_claw_free(g)
    pairs = [tuple(p) for p in pairs]
    groups: dict = {}
    for i, (s, t) in enumerate(pairs):
        groups.setdefault(frozenset((s, t)), []).append(i)
    dup = [key for key, idx in groups.items() if len(idx) >= 2]
    if not dup:
        inst = Instance.build(g, pairs)
        res = _decide(inst, options)
        if res.status != "YES":
            return False, None
        return True, [list(p) for p in _cert(inst, res).paths]
    if any(len(groups[key]) >= 3 for key in dup):
        # three paths leaving one end would need three pairwise non-adjacent neighbours
        found = solve_multiset_exact(g, pairs)
        return found is not None, found
    s, t = pairs[0]
    if len(groups) == 1 and s != t and not g.has_edge(s, t):
        cyc = _small_cycle(g, [s, t])
        if cyc is None:
            return False, None
        i = cyc.index(t)
        return True, [cyc[:i + 1], [s] + cyc[i:][::-1]]
    # one coinciding pair at a time is rewritten; the rest stay as they are
    key = dup[0]
    i, j = groups[key][:2]
    s, t = pairs[i]
    others = [p for n, p in enumerate(pairs) if n not in (i, j)]
    busy = {x for p in others for x in p}
    if s in busy or t in busy or s == t or g.has_edge(s, t):
        found = solve_multiset_exact(g, pairs)
        return found is not None, found

    def spreads(x):
        nb = [v for v in sort_vertices(g.neighbors(x)) if v not in busy]
        return [(a, b) for a, b in itertools.permutations(nb, 2) if not g.has_edge(a, b)]

    def compatible(si, sj, ti, tj):
        # the chosen vertices are inner vertices once s and t are put back
        for x, y in ((si, ti), (sj, tj)):
            if x != y and (g.has_edge(s, y) or g.has_edge(t, x)):
                return False
        if len({si, sj, ti, tj}) < 4 and not (si == ti or sj == tj):
            return False
        if si == tj or sj == ti or g.has_edge(si, tj) or g.has_edge(sj, ti):
            return False
        return not any(g.neighbors(x) & busy for x in (si, sj, ti, tj))

    for (si, sj) in spreads(s):
        for (ti, tj) in spreads(t):
            if not compatible(si, sj, ti, tj):
                continue
            drop = ({s, t} | g.neighbors(s) | g.neighbors(t)) - {si, sj, ti, tj} - busy
            gr = g.remove_vertices(drop)
            sub_pairs = others + [(si, ti), (sj, tj)]
            ok, paths = solve_with_duplicates(gr, sub_pairs, options)
            if not ok:
                continue
            if paths is None:
                return True, None
            out = [None] * len(pairs)
            for n, p in zip([n for n in range(len(pairs)) if n not in (i, j)], paths):
                out[n] = p
            pi, pj = paths[-2], paths[-1]
            pi = pi if pi[0] == si else pi[::-1]
            pj = pj if pj[0] == sj else pj[::-1]
            out[i] = [s] + pi + [t]
            out[j] = [s] + pj + [t]
            out = [p if p[0] == q[0] else p[::-1] for p, q in zip(out, pairs)]
            assert not verify_multiset(g, pairs, out)
            return True, out
    return False, None
