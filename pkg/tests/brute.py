"""Slow reference checks by subset enumeration, shared by the tests."""

import itertools
import random

from idpclaw.graph import Graph, is_claw_free, line_graph, relabel_consecutive, sort_vertices


def subsets_containing(g, U):
    """All vertex sets of G that contain U, smallest first."""
    rest = [v for v in sort_vertices(g) if v not in set(U)]
    for r in range(len(rest) + 1):
        for extra in itertools.combinations(rest, r):
            yield set(U) | set(extra)


def is_path_graph(sub):
    if len(sub) == 1:
        return True
    degs = sorted(sub.degree(v) for v in sub)
    return (len(sub.components()) == 1 and sub.num_edges() == len(sub) - 1
            and degs[-1] <= 2)


def is_cycle_graph(sub):
    return len(sub) >= 3 and len(sub.components()) == 1 and all(sub.degree(v) == 2 for v in sub)


def k_in_a_brute(g, U, cyclic):
    test = is_cycle_graph if cyclic else is_path_graph
    return any(test(g.subgraph(W)) for W in subsets_containing(g, U))


def is_anchored_subdivision(g, h, anchors, W):
    """G[W] is a subdivision of H whose branch vertex for x is anchors[x]."""
    sub = g.subgraph(W)
    owner = {u: x for x, u in anchors.items()}
    for x, u in anchors.items():
        if sub.degree(u) != h.degree(x):
            return False
    for v in sub:
        if v not in owner and sub.degree(v) != 2:
            return False
    found = set()
    seen_inner = set()
    for x, u in anchors.items():
        for nxt in sub.neighbors(u):
            prev, cur = u, nxt
            while cur not in owner:
                seen_inner.add(cur)
                a, b = sub.neighbors(cur)
                prev, cur = cur, (b if a == prev else a)
            y = owner[cur]
            if y == x or not h.has_edge(x, y):
                return False
            found.add(frozenset((x, y)))
    inner = set(sub.vertices) - set(owner)
    # every inner vertex lies on a chain between branch vertices, one chain per H edge
    if inner != seen_inner or len(found) != h.num_edges():
        return False
    chains = sum(sub.degree(u) for u in anchors.values()) // 2
    return chains == h.num_edges()


def anchored_brute(g, h, anchors):
    return any(is_anchored_subdivision(g, h, anchors, W)
               for W in subsets_containing(g, anchors.values()))


def has_clique(g, k):
    return any(g.is_clique(c) for c in itertools.combinations(sort_vertices(g), k))


def random_graph(rng, n, p):
    return Graph.from_edges([e for e in itertools.combinations(range(n), 2) if rng.random() < p], range(n))


def random_claw_free(rng, max_n):
    """A connected claw-free graph on at most max_n vertices."""
    while True:
        kind = rng.random()
        if kind < 0.5:
            hv = rng.randint(3, max(3, max_n // 2 + 1))
            h = random_graph(rng, hv, 0.5)
            if not 2 <= h.num_edges() <= max_n:
                continue
            g, _ = line_graph(h)
        else:
            n = rng.randint(4, max_n)
            g = random_graph(rng, n, rng.uniform(0.4, 0.8))
            if not is_claw_free(g):
                continue
        comps = sorted(g.components(), key=len)
        g = g.subgraph(comps[-1])
        if len(g) >= 3:
            return relabel_consecutive(g, 1)[0]


def seeded(seed):
    return random.Random(seed)
