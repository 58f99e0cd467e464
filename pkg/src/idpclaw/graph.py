"""Simple undirected graphs and the recognition primitives used by the solver.

Vertices are opaque hashable labels. Deleting a vertex never renumbers the
others, so transcripts and lifted solutions can refer to vertices by id.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping

Vertex = Hashable


class GraphFormatError(ValueError):
    """Malformed graph/instance file; ``lineno`` is 1-based (0 if unknown)."""

    def __init__(self, message: str, lineno: int = 0):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}" if lineno else message)


class SizeLimitError(RuntimeError):
    pass


def order_key(v):
    # lets ints, strings and (nested) tuples coexist in one sorted() call
    if isinstance(v, tuple):
        return ("tuple", tuple(order_key(x) for x in v))
    return (type(v).__name__, v)


def sort_vertices(vs: Iterable[Vertex]) -> list:
    return sorted(vs, key=order_key)


class Graph:
    """Immutable simple graph stored as a map vertex -> frozenset of neighbours."""

    __slots__ = ("_adj",)

    def __init__(self, adj: Mapping[Vertex, Iterable[Vertex]] | None = None):
        table = {v: set(ns) for v, ns in (adj or {}).items()}
        for v, ns in list(table.items()):
            if v in ns:
                raise ValueError(f"loop at vertex {v!r}")
            for u in ns:
                table.setdefault(u, set()).add(v)
        self._adj = {v: frozenset(ns) for v, ns in table.items()}

    @classmethod
    def from_edges(cls, edges: Iterable[tuple], vertices: Iterable[Vertex] = ()) -> "Graph":
        adj: dict = {v: set() for v in vertices}
        for u, v in edges:
            if u == v:
                raise ValueError(f"loop at vertex {u!r}")
            adj.setdefault(u, set()).add(v)
            adj.setdefault(v, set()).add(u)
        return cls._trusted(adj)

    @classmethod
    def _trusted(cls, adj: Mapping[Vertex, Iterable[Vertex]]) -> "Graph":
        g = cls.__new__(cls)
        g._adj = {v: frozenset(ns) for v, ns in adj.items()}
        return g

    # -- basic queries -------------------------------------------------
    @property
    def vertices(self) -> frozenset:
        return frozenset(self._adj)

    def __contains__(self, v) -> bool:
        return v in self._adj

    def __len__(self) -> int:
        return len(self._adj)

    def __iter__(self):
        return iter(self._adj)

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self._adj == other._adj

    def __hash__(self):
        return hash(frozenset((v, ns) for v, ns in self._adj.items()))

    def __repr__(self) -> str:
        return f"Graph(n={len(self)}, m={self.num_edges()})"

    def neighbors(self, v) -> frozenset:
        return self._adj[v]

    def closed_neighbors(self, v) -> frozenset:
        return self._adj[v] | {v}

    def degree(self, v) -> int:
        return len(self._adj[v])

    def has_edge(self, u, v) -> bool:
        return v in self._adj.get(u, ())

    def num_edges(self) -> int:
        return sum(len(ns) for ns in self._adj.values()) // 2

    def edges(self) -> list[tuple]:
        out = []
        for u in sort_vertices(self._adj):
            ku = order_key(u)
            for v in self._adj[u]:
                if order_key(v) > ku:
                    out.append((u, v))
        return sorted(out, key=lambda e: (order_key(e[0]), order_key(e[1])))

    def adjacency(self) -> dict:
        return dict(self._adj)

    def neighborhood_of_set(self, vs: Iterable[Vertex]) -> set:
        vs = set(vs)
        out = set()
        for v in vs:
            out |= self._adj[v]
        return out - vs

    # -- derived graphs -------------------------------------------------
    def subgraph(self, keep: Iterable[Vertex]) -> "Graph":
        keep = set(keep) & self._adj.keys()
        return Graph._trusted({v: self._adj[v] & keep for v in keep})

    def remove_vertices(self, drop: Iterable[Vertex]) -> "Graph":
        drop = set(drop)
        if not drop:
            return self
        return Graph._trusted({v: ns - drop for v, ns in self._adj.items() if v not in drop})

    def remove_edges(self, edges: Iterable[tuple]) -> "Graph":
        adj = {v: set(ns) for v, ns in self._adj.items()}
        for u, v in edges:
            adj[u].discard(v)
            adj[v].discard(u)
        return Graph._trusted(adj)

    def add_vertex(self, v, neighbors: Iterable[Vertex] = ()) -> "Graph":
        if v in self._adj:
            raise ValueError(f"vertex {v!r} already present")
        ns = frozenset(neighbors)
        missing = ns - self._adj.keys()
        if missing:
            raise ValueError(f"unknown neighbours {sorted(missing, key=order_key)!r}")
        adj = {u: (self._adj[u] | {v}) if u in ns else self._adj[u] for u in self._adj}
        adj[v] = ns
        return Graph._trusted(adj)

    def add_edges(self, edges: Iterable[tuple]) -> "Graph":
        adj = {v: set(ns) for v, ns in self._adj.items()}
        for u, v in edges:
            if u == v:
                raise ValueError(f"loop at vertex {u!r}")
            adj.setdefault(u, set()).add(v)
            adj.setdefault(v, set()).add(u)
        return Graph._trusted(adj)

    def relabel(self, mapping: Mapping[Vertex, Vertex]) -> "Graph":
        return Graph._trusted({mapping[v]: {mapping[u] for u in ns} for v, ns in self._adj.items()})

    def is_clique(self, vs: Iterable[Vertex]) -> bool:
        vs = list(vs)
        return all(vs[j] in self._adj[vs[i]] for i in range(len(vs)) for j in range(i + 1, len(vs)))

    def is_independent(self, vs: Iterable[Vertex]) -> bool:
        vs = list(vs)
        return not any(vs[j] in self._adj[vs[i]] for i in range(len(vs)) for j in range(i + 1, len(vs)))

    def components(self) -> list[frozenset]:
        seen: set = set()
        comps = []
        for s in sort_vertices(self._adj):
            if s in seen:
                continue
            comp = {s}
            queue = deque([s])
            while queue:
                v = queue.popleft()
                for u in self._adj[v]:
                    if u not in comp:
                        comp.add(u)
                        queue.append(u)
            seen |= comp
            comps.append(frozenset(comp))
        return comps

    def shortest_path(self, s, t, allowed: Iterable[Vertex] | None = None) -> list | None:
        """BFS path from s to t whose inner vertices lie in ``allowed``."""
        if s == t:
            return [s]
        allowed = None if allowed is None else set(allowed)
        parent = {s: None}
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for u in sort_vertices(self._adj[v]):
                if u in parent:
                    continue
                if u == t:
                    path = [t, v]
                    while parent[path[-1]] is not None:
                        path.append(parent[path[-1]])
                    return path[::-1]
                if allowed is None or u in allowed:
                    parent[u] = v
                    queue.append(u)
        return None

    def distance(self, s, t) -> float:
        p = self.shortest_path(s, t)
        return float("inf") if p is None else len(p) - 1

    def fresh_vertex(self, hint: int = 0) -> int:
        ints = [v for v in self._adj if isinstance(v, int)]
        return max([hint - 1, *ints], default=hint - 1) + 1


# -- named graphs used throughout the tests and generators ----------------
def path_graph(n: int, start: int = 0) -> Graph:
    return Graph.from_edges([(i, i + 1) for i in range(start, start + n - 1)], range(start, start + n))


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges([(i, (i + 1) % n) for i in range(n)], range(n))


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(itertools.combinations(range(n), 2), range(n))


def star_graph(leaves: int) -> Graph:
    """K_{1,leaves} with centre 0."""
    return Graph.from_edges([(0, i) for i in range(1, leaves + 1)], range(leaves + 1))


def empty_graph(n: int) -> Graph:
    return Graph.from_edges([], range(n))


# -- parsing -------------------------------------------------------------
def parse_graph_lines(lines: Iterable[str], allow: tuple[str, ...] = ()) -> tuple[Graph, list]:
    """Parse ``c``/``p idp n m``/``e u v`` records.

    Records whose tag is in ``allow`` are returned untouched as
    ``(lineno, tokens)`` so callers can layer their own records on top.
    """
    n = None
    declared_m = None
    edges: set = set()
    extra = []
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        tok = line.split()
        tag = tok[0]
        if tag == "p":
            if n is not None:
                raise GraphFormatError("duplicate header", lineno)
            if len(tok) != 4 or tok[1] != "idp":
                raise GraphFormatError(f"malformed header {line!r}", lineno)
            try:
                n, declared_m = int(tok[2]), int(tok[3])
            except ValueError:
                raise GraphFormatError(f"malformed header {line!r}", lineno) from None
            if n < 0 or declared_m < 0:
                raise GraphFormatError("negative size in header", lineno)
        elif tag == "e":
            if n is None:
                raise GraphFormatError("edge before header", lineno)
            u, v = _ints(tok, 2, lineno)
            for x in (u, v):
                if not 1 <= x <= n:
                    raise GraphFormatError(f"vertex {x} out of range 1..{n}", lineno)
            if u == v:
                raise GraphFormatError(f"loop edge at vertex {u}", lineno)
            key = (min(u, v), max(u, v))
            if key in edges:
                raise GraphFormatError(f"duplicate edge {u} {v}", lineno)
            edges.add(key)
        elif tag in allow:
            extra.append((lineno, tok))
        else:
            raise GraphFormatError(f"unknown record {tag!r}", lineno)
    if n is None:
        raise GraphFormatError("missing 'p idp <n> <m>' header")
    if declared_m != len(edges):
        raise GraphFormatError(f"header declares {declared_m} edges, found {len(edges)}")
    return Graph.from_edges(edges, range(1, n + 1)), extra


def _ints(tok: list[str], count: int, lineno: int) -> list[int]:
    if len(tok) != count + 1:
        raise GraphFormatError(f"expected {count} integers after {tok[0]!r}", lineno)
    try:
        return [int(x) for x in tok[1:]]
    except ValueError:
        raise GraphFormatError(f"non-integer field in {' '.join(tok)!r}", lineno) from None


def parse_graph(text: str) -> Graph:
    return parse_graph_lines(text.splitlines())[0]


def format_graph(g: Graph, comments: Iterable[str] = ()) -> str:
    """Serialise a graph whose vertices are exactly 1..n."""
    n = len(g)
    if g.vertices != frozenset(range(1, n + 1)):
        raise ValueError("format_graph needs vertices labelled 1..n")
    lines = [f"c {c}" for c in comments]
    lines.append(f"p idp {n} {g.num_edges()}")
    lines += [f"e {u} {v}" for u, v in g.edges()]
    return "\n".join(lines) + "\n"


def relabel_consecutive(g: Graph, start: int = 1) -> tuple[Graph, dict]:
    mapping = {v: i for i, v in enumerate(sort_vertices(g), start)}
    return g.relabel(mapping), mapping


# -- recognition primitives -------------------------------------------
def find_star(g: Graph, leaves: int):
    """A centre with ``leaves`` pairwise nonadjacent neighbours, or None."""
    for c in sort_vertices(g):
        nbrs = sort_vertices(g.neighbors(c))
        if len(nbrs) < leaves:
            continue
        found = _independent_subset(g, nbrs, leaves)
        if found is not None:
            return (c, *found)
    return None


def _independent_subset(g: Graph, cands: list, size: int, chosen=()):
    if len(chosen) == size:
        return chosen
    for i, v in enumerate(cands):
        if any(g.has_edge(v, w) for w in chosen):
            continue
        rest = cands[i + 1:]
        if len(rest) < size - len(chosen) - 1:
            break
        got = _independent_subset(g, rest, size, chosen + (v,))
        if got is not None:
            return got
    return None


def find_claw(g: Graph):
    """(centre, leaf, leaf, leaf) of an induced K_{1,3}, or None if claw-free."""
    return find_star(g, 3)


def find_k14(g: Graph):
    return find_star(g, 4)


def is_claw_free(g: Graph) -> bool:
    return find_claw(g) is None


@dataclass(frozen=True)
class TwinPartition:
    classes: tuple[frozenset, ...]

    def class_of(self, v) -> frozenset:
        for c in self.classes:
            if v in c:
                return c
        raise KeyError(v)

    def nontrivial(self) -> list[frozenset]:
        return [c for c in self.classes if len(c) > 1]


def twin_sets(g: Graph) -> TwinPartition:
    """Classes of vertices with identical closed neighbourhoods."""
    buckets: dict = {}
    for v in sort_vertices(g):
        buckets.setdefault(g.closed_neighbors(v), []).append(v)
    classes = sorted((frozenset(b) for b in buckets.values()), key=lambda c: order_key(sort_vertices(c)[0]))
    return TwinPartition(tuple(classes))


def is_twin_free(g: Graph) -> bool:
    return not twin_sets(g).nontrivial()


@dataclass(frozen=True)
class WJoin:
    A: frozenset
    B: frozenset


def w_join_violations(g: Graph, A: Iterable, B: Iterable) -> list[str]:
    """Reasons why (A, B) is not a proper W-join; empty list means it is one."""
    A, B = frozenset(A), frozenset(B)
    out = []
    if len(A) < 2 or len(B) < 2:
        out.append("both sides need at least two vertices")
    if A & B:
        out.append("sides overlap")
    if not g.is_clique(A) or not g.is_clique(B):
        out.append("a side is not a clique")
    for v in sort_vertices(g.vertices - A - B):
        nv = g.neighbors(v)
        for side, name in ((A, "A"), (B, "B")):
            hit = len(nv & side)
            if 0 < hit < len(side):
                out.append(f"vertex {v!r} splits {name}")
    for side, other, name in ((A, B, "A"), (B, A, "B")):
        for a in sort_vertices(side):
            hit = len(g.neighbors(a) & other)
            if hit == 0 or hit == len(other):
                out.append(f"{name}-vertex {a!r} is not mixed on the other side")
    return out


def is_proper_w_join(g: Graph, A, B) -> bool:
    return not w_join_violations(g, A, B)


def find_proper_w_join(g: Graph) -> WJoin | None:
    """Search for a proper W-join by closing seeds under the forced inclusions.

    Two vertices of A must agree outside A u B, so every vertex separating
    them belongs to B (and symmetrically). Seeds are adjacent pairs; when the
    closure is stable but some vertex is not mixed, the search branches on
    adding one more common neighbour to either side.
    """
    seen: set = set()
    for a1, a2 in g.edges():
        found = _grow_w_join(g, frozenset((a1, a2)), frozenset(), seen)
        if found is not None:
            return found
    return None


def _grow_w_join(g: Graph, A: frozenset, B: frozenset, seen: set) -> WJoin | None:
    while True:
        if (A, B) in seen:
            return None
        seen.add((A, B))
        newB = set(B)
        for x, y in itertools.combinations(A, 2):
            newB |= (g.closed_neighbors(x) ^ g.closed_neighbors(y)) - A
        newA = set(A)
        for x, y in itertools.combinations(newB, 2):
            newA |= (g.closed_neighbors(x) ^ g.closed_neighbors(y)) - newB
        if newA & newB or not g.is_clique(newA) or not g.is_clique(newB):
            return None
        if newA == A and newB == B:
            break
        A, B = frozenset(newA), frozenset(newB)
    if len(A) >= 2 and len(B) >= 2 and is_proper_w_join(g, A, B):
        return WJoin(A, B) if order_key(sort_vertices(A)[0]) < order_key(sort_vertices(B)[0]) else WJoin(B, A)
    common_a = set.intersection(*(set(g.neighbors(a)) for a in A)) - B
    common_b = set.intersection(*(set(g.neighbors(b)) for b in B)) - A if B else set(g.vertices) - A
    for v in sort_vertices(common_a):
        got = _grow_w_join(g, A | {v}, B, seen)
        if got is not None:
            return got
    for v in sort_vertices(common_b):
        if v in A:
            continue
        got = _grow_w_join(g, A, B | {v}, seen)
        if got is not None:
            return got
    return None


def independence_number(g: Graph, cap: int | None = 64) -> int:
    """Exact alpha(G) by branch and bound on a max-degree vertex."""
    if cap is not None and len(g) > cap:
        raise SizeLimitError(f"independence_number: {len(g)} vertices exceeds cap {cap}")
    adj = {v: set(ns) for v, ns in g.adjacency().items()}
    best = [0]

    def rec(alive: set, size: int):
        if size + len(alive) <= best[0]:
            return
        # isolated and degree-1 vertices can be taken greedily
        alive = set(alive)
        changed = True
        while changed:
            changed = False
            for v in list(alive):
                if v in alive and len(adj[v] & alive) <= 1:
                    alive -= adj[v] | {v}
                    size += 1
                    changed = True
        if not alive:
            best[0] = max(best[0], size)
            return
        if size + len(alive) <= best[0]:
            return
        v = max(alive, key=lambda x: (len(adj[x] & alive), order_key(x)))
        rec(alive - adj[v] - {v}, size + 1)
        rec(alive - {v}, size)

    rec(set(adj), 0)
    return best[0]


# -- line graphs -----------------------------------------------------------
@dataclass(frozen=True)
class PreimageMap:
    preimage: Graph
    edge_of: dict = field(hash=False)
    cliques_at: dict = field(hash=False)

    def vertex_of_edge(self) -> dict:
        return {frozenset(e): v for v, e in self.edge_of.items()}


def line_graph(h: Graph) -> tuple[Graph, PreimageMap]:
    """L(H) with vertices labelled by the edge tuples of H."""
    edges = h.edges()
    at: dict = {x: [] for x in h}
    for e in edges:
        at[e[0]].append(e)
        at[e[1]].append(e)
    adj: dict = {e: set() for e in edges}
    for x, inc in at.items():
        for e, f in itertools.combinations(inc, 2):
            adj[e].add(f)
            adj[f].add(e)
    lg = Graph._trusted(adj)
    pm = PreimageMap(h, {e: e for e in edges}, {x: frozenset(inc) for x, inc in at.items()})
    return lg, pm


def two_clique_neighborhoods(g: Graph) -> bool:
    """Every open neighbourhood splits into at most two cliques (edges between them allowed)."""
    return all(_neighborhood_cliques(g, v) is not None for v in g)


def _neighborhood_cliques(g: Graph, v):
    """A split of N(v) into two cliques, or None.

    Equivalent to 2-colouring the complement of G[N(v)].
    """
    nb = g.neighbors(v)
    side: dict = {}
    for root in sort_vertices(nb):
        if root in side:
            continue
        side[root] = 0
        queue = [root]
        while queue:
            x = queue.pop()
            for y in nb - g.neighbors(x) - {x}:
                if y not in side:
                    side[y] = 1 - side[x]
                    queue.append(y)
                elif side[y] == side[x]:
                    return None
    return (frozenset(x for x in nb if side[x] == 0), frozenset(x for x in nb if side[x] == 1))


def preimage(g: Graph, limit: int = 200_000) -> PreimageMap | None:
    """A graph H with L(H) = G via a Krausz clique partition, or None.

    Works per connected component; isolated vertices become isolated edges.
    ``limit`` bounds the number of search nodes per component.
    """
    h_adj: dict = {}
    edge_of: dict = {}
    next_id = itertools.count()
    for comp in g.components():
        part = _krausz_partition(g.subgraph(comp), limit)
        if part is None:
            return None
        cliques, membership = part
        ids = {c: ("h", next(next_id)) for c in cliques}
        for v in sort_vertices(comp):
            ends = [ids[c] for c in membership[v]]
            while len(ends) < 2:
                ends.append(("h", next(next_id)))
            a, b = ends
            h_adj.setdefault(a, set()).add(b)
            h_adj.setdefault(b, set()).add(a)
            edge_of[v] = (a, b)
    h = Graph._trusted(h_adj)
    cliques_at = {x: frozenset(v for v, e in edge_of.items() if x in e) for x in h}
    pm = PreimageMap(h, edge_of, cliques_at)
    if not _check_preimage(g, pm):
        return None
    return pm


def _check_preimage(g: Graph, pm: PreimageMap) -> bool:
    for u, v in itertools.combinations(sort_vertices(g), 2):
        share = bool(set(pm.edge_of[u]) & set(pm.edge_of[v]))
        if share != g.has_edge(u, v):
            return False
    return True


def _krausz_partition(g: Graph, limit: int):
    """Partition E(G) into cliques with every vertex in at most two of them."""
    if len(g) == 1:
        return [], {next(iter(g)): []}
    count = [0]
    membership: dict = {v: [] for v in g}
    covered: set = set()
    cliques: list = []
    edges = g.edges()

    def uncovered_edge():
        for e in edges:
            if frozenset(e) not in covered:
                return e
        return None

    def rec() -> bool:
        count[0] += 1
        if count[0] > limit:
            raise SizeLimitError("preimage search budget exhausted")
        e = uncovered_edge()
        if e is None:
            return True
        u, v = e
        if len(membership[u]) >= 2 or len(membership[v]) >= 2:
            return False
        cand = [w for w in sort_vertices(g.neighbors(u) & g.neighbors(v))
                if len(membership[w]) < 2
                and frozenset((u, w)) not in covered and frozenset((v, w)) not in covered]
        # vertices already in one clique must put all remaining edges in the second
        for extra in _clique_subsets(g, cand, covered):
            c = frozenset((u, v, *extra))
            if not _forced_ok(g, c, membership, covered):
                continue
            pairs = [frozenset(p) for p in itertools.combinations(c, 2)]
            covered.update(pairs)
            cliques.append(c)
            for x in c:
                membership[x].append(c)
            if rec():
                return True
            for x in c:
                membership[x].pop()
            cliques.pop()
            covered.difference_update(pairs)
        return False

    if not rec():
        return None
    return cliques, membership


def _clique_subsets(g: Graph, cand: list, covered: set):
    """Subsets of ``cand`` that are cliques with all inner edges uncovered, largest first."""
    out = []

    def grow(i, chosen):
        out.append(tuple(chosen))
        for j in range(i, len(cand)):
            w = cand[j]
            if all(g.has_edge(w, x) and frozenset((w, x)) not in covered for x in chosen):
                chosen.append(w)
                grow(j + 1, chosen)
                chosen.pop()

    grow(0, [])
    out.sort(key=len, reverse=True)
    return out


def _forced_ok(g: Graph, c: frozenset, membership: dict, covered: set) -> bool:
    # a vertex entering its second clique must have every incident edge covered afterwards
    for x in c:
        if len(membership[x]) == 1:
            rest = {w for w in g.neighbors(x) if frozenset((x, w)) not in covered and w not in c}
            if rest:
                return False
        elif len(membership[x]) == 0:
            # remaining uncovered edges at x must form a clique (its future second clique)
            rest = [w for w in g.neighbors(x) if frozenset((x, w)) not in covered and w not in c]
            if not g.is_clique(rest):
                return False
    return True
