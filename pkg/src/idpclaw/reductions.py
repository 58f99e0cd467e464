"""Preprocessing that keeps the yes/no answer: terminal rules, twins and W-joins.

Every operation returns the reduced instance and a transcript. Replaying
the transcript on the input gives the output, and ``lift_solution`` turns a
solution of the output back into one of the input.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .graph import Graph, find_claw, find_proper_w_join, order_key, sort_vertices, twin_sets
from .instance import Instance, Solution, TerminalPair, is_independent, verify_solution


class PreconditionError(ValueError):
    pass


# -- transcript records ------------------------------------------------------
@dataclass(frozen=True)
class DeleteVertex:
    v: object
    reason: str


@dataclass(frozen=True)
class DeleteEdge:
    u: object
    v: object


@dataclass(frozen=True)
class DropPair:
    label: object
    splice: tuple  # the path re-inserted for this pair when lifting


@dataclass(frozen=True)
class ReplacePair:
    label: object
    old: tuple
    new: tuple


@dataclass(frozen=True)
class AddVertex:
    v: object
    neighbors: tuple
    reason: str


@dataclass
class Transcript:
    steps: list = field(default_factory=list)

    def __len__(self):
        return len(self.steps)

    def extend(self, other: "Transcript") -> "Transcript":
        self.steps.extend(other.steps)
        return self

    def deleted_vertices(self) -> list:
        return [s.v for s in self.steps if isinstance(s, DeleteVertex)]

    def dump(self) -> str:
        lines = []
        for s in self.steps:
            if isinstance(s, DeleteVertex):
                lines.append(f"del-v {s.v} {s.reason}")
            elif isinstance(s, DeleteEdge):
                lines.append(f"del-e {s.u} {s.v}")
            elif isinstance(s, DropPair):
                lines.append(f"drop-pair {s.label} splice={','.join(map(str, s.splice))}")
            elif isinstance(s, ReplacePair):
                lines.append(f"repl-pair {s.label} {s.old[0]} {s.old[1]} -> {s.new[0]} {s.new[1]}")
            elif isinstance(s, AddVertex):
                lines.append(f"add-v {s.v} nbrs={','.join(map(str, s.neighbors))}")
        return "".join(line + "\n" for line in lines)


def replay(inst: Instance, tr: Transcript) -> Instance:
    """Apply the recorded steps to ``inst`` (used to check transcripts)."""
    g = inst.graph
    pairs = {p.label: p for p in inst.pairs}
    for s in tr.steps:
        if isinstance(s, DeleteVertex):
            g = g.remove_vertices([s.v])
        elif isinstance(s, DeleteEdge):
            g = g.remove_edges([(s.u, s.v)])
        elif isinstance(s, DropPair):
            del pairs[s.label]
        elif isinstance(s, ReplacePair):
            pairs[s.label] = TerminalPair(s.new[0], s.new[1], s.label)
        elif isinstance(s, AddVertex):
            g = g.add_vertex(s.v, s.neighbors)
    return Instance(g, tuple(pairs.values()))


def lift_solution(original: Instance, tr: Transcript, reduced: Instance, sol: Solution) -> Solution:
    """Solution of ``original`` from a solution of ``reduced``."""
    if len(sol.paths) != reduced.k:
        raise ValueError("transcript/solution mismatch: wrong number of paths")
    paths = sol.by_label(reduced)
    for s in reversed(tr.steps):
        if isinstance(s, DropPair):
            paths[s.label] = list(s.splice)
        elif isinstance(s, ReplacePair):
            # the new terminal stood in for the old one; the path keeps its shape
            path = paths[s.label]
            if path and path[0] == s.new[0] and path[-1] == s.new[1]:
                paths[s.label] = [s.old[0]] + path[1:-1] + [s.old[1]] if len(path) > 1 else [s.old[0]]
    missing = [p.label for p in original.pairs if p.label not in paths]
    if missing:
        raise ValueError(f"transcript/solution mismatch: no path for pairs {missing}")
    return Solution.from_labels(original, paths)


def _require_claw_free(g: Graph):
    claw = find_claw(g)
    if claw is not None:
        raise PreconditionError(f"graph has a claw centred at {claw[0]!r}")


# -- terminal rules --------------------------------------------------------------
def make_independent(inst: Instance, check_claws: bool = True) -> tuple[Instance, Transcript]:
    """Rules 1 to 4 in order, each applied once to its fixpoint."""
    if check_claws:
        _require_claw_free(inst.graph)
    tr = Transcript()
    g = inst.graph
    pairs = list(inst.pairs)

    def terminal_set():
        return {x for p in pairs for x in (p.s, p.t)}

    # Rule 1: non-terminals seeing both ends of an edge between terminal vertices
    term = terminal_set()
    doomed = set()
    for v in term:
        for w in g.neighbors(v) & term:
            doomed |= (g.neighbors(v) & g.neighbors(w)) - term
    for u in sort_vertices(doomed):
        tr.steps.append(DeleteVertex(u, "rule1"))
    g = g.remove_vertices(doomed)

    # Rule 2: non-terminal neighbours of a terminal vertex whose partners are all close
    partners: dict = {}
    for p in pairs:
        partners.setdefault(p.s, set()).add(p.t)
        partners.setdefault(p.t, set()).add(p.s)
    doomed = set()
    for v, ps in partners.items():
        if ps <= g.closed_neighbors(v):
            doomed |= g.neighbors(v) - term
    for u in sort_vertices(doomed):
        tr.steps.append(DeleteVertex(u, "rule2"))
    g = g.remove_vertices(doomed)

    # Rule 3: pairs whose terminals coincide or are adjacent are settled at once
    kept = []
    for p in pairs:
        if p.s == p.t or g.has_edge(p.s, p.t):
            splice = (p.s,) if p.s == p.t else (p.s, p.t)
            tr.steps.append(DropPair(p.label, splice))
        else:
            kept.append(p)
    settled = term - {x for p in kept for x in (p.s, p.t)}
    # a settled vertex carries its own path; keeping it as a free vertex could let
    # another path run through it
    for u in sort_vertices(settled):
        tr.steps.append(DeleteVertex(u, "rule3-settled"))
    g = g.remove_vertices(settled)
    pairs = kept

    # Rule 4: drop edges between terminal vertices
    term = terminal_set()
    cut = sorted({tuple(sort_vertices((v, w))) for v in term for w in g.neighbors(v) & term})
    for u, v in cut:
        tr.steps.append(DeleteEdge(u, v))
    g = g.remove_edges(cut)
    return Instance(g, tuple(pairs)), tr


def overloaded_vertex(inst: Instance):
    """A vertex carrying three or more terminals, if any.

    In an independent claw-free instance such a vertex makes the answer NO:
    the first inner vertices of its paths would be three pairwise
    non-adjacent neighbours.
    """
    for v, ts in sorted(inst.terminals_at().items(), key=lambda kv: order_key(kv[0])):
        if len(ts) >= 3:
            return v
    return None


# -- twins -----------------------------------------------------------------------
def remove_twins(inst: Instance) -> tuple[Instance, Transcript]:
    if not is_independent(inst):
        raise PreconditionError("remove_twins needs an independent instance")
    tr = Transcript()
    term = inst.terminal_vertices()
    doomed = []
    for cls in twin_sets(inst.graph).nontrivial():
        keep = [v for v in cls if v in term]
        keep_v = keep[0] if keep else sort_vertices(cls)[0]
        doomed += [v for v in sort_vertices(cls) if v != keep_v]
    for v in doomed:
        tr.steps.append(DeleteVertex(v, "twin"))
    return inst.with_graph(inst.graph.remove_vertices(doomed)), tr


# -- W-joins ---------------------------------------------------------------------
def _destroy_w_join(inst: Instance, A: frozenset, B: frozenset, tr: Transcript) -> Instance:
    g = inst.graph
    tat = inst.terminals_at()
    tA = [v for v in sort_vertices(A) if v in tat]
    tB = [v for v in sort_vertices(B) if v in tat]

    def drop(side, keep, reason):
        doomed = [v for v in sort_vertices(side) if v not in keep]
        for v in doomed:
            tr.steps.append(DeleteVertex(v, reason))
        return inst.with_graph(g.remove_vertices(doomed))

    # Case 1: a terminal vertex representing two terminals
    heavy = [v for v in sort_vertices(tA + tB) if len(tat[v]) >= 2]
    if heavy:
        u = heavy[0]
        return drop(A if u in A else B, {u}, "wjoin-case1")
    if tA and tB:
        # Case 2: one single-terminal vertex on each side
        u, v = tA[0], tB[0]
        (li, _), (lj, _) = tat[u][0], tat[v][0]
        if li != lj:
            return drop(A, {u}, "wjoin-case2")
        w = sort_vertices(g.neighbors(u) & B)[0]
        doomed = g.closed_neighbors(u) | g.closed_neighbors(v)
        pair = inst.pair(li)
        tr.steps.append(DropPair(li, (u, w, v) if pair.s == u else (v, w, u)))
        for x in sort_vertices(doomed):
            tr.steps.append(DeleteVertex(x, "wjoin-case2-pair"))
        return Instance(g.remove_vertices(doomed), tuple(p for p in inst.pairs if p.label != li))
    if tA or tB:
        # Case 3
        u = (tA + tB)[0]
        return drop(A if u in A else B, {u}, "wjoin-case3")
    # Case 4: keep u, v in one side and w on the other with uw an edge and vw not
    best = None
    for X, Y in ((A, B), (B, A)):
        for u in X:
            for v in X - {u}:
                for w in g.neighbors(u) & Y - g.neighbors(v):
                    key = tuple(order_key(x) for x in (u, v, w))
                    if best is None or key < best[0]:
                        best = (key, (u, v, w))
    u, v, w = best[1]
    keep = {u, v, w}
    doomed = [x for x in sort_vertices(A | B) if x not in keep]
    for x in doomed:
        tr.steps.append(DeleteVertex(x, "wjoin-case4"))
    return inst.with_graph(g.remove_vertices(doomed))


def remove_w_joins(inst: Instance, max_rounds: int | None = None) -> tuple[Instance, Transcript]:
    """Alternate twin removal with destroying one proper W-join until neither applies."""
    if not is_independent(inst):
        raise PreconditionError("remove_w_joins needs an independent instance")
    tr = Transcript()
    cur, t0 = remove_twins(inst)
    tr.extend(t0)
    rounds = 0
    while True:
        wj = find_proper_w_join(cur.graph)
        if wj is None:
            break
        before = len(cur.graph)
        cur = _destroy_w_join(cur, wj.A, wj.B, tr)
        assert len(cur.graph) < before
        cur, t1 = remove_twins(cur)
        tr.extend(t1)
        rounds += 1
        if max_rounds is not None and rounds >= max_rounds:
            break
    return cur, tr


def reduce_all(inst: Instance, check_claws: bool = True) -> tuple[Instance, Transcript]:
    """Rules 1-4, then twins and W-joins, as one transcript."""
    cur, tr = make_independent(inst, check_claws)
    if overloaded_vertex(cur) is not None:
        return cur, tr
    cur, t2 = remove_w_joins(cur)
    return cur, tr.extend(t2)


def check_lift(original: Instance, tr: Transcript, reduced: Instance, sol: Solution) -> Solution:
    lifted = lift_solution(original, tr, reduced, sol)
    bad = verify_solution(original, lifted)
    if bad:
        raise ValueError("lifted solution fails verification: " + "; ".join(bad))
    return lifted
