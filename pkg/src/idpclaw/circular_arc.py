"""Arc models on a discrete circle and the two circular-arc path solvers."""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field

from .graph import Graph, GraphFormatError, order_key, sort_vertices
from .instance import Instance, Solution, independence_report, verify_solution


class ArcModelError(ValueError):
    pass


@dataclass(frozen=True)
class ArcModel:
    """Arc ``(start, end)`` covers the points start, start+1, ..., end-1 (mod C).

    ``start == end`` is the whole circle.
    """

    circumference: int
    arcs: dict = field(default_factory=dict)
    proper: bool = False

    def length(self, v) -> int:
        s, e = self.arcs[v]
        return (e - s) % self.circumference or self.circumference

    def covers(self, v, p) -> bool:
        s, _ = self.arcs[v]
        return (p - s) % self.circumference < self.length(v)

    def meets(self, u, v) -> bool:
        return self.covers(u, self.arcs[v][0]) or self.covers(v, self.arcs[u][0])

    def contains(self, u, v) -> bool:
        """True when arc u contains arc v as point sets."""
        C = self.circumference
        if self.length(u) == C:
            return True
        off = (self.arcs[v][0] - self.arcs[u][0]) % C
        return off + self.length(v) <= self.length(u)

    def points(self, v) -> set:
        s = self.arcs[v][0]
        return {(s + i) % self.circumference for i in range(self.length(v))}

    def graph(self) -> Graph:
        vs = sort_vertices(self.arcs)
        edges = [(u, v) for i, u in enumerate(vs) for v in vs[i + 1:] if self.meets(u, v)]
        return Graph.from_edges(edges, vs)

    def restrict(self, keep) -> "ArcModel":
        keep = set(keep)
        return ArcModel(self.circumference, {v: a for v, a in self.arcs.items() if v in keep}, self.proper)

    def is_proper(self) -> bool:
        vs = sort_vertices(self.arcs)
        for u in vs:
            for v in vs:
                if u != v and self.contains(u, v) and not self.contains(v, u):
                    return False
        return True


def validate_arc_model(g: Graph, model: ArcModel, proper: bool | None = None) -> list[str]:
    """Mismatches between G and the intersection graph of the arcs; empty when they agree."""
    out = []
    C = model.circumference
    if C <= 0:
        return ["circumference must be positive"]
    for v, (s, e) in model.arcs.items():
        if not (0 <= s < C and 0 <= e < C):
            out.append(f"arc of {v!r} has an endpoint outside [0, {C})")
    if set(model.arcs) != set(g.vertices):
        missing = sort_vertices(set(g.vertices) - set(model.arcs))
        extra = sort_vertices(set(model.arcs) - set(g.vertices))
        if missing:
            out.append(f"no arc for vertices {missing}")
        if extra:
            out.append(f"arcs for unknown vertices {extra}")
    if out:
        return out
    vs = sort_vertices(g)
    for i, u in enumerate(vs):
        for v in vs[i + 1:]:
            if model.meets(u, v) != g.has_edge(u, v):
                what = "arcs meet but no edge" if model.meets(u, v) else "edge but arcs are disjoint"
                out.append(f"{u!r}-{v!r}: {what}")
    if proper if proper is not None else model.proper:
        for u in vs:
            for v in vs:
                if u != v and model.contains(u, v) and not model.contains(v, u):
                    out.append(f"arc of {u!r} properly contains arc of {v!r}")
    return out


# -- trimming ----------------------------------------------------------------------
@dataclass(frozen=True)
class TrimResult:
    model: ArcModel
    unsatisfiable: tuple  # terminal vertices whose arcs vanished


def _arc_from_points(pts: set, C: int):
    if len(pts) == C:
        return (0, 0)
    starts = [p for p in pts if (p - 1) % C not in pts]
    if len(starts) != 1:
        return None
    s = starts[0]
    return (s, (s + len(pts)) % C)


def trim_terminal_arcs(inst: Instance, model: ArcModel) -> TrimResult:
    """Cut the overlap of every two meeting terminal arcs out of both arcs.

    Applied after the first three terminal rules, this represents the graph
    with edges between terminal vertices removed.
    """
    term = sort_vertices(inst.terminal_vertices())
    C = model.circumference
    overlap_pts = {v: set() for v in term}
    for i, u in enumerate(term):
        for v in term[i + 1:]:
            if not model.meets(u, v):
                continue
            beta = model.points(u) & model.points(v)
            for w in model.arcs:
                if w not in overlap_pts and model.points(w) & beta:
                    raise ArcModelError(f"non-terminal {w!r} covers the overlap of {u!r} and {v!r}")
            overlap_pts[u] |= beta
            overlap_pts[v] |= beta
    arcs = dict(model.arcs)
    dead = []
    for v in term:
        if not overlap_pts[v]:
            continue
        left = model.points(v) - overlap_pts[v]
        if not left:
            dead.append(v)
            continue
        arc = _arc_from_points(left, C)
        if arc is None:
            # the other arc sits strictly inside; that terminal is dead anyway
            raise ArcModelError(f"trimming splits the arc of {v!r}")
        arcs[v] = arc
    out = ArcModel(C, arcs, False)
    return TrimResult(ArcModel(C, arcs, out.is_proper()), tuple(dead))


# -- solvers -------------------------------------------------------------------------
class PreconditionError(ValueError):
    pass


def _prepare(inst: Instance, model: ArcModel):
    bad = validate_arc_model(inst.graph, model, proper=False)
    if bad:
        raise ArcModelError("arc model does not match the graph: " + "; ".join(bad[:3]))
    if not independence_report(inst).independent:
        raise PreconditionError("circular-arc solvers need an independent instance")


def _gap_layout(inst: Instance, model: ArcModel):
    """Pairs oriented clockwise along their gap, in gap order; None means NO."""
    term = sorted(inst.terminal_vertices(), key=lambda v: (model.arcs[v][0], order_key(v)))
    m = len(term)
    idx = {v: i for i, v in enumerate(term)}
    gap_of = {}
    for p in inst.pairs:
        i, j = idx[p.s], idx[p.t]
        if (j - i) % m == 1:
            gap_of[i] = (p.label, p.s, p.t)
        elif (i - j) % m == 1:
            gap_of[j] = (p.label, p.t, p.s)
        else:
            return None, term
    return [gap_of[i] + (i,) for i in sorted(gap_of)], term


def _allowed(inst: Instance, a, b) -> set:
    term = inst.terminal_vertices()
    g = inst.graph
    return {w for w in g if w not in term and g.neighbors(w) & term <= {a, b}}


class _Sweep:
    """Place paths left to right on the circle cut at ``cut``."""

    def __init__(self, inst: Instance, model: ArcModel, cut: int):
        self.inst, self.model, self.cut = inst, model, cut
        self.C = model.circumference

    def lin_start(self, w) -> int:
        return (self.model.arcs[w][0] - self.cut) % self.C

    def lin_end(self, w) -> int:
        return self.lin_start(w) + self.model.length(w) - 1

    def usable(self, w) -> bool:
        return not self.model.covers(w, self.cut) or self.lin_start(w) == 0

    def route(self, a, b, cands: set, first=None):
        """Path a..b with inner vertices from ``cands`` minimising the last covered point."""
        g = self.inst.graph
        if first is not None:
            cands = {w for w in cands if not g.has_edge(a, w)}
        order = sorted(cands, key=self.lin_end)
        ends = [self.lin_end(w) for w in order]
        floor = self.lin_end(first) if first is not None else -1

        def attempt(n_used):
            inner = set(order[:n_used])
            if first is None:
                return g.shortest_path(a, b, allowed=inner)
            if g.has_edge(first, b):
                return [a, first, b]
            rest = g.shortest_path(first, b, allowed=inner)
            return None if rest is None else [a] + rest

        lo, hi = bisect.bisect_right(ends, floor), len(order)
        if attempt(hi) is None:
            return None
        while lo < hi:
            mid = (lo + hi) // 2
            if attempt(mid) is None:
                lo = mid + 1
            else:
                hi = mid
        return attempt(lo)

    def run(self, layout, first=None):
        placed = {}
        right = -1
        for n, (label, a, b, _) in enumerate(layout):
            allowed = _allowed(self.inst, a, b)
            cands = {w for w in allowed if self.usable(w) and self.lin_start(w) > right}
            f = first if n == 0 else None
            if f is not None:
                if f not in allowed or not self.inst.graph.has_edge(a, f):
                    return None
                cands.discard(f)
            path = self.route(a, b, cands, f)
            if path is None:
                return None
            placed[label] = path
            right = max([right] + [self.lin_end(w) for w in path[1:-1]])
        return placed


def _trivial(inst: Instance):
    if inst.k == 0:
        return True, Solution(())
    if inst.k == 1:
        p = inst.pairs[0]
        path = inst.graph.shortest_path(p.s, p.t)
        return True, (Solution((tuple(path),)) if path else None)
    from .reductions import overloaded_vertex
    if overloaded_vertex(inst) is not None:
        return True, None
    return False, None


def _finish(inst: Instance, placed) -> Solution:
    sol = Solution.from_labels(inst, placed)
    bad = verify_solution(inst, sol)
    assert not bad, bad
    return sol


def solve_ca(inst: Instance, model: ArcModel) -> Solution | None:
    """Guess the first inner vertex of one path, cut the circle there, then sweep."""
    _prepare(inst, model)
    done, sol = _trivial(inst)
    if done:
        return sol
    layout, _ = _gap_layout(inst, model)
    if layout is None:
        return None
    label, a, b, _ = layout[0]
    for first in sort_vertices(inst.graph.neighbors(a)):
        placed = _Sweep(inst, model, model.arcs[first][0]).run(layout, first)
        if placed is not None:
            return _finish(inst, placed)
    return None


def solve_proper_ca(inst: Instance, model: ArcModel) -> Solution | None:
    """Linear sweep for proper models, cut in a gap no pair needs.

    When every gap is used the circle has no free cut point and the solver
    guesses the first inner vertex as ``solve_ca`` does.
    """
    _prepare(inst, model)
    if not model.is_proper():
        raise PreconditionError("model is not proper")
    done, sol = _trivial(inst)
    if done:
        return sol
    layout, term = _gap_layout(inst, model)
    if layout is None:
        return None
    used = {gap for *_, gap in layout}
    free = [i for i in range(len(term)) if i not in used]
    if not free:
        return solve_ca(inst, model)
    j = free[0]
    cut = model.arcs[term[j]][1]
    m = len(term)
    layout = sorted(layout, key=lambda t: (t[3] - j - 1) % m)
    placed = _Sweep(inst, model, cut).run(layout)
    return None if placed is None else _finish(inst, placed)


def interleaving_pairs(inst: Instance, model: ArcModel) -> list:
    """Labels of pairs with some other terminal strictly between them on both sides."""
    layout_pairs = []
    term = sorted(inst.terminal_vertices(), key=lambda v: (model.arcs[v][0], order_key(v)))
    m = len(term)
    idx = {v: i for i, v in enumerate(term)}
    for p in inst.pairs:
        d = (idx[p.t] - idx[p.s]) % m
        if p.s != p.t and d not in (1, m - 1):
            layout_pairs.append(p.label)
    return layout_pairs


# -- file format -----------------------------------------------------------------------
def parse_arc_model(text: str) -> ArcModel:
    C = None
    arcs = {}
    proper = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        tok = raw.split()
        if not tok or tok[0] == "c":
            continue
        if tok[0] == "circle":
            if C is not None or len(tok) != 2:
                raise GraphFormatError("bad or duplicate 'circle' line", lineno)
            C = _int(tok[1], lineno)
            if C <= 0:
                raise GraphFormatError("circumference must be positive", lineno)
        elif tok[0] == "a":
            if C is None:
                raise GraphFormatError("'a' line before 'circle'", lineno)
            if len(tok) != 4:
                raise GraphFormatError("expected 'a <v> <start> <end>'", lineno)
            v, s, e = (_int(x, lineno) for x in tok[1:])
            if v in arcs:
                raise GraphFormatError(f"duplicate arc for {v}", lineno)
            if not (0 <= s < C and 0 <= e < C):
                raise GraphFormatError("arc endpoint outside the circle", lineno)
            arcs[v] = (s, e)
        elif tok[0] == "proper" and len(tok) == 1:
            proper = True
        else:
            raise GraphFormatError(f"unknown record {tok[0]!r}", lineno)
    if C is None:
        raise GraphFormatError("missing 'circle' line")
    return ArcModel(C, arcs, proper)


def _int(x, lineno):
    try:
        return int(x)
    except ValueError:
        raise GraphFormatError(f"not an integer: {x!r}", lineno) from None


def format_arc_model(model: ArcModel) -> str:
    lines = [f"circle {model.circumference}"]
    if model.proper:
        lines.append("proper")
    lines += [f"a {v} {s} {e}" for v, (s, e) in sorted(model.arcs.items(), key=lambda kv: order_key(kv[0]))]
    return "\n".join(lines) + "\n"
