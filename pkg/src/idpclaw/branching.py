"""Branching over the stripes of a strip structure until only line graphs remain.

Each stripe is processed once. Its interior H is either solved on the side
(with at most two stand-in vertices playing the role of the z vertices) or
replaced by a small gadget, and the rest of the graph continues. A branch
carries a chain of splice records so that a solution of the final line
graph can be turned back into a solution of the input.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .circular_arc import ArcModel, ArcModelError, solve_ca, solve_proper_ca, trim_terminal_arcs, validate_arc_model
from .graph import (Graph, SizeLimitError, find_claw, find_proper_w_join, independence_number,
                    is_twin_free, sort_vertices, two_clique_neighborhoods)
from .instance import Instance, Solution, TerminalPair, is_independent, verify_solution
from .oracle import DEFAULT_CAP, solve_idp_exact
from .reductions import lift_solution, make_independent, overloaded_vertex
from .strips import StripError, StripStructure, classify_strip, validate_strip_structure


class SpliceError(ValueError):
    pass


# -- the side solver -----------------------------------------------------------------
def solve_strip_subproblem(sub: Instance, J: Graph | None = None, model: ArcModel | None = None,
                           stand_in: dict | None = None, oracle_cap: int | None = DEFAULT_CAP,
                           alpha_limit: int = 4) -> Solution | None:
    """Decide a small instance living on (a copy of) an induced subgraph of a strip.

    ``stand_in`` maps added vertices to the z vertex of J they replace, so
    an arc model of J can be reused. Without a model the instance must have
    independence number at most ``alpha_limit`` and goes to the exact search.
    """
    stand_in = stand_in or {}
    if sub.k == 0:
        return Solution(())
    if model is not None:
        arcs = {}
        for v in sub.graph:
            src = stand_in.get(v, v)
            if src not in model.arcs:
                break
            arcs[v] = model.arcs[src]
        else:
            local = ArcModel(model.circumference, arcs, False)
            if not validate_arc_model(sub.graph, local, proper=False):
                return solve_with_arcs(sub, local)
    if independence_number(sub.graph, cap=None) > alpha_limit:
        raise StripError("side instance has no arc model and independence number above "
                         f"{alpha_limit}")
    return solve_idp_exact(sub, cap=oracle_cap)


def solve_with_arcs(sub: Instance, model: ArcModel, prefer_proper: bool = False) -> Solution | None:
    """Rules 1-4, trim the terminal arcs, then the circular-arc solver."""
    red, tr = make_independent(sub, check_claws=False)
    if overloaded_vertex(red) is not None:
        return None
    # Rules 1-3 only delete vertices and pairs; restrict the model, then trim
    before_rule4 = Instance(sub.graph.subgraph(red.graph.vertices), red.pairs)
    try:
        trimmed = trim_terminal_arcs(before_rule4, model.restrict(red.graph.vertices))
    except ArcModelError:
        return solve_idp_exact(sub, cap=None)
    if trimmed.unsatisfiable:
        return None
    m = trimmed.model
    if prefer_proper and m.is_proper():
        sol = solve_proper_ca(red, ArcModel(m.circumference, m.arcs, True))
    else:
        sol = solve_ca(red, m)
    return None if sol is None else lift_solution(sub, tr, red, sol)


# -- splice records --------------------------------------------------------------------
@dataclass(frozen=True)
class Splice:
    """How to rebuild the paths of ``here`` from a side solution and a continuation."""

    here: Instance
    sub: dict | None = None
    joins: dict = field(default_factory=dict)   # label -> pieces
    drop: frozenset = frozenset()
    q_path: tuple = ()
    q_label: object = None

    def lift(self, cont: dict) -> dict:
        sub = self.sub or {}
        cont = {lbl: list(p) for lbl, p in cont.items()}
        if self.q_path:
            cont = {lbl: self._unfold_q(p, sub) for lbl, p in cont.items()}
        out = {}
        for p in self.here.pairs:
            if p.label in self.joins:
                seq = []
                for piece in self.joins[p.label]:
                    if piece[0] == "lit":
                        part = list(piece[1])
                    else:
                        src = sub if piece[0] == "sub" else cont
                        if piece[1] not in src:
                            raise SpliceError(f"missing {piece[0]} path for {piece[1]!r}")
                        part = list(src[piece[1]])
                        if len(piece) > 2 and piece[2]:
                            part.reverse()
                    seq += [v for v in part if v not in self.drop]
                path = seq
            elif p.label in cont:
                path = cont[p.label]
            elif p.label in sub:
                path = list(sub[p.label])
            else:
                raise SpliceError(f"no path for pair {p.label!r}")
            if path and path[0] != p.s:
                path = path[::-1]
            out[p.label] = path
        return out

    def _unfold_q(self, path, sub):
        q = list(self.q_path)
        if q[0] not in path and q[-1] not in path:
            return path
        inner = list(sub[self.q_label])[1:-1]
        for seg, rep in ((q, inner), (q[::-1], inner[::-1])):
            for i in range(len(path) - len(seg) + 1):
                if path[i:i + len(seg)] == seg:
                    return path[:i] + rep + path[i + len(seg):]
        raise SpliceError("continuation path enters the kept path without crossing it")


def lift_chain(chain, leaf_paths: dict) -> dict:
    paths = leaf_paths
    for sp in reversed(chain):
        paths = sp.lift(paths)
    return paths


# -- branch state ------------------------------------------------------------------------
@dataclass(frozen=True)
class StripState:
    rverts: tuple
    interior: frozenset
    attach: dict                 # r -> interior vertices adjacent to C_r outside the strip
    kind: str
    J: Graph | None = None
    z_of: dict | None = None
    model: ArcModel | None = None


@dataclass(frozen=True)
class Node:
    inst: Instance
    strips: dict                 # hyperedge id -> StripState
    chain: tuple = ()


@dataclass
class BranchStats:
    counted_k: int = 0
    leaves: int = 0
    pruned: int = 0
    side_calls: int = 0
    cases: dict = field(default_factory=dict)

    def hit(self, name):
        self.cases[name] = self.cases.get(name, 0) + 1

    @property
    def bound(self) -> int:
        return 6 ** self.counted_k


@dataclass(frozen=True)
class Leaf:
    inst: Instance
    chain: tuple


def _oriented(inst: Instance, sol: Solution) -> dict:
    out = {}
    for p, path in zip(inst.pairs, sol.paths):
        path = list(path)
        out[p.label] = path if path[0] == p.s else path[::-1]
    return out


def _inherited(pairs, vset, exclude=()) -> list:
    return [p for p in pairs if p.s in vset and p.t in vset and p.label not in exclude]


class _Engine:
    def __init__(self, oracle_cap, stats: BranchStats):
        self.oracle_cap = oracle_cap
        self.stats = stats
        self._ids = itertools.count()

    def fresh(self, tag="v"):
        return ("br", tag, next(self._ids))

    # -- helpers on a node ----------------------------------------------------------
    def Y(self, node: Node, e, r) -> frozenset:
        out = set()
        for e2, st in node.strips.items():
            if e2 != e and r in st.rverts:
                out |= st.attach.get(r, frozenset())
        return frozenset(out)

    def side(self, node: Node, e, keep, stand=(), pairs=(), exclude=()):
        """Solve the side instance on G[keep] plus stand-in vertices.

        ``stand`` lists (new vertex, r): the vertex is joined to X_r.
        Returns a label -> path dict or None.
        """
        g = node.inst.graph
        st = node.strips[e]
        keep = frozenset(keep)
        sg = g.subgraph(keep)
        stand_in = {}
        for v, r in stand:
            sg = sg.add_vertex(v, st.attach.get(r, frozenset()) & keep)
            if st.z_of is not None:
                stand_in[v] = st.z_of[r]
        sub = Instance(sg, tuple(_inherited(node.inst.pairs, keep, exclude)) + tuple(pairs))
        self.stats.side_calls += 1
        sol = solve_strip_subproblem(sub, st.J, st.model, stand_in, self.oracle_cap)
        if sol is None:
            return None
        return _oriented(sub, sol)

    def cont(self, node: Node, e, remove=(), add=(), pairs=(), exclude=(), interior=(),
             attach=None, splice: Splice | None = None) -> Node:
        """The continuation: delete ``remove``, add gadget vertices, reset strip e."""
        remove = frozenset(remove)
        g = node.inst.graph.remove_vertices(remove)
        for v, nbrs in add:
            g = g.add_vertex(v, [x for x in nbrs if x in g])
        vs = g.vertices
        new_pairs = tuple(_inherited(node.inst.pairs, vs, exclude)) + tuple(pairs)
        strips = {}
        for e2, st in node.strips.items():
            if e2 == e:
                strips[e2] = StripState(st.rverts, frozenset(interior),
                                        {r: frozenset((attach or {}).get(r, ())) for r in st.rverts},
                                        "done")
            else:
                strips[e2] = StripState(st.rverts, st.interior - remove,
                                        {r: a - remove for r, a in st.attach.items()},
                                        st.kind, st.J, st.z_of, st.model)
        chain = node.chain + ((splice,) if splice is not None else ())
        return Node(Instance(g, new_pairs), strips, chain)

    def removal(self, node: Node, e, D) -> Node:
        """Delete D without finishing strip e."""
        D = frozenset(D)
        g = node.inst.graph.remove_vertices(D)
        strips = {e2: StripState(st.rverts, st.interior - D, {r: a - D for r, a in st.attach.items()},
                                 st.kind, st.J, st.z_of, st.model)
                  for e2, st in node.strips.items()}
        return Node(Instance(g, tuple(node.inst.pairs)), strips, node.chain)

    # -- one strip ----------------------------------------------------------------
    def process(self, node: Node, e) -> list:
        st = node.strips[e]
        zs = [r for r in st.rverts if st.attach.get(r) and self.Y(node, e, r)]
        if len(zs) == 0:
            return self.case0(node, e)
        if len(zs) == 1:
            return self.case1(node, e, zs[0])
        return self.case2(node, e, zs[0], zs[1])

    def _mixed(self, node: Node, H) -> list:
        return [p for p in node.inst.pairs if (p.s in H) != (p.t in H)]

    def case0(self, node: Node, e) -> list:
        self.stats.hit("case0")
        st = node.strips[e]
        H = st.interior
        if self._mixed(node, H):
            return []
        if not any(v in H for p in node.inst.pairs for v in (p.s, p.t)):
            return [self.cont(node, e, remove=H)]
        sub = self.side(node, e, H)
        if sub is None:
            return []
        return [self.cont(node, e, remove=H, splice=Splice(node.inst, sub))]

    def case1(self, node: Node, e, r) -> list:
        self.stats.hit("case1")
        g = node.inst.graph
        st = node.strips[e]
        H = st.interior
        X = st.attach[r]
        Y = self.Y(node, e, r)
        tat = node.inst.terminals_at()
        pairs = node.inst.pairs
        here = node.inst
        if not any(v in tat for v in H):
            return [self.cont(node, e, remove=H)]
        tX = [v for v in sort_vertices(X) if v in tat]
        if tX:
            u = tX[0]
            for p in pairs:
                if (p.s in H and p.s != u and p.t not in H) or (p.t in H and p.t != u and p.s not in H):
                    return []
            own = [p for p in pairs if u in (p.s, p.t)]
            inside = [p for p in own if p.s in H and p.t in H]
            if len(inside) == len(own):
                if any(y in tat for y in Y):
                    return []
                sub = self.side(node, e, H)
                if sub is None:
                    return []
                return [self.cont(node, e, remove=H | Y, splice=Splice(here, sub))]
            keep_u = {r: {u}}
            if not inside:
                if len(own) >= 2:
                    return []
                sub = self.side(node, e, H - g.closed_neighbors(u))
            else:
                sub = self.side(node, e, H - (X - {u}))
            if sub is None:
                return []
            return [self.cont(node, e, remove=H - {u}, interior={u}, attach=keep_u,
                              splice=Splice(here, sub))]
        mixed = self._mixed(node, H)
        if not mixed:
            sub = self.side(node, e, H - X)
            if sub is not None:
                return [self.cont(node, e, remove=H, splice=Splice(here, sub))]
            if any(y in tat for y in Y):
                return []
            sub = self.side(node, e, H)
            if sub is None:
                return []
            return [self.cont(node, e, remove=H | Y, splice=Splice(here, sub))]
        if len(mixed) >= 2:
            return []
        p = mixed[0]
        h_end, f_end = (p.s, p.t) if p.s in H else (p.t, p.s)
        v1 = self.fresh("z")
        sub = self.side(node, e, H, stand=[(v1, r)], pairs=[TerminalPair(h_end, v1, p.label)])
        if sub is None:
            return []
        u1, w = self.fresh("u"), self.fresh("w")
        sp = Splice(here, sub, {p.label: (("sub", p.label), ("cont", p.label))},
                    frozenset({v1, u1, w}))
        return [self.cont(node, e, remove=H, add=[(u1, ()), (w, Y | {u1})],
                          pairs=[TerminalPair(u1, f_end, p.label)], interior={u1, w},
                          attach={r: {w}}, splice=sp)]

    def _kept_path(self, g: Graph, H, X1, X2):
        """Shortest path inside H from X1 to X2, or None."""
        best = None
        sub = g.subgraph(H)
        for a in sort_vertices(X1):
            for b in sort_vertices(X2):
                q = sub.shortest_path(a, b)
                if q is not None and (best is None or len(q) < len(best)):
                    best = q
        return best

    def _via_case1(self, node: Node, e, D) -> list:
        if any(v in node.inst.terminals_at() for v in D):
            return []
        return self.process(self.removal(node, e, D), e)

    def case2(self, node: Node, e, r1, r2) -> list:
        g = node.inst.graph
        st = node.strips[e]
        H = st.interior
        X1, X2 = st.attach[r1], st.attach[r2]
        Y1, Y2 = self.Y(node, e, r1), self.Y(node, e, r2)
        tat = node.inst.terminals_at()
        if not any(v in tat for v in H):
            q = self._kept_path(g, H, X1, X2)
            if q is None:
                return [self.cont(node, e, remove=H)]
            return [self.cont(node, e, remove=H - set(q), interior=set(q),
                              attach={r1: {q[0]}, r2: {q[-1]}})]
        t1 = [v for v in sort_vertices(X1) if v in tat]
        t2 = [v for v in sort_vertices(X2) if v in tat]
        if t1 and t2:
            return self.case2a(node, e, (r1, r2), (X1, X2), (Y1, Y2), t1[0], t2[0])
        if t2:
            r1, r2, X1, X2, Y1, Y2, t1 = r2, r1, X2, X1, Y2, Y1, t2
        if t1:
            return self.case2b(node, e, (r1, r2), (X1, X2), (Y1, Y2), t1[0])
        return self.case2c(node, e, (r1, r2), (X1, X2), (Y1, Y2))

    def _sides(self, node: Node, H, u):
        """'H', 'F' or 'M' by where the partners of u lie."""
        own = [p for p in node.inst.pairs if u in (p.s, p.t)]
        inside = [p for p in own if p.s in H and p.t in H]
        if len(inside) == len(own):
            return "H"
        return "F" if not inside else "M"

    def case2a(self, node, e, rs, Xs, Ys, u1, u2) -> list:
        self.stats.hit("case2a")
        g = node.inst.graph
        here = node.inst
        H = node.strips[e].interior
        (r1, r2), (X1, X2), (Y1, Y2) = rs, Xs, Ys
        for p in here.pairs:
            for a, b in ((p.s, p.t), (p.t, p.s)):
                if a in H and a not in (u1, u2) and b not in H:
                    return []
        tat = here.terminals_at()
        if any(v in tat for v in Y1 | Y2):
            both_y_ok = False
        else:
            both_y_ok = True
        Xstar = (X1 - {u1}) | (X2 - {u2})
        N1, N2 = g.closed_neighbors(u1) & H, g.closed_neighbors(u2) & H
        l1 = {p.label for p in here.pairs if u1 in (p.s, p.t)}
        l2 = {p.label for p in here.pairs if u2 in (p.s, p.t)}
        same = l1 & l2
        c1, c2 = self._sides(node, H, u1), self._sides(node, H, u2)
        both = {r1: {u1}, r2: {u2}}

        def go(keep, remove, interior, attach, exclude=(), sub_exclude=()):
            sub = self.side(node, e, keep, exclude=sub_exclude)
            if sub is None:
                return []
            return [self.cont(node, e, remove=remove, interior=interior, attach=attach,
                              exclude=exclude, splice=Splice(here, sub))]

        if same:
            i = next(iter(same))
            if c1 == "H" and c2 == "H":
                if both_y_ok:
                    sub = self.side(node, e, H)
                    if sub is not None:
                        return [self.cont(node, e, remove=H | Y1 | Y2, splice=Splice(here, sub))]
                n1, n2 = len(tat[u1]), len(tat[u2])
                if n1 == 1 and n2 == 1:
                    keep = H - N1 - N2
                elif n1 == 1:
                    keep = H - N1 - (X2 - {u2})
                elif n2 == 1:
                    keep = H - N2 - (X1 - {u1})
                else:
                    keep = H - Xstar
                return go(keep, H - {u1, u2}, {u1, u2}, both, sub_exclude={i})
            if c1 == "H" or c2 == "H":
                if c2 == "H":
                    u1, u2, X1, X2, Y1, Y2, r1, r2 = u2, u1, X2, X1, Y2, Y1, r2, r1
                if any(v in tat for v in Y1):
                    return []
                return go(H - (X2 - {u2}), (H - {u2}) | Y1, {u2}, {r2: {u2}})
            return go(H - Xstar, H - {u1, u2}, {u1, u2}, both, exclude={i})
        if c1 == "H" and c2 == "H":
            if not both_y_ok:
                return []
            return go(H, H | Y1 | Y2, set(), {})
        if c1 == "F" and c2 == "F":
            return go(H - N1 - N2, H - {u1, u2}, {u1, u2}, both)
        if c2 == "H" or (c2 == "F" and c1 == "M"):
            u1, u2, X1, X2, Y1, Y2, r1, r2, N1, N2, c1, c2 = \
                u2, u1, X2, X1, Y2, Y1, r2, r1, N2, N1, c2, c1
        # now c1 is H or F or M and c2 is F or M with the pair (c1, c2) normalised
        if c1 == "H":
            if any(v in tat for v in Y1):
                return []
            keep = H - N2 if c2 == "F" else H - (X2 - {u2})
            return go(keep, (H - {u2}) | Y1, {u2}, {r2: {u2}})
        if c1 == "F":
            return go(H - N1 - (X2 - {u2}), H - {u1, u2}, {u1, u2}, {r1: {u1}, r2: {u2}})
        return go(H - Xstar, H - {u1, u2}, {u1, u2}, {r1: {u1}, r2: {u2}})

    def _gadget_f(self, Y1, Y2):
        """u1' hung on Y1 and a path u2' - w2 hung on Y2."""
        a, b, w = self.fresh("u"), self.fresh("u"), self.fresh("w")
        add = [(a, Y1), (b, ()), (w, set(Y2) | {b})]
        return a, b, w, add

    def case2b(self, node, e, rs, Xs, Ys, u) -> list:
        self.stats.hit("case2b")
        g = node.inst.graph
        here = node.inst
        H = node.strips[e].interior
        (r1, r2), (X1, X2), (Y1, Y2) = rs, Xs, Ys
        tat = here.terminals_at()

        def other(p, x):
            return p.t if p.s == x else p.s

        loose = []          # (vertex, pair) for terminals of H - u whose partner is outside H
        for p in here.pairs:
            for a in (p.s, p.t):
                if a in H and a != u and other(p, a) not in H:
                    loose.append((a, p))
        if len(loose) >= 2:
            return []
        out = []
        for D in (X2, Y1, Y2):
            out += self._via_case1(node, e, D)

        own = [p for p in here.pairs if u in (p.s, p.t)]
        side = self._sides(node, H, u)
        Nu = g.closed_neighbors(u) & H
        hstar = H - Nu
        hprime = H - (X1 - {u})

        def branch(keep, v, sub_pairs, cont_pairs, joins, sub_exclude=()):
            sps = [TerminalPair(*sp) for sp in sub_pairs]
            sub = self.side(node, e, keep, stand=[(v, r2)], pairs=sps, exclude=sub_exclude)
            if sub is None:
                return
            a, b, w, add = gadget
            cps = [TerminalPair(*cp) for cp in cont_pairs]
            sp = Splice(here, sub, joins, frozenset({v, a, b, w}))
            out.append(self.cont(node, e, remove=H, add=add, pairs=cps, interior={a, b, w},
                                 attach={r1: {a}, r2: {w}}, splice=sp))

        gadget = self._gadget_f(Y1, Y2)
        a, b, w, _ = gadget
        if side == "F":
            if len(own) == 1:
                if len(loose) != 1:
                    return out
                (p,), (vh, ph) = own, loose[0]
                v = self.fresh("z")
                branch(hstar, v, [(vh, v, ph.label)],
                       [(a, other(p, u), p.label), (b, other(ph, vh), ph.label)],
                       {p.label: (("lit", (u,)), ("cont", p.label)),
                        ph.label: (("sub", ph.label), ("cont", ph.label))})
            else:
                if loose:
                    return out
                for pa, pb in (own, own[::-1]):
                    v = self.fresh("z")
                    branch(hprime, v, [(u, v, pb.label)],
                           [(a, other(pa, u), pa.label), (b, other(pb, u), pb.label)],
                           {pa.label: (("lit", (u,)), ("cont", pa.label)),
                            pb.label: (("sub", pb.label), ("cont", pb.label))})
        elif side == "H":
            if loose:
                return out
            q = self.fresh("q")
            for pc in own:
                v = self.fresh("z")
                keep = hstar if len(own) == 1 else hprime
                branch(keep, v, [(v, other(pc, u), pc.label)], [(a, b, q)],
                       {pc.label: (("lit", (u,)), ("cont", q), ("sub", pc.label))},
                       sub_exclude={pc.label})
        else:
            if len(loose) != 1:
                return out
            pj = next(p for p in own if other(p, u) not in H)
            vh, ph = loose[0]
            v = self.fresh("z")
            branch(hprime, v, [(vh, v, ph.label)],
                   [(a, other(pj, u), pj.label), (b, other(ph, vh), ph.label)],
                   {pj.label: (("lit", (u,)), ("cont", pj.label)),
                    ph.label: (("sub", ph.label), ("cont", ph.label))})
        return out

    def case2c(self, node, e, rs, Xs, Ys) -> list:
        self.stats.hit("case2c")
        g = node.inst.graph
        here = node.inst
        H = node.strips[e].interior
        (r1, r2), (X1, X2), (Y1, Y2) = rs, Xs, Ys
        out = []
        for D in (X1, X2, Y1, Y2):
            out += self._via_case1(node, e, D)
        loose = []
        for p in here.pairs:
            for x, y in ((p.s, p.t), (p.t, p.s)):
                if x in H and y not in H:
                    loose.append((x, y, p))
        v1, v2 = self.fresh("z"), self.fresh("z")
        a1, w1, a2, w2 = self.fresh("u"), self.fresh("w"), self.fresh("u"), self.fresh("w")
        add = [(a1, ()), (w1, set(Y1) | {a1}), (a2, ()), (w2, set(Y2) | {a2})]
        gad = dict(interior={a1, w1, a2, w2}, attach={r1: {w1}, r2: {w2}})
        drop = frozenset({v1, v2, a1, w1, a2, w2})
        stand = [(v1, r1), (v2, r2)]
        inner_pairs = [p for p in here.pairs if p.s in H and p.t in H]
        if not loose:
            q = self.fresh("q")
            sub = self.side(node, e, H, stand=stand, pairs=[TerminalPair(v1, v2, q)])
            if sub is not None:
                path = self._kept_path(g, H, X1, X2)
                sp = Splice(here, sub, q_path=tuple(path), q_label=q)
                out.append(self.cont(node, e, remove=H - set(path), interior=set(path),
                                     exclude={p.label for p in inner_pairs},
                                     attach={r1: {path[0]}, r2: {path[-1]}}, splice=sp))
                return out
            for p in inner_pairs:
                for s, t in ((p.s, p.t), (p.t, p.s)):
                    la, lb = self.fresh("a"), self.fresh("b")
                    sub = self.side(node, e, H, stand=stand, exclude={p.label},
                                    pairs=[TerminalPair(s, v1, la), TerminalPair(v2, t, lb)])
                    if sub is None:
                        continue
                    qn = self.fresh("q")
                    sp = Splice(here, sub, {p.label: (("sub", la), ("cont", qn), ("sub", lb))}, drop)
                    out.append(self.cont(node, e, remove=H, add=add, pairs=[TerminalPair(a1, a2, qn)],
                                         splice=sp, **gad))
                    return out
            return out
        if len(loose) != 2:
            return out
        (xa, ya, pa), (xb, yb, pb) = loose
        for ra, rb in ((v1, v2), (v2, v1)):
            sub = self.side(node, e, H, stand=stand,
                            pairs=[TerminalPair(xa, ra, pa.label), TerminalPair(xb, rb, pb.label)])
            if sub is None:
                continue
            fa, fb = (a1, a2) if ra == v1 else (a2, a1)
            sp = Splice(here, sub, {pa.label: (("sub", pa.label), ("cont", pa.label)),
                                    pb.label: (("sub", pb.label), ("cont", pb.label))}, drop)
            out.append(self.cont(node, e, remove=H, add=add,
                                 pairs=[TerminalPair(fa, ya, pa.label), TerminalPair(fb, yb, pb.label)],
                                 splice=sp, **gad))
        return out


# -- driver ----------------------------------------------------------------------------
@dataclass
class BranchResult:
    leaves: list
    stats: BranchStats


def _initial_node(inst: Instance, S: StripStructure) -> Node:
    strips = {}
    for e, rs in S.hyperedges:
        st = S.strips[e]
        kind = classify_strip(st)
        strips[e] = StripState(tuple(rs), st.interior & inst.graph.vertices,
                               {r: st.attach(r) & inst.graph.vertices for r in rs},
                               kind.kind if kind else "unknown", st.J, dict(st.z_of), st.model)
    return Node(inst, strips)


def check_branch_input(inst: Instance, S: StripStructure, check_w_joins: bool = True):
    g = inst.graph
    if not is_independent(inst):
        raise StripError("instance is not independent")
    if find_claw(g) is not None:
        raise StripError("graph has a claw")
    if not is_twin_free(g):
        raise StripError("graph has twins")
    if check_w_joins and find_proper_w_join(g) is not None:
        raise StripError("graph has a proper W-join")
    bad = validate_strip_structure(g, S, allow_empty=True)
    if bad:
        raise StripError("invalid strip structure: " + bad[0])


def branch_strips(inst: Instance, S: StripStructure, oracle_cap: int | None = DEFAULT_CAP,
                  check_input: bool = True, check_w_joins: bool = True) -> BranchResult:
    """Line-graph leaves whose disjunction decides ``inst``, with their splice chains."""
    if check_input:
        check_branch_input(inst, S, check_w_joins)
    stats = BranchStats()
    root = _initial_node(inst, S)
    order = [e for e in S.edge_ids() if root.strips[e].kind != "spot"]
    stripe_verts = set().union(*[root.strips[e].interior for e in order]) if order else set()
    stats.counted_k = sum(1 for p in inst.pairs if p.s in stripe_verts or p.t in stripe_verts)
    if overloaded_vertex(inst) is not None:
        return BranchResult([], stats)
    eng = _Engine(oracle_cap, stats)
    leaves = []
    stack = [(root, 0)]
    while stack:
        node, i = stack.pop()
        if i == len(order):
            leaves.append(Leaf(node.inst, node.chain))
            continue
        kids = eng.process(node, order[i])
        if not kids:
            stats.pruned += 1
        stack += [(k, i + 1) for k in reversed(kids)]
    stats.leaves = len(leaves)
    return BranchResult(leaves, stats)


def solve_leaves(inst: Instance, result: BranchResult, vdp_cap=None, line_stats=None):
    """Try the leaves in order; the first YES is lifted. Returns (answer, solution or None)."""
    from .line import solve_line_graph_instance
    for leaf in result.leaves:
        if not two_clique_neighborhoods(leaf.inst.graph):
            raise StripError("a leaf graph is not a line graph")
        kw = {} if vdp_cap is None else {"vdp_cap": vdp_cap}
        sol = solve_line_graph_instance(leaf.inst, stats=line_stats, **kw)
        if sol is None:
            continue
        try:
            paths = lift_chain(leaf.chain, _oriented(leaf.inst, sol))
            lifted = Solution.from_labels(inst, paths)
        except (SpliceError, KeyError, ValueError):
            return True, None
        return True, (None if verify_solution(inst, lifted) else lifted)
    return False, None
