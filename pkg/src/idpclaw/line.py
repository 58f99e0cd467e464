"""Induced disjoint paths in line graphs via vertex-disjoint paths in the preimage."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .graph import Graph, preimage, sort_vertices
from .instance import Instance, Solution, verify_solution
from .oracle import VDP_CAP, solve_vdp_exact
from .reductions import lift_solution, make_independent, overloaded_vertex


class NotLineGraphError(ValueError):
    pass


@dataclass
class LineStats:
    preimage_instances: int = 0
    bound: int = 1


def _pinned_instances(h: Graph, edge_of: dict, inst: Instance):
    """Yield (H', vdp pairs, pendant -> terminal vertex) for every endpoint assignment.

    Each terminal occurrence gets a new pendant vertex hung on the endpoint
    of its edge where the path continues. A terminal vertex carrying one
    terminal has its other endpoint removed; with two terminals the two
    occurrences leave through different endpoints.
    """
    tat = inst.terminals_at()
    tverts = sort_vertices(tat)
    choices = []
    for x in tverts:
        a, b = edge_of[x]
        if len(tat[x]) == 1:
            choices.append([(a,), (b,)])
        else:
            choices.append([(a, b), (b, a)])
    nxt = itertools.count()
    for combo in itertools.product(*choices):
        hp = h.remove_edges([edge_of[x] for x in tverts])
        drop = []
        pend_of = {}
        pend_x = {}
        for x, conts in zip(tverts, combo):
            a, b = edge_of[x]
            if len(conts) == 1:
                drop.append(b if conts[0] == a else a)
            for (label, end), c in zip(tat[x], conts):
                p = ("pin", next(nxt))
                hp = hp.add_vertex(p, [c])
                pend_of[(label, end)] = p
                pend_x[p] = x
        hp = hp.remove_vertices(drop)
        pairs = [(pend_of[(q.label, "s")], pend_of[(q.label, "t")]) for q in inst.pairs]
        yield hp, pairs, pend_x


def solve_line_graph_instance(inst: Instance, vdp_cap: int | None = VDP_CAP,
                              stats: LineStats | None = None) -> Solution | None:
    stats = stats if stats is not None else LineStats()
    if preimage(inst.graph) is None:
        raise NotLineGraphError("graph is not a line graph")
    red, tr = make_independent(inst, check_claws=False)
    stats.bound = 4 ** inst.k
    if red.k == 0:
        return lift_solution(inst, tr, red, Solution(()))
    if overloaded_vertex(red) is not None:
        return None
    pm = preimage(red.graph)
    if pm is None:
        raise NotLineGraphError("reduced graph is not a line graph")
    h = pm.preimage
    vertex_of = pm.vertex_of_edge()
    for hp, pairs, pend_x in _pinned_instances(h, pm.edge_of, red):
        stats.preimage_instances += 1
        paths = solve_vdp_exact(hp, pairs, cap=vdp_cap)
        if paths is None:
            continue
        by_label = {}
        for q, hpath in zip(red.pairs, paths):
            inner = [vertex_of[frozenset(e)] for e in zip(hpath[1:-2], hpath[2:-1])]
            by_label[q.label] = [pend_x[hpath[0]]] + inner + [pend_x[hpath[-1]]]
        sol = Solution.from_labels(red, by_label)
        bad = verify_solution(red, sol)
        assert not bad, bad
        return lift_solution(inst, tr, red, sol)
    return None
