"""Instance generators: reduction gadgets and seeded random families.

Random choices come from a 64-bit linear congruential generator (the
MMIX constants), so a (family, n, k, seed) triple gives the same instance
in any implementation that follows the same draw order.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass

from .circular_arc import ArcModel, format_arc_model, validate_arc_model
from .graph import Graph, line_graph, relabel_consecutive, sort_vertices
from .instance import Instance, TerminalPair, format_instance
from .strips import Strip, StripStructure, clique_sets, format_strip_structure, is_stripe, validate_strip_structure

LCG_A = 6364136223846793005
LCG_C = 1442695040888963407
MASK = (1 << 64) - 1
FAMILIES = ("line", "proper-ca", "stripe-fixture")


class GeneratorError(ValueError):
    pass


class LCG:
    def __init__(self, seed: int):
        self.state = seed & MASK

    def next(self) -> int:
        self.state = (LCG_A * self.state + LCG_C) & MASK
        return self.state

    def below(self, n: int) -> int:
        """Uniform-ish integer in [0, n) from the high 32 bits."""
        if n <= 0:
            raise ValueError("empty range")
        return (self.next() >> 32) % n

    def between(self, lo: int, hi: int) -> int:
        return lo + self.below(hi - lo + 1)

    def chance(self, num: int, den: int) -> bool:
        return self.below(den) < num

    def choice(self, seq):
        return seq[self.below(len(seq))]

    def shuffle(self, seq: list) -> list:
        for i in range(len(seq) - 1, 0, -1):
            j = self.below(i + 1)
            seq[i], seq[j] = seq[j], seq[i]
        return seq

    def sample(self, seq, m: int) -> list:
        return self.shuffle(list(seq))[:m]


# -- reduction gadgets -----------------------------------------------------------
def gen_clique_itm(g: Graph, k: int) -> tuple[Graph, Graph]:
    """Host L(G) and pattern L(K_k); G has a k-clique iff the pattern is an induced topological minor."""
    if k < 4:
        raise GeneratorError("clique reduction needs k >= 4")
    host, _ = line_graph(g)
    pattern, _ = line_graph(Graph.from_edges(itertools.combinations(range(k), 2)))
    return host, pattern


def gen_k14_idp(base: Graph, a, b, pairing: int = 0) -> Instance:
    """Two-pair instance from a 2-in-a-cycle instance on a graph of maximum degree 3.

    The two edges at a and at b are subdivided and the four new vertices become
    terminals. ``pairing`` picks which new vertex near b is matched with which
    near a; the base has an induced cycle through a and b iff one of the two
    pairings is a YES instance.
    """
    if max((base.degree(v) for v in base), default=0) > 3:
        raise GeneratorError("base graph has a vertex of degree above 3")
    if base.degree(a) != 2 or base.degree(b) != 2 or a == b:
        raise GeneratorError("the two cycle vertices must be distinct and of degree 2")
    g = base
    new = {}
    nxt = max([v for v in base if isinstance(v, int)] + [0]) + 1
    for x in (a, b):
        for y in sort_vertices(base.neighbors(x)):
            if (y, x) in new:
                continue
            if {x, y} == {a, b}:
                # edge ab gets two new vertices so the four terminals stay distinct
                ma, mb = nxt, nxt + 1
                nxt += 2
                g = g.remove_edges([(a, b)]).add_vertex(ma, [a]).add_vertex(mb, [ma, b])
                new[(a, b)], new[(b, a)] = ma, mb
                continue
            m = nxt
            nxt += 1
            g = g.remove_edges([(x, y)]).add_vertex(m, [x, y])
            new[(x, y)] = m
    sa = [new[(a, y)] for y in sort_vertices(base.neighbors(a))]
    sb = [new[(b, y)] for y in sort_vertices(base.neighbors(b))]
    if pairing:
        sb.reverse()
    return Instance.build(g, [(sa[0], sb[0]), (sa[1], sb[1])])


def gen_dp_to_idp_line(g: Graph, pairs) -> Instance:
    """Disjoint Paths on (G, pairs) as Induced Disjoint Paths on the line graph of G plus pendants."""
    term = sort_vertices({x for p in pairs for x in p})
    gp = g
    pend = {}
    for v in term:
        pend[v] = ("pend", v)
        gp = gp.add_vertex(pend[v], [v])
    lg, pm = line_graph(gp)
    at = pm.vertex_of_edge()
    return Instance.build(lg, [(at[frozenset((s, pend[s]))], at[frozenset((t, pend[t]))])
                               for s, t in pairs])


# -- random families ----------------------------------------------------------------
@dataclass
class Generated:
    inst: Instance
    family: str
    n: int
    k: int
    seed: int
    arc_model: ArcModel | None = None
    strips: StripStructure | None = None

    def header(self) -> str:
        return (f"c generator family={self.family} n={self.n} k={self.k} seed={self.seed} "
                f"lcg={LCG_A},{LCG_C}")


def _random_pairs(rng: LCG, g: Graph, k: int, independent: bool = False) -> list:
    vs = sort_vertices(g)
    if independent:
        chosen = []
        for v in rng.shuffle(list(vs)):
            if not (g.neighbors(v) & set(chosen)):
                chosen.append(v)
        vs = sort_vertices(chosen)
    if len(vs) < 2:
        return []
    pairs, seen = [], set()
    tries = 0
    while len(pairs) < k and tries < 50 * (k + 1):
        tries += 1
        s, t = rng.sample(vs, 2)
        if frozenset((s, t)) in seen:
            continue
        seen.add(frozenset((s, t)))
        pairs.append((s, t))
    return pairs


def _gen_line(rng: LCG, n: int, k: int):
    hv = max(3, n // 2 + 1)
    cand = list(itertools.combinations(range(hv), 2))
    edges = rng.sample(cand, min(n, len(cand)))
    lg, _ = line_graph(Graph.from_edges(edges))
    g, _ = relabel_consecutive(lg, 1)
    return Instance.build(g, _random_pairs(rng, g, k)), None, None


def _gen_proper_ca(rng: LCG, n: int, k: int):
    C = 3 * n
    for _ in range(1000):
        starts = sorted(rng.sample(range(C), n))
        arcs, prev_end = {}, None
        ok = True
        for i, s in enumerate(starts):
            length = rng.between(2, max(2, C // 3))
            e = s + length
            if prev_end is not None and e <= prev_end:
                e = prev_end + 1
            if e - s >= C:
                ok = False
                break
            arcs[i + 1] = (s, e % C)
            prev_end = e
        if not ok:
            continue
        model = ArcModel(C, arcs, True)
        if not model.is_proper():
            continue
        g = model.graph()
        if validate_arc_model(g, model, proper=True):
            continue
        return Instance.build(g, _random_pairs(rng, g, k)), model, None
    raise GeneratorError("could not draw a proper circular-arc model")


def _stripe(rng: LCG, ids, a, b):
    """A proper interval stripe with z_a at the left end and z_b at the right end."""
    m = rng.between(2, 5)
    L = rng.between(2, 3)
    pos = [1]
    for _ in range(m - 1):
        pos.append(pos[-1] + rng.between(1, L - 1))
    vs = [next(ids) for _ in range(m)]
    za, zb = next(ids), next(ids)
    arcs = {v: (p, p + L) for v, p in zip(vs, pos)}
    arcs[za] = (pos[0] - L + 1, pos[0] + 1)
    arcs[zb] = (pos[-1] + L - 1, pos[-1] + 2 * L - 1)
    lo = min(s for s, _ in arcs.values())
    arcs = {v: (s - lo, e - lo) for v, (s, e) in arcs.items()}
    model = ArcModel(max(e for _, e in arcs.values()) + 2, arcs, True)
    st = Strip(model.graph(), {a: za, b: zb}, model)
    return st if is_stripe(st) else None


def _gen_stripe_fixture(rng: LCG, n: int, k: int):
    for _ in range(1000):
        nr = rng.between(2, 5)
        ids = itertools.count(1)
        hyper, strips = [], {}
        for e in range(rng.between(nr, nr + 3)):
            # the first nr - 1 hyperedges form a spanning tree, so G is connected
            a, b = (e + 1, rng.below(e + 1)) if e < nr - 1 else rng.sample(range(nr), 2)
            if rng.chance(1, 2):
                x, za, zb = next(ids), next(ids), next(ids)
                strips[e] = Strip(Graph.from_edges([(za, x), (x, zb)]), {a: za, b: zb})
            else:
                st = _stripe(rng, ids, a, b)
                if st is None:
                    break
                strips[e] = st
            hyper.append((e, (a, b)))
        else:
            S = StripStructure(tuple(range(nr)), tuple(hyper), strips)
            edges, V = set(), set()
            for st in strips.values():
                V |= st.interior
                edges |= {(u, v) for u, v in st.J.edges() if u in st.interior and v in st.interior}
            for c in clique_sets(S).values():
                edges |= set(itertools.combinations(sort_vertices(c), 2))
            if len(V) > n or len(V) < 4:
                continue
            g = Graph.from_edges(edges, V)
            if validate_strip_structure(g, S):
                continue
            g, S = _renumber(g, S)
            # terminals inside stripes and pairwise non-adjacent, so the structure survives Rule 4
            inst = Instance.build(g, _random_pairs(rng, g, k, independent=True))
            return inst, None, S
    raise GeneratorError("could not draw a stripe fixture of this size")


def _renumber(g: Graph, S: StripStructure):
    g2, fwd = relabel_consecutive(g, 1)
    nxt = itertools.count(len(g) + 1)
    strips = {}
    for e, st in S.strips.items():
        m = {v: fwd[v] if v in st.interior else next(nxt) for v in sort_vertices(st.J)}
        model = None
        if st.model is not None:
            model = ArcModel(st.model.circumference, {m[v]: a for v, a in st.model.arcs.items()},
                             st.model.proper)
        strips[e] = Strip(st.J.relabel(m), {r: m[z] for r, z in st.z_of.items()}, model)
    return g2, StripStructure(S.r_vertices, S.hyperedges, strips)


def gen_random(family: str, n: int, k: int, seed: int) -> Generated:
    if family not in FAMILIES:
        raise GeneratorError(f"unknown family {family!r}")
    if not 3 <= n <= 200 or not 0 <= k <= 20:
        raise GeneratorError("need 3 <= n <= 200 and 0 <= k <= 20")
    rng = LCG(seed)
    fn = {"line": _gen_line, "proper-ca": _gen_proper_ca, "stripe-fixture": _gen_stripe_fixture}[family]
    inst, model, S = fn(rng, n, k)
    return Generated(inst, family, n, k, seed, model, S)


# -- corpus files ---------------------------------------------------------------------
def write_generated(gen: Generated, directory: str, stem: str) -> dict:
    """Write instance (+ arcs/strips) files; returns the manifest fields."""
    os.makedirs(directory, exist_ok=True)
    fields = {"inst": stem + ".idp", "family": gen.family, "seed": str(gen.seed)}
    with open(os.path.join(directory, fields["inst"]), "w") as fh:
        fh.write(gen.header() + "\n" + format_instance(gen.inst))
    if gen.arc_model is not None:
        fields["arcs"] = stem + ".arc"
        with open(os.path.join(directory, fields["arcs"]), "w") as fh:
            fh.write(format_arc_model(gen.arc_model))
    if gen.strips is not None:
        fields["strips"] = stem + ".strips"
        with open(os.path.join(directory, fields["strips"]), "w") as fh:
            fh.write(format_strip_structure(gen.strips))
    return fields


def format_manifest_line(fields: dict) -> str:
    order = ["inst", "expect", "family", "seed", "arcs", "strips"]
    return " ".join(f"{key}={fields[key]}" for key in order if key in fields)


def parse_manifest(text: str) -> list[dict]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = {}
        for tok in line.split():
            key, sep, val = tok.partition("=")
            if not sep:
                raise ValueError(f"line {lineno}: expected key=value, got {tok!r}")
            fields[key] = val
        if "inst" not in fields or fields.get("expect") not in ("YES", "NO"):
            raise ValueError(f"line {lineno}: needs inst=<file> and expect=YES|NO")
        out.append(fields)
    return out
