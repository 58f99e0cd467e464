"""Strip structures: the data model, its validator and the line-graph builder.

The branching engine that turns a claw-free instance with a strip
structure into line-graph instances lives in ``branching``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from .circular_arc import ArcModel, parse_arc_model, validate_arc_model
from .graph import (Graph, GraphFormatError, independence_number, is_claw_free, order_key,
                    preimage, sort_vertices)


class StripError(ValueError):
    pass


@dataclass(frozen=True)
class Strip:
    J: Graph
    z_of: dict                   # r-vertex -> its vertex of Z in J
    model: ArcModel | None = None  # optional arc model of J (z vertices included)

    @property
    def Z(self) -> frozenset:
        return frozenset(self.z_of.values())

    @property
    def interior(self) -> frozenset:
        return self.J.vertices - self.Z

    def attach(self, r) -> frozenset:
        """Interior vertices adjacent to z_r."""
        return self.J.neighbors(self.z_of[r]) - self.Z


@dataclass(frozen=True)
class StripKind:
    kind: str          # spot | stripe1 | stripe2 | stripe0
    solver_class: str  # proper-circular-arc | proper-interval | alpha<=3 | alpha<=4 | line


@dataclass(frozen=True)
class StripStructure:
    r_vertices: tuple
    hyperedges: tuple            # (id, tuple of r-vertices)
    strips: dict = field(default_factory=dict)

    def edge_ids(self) -> list:
        return [e for e, _ in self.hyperedges]

    def rverts_of(self, e) -> tuple:
        for eid, rs in self.hyperedges:
            if eid == e:
                return rs
        raise KeyError(e)


def is_spot(strip: Strip) -> bool:
    J, Z = strip.J, strip.Z
    if len(J) != 3 or len(Z) != 2 or J.num_edges() != 2:
        return False
    a, b = sort_vertices(Z)
    return not J.has_edge(a, b) and len(strip.interior) == 1


def is_stripe(strip: Strip) -> bool:
    J, Z = strip.J, strip.Z
    if not J.is_independent(Z):
        return False
    return all(len(J.neighbors(v) & Z) <= 1 for v in J)


def _is_interval(model: ArcModel) -> bool:
    covered = set()
    for v in model.arcs:
        covered |= model.points(v)
        if len(covered) == model.circumference:
            return False
    return True


def classify_strip(strip: Strip, alpha_cap: int = 40) -> StripKind | None:
    """Kind and solver class of a strip, or None if it fits no allowed class."""
    if is_spot(strip):
        return StripKind("spot", "line")
    if not is_stripe(strip):
        return None
    nz = len(strip.Z)
    model = strip.model
    proper = model is not None and model.is_proper() and not validate_arc_model(strip.J, model)
    if nz >= 3:
        return None
    if proper and nz <= 1:
        return StripKind(f"stripe{nz}", "proper-circular-arc")
    if proper and nz == 2 and _is_interval(model):
        return StripKind("stripe2", "proper-interval")
    limit = 3 if nz == 1 else 4
    if len(strip.J) <= alpha_cap and independence_number(strip.J, cap=None) <= limit:
        return StripKind(f"stripe{nz}", f"alpha<={limit}")
    return None


def validate_strip_structure(g: Graph, S: StripStructure, allow_empty: bool = False,
                             classify: bool = True) -> list[str]:
    """Violations of the strip-structure axioms; empty means valid."""
    out = []
    rset = set(S.r_vertices)
    ids = [e for e, _ in S.hyperedges]
    if len(set(ids)) != len(ids):
        out.append("duplicate hyperedge id")
    for e, rs in S.hyperedges:
        if not set(rs) <= rset:
            out.append(f"hyperedge {e!r} uses unknown r-vertices")
        if e not in S.strips:
            out.append(f"hyperedge {e!r} has no strip")
    if out:
        return out
    owner: dict = {}
    for e, rs in S.hyperedges:
        st = S.strips[e]
        if set(st.z_of) != set(rs):
            out.append(f"strip {e!r}: z map does not match the hyperedge")
            continue
        if len(st.Z) != len(rs):
            out.append(f"strip {e!r}: z map is not injective")
        if not st.Z <= st.J.vertices:
            out.append(f"strip {e!r}: z vertex outside J")
            continue
        if not is_claw_free(st.J):
            out.append(f"strip {e!r}: J has a claw")
        inner = st.interior
        if not inner and not allow_empty:
            out.append(f"strip {e!r}: empty interior")
        for v in inner:
            if v not in g:
                out.append(f"strip {e!r}: interior vertex {v!r} not in G")
            elif v in owner:
                out.append(f"vertex {v!r} lies in strips {owner[v]!r} and {e!r}")
            else:
                owner[v] = e
        inside = [v for v in inner if v in g]
        if st.J.subgraph(inside) != g.subgraph(inside):
            out.append(f"strip {e!r}: J and G disagree on the interior")
        if classify and classify_strip(st) is None:
            out.append(f"strip {e!r}: neither a spot nor a stripe of an allowed class")
        if st.model is not None:
            bad = validate_arc_model(st.J, st.model)
            if bad:
                out.append(f"strip {e!r}: arc model mismatch ({bad[0]})")
    missing = sort_vertices(set(g.vertices) - set(owner))
    if missing:
        out.append(f"vertices {missing[:5]} lie in no strip")
    if out:
        return out
    C = clique_sets(S)
    covered = set()
    for r in sort_vertices(C):
        cv = C[r]
        if not g.is_clique(cv):
            out.append(f"C_{r!r} is not a clique in G")
        for a in cv:
            for b in cv:
                if a != b:
                    covered.add((a, b))
    for u, v in g.edges():
        if owner[u] == owner[v] or (u, v) in covered:
            continue
        out.append(f"edge {u!r}-{v!r} lies in no strip interior and no C_v")
    return out


def clique_sets(S: StripStructure) -> dict:
    C = {r: set() for r in S.r_vertices}
    for e, rs in S.hyperedges:
        for r in rs:
            C[r] |= S.strips[e].attach(r)
    return C


def strip_structure_from_line_graph(g: Graph) -> StripStructure:
    """One spot per vertex of G, on the preimage of G."""
    pm = preimage(g)
    if pm is None:
        raise StripError("graph is not a line graph")
    rname = {h: i for i, h in enumerate(sort_vertices(pm.preimage))}
    hyper, strips = [], {}
    for i, x in enumerate(sort_vertices(g)):
        a, b = (rname[h] for h in pm.edge_of[x])
        za, zb = ("z", a), ("z", b)
        J = Graph.from_edges([(za, x), (x, zb)])
        hyper.append((i, (a, b)))
        strips[i] = Strip(J, {a: za, b: zb})
    return StripStructure(tuple(sorted(rname.values())), tuple(hyper), strips)


def restrict_structure(S: StripStructure, keep) -> StripStructure:
    """The structure on an induced subgraph; strips may become empty."""
    keep = set(keep)
    strips = {}
    for e, st in S.strips.items():
        vs = [v for v in st.J if v in keep or v in st.Z]
        model = st.model.restrict(vs) if st.model is not None else None
        strips[e] = Strip(st.J.subgraph(vs), dict(st.z_of), model)
    return StripStructure(S.r_vertices, S.hyperedges, strips)


# -- file format ---------------------------------------------------------------------
def parse_strip_structure(text: str, base_dir: str = ".") -> StripStructure:
    rverts, hyper = [], []
    blocks: dict = {}
    cur = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        tok = raw.split()
        if not tok or tok[0] == "c":
            continue
        head = tok[0]
        try:
            if head == "rvertex":
                rverts += [int(x) for x in tok[1:]]
            elif head == "hedge":
                hyper.append((int(tok[1]), tuple(int(x) for x in tok[2:])))
            elif head == "strip":
                cur = int(tok[1])
                if cur in blocks:
                    raise GraphFormatError(f"duplicate strip {cur}", lineno)
                blocks[cur] = {"jv": [], "je": [], "z": {}, "arcs": None}
            elif cur is None:
                raise GraphFormatError(f"{head!r} outside a strip block", lineno)
            elif head == "jv":
                blocks[cur]["jv"] += [int(x) for x in tok[1:]]
            elif head == "je":
                if len(tok) != 3:
                    raise GraphFormatError("expected 'je <u> <v>'", lineno)
                blocks[cur]["je"].append((int(tok[1]), int(tok[2])))
            elif head == "z":
                for item in tok[1:]:
                    r, _, v = item.partition("=")
                    blocks[cur]["z"][int(r)] = int(v)
            elif head == "arcs":
                path = os.path.join(base_dir, tok[1])
                with open(path) as fh:
                    blocks[cur]["arcs"] = fh.read()
            elif head in ("circle", "a", "proper"):
                blocks[cur]["arcs"] = (blocks[cur]["arcs"] or "") + raw + "\n"
            else:
                raise GraphFormatError(f"unknown record {head!r}", lineno)
        except (ValueError, IndexError) as exc:
            if isinstance(exc, GraphFormatError):
                raise
            raise GraphFormatError(f"malformed {head!r} line", lineno) from None
    strips = {}
    for e, b in blocks.items():
        J = Graph.from_edges(b["je"], b["jv"])
        model = parse_arc_model(b["arcs"]) if b["arcs"] else None
        strips[e] = Strip(J, b["z"], model)
    return StripStructure(tuple(rverts), tuple(hyper), strips)


def format_strip_structure(S: StripStructure) -> str:
    """Text form; z vertices that are not integers get fresh integer ids."""
    lines = ["rvertex " + " ".join(str(r) for r in S.r_vertices)] if S.r_vertices else []
    lines += [f"hedge {e} " + " ".join(str(r) for r in rs) for e, rs in S.hyperedges]
    for e, _ in S.hyperedges:
        st = S.strips[e]
        nxt = max([v for v in st.J if isinstance(v, int)] + [0]) + 1
        name = {}
        for v in sort_vertices(st.J):
            if isinstance(v, int):
                name[v] = v
            else:
                name[v] = nxt
                nxt += 1
        lines.append(f"strip {e}")
        lines.append("jv " + " ".join(str(name[v]) for v in sort_vertices(st.J)))
        lines += [f"je {name[u]} {name[v]}" for u, v in st.J.edges()]
        lines.append("z " + " ".join(f"{r}={name[z]}" for r, z in sorted(st.z_of.items())))
        if st.model is not None:
            m = st.model
            lines.append(f"circle {m.circumference}")
            if m.proper:
                lines.append("proper")
            lines += [f"a {name[v]} {s} {t}" for v, (s, t) in sorted(m.arcs.items(), key=lambda kv: order_key(name[kv[0]]))]
    return "\n".join(lines) + "\n"
