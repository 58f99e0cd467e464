"""Terminal-pair instances, the independence check and the solution verifier."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

from .graph import Graph, GraphFormatError, order_key, parse_graph_lines, sort_vertices


class PropertyTwoError(ValueError):
    """Two terminal pairs coincide."""


@dataclass(frozen=True)
class TerminalPair:
    s: Hashable
    t: Hashable
    label: Hashable = None

    @property
    def ends(self) -> frozenset:
        return frozenset((self.s, self.t))


@dataclass(frozen=True)
class Instance:
    graph: Graph
    pairs: tuple[TerminalPair, ...] = ()

    def __post_init__(self):
        pairs = tuple(p if p.label is not None else TerminalPair(p.s, p.t, i)
                      for i, p in enumerate(self.pairs))
        object.__setattr__(self, "pairs", pairs)
        labels = set()
        for p in pairs:
            for x in (p.s, p.t):
                if x not in self.graph:
                    raise ValueError(f"terminal {x!r} is not a vertex")
            if p.label in labels:
                raise ValueError(f"duplicate pair label {p.label!r}")
            labels.add(p.label)
        check_property_two(pairs)

    @classmethod
    def build(cls, graph: Graph, pairs: Iterable[tuple]) -> "Instance":
        return cls(graph, tuple(TerminalPair(s, t, i) for i, (s, t) in enumerate(pairs)))

    @property
    def k(self) -> int:
        return len(self.pairs)

    def terminals_at(self) -> dict:
        """T_u as a map vertex -> list of (label, 's'|'t')."""
        out: dict = {}
        for p in self.pairs:
            out.setdefault(p.s, []).append((p.label, "s"))
            out.setdefault(p.t, []).append((p.label, "t"))
        return out

    def terminal_vertices(self) -> set:
        return {x for p in self.pairs for x in (p.s, p.t)}

    def pair(self, label) -> TerminalPair:
        for p in self.pairs:
            if p.label == label:
                return p
        raise KeyError(label)

    def with_graph(self, graph: Graph) -> "Instance":
        return Instance(graph, self.pairs)

    def with_pairs(self, pairs: Iterable[TerminalPair]) -> "Instance":
        return Instance(self.graph, tuple(pairs))

    def restrict(self, keep: Iterable) -> "Instance":
        """Induced subinstance; keeps only pairs with both terminals inside."""
        g = self.graph.subgraph(keep)
        return Instance(g, tuple(p for p in self.pairs if p.s in g and p.t in g))

    def split_components(self) -> list["Instance"] | None:
        """Per-component subinstances, or None if some pair straddles components."""
        comps = self.graph.components()
        where = {v: i for i, c in enumerate(comps) for v in c}
        for p in self.pairs:
            if where[p.s] != where[p.t]:
                return None
        return [Instance(self.graph.subgraph(c), tuple(p for p in self.pairs if p.s in c))
                for c in comps]


def check_property_two(pairs: Sequence[TerminalPair]):
    seen = {}
    for p in pairs:
        key = p.ends if p.s != p.t else frozenset((p.s,))
        if key in seen:
            raise PropertyTwoError(f"pairs {seen[key]!r} and {p.label!r} coincide")
        seen[key] = p.label


@dataclass(frozen=True)
class IndependenceReport:
    independent: bool
    adjacent_terminals: tuple = ()
    same_pair_vertices: tuple = ()


def independence_report(inst: Instance) -> IndependenceReport:
    tv = sort_vertices(inst.terminal_vertices())
    adj = tuple((u, v) for i, u in enumerate(tv) for v in tv[i + 1:] if inst.graph.has_edge(u, v))
    same = tuple(p.s for p in inst.pairs if p.s == p.t)
    return IndependenceReport(not adj and not same, adj, same)


def is_independent(inst: Instance) -> bool:
    return independence_report(inst).independent


@dataclass(frozen=True)
class Solution:
    paths: tuple[tuple, ...] = field(default_factory=tuple)

    @classmethod
    def from_labels(cls, inst: Instance, by_label: dict) -> "Solution":
        return cls(tuple(tuple(by_label[p.label]) for p in inst.pairs))

    def by_label(self, inst: Instance) -> dict:
        return {p.label: list(path) for p, path in zip(inst.pairs, self.paths)}


def verify_solution(inst: Instance, sol: Solution) -> list[str]:
    """Violations of the mutually-induced conditions; empty means the solution is valid."""
    g = inst.graph
    out: list[str] = []
    if len(sol.paths) != len(inst.pairs):
        return [f"expected {len(inst.pairs)} paths, got {len(sol.paths)}"]
    for i, (p, path) in enumerate(zip(inst.pairs, sol.paths)):
        if not path:
            out.append(f"path {i + 1}: empty")
            continue
        if {path[0], path[-1]} != {p.s, p.t} or (p.s != p.t and len(path) < 2):
            out.append(f"path {i + 1}: does not join {p.s!r} and {p.t!r}")
        if len(set(path)) != len(path):
            out.append(f"path {i + 1}: repeats a vertex")
        for v in path:
            if v not in g:
                out.append(f"path {i + 1}: unknown vertex {v!r}")
        if out:
            continue
        for a, b in zip(path, path[1:]):
            if not g.has_edge(a, b):
                out.append(f"path {i + 1}: {a!r}-{b!r} is not an edge")
        for x in range(len(path)):
            for y in range(x + 2, len(path)):
                if g.has_edge(path[x], path[y]):
                    out.append(f"path {i + 1}: chord {path[x]!r}-{path[y]!r} (not induced)")
    if out:
        return out
    ends = [{path[0], path[-1]} for path in sol.paths]
    inner = [set(path[1:-1]) for path in sol.paths]
    verts = [set(path) for path in sol.paths]
    for i in range(len(sol.paths)):
        for j in range(len(sol.paths)):
            if i == j:
                continue
            if i < j:
                for v in sort_vertices(verts[i] & verts[j]):
                    if not (v in ends[i] and v in ends[j]):
                        out.append(f"paths {i + 1},{j + 1}: share {v!r} which is not an end of both")
            for u in sort_vertices(inner[i]):
                for v in sort_vertices(g.neighbors(u) & verts[j]):
                    if not (v in ends[i] and v in ends[j]):
                        out.append(f"paths {i + 1},{j + 1}: inner {u!r} adjacent to {v!r}")
    return out


# -- file formats ----------------------------------------------------------
def parse_instance(text: str) -> Instance:
    g, extra = parse_graph_lines(text.splitlines(), allow=("t",))
    pairs = []
    for lineno, tok in extra:
        if len(tok) != 3:
            raise GraphFormatError("expected 't <s> <t>'", lineno)
        try:
            s, t = int(tok[1]), int(tok[2])
        except ValueError:
            raise GraphFormatError("non-integer terminal", lineno) from None
        for x in (s, t):
            if x not in g:
                raise GraphFormatError(f"terminal {x} is not a vertex", lineno)
        pairs.append(TerminalPair(s, t, len(pairs)))
    try:
        return Instance(g, tuple(pairs))
    except PropertyTwoError as exc:
        raise PropertyTwoError(str(exc)) from None


def format_instance(inst: Instance, comments: Iterable[str] = ()) -> str:
    from .graph import format_graph

    text = format_graph(inst.graph, comments)
    return text + "".join(f"t {p.s} {p.t}\n" for p in inst.pairs)


def format_solution(sol: Solution) -> str:
    return "".join(f"path {i}: {' '.join(str(v) for v in path)}\n"
                   for i, path in enumerate(sol.paths, 1))


def parse_solution(text: str) -> Solution:
    paths: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c") or line in ("YES", "NO"):
            continue
        head, _, rest = line.partition(":")
        tok = head.split()
        if len(tok) != 2 or tok[0] != "path" or not _:
            raise GraphFormatError(f"expected 'path <i>: v1 ... vL', got {line!r}", lineno)
        try:
            idx = int(tok[1])
            verts = tuple(int(x) for x in rest.split())
        except ValueError:
            raise GraphFormatError("non-integer in path line", lineno) from None
        if idx in paths:
            raise GraphFormatError(f"duplicate path {idx}", lineno)
        paths[idx] = verts
    if sorted(paths) != list(range(1, len(paths) + 1)):
        raise GraphFormatError("path indices must be 1..k")
    return Solution(tuple(paths[i] for i in sorted(paths)))


def induced_path_ok(g: Graph, path: Sequence) -> bool:
    return all(g.has_edge(a, b) for a, b in zip(path, path[1:])) and not any(
        g.has_edge(path[x], path[y]) for x in range(len(path)) for y in range(x + 2, len(path)))


__all__ = [
    "TerminalPair", "Instance", "Solution", "IndependenceReport", "PropertyTwoError",
    "independence_report", "is_independent", "verify_solution", "parse_instance",
    "format_instance", "format_solution", "parse_solution", "order_key",
]
