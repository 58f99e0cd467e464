"""The full solver: reductions, then whichever structural solver applies.

Order of attempts per connected component: terminal rules, a small
independence number (exact search), twins and W-joins, a supplied arc
model, a strip structure (supplied, or the all-spot one of a line graph)
with branching and the line-graph solver. If none applies the exact
search runs under its size cap, otherwise the answer is UNSUPPORTED.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .branching import branch_strips, solve_leaves, solve_with_arcs
from .circular_arc import ArcModel, validate_arc_model
from .graph import SizeLimitError, find_claw, independence_number, preimage
from .instance import Instance, Solution, verify_solution
from .line import LineStats, solve_line_graph_instance
from .oracle import DEFAULT_CAP, solve_idp_exact
from .reductions import (PreconditionError, lift_solution, make_independent, overloaded_vertex,
                         remove_w_joins)
from .strips import (StripError, StripStructure, restrict_structure, strip_structure_from_line_graph,
                     validate_strip_structure)

MODES = ("auto", "oracle", "line", "ca", "strip")
VDP_NOTE = ("disjoint paths in the preimage found by exhaustive search: exponential time, "
            "not the polynomial bound of a fixed-k disjoint paths algorithm")


@dataclass
class SolveOptions:
    mode: str = "auto"
    alpha_cutoff: int = 4
    arc_model: ArcModel | None = None
    strips: StripStructure | None = None
    oracle_cap: int | None = DEFAULT_CAP
    decision_only: bool = False


@dataclass
class SolveResult:
    status: str                       # YES | NO | UNSUPPORTED
    solution: Solution | None = None
    reason: str = ""
    diagnostics: list = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return self.solution is not None


class Unsupported(Exception):
    pass


def solve(inst: Instance, options: SolveOptions | None = None) -> SolveResult:
    opts = options or SolveOptions()
    if opts.mode not in MODES:
        raise ValueError(f"unknown mode {opts.mode!r}")
    claw = find_claw(inst.graph)
    if claw is not None:
        raise PreconditionError(f"graph has a claw centred at {claw[0]!r}")
    diag = []
    if opts.mode == "oracle":
        try:
            sol = solve_idp_exact(inst, cap=opts.oracle_cap)
        except SizeLimitError as exc:
            return SolveResult("UNSUPPORTED", reason=str(exc), diagnostics=["oracle: " + str(exc)])
        return _finish(inst, sol, opts, ["oracle: exact search"])
    comps = inst.split_components()
    if comps is None:
        return SolveResult("NO", diagnostics=["a pair joins two components"])
    paths = {}
    certified = True
    for c in comps:
        if c.k == 0:
            continue
        try:
            ans, sol = _solve_component(c, opts, diag)
        except Unsupported as exc:
            diag.append(f"unsupported: {exc}")
            return SolveResult("UNSUPPORTED", reason=str(exc), diagnostics=diag)
        if not ans:
            return SolveResult("NO", diagnostics=diag)
        if sol is None:
            certified = False
        else:
            paths.update(sol.by_label(c))
    if not certified:
        diag.append("certificate could not be rebuilt; decision only")
        return SolveResult("YES", diagnostics=diag)
    return _finish(inst, Solution.from_labels(inst, paths), opts, diag)


def _finish(inst, sol, opts, diag) -> SolveResult:
    if sol is None:
        return SolveResult("NO", diagnostics=diag)
    bad = verify_solution(inst, sol)
    if bad:
        diag.append("certificate failed verification; decision only: " + bad[0])
        return SolveResult("YES", diagnostics=diag)
    return SolveResult("YES", None if opts.decision_only else sol, diagnostics=diag)


def _solve_component(c: Instance, opts: SolveOptions, diag: list):
    """(answer, solution or None) for one connected component."""
    mode = opts.mode
    if mode == "ca" or (mode == "auto" and opts.arc_model is not None):
        model = _model_for(c, opts.arc_model)
        if model is not None:
            diag.append("circular-arc solver on supplied model")
            sol = solve_with_arcs(c, model, prefer_proper=model.proper)
            return sol is not None, sol
        if mode == "ca":
            raise Unsupported("arc model missing or inconsistent with the graph")
    if mode == "line":
        if preimage(c.graph) is None:
            raise Unsupported("graph is not a line graph")
        stats = LineStats()
        sol = solve_line_graph_instance(c, stats=stats)
        diag.append(f"line graph: {stats.preimage_instances} preimage instances (bound {stats.bound})")
        diag.append(VDP_NOTE)
        return sol is not None, sol

    red, tr = make_independent(c, check_claws=False)
    diag.append(f"rules 1-4: {len(tr)} steps")
    if overloaded_vertex(red) is not None:
        diag.append("a vertex carries three terminals")
        return False, None
    if red.k == 0:
        return True, lift_solution(c, tr, red, Solution(()))
    if mode == "auto":
        try:
            alpha = independence_number(red.graph)
        except SizeLimitError:
            alpha = None
        if alpha is not None and alpha <= opts.alpha_cutoff:
            try:
                sol = solve_idp_exact(red, cap=opts.oracle_cap)
                diag.append(f"independence number {alpha}: exact search")
                return sol is not None, None if sol is None else lift_solution(c, tr, red, sol)
            except SizeLimitError:
                diag.append(f"independence number {alpha} but graph above oracle cap")
    red2, tr2 = remove_w_joins(red)
    diag.append(f"twins and W-joins: {len(tr2)} steps")
    tr.extend(tr2)
    ans, sol = _structural(red2, opts, diag)
    if ans is None:
        if opts.oracle_cap is not None and len(c.graph) > opts.oracle_cap:
            raise Unsupported(f"no decomposition applies and {len(c.graph)} vertices exceed the "
                              f"oracle cap {opts.oracle_cap}")
        diag.append("no decomposition applies: exact search")
        sol = solve_idp_exact(c, cap=None)
        return sol is not None, sol
    if not ans or sol is None:
        return ans, None
    return True, lift_solution(c, tr, red2, sol)


def _model_for(c: Instance, model: ArcModel | None):
    if model is None or not set(c.graph.vertices) <= set(model.arcs):
        return None
    m = model.restrict(c.graph.vertices)
    return None if validate_arc_model(c.graph, m) else m


def _structural(red: Instance, opts: SolveOptions, diag: list):
    """Strip branching plus the line-graph solver; (None, None) if neither applies."""
    S = None
    if opts.strips is not None:
        S2 = restrict_structure(opts.strips, red.graph.vertices)
        bad = validate_strip_structure(red.graph, S2, allow_empty=True)
        if bad:
            diag.append("supplied strip structure does not fit the reduced graph: " + bad[0])
        else:
            S = S2
    if S is None:
        if preimage(red.graph) is None:
            return None, None
        stats = LineStats()
        sol = solve_line_graph_instance(red, stats=stats)
        diag.append(f"line graph: {stats.preimage_instances} preimage instances (bound {stats.bound})")
        diag.append(VDP_NOTE)
        return sol is not None, sol
    try:
        res = branch_strips(red, S)
    except StripError as exc:
        diag.append(f"strip branching refused: {exc}")
        return None, None
    diag.append(f"strip branching: {res.stats.leaves} leaves (bound {res.stats.bound})")
    ans, sol = solve_leaves(red, res)
    if ans and sol is None:
        diag.append("leaf certificate could not be spliced back")
    return ans, sol


__all__ = ["MODES", "SolveOptions", "SolveResult", "solve", "strip_structure_from_line_graph"]
