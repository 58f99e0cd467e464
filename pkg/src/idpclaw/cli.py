"""Command-line interface.

Exit codes: 0 finished with YES (or OK), 3 finished with NO, 2 UNSUPPORTED,
1 any error (bad flags, unreadable or malformed files, failed checks).
"""

from __future__ import annotations

import argparse
import os
import sys

from .circular_arc import parse_arc_model, validate_arc_model
from .generators import (FAMILIES, GeneratorError, format_manifest_line, gen_clique_itm, gen_dp_to_idp_line,
                         gen_k14_idp, gen_random, parse_manifest, write_generated)
from .graph import GraphFormatError, format_graph, parse_graph, relabel_consecutive
from .instance import Instance, format_instance, format_solution, parse_instance, parse_solution, verify_solution
from .oracle import DEFAULT_CAP
from .pipeline import MODES, SolveOptions, solve
from .reductions import PreconditionError, reduce_all
from .strips import StripError, parse_strip_structure, validate_strip_structure

EXIT_YES, EXIT_ERROR, EXIT_UNSUPPORTED, EXIT_NO = 0, 1, 2, 3


class CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(message)


def _read(path: str) -> str:
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from None


def _load(path: str, parse):
    try:
        return parse(_read(path))
    except GraphFormatError as exc:
        raise CliError(f"{path}: {exc}") from None


def _load_strips(path: str):
    return _load(path, lambda text: parse_strip_structure(text, os.path.dirname(path) or "."))


def _options(args) -> SolveOptions:
    return SolveOptions(
        mode=args.mode,
        arc_model=_load(args.arcs, parse_arc_model) if args.arcs else None,
        strips=_load_strips(args.strips) if args.strips else None,
        oracle_cap=None if args.cap is not None and args.cap <= 0 else (args.cap or DEFAULT_CAP),
        decision_only=args.decision_only,
        alpha_cutoff=args.alpha_cutoff,
    )


def _report(res, out, show_diag: bool) -> int:
    if show_diag:
        for d in res.diagnostics:
            out.write(f"c {d}\n")
    if res.status == "YES":
        out.write("YES\n")
        if res.solution is not None:
            out.write(format_solution(res.solution))
        return EXIT_YES
    if res.status == "NO":
        out.write("NO\n")
        return EXIT_NO
    out.write(f"UNSUPPORTED {res.reason}\n")
    return EXIT_UNSUPPORTED


# -- subcommands ------------------------------------------------------------------------
def cmd_solve(args, out) -> int:
    inst = _load(args.input, parse_instance)
    return _report(solve(inst, _options(args)), out, args.diagnostics)


def cmd_oracle(args, out) -> int:
    inst = _load(args.input, parse_instance)
    cap = None if args.cap is not None and args.cap <= 0 else (args.cap or DEFAULT_CAP)
    return _report(solve(inst, SolveOptions(mode="oracle", oracle_cap=cap)), out, False)


def cmd_verify(args, out) -> int:
    inst = _load(args.input, parse_instance)
    sol = _load(args.solution, parse_solution)
    bad = verify_solution(inst, sol)
    if bad:
        for line in bad:
            out.write(line + "\n")
        return EXIT_ERROR
    out.write("OK\n")
    return EXIT_YES


def cmd_reduce(args, out) -> int:
    inst = _load(args.input, parse_instance)
    red, tr = reduce_all(inst)
    if args.dump_transcript:
        with open(args.dump_transcript, "w") as fh:
            fh.write(tr.dump())
    g, fwd = relabel_consecutive(red.graph, 1)
    renamed = Instance(g, tuple(type(p)(fwd[p.s], fwd[p.t], p.label) for p in red.pairs))
    comments = [f"reduced from {args.input}: {len(tr)} steps"]
    comments += [f"map {new} {old}" for old, new in sorted(fwd.items())]
    if len(g):
        out.write(format_instance(renamed, comments))
    else:
        out.write("".join(f"c {c}\n" for c in comments) + "p idp 0 0\n")
    return EXIT_YES


def cmd_validate(args, out) -> int:
    inst = _load(args.input, parse_instance)
    bad = []
    if args.strips:
        bad += validate_strip_structure(inst.graph, _load_strips(args.strips))
    if args.arcs:
        bad += validate_arc_model(inst.graph, _load(args.arcs, parse_arc_model))
    if not args.strips and not args.arcs:
        raise CliError("validate needs --strips and/or --arcs")
    for line in bad:
        out.write(line + "\n")
    if bad:
        return EXIT_ERROR
    out.write("OK\n")
    return EXIT_YES


def _expected(gen_inst) -> str:
    res = solve(gen_inst, SolveOptions(mode="oracle", oracle_cap=None))
    return res.status


def cmd_generate(args, out) -> int:
    fam = args.family
    if fam in FAMILIES:
        gen = gen_random(fam, args.n, args.k, args.seed)
        if args.out:
            fields = write_generated(gen, args.out, f"{fam}-n{args.n}-k{args.k}-s{args.seed}")
            fields["expect"] = _expected(gen.inst)
            out.write(format_manifest_line(fields) + "\n")
        else:
            out.write(gen.header() + "\n" + format_instance(gen.inst))
        return EXIT_YES
    if fam == "corpus":
        if not args.out:
            raise CliError("generate corpus needs --out")
        lines = []
        for i in range(args.count):
            family = FAMILIES[i % len(FAMILIES)]
            seed = args.seed + i
            gen = gen_random(family, args.n, args.k, seed)
            fields = write_generated(gen, args.out, f"{family}-{i:04d}")
            fields["expect"] = _expected(gen.inst)
            lines.append(format_manifest_line(fields))
        path = os.path.join(args.out, "manifest.txt")
        with open(path, "w") as fh:
            fh.write("\n".join(lines) + "\n")
        out.write(f"wrote {len(lines)} instances to {path}\n")
        return EXIT_YES
    if fam == "clique-itm":
        host, pattern = gen_clique_itm(_load(args.graph, parse_graph), args.k)
        out.write("c host\n" + format_graph(relabel_consecutive(host, 1)[0]))
        out.write("c pattern\n" + format_graph(relabel_consecutive(pattern, 1)[0]))
        return EXIT_YES
    if fam == "k14":
        inst = gen_k14_idp(_load(args.graph, parse_graph), args.a, args.b, args.pairing)
        out.write(format_instance(inst))
        return EXIT_YES
    if fam == "dp-line":
        base = _load(args.input, parse_instance)
        inst = gen_dp_to_idp_line(base.graph, [(p.s, p.t) for p in base.pairs])
        g, fwd = relabel_consecutive(inst.graph, 1)
        out.write(format_instance(Instance(g, tuple(type(p)(fwd[p.s], fwd[p.t], p.label)
                                                    for p in inst.pairs))))
        return EXIT_YES
    raise CliError(f"unknown family {fam!r}")


def cmd_corpus_check(args, out) -> int:
    base = os.path.dirname(args.manifest) or "."
    entries = _load(args.manifest, parse_manifest_checked)
    diffs = 0
    for e in entries:
        inst = _load(os.path.join(base, e["inst"]), parse_instance)
        opts = SolveOptions(
            mode=args.mode,
            arc_model=_load(os.path.join(base, e["arcs"]), parse_arc_model) if "arcs" in e else None,
            strips=_load_strips(os.path.join(base, e["strips"])) if "strips" in e else None)
        res = solve(inst, opts)
        bad_cert = res.solution is not None and verify_solution(inst, res.solution)
        if res.status != e["expect"] or bad_cert:
            diffs += 1
            out.write(f"DIFF {e['inst']} expected {e['expect']} got {res.status}"
                      f"{' (invalid certificate)' if bad_cert else ''}\n")
    out.write(f"checked {len(entries)} instances, {diffs} diffs\n")
    return EXIT_YES if diffs == 0 else EXIT_ERROR


def parse_manifest_checked(text: str):
    try:
        return parse_manifest(text)
    except ValueError as exc:
        raise CliError(f"manifest: {exc}") from None


# -- parser -----------------------------------------------------------------------------
def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="idpclaw", description="Induced disjoint paths in claw-free graphs")
    p.add_argument("--jobs", type=int, default=1, help="accepted for compatibility; work runs serially")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", help="decide an instance")
    s.add_argument("--input", required=True)
    s.add_argument("--arcs")
    s.add_argument("--strips")
    s.add_argument("--mode", choices=MODES, default="auto")
    s.add_argument("--cap", type=int, help="oracle size cap (0 = none)")
    s.add_argument("--alpha-cutoff", type=int, default=4)
    s.add_argument("--decision-only", action="store_true")
    s.add_argument("--diagnostics", action="store_true", help="print the route taken as comments")
    s.set_defaults(fn=cmd_solve)

    s = sub.add_parser("oracle", help="decide an instance by exhaustive search")
    s.add_argument("--input", required=True)
    s.add_argument("--cap", type=int, help="size cap (0 = none)")
    s.set_defaults(fn=cmd_oracle)

    s = sub.add_parser("verify", help="check a solution file")
    s.add_argument("--input", required=True)
    s.add_argument("--solution", required=True)
    s.set_defaults(fn=cmd_verify)

    s = sub.add_parser("reduce", help="apply Rules 1-4, twin and W-join removal")
    s.add_argument("--input", required=True)
    s.add_argument("--dump-transcript")
    s.set_defaults(fn=cmd_reduce)

    s = sub.add_parser("validate", help="check a strip structure or arc model against a graph")
    s.add_argument("--input", required=True)
    s.add_argument("--strips")
    s.add_argument("--arcs")
    s.set_defaults(fn=cmd_validate)

    s = sub.add_parser("generate", help="emit generated instances")
    s.add_argument("family", help=f"one of {', '.join(FAMILIES)}, corpus, clique-itm, k14, dp-line")
    s.add_argument("--n", type=int, default=10)
    s.add_argument("--k", type=int, default=2)
    s.add_argument("--seed", type=int, default=1)
    s.add_argument("--count", type=int, default=30)
    s.add_argument("--out")
    s.add_argument("--graph", help="base graph file (clique-itm, k14)")
    s.add_argument("--input", help="disjoint-paths instance (dp-line)")
    s.add_argument("--a", type=int, help="first cycle vertex (k14)")
    s.add_argument("--b", type=int, help="second cycle vertex (k14)")
    s.add_argument("--pairing", type=int, choices=(0, 1), default=0)
    s.set_defaults(fn=cmd_generate)

    s = sub.add_parser("corpus-check", help="re-solve a manifest and compare answers")
    s.add_argument("--manifest", required=True)
    s.add_argument("--mode", choices=MODES, default="auto")
    s.set_defaults(fn=cmd_corpus_check)
    return p


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return args.fn(args, out)
    except CliError as exc:
        err.write(f"error: {exc}\n")
    except (PreconditionError, StripError, GeneratorError, ValueError) as exc:
        err.write(f"error: {exc}\n")
    return EXIT_ERROR


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
