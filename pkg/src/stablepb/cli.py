"""Command line interface: ``stablepb solve|check|enum|equiv|translate|gen``.

Exit codes: 0 when models are found / equivalence holds / the check is
true, 1 when none are found / programs differ / the check is false,
2 on usage or runtime errors.
"""
from __future__ import annotations

import argparse
import logging
import sys

from . import generators
from .analysis import format_loops, tight_on
from .driver import pbmodels_solve, status_line
from .equivalence import strongly_equivalent, uniformly_equivalent
from .errors import StablePBError
from .pbsolver import BackendConfig
from .program import AUX_PREFIX, Program, normalize, parse_program, render_program
from .semantics import enum_models, enum_stable, enum_supported, is_stable, is_supported
from .translate import completion, emit_opb, render_formula, translate_program

EXIT_YES, EXIT_NO, EXIT_ERROR = 0, 1, 2


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load(path: str) -> Program:
    return normalize(parse_program(_read(path)))[0]


def _visible(p: Program, m) -> list[str]:
    return sorted(n for n in p.names(m) if not n.startswith(AUX_PREFIX))


def _print_answers(p: Program, models, out):
    for i, m in enumerate(models, 1):
        print(f"Answer: {i}", file=out)
        print(" ".join(_visible(p, m)), file=out)
        print(file=out)


def _backend(spec: str, timeout) -> BackendConfig:
    if spec == "builtin":
        return BackendConfig("builtin", timeout=timeout)
    if spec.startswith("ext:"):
        return BackendConfig("external", spec[4:], timeout)
    raise ValueError(f"unknown solver {spec!r} (use builtin or ext:\"CMD {{opb}}\")")


def _sorted_models(p, models):
    return sorted(models, key=lambda m: (len(m), _visible(p, m)))


def cmd_solve(args, out) -> int:
    p = _load(args.file)
    cfg = _backend(args.solver, args.timeout)
    if args.dump_completion:
        for f in completion(p):
            print(render_formula(f, p.atoms), file=out)
        print(file=out)
    if args.dump_opb:
        t, _ = translate_program(p)
        with open(args.dump_opb, "w", encoding="utf-8") as fh:
            fh.write(emit_opb(t))
    models, trace = pbmodels_solve(p, cfg, args.models)
    if args.trace_loops:
        for i, it in enumerate(trace.iterations, 1):
            cand = " ".join(_visible(p, it.candidate))
            verdict = "stable" if it.stable else "refuted"
            sys.stderr.write(f"% iteration {i}: candidate {{{cand}}} {verdict}\n")
            sys.stderr.write(format_loops(it.loops, p.atoms))
    if trace.diagnostic:
        print(f"stablepb: solver: {trace.diagnostic}", file=sys.stderr)
    _print_answers(p, models, out)
    print(status_line(models, trace), file=out)
    return EXIT_YES if models else EXIT_NO


def cmd_check(args, out) -> int:
    p = _load(args.file)
    names = [s.strip() for s in args.model.split(",") if s.strip()]
    m = frozenset(p.atoms.intern(n) for n in names)
    if args.stable:
        ok = is_stable(p, m)
    elif args.supported:
        ok = is_supported(p, m)
    else:
        ok = tight_on(p, m)
    print("true" if ok else "false", file=out)
    return EXIT_YES if ok else EXIT_NO


def cmd_enum(args, out) -> int:
    p = _load(args.file)
    if args.stable:
        found, label = enum_stable(p), "Stable models"
    elif args.supported:
        found, label = enum_supported(p), "Supported models"
    else:
        found, label = enum_models(p), "Models"
    models = _sorted_models(p, found)
    _print_answers(p, models, out)
    print(f"{label}: {len(models)}", file=out)
    return EXIT_YES if models else EXIT_NO


def _pair_text(p, pair):
    return f"({{{', '.join(_visible(p, pair.x))}}}, {{{', '.join(_visible(p, pair.y))}}})"


def cmd_equiv(args, out) -> int:
    p = parse_program(_read(args.p))
    q = parse_program(_read(args.q))
    check = strongly_equivalent if args.strong else uniformly_equivalent
    kind = "strongly" if args.strong else "uniformly"
    v = check(normalize(p)[0], normalize(q)[0])
    if v.equivalent:
        print(f"{kind} equivalent", file=out)
        return EXIT_YES
    print(f"not {kind} equivalent", file=out)
    if args.witness:
        models = "SE" if args.strong else "UE"
        shown = Program((), v.atoms)
        print(f"witness: {_pair_text(shown, v.witness)} is an {models}-model of "
              f"{v.witness_side} only", file=out)
        if v.context is not None:
            print("context:", file=out)
            out.write(render_program(v.context))
        elif v.note:
            print(f"note: {v.note}", file=out)
    return EXIT_NO


def cmd_translate(args, out) -> int:
    p = _load(args.file)
    t, _ = translate_program(p)
    text = emit_opb(t)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)
    return EXIT_YES


def _gen_params(tokens):
    params = {}
    for tok in tokens:
        key, sep, val = tok.partition("=")
        if not sep:
            raise ValueError(f"expected key=value, got {tok!r}")
        params[key.strip()] = int(val)
    return params


def cmd_gen(args, out) -> int:
    params = _gen_params(args.params)
    inst = generators.make_instance(args.kind, params, args.seed)
    shown = " ".join(f"{k}={v}" for k, v in sorted(params.items()))
    header = f"% {args.kind} {shown} seed={args.seed}\n".replace("  ", " ")
    text = header + render_program(inst.program)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)
    return EXIT_YES


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="stablepb",
                                 description="Stable models of weight-constraint programs via PB solving")
    ap.add_argument("-v", "--verbose", action="store_true", help="log progress to standard error")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="compute stable models with the lazy loop-formula driver")
    s.add_argument("file")
    s.add_argument("--solver", default="builtin", help='builtin or ext:"CMD {opb}"')
    s.add_argument("--models", type=int, default=1, help="number of models, 0 for all")
    s.add_argument("--timeout", type=float, default=None, help="per solver call, in seconds")
    s.add_argument("--dump-opb", metavar="PATH")
    s.add_argument("--dump-completion", action="store_true")
    s.add_argument("--trace-loops", action="store_true")
    s.set_defaults(run=cmd_solve)

    c = sub.add_parser("check", help="test one interpretation")
    c.add_argument("file")
    c.add_argument("--model", required=True, help="comma separated atoms")
    g = c.add_mutually_exclusive_group(required=True)
    g.add_argument("--stable", action="store_true")
    g.add_argument("--supported", action="store_true")
    g.add_argument("--tight", action="store_true")
    c.set_defaults(run=cmd_check)

    e = sub.add_parser("enum", help="brute-force enumeration (small programs only)")
    e.add_argument("file")
    g = e.add_mutually_exclusive_group(required=True)
    g.add_argument("--stable", action="store_true")
    g.add_argument("--supported", action="store_true")
    g.add_argument("--models", action="store_true")
    e.set_defaults(run=cmd_enum)

    q = sub.add_parser("equiv", help="strong or uniform equivalence of two programs")
    q.add_argument("p")
    q.add_argument("q")
    g = q.add_mutually_exclusive_group(required=True)
    g.add_argument("--strong", action="store_true")
    g.add_argument("--uniform", action="store_true")
    q.add_argument("--witness", action="store_true")
    q.set_defaults(run=cmd_equiv)

    t = sub.add_parser("translate", help="write the completion as OPB")
    t.add_argument("file")
    t.add_argument("--to", choices=["opb"], required=True)
    t.add_argument("-o", "--output")
    t.set_defaults(run=cmd_translate)

    n = sub.add_parser("gen", help="generate a benchmark program")
    n.add_argument("kind", choices=sorted(generators.KINDS))
    n.add_argument("params", nargs="*", help="key=value instance parameters")
    n.add_argument("--seed", type=int, default=0)
    n.add_argument("-o", "--output")
    n.set_defaults(run=cmd_gen)
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_YES
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    try:
        return args.run(args, out)
    except (StablePBError, ValueError, OSError) as exc:
        print(f"stablepb: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
