"""Command-line entry point.

Exit codes: 0 success (including BothStuck verdicts), 1 source diagnostics,
2 Disagree, 3 Budget (out of fuel), 4 internal error, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import fg_ast as fg
from . import fg_interp
from . import tl_ast as tl
from . import tl_interp
from .diagnostics import FgError
from .fg_parser import parse_program, print_program
from .gen import GenConfig, gen_program
from .relate import (
    AGREE, BOTH_STUCK, BUDGET, DEFAULT_EVAL_FUEL, DEFAULT_RELATION_FUEL,
    DISAGREE, diff_run, program_hash, verdict_json,
)
from .translate import require_translation

EXIT_OK = 0
EXIT_DIAGNOSTICS = 1
EXIT_DISAGREE = 2
EXIT_BUDGET = 3
EXIT_INTERNAL = 4
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _build_parser():
    p = _Parser(prog="fgdict",
                description="Compile a Go-like structurally-typed core language "
                            "to an untyped functional target via dictionary "
                            "passing, and compare their behavior.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, **kw):
        sp = sub.add_parser(name, **kw)
        sp.add_argument("--ext", action="store_true",
                        help="enable int/bool primitives and var bindings")
        return sp

    sp = add("parse", help="parse a source file and echo its canonical form")
    sp.add_argument("file")

    sp = add("check", help="report well-formedness and type diagnostics")
    sp.add_argument("file")

    sp = add("compile", help="translate a source file to the target language")
    sp.add_argument("file")
    sp.add_argument("-o", "--output", metavar="OUT.tl")
    sp.add_argument("--hoist-helpers", action="store_true",
                    help="emit shared upcast/downcast helpers as named bindings")

    sp = add("run-fg", help="evaluate main under the source semantics")
    sp.add_argument("file")
    sp.add_argument("--steps", type=int, default=DEFAULT_EVAL_FUEL)
    sp.add_argument("--trace", action="store_true")

    sp = add("run-tl", help="evaluate a compiled target-language file")
    sp.add_argument("file")
    sp.add_argument("--steps", type=int, default=DEFAULT_EVAL_FUEL)
    sp.add_argument("--trace", action="store_true")

    sp = add("diff", help="run both semantics and relate the results")
    sp.add_argument("file")
    sp.add_argument("--steps", type=int, default=DEFAULT_EVAL_FUEL)
    sp.add_argument("--rel-fuel", type=int, default=DEFAULT_RELATION_FUEL)
    sp.add_argument("--json", action="store_true")

    sp = add("fuzz", help="generate random programs and diff each one")
    sp.add_argument("--count", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--steps", type=int, default=DEFAULT_EVAL_FUEL)
    sp.add_argument("--rel-fuel", type=int, default=DEFAULT_RELATION_FUEL)
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--keep-failures", metavar="DIR",
                    help="write programs with Disagree verdicts to DIR")
    return p


def _mode(args):
    return fg.EXT if args.ext else fg.CORE


def _load(args):
    with open(args.file, encoding="utf-8") as f:
        text = f.read()
    return parse_program(text, mode=_mode(args), filename=args.file)


def _print_diags(err: FgError):
    for d in err.diagnostics:
        print(str(d), file=sys.stderr)


def _cmd_parse(args):
    prog = _load(args)
    sys.stdout.write(print_program(prog))
    return EXIT_OK


def _cmd_check(args):
    prog = _load(args)
    diags = fg.check_wellformed(prog)
    if not diags:
        res = require_translation(prog)
        print(f"ok: main has type {res.main_type}")
        return EXIT_OK
    for d in diags:
        print(str(d), file=sys.stderr)
    return EXIT_DIAGNOSTICS


def _cmd_compile(args):
    prog = _load(args)
    fg.require_wellformed(prog)
    res = require_translation(prog, hoist_helpers=args.hoist_helpers)
    text = tl.print_program(res.tl_program)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _report_eval(out, value_printer):
    if isinstance(out, (fg_interp.Value, tl_interp.Value)):
        print(f"{value_printer(out.value)}")
        print(f"-- {out.steps} steps", file=sys.stderr)
        return EXIT_OK
    if isinstance(out, (fg_interp.StuckOutcome, tl_interp.StuckOutcome)):
        print(f"stuck after {out.steps} steps: {out.reason}: {out.detail}",
              file=sys.stderr)
        return EXIT_OK
    print(f"out of fuel after {out.steps} steps", file=sys.stderr)
    return EXIT_BUDGET


def _cmd_run_fg(args):
    from .fg_parser import print_expr
    prog = _load(args)
    fg.require_wellformed(prog)
    require_translation(prog)
    trace = None
    if args.trace:
        trace = lambda n, rule, text: print(f"[{n}] {rule}: {text}", file=sys.stderr)
    out = fg_interp.fg_eval(prog.table, prog.main, args.steps, trace=trace)
    return _report_eval(out, print_expr)


def _cmd_run_tl(args):
    with open(args.file, encoding="utf-8") as f:
        text = f.read()
    prog = tl.parse_program(text)
    problems = tl.validate_program(prog)
    if problems:
        for msg in problems:
            print(f"{args.file}: {msg}", file=sys.stderr)
        return EXIT_DIAGNOSTICS
    trace = None
    if args.trace:
        trace = lambda n, rule, text: print(f"[{n}] {rule}: {text}", file=sys.stderr)
    out = tl_interp.run_program(prog, args.steps, trace=trace)
    return _report_eval(out, tl.print_expr)


def _emit_verdict(prog, verdict, args, seed=None):
    if args.json:
        print(json.dumps(verdict_json(prog, verdict, args.steps, args.rel_fuel,
                                      seed=seed)))
        return
    from .fg_parser import print_expr
    line = f"{verdict.kind}"
    if verdict.kind == AGREE:
        line += f": {print_expr(verdict.fg_value)}"
    elif verdict.kind == BOTH_STUCK:
        line += f": fg {verdict.fg_reason}, tl {verdict.tl_reason}"
    elif verdict.detail:
        line += f": {verdict.detail}"
    line += f" (fg {verdict.fg_steps} steps, tl {verdict.tl_steps} steps)"
    if seed is not None:
        line = f"seed {seed}: {line}"
    print(line)


def _cmd_diff(args):
    prog = _load(args)
    verdict = diff_run(prog, fuel=args.steps, rel_fuel=args.rel_fuel)
    _emit_verdict(prog, verdict, args)
    return verdict.exit_code()


def _cmd_fuzz(args):
    import os
    worst = EXIT_OK
    counts = {AGREE: 0, BOTH_STUCK: 0, DISAGREE: 0, BUDGET: 0}
    for i in range(args.count):
        seed = args.seed + i
        prog = gen_program(GenConfig(seed=seed, mode=_mode(args)))
        verdict = diff_run(prog, fuel=args.steps, rel_fuel=args.rel_fuel)
        counts[verdict.kind] += 1
        _emit_verdict(prog, verdict, args, seed=seed)
        if verdict.kind == DISAGREE and args.keep_failures:
            os.makedirs(args.keep_failures, exist_ok=True)
            path = os.path.join(args.keep_failures,
                                f"seed-{seed}-{program_hash(prog)}.fg")
            with open(path, "w", encoding="utf-8") as f:
                f.write(print_program(prog))
        worst = max(worst, verdict.exit_code())
    summary = ", ".join(f"{k} {v}" for k, v in counts.items())
    print(f"-- {args.count} programs: {summary}", file=sys.stderr)
    return worst


_COMMANDS = {
    "parse": _cmd_parse,
    "check": _cmd_check,
    "compile": _cmd_compile,
    "run-fg": _cmd_run_fg,
    "run-tl": _cmd_run_tl,
    "diff": _cmd_diff,
    "fuzz": _cmd_fuzz,
}


def cli_dispatch(argv) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    try:
        return _COMMANDS[args.command](args)
    except FgError as err:
        _print_diags(err)
        return EXIT_DIAGNOSTICS
    except OSError as err:
        print(f"fgdict: {err}", file=sys.stderr)
        return EXIT_DIAGNOSTICS
    except Exception as err:  # internal error
        print(f"fgdict: internal error: {err!r}", file=sys.stderr)
        return EXIT_INTERNAL


def main():
    raise SystemExit(cli_dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
