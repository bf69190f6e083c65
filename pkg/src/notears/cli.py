"""Command-line driver: ``check``, ``normalize`` and ``axioms``."""

from __future__ import annotations

import argparse
import sys
import threading
from typing import Optional, Sequence

from .checker import Checker, Context, GlobalEnv, axiom_closure
from .driver import Loader, check_files, default_search_path, load_module, manifest
from .errors import CheckError
from .nbe import fuel_limit, readback
from .parser import parse_term, resolve_term
from .syntax import Span, pretty

_STACK = 512 * 1024 * 1024
_COMMAND_LINE = Span("<command-line>", 1, 1, 1, 1)


def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--path", action="append", metavar="DIR", help="module search directory (repeatable)")
    common.add_argument("--fuel", type=_positive, metavar="N", help="bound on evaluation/conversion steps")
    common.add_argument("--jobs", type=_positive, default=1, metavar="N", help="check independent files in parallel")

    p = argparse.ArgumentParser(prog="notears", description="A small dependently-typed proof checker.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", parents=[common], help="check files and their imports")
    c.add_argument("files", nargs="+", metavar="FILE")

    n = sub.add_parser("normalize", parents=[common], help="print the normal form and type of an expression")
    n.add_argument("-m", "--module", metavar="NAME", help="module providing the environment")
    n.add_argument("expression")

    a = sub.add_parser("axioms", parents=[common], help="list the axioms a declaration depends on")
    a.add_argument("-m", "--module", metavar="NAME", help="module to load (default: the whole bundled library)")
    a.add_argument("name")
    return p


def _environment(module: Optional[str], args) -> GlobalEnv:
    if module:
        return load_module(module, default_search_path(args.path), args.fuel)
    return GlobalEnv()


def cmd_check(args) -> int:
    result = check_files(args.files, default_search_path(args.path), args.fuel, args.jobs)
    for d in result.diagnostics:
        print(d.render(), file=sys.stderr)
    print(f"checked {result.declaration_count} declarations in {len(result.modules)} files")
    return 0 if result.ok else 1


def cmd_normalize(args) -> int:
    env = _environment(args.module, args)
    t = resolve_term(parse_term(args.expression, "<expression>"), env.names())
    with fuel_limit(args.fuel):
        elaborated, ty = Checker(env).infer(Context(), t)
        nf = readback(0, Checker(env).eval(Context(), elaborated))
        print(f"{pretty(nf, [])} : {pretty(readback(0, ty), [])}")
    return 0


def cmd_axioms(args) -> int:
    if args.module:
        env = _environment(args.module, args)
    else:
        loader = Loader(default_search_path(args.path), args.fuel)
        for m in manifest():
            loader.add_module(m)
        result = loader.check()
        if not result.ok:
            raise next(m.error for m in result.modules if m.error)
        env = GlobalEnv()
        for m in result.modules:
            env = env.merge(m.env)
    try:
        names = axiom_closure(args.name, env)
    except CheckError as e:
        raise e.with_span(_COMMAND_LINE)
    for name in sorted(names):
        print(name)
    return 0


_COMMANDS = {"check": cmd_check, "normalize": cmd_normalize, "axioms": cmd_axioms}


def run(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except CheckError as e:
        print(e.render(), file=sys.stderr)
        return e.exit_code
    except RecursionError:
        print("<input>:1:1: error: NestingTooDeep: input nests too deeply", file=sys.stderr)
        return 1


def main(argv: Optional[Sequence[str]] = None) -> int:
    # deep elaboration recurses far; give it a roomy stack
    box: list = []

    def target() -> None:
        try:
            box.append(run(argv))
        except SystemExit as e:  # argparse usage errors
            box.append(e.code if isinstance(e.code, int) else 2)

    threading.stack_size(_STACK)
    worker = threading.Thread(target=target)
    worker.start()
    worker.join()
    return box[0] if box else 2


if __name__ == "__main__":
    sys.exit(main())
