"""notears: a small dependently-typed proof checker with an NbE kernel."""

import sys

from .checker import Checker, Context, GlobalEnv, axiom_closure, check, check_declaration, infer
from .errors import CheckError, Diagnostic
from .nbe import evaluate, normalize, readback
from .parser import read_module, read_term
from .syntax import pretty, scope_audit, shift

# elaborating the library nests deeply; the default limit is too tight
if sys.getrecursionlimit() < 20000:
    sys.setrecursionlimit(20000)

__all__ = [
    "Checker",
    "CheckError",
    "Context",
    "Diagnostic",
    "GlobalEnv",
    "axiom_closure",
    "check",
    "check_declaration",
    "evaluate",
    "infer",
    "normalize",
    "pretty",
    "read_module",
    "read_term",
    "readback",
    "scope_audit",
    "shift",
]
