"""Loading ``.hott`` modules along their import graph and checking them."""

from __future__ import annotations

import json
import os
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from .checker import Checker, GlobalEnv
from .errors import CheckError, Diagnostic, LoadError
from .lexer import lex
from .nbe import fuel_limit
from .parser import ModuleFile, parse_module, resolve
from .syntax import Span

STDLIB_DIR = Path(__file__).resolve().parent / "stdlib"
EXTENSION = ".hott"
_WORKER_STACK = 256 * 1024 * 1024


def _display(path: Path) -> str:
    """Path as shown in diagnostics: relative to the working directory when below it."""
    rel = os.path.relpath(path)
    return str(path) if rel.startswith("..") else rel


def default_search_path(paths: Optional[Sequence[str]] = None) -> list[Path]:
    """``paths`` if given, else ``$NOTEARS_PATH``; the bundled library comes last."""
    if paths:
        out = [Path(p) for p in paths]
    else:
        env = os.environ.get("NOTEARS_PATH", "")
        out = [Path(p) for p in env.split(":") if p]
    out.append(STDLIB_DIR)
    return out


@dataclass
class Module:
    name: str
    path: Path
    display: str
    source: Optional[ModuleFile] = None
    imports: list[str] = field(default_factory=list)  # keys of imported modules
    env: Optional[GlobalEnv] = None
    declared: list[str] = field(default_factory=list)
    error: Optional[CheckError] = None
    skipped: bool = False


@dataclass
class Result:
    modules: list[Module]
    diagnostics: list[Diagnostic]
    env: Optional[GlobalEnv]

    @property
    def ok(self) -> bool:
        return not self.diagnostics

    @property
    def declaration_count(self) -> int:
        return sum(len(m.declared) for m in self.modules)


class Loader:
    def __init__(self, search_path: Optional[Sequence[Path]] = None, fuel: Optional[int] = None, jobs: int = 1):
        self.search_path = list(search_path) if search_path is not None else default_search_path()
        self.fuel = fuel
        self.jobs = max(1, jobs)
        self.modules: dict[str, Module] = {}
        self.order: list[str] = []

    # -- graph construction

    def locate(self, name: str, near: Optional[Path], span: Optional[Span]) -> Path:
        dirs = list(self.search_path)
        if near is not None:
            dirs.insert(len(dirs) - 1, near)
        for d in dirs:
            candidate = d / f"{name}{EXTENSION}"
            if candidate.is_file():
                return candidate.resolve()
        raise LoadError("ModuleNotFound", f"cannot find module '{name}' on the search path", span)

    def add_file(self, path: Path) -> str:
        path = Path(path)
        if not path.is_file():
            raise LoadError("FileNotFound", f"no such file: {path}", Span(str(path), 1, 1, 1, 1))
        return self._visit(path.resolve(), [], None)

    def add_module(self, name: str) -> str:
        return self._visit(self.locate(name, None, None), [], None)

    def _visit(self, path: Path, stack: list[str], span: Optional[Span]) -> str:
        key = str(path)
        if key in stack:
            cycle = " -> ".join(Path(k).stem for k in stack[stack.index(key):] + [key])
            raise LoadError("ImportCycle", f"import cycle: {cycle}", span)
        if key in self.modules:
            return key
        mod = Module(path.stem, path, _display(path))
        try:
            text = path.read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as exc:
            raise LoadError("ReadError", f"cannot read {path}: {exc}", span) from None
        try:
            mod.source = parse_module(lex(text, mod.display), mod.name)
        except CheckError as e:
            mod.error = e
        if mod.source is not None:
            for imp in mod.source.imports:
                target = self.locate(imp.name, path.parent, imp.span)
                mod.imports.append(self._visit(target, stack + [key], imp.span))
        self.modules[key] = mod
        self.order.append(key)  # post-order: dependencies first
        return key

    # -- checking

    def _imports_env(self, mod: Module) -> Optional[GlobalEnv]:
        env = GlobalEnv()
        for k in mod.imports:
            dep = self.modules[k]
            if dep.env is None:
                return None
            env = env.merge(dep.env)
        return env

    def _check_one(self, key: str) -> None:
        mod = self.modules[key]
        if mod.error is not None:
            return
        try:
            env = self._imports_env(mod)
        except CheckError as e:
            mod.error = e
            return
        if env is None:
            mod.skipped = True
            return
        with fuel_limit(self.fuel):
            try:
                decls = resolve(mod.source, env.names())
                checker = Checker(env)
                for d in decls:
                    checker = Checker(checker.declaration(d))
                    mod.declared.append(d.name)
                mod.env = checker.globals
            except CheckError as e:
                mod.error = e
            except RecursionError:
                mod.error = CheckError("NestingTooDeep", "term too deep to check", None)

    def check(self) -> Result:
        pending = [k for k in self.order if self.modules[k].env is None and not self.modules[k].skipped]
        if self.jobs == 1:
            for k in pending:
                self._check_one(k)
        else:
            done: set[str] = {k for k in self.order if k not in pending}
            threading.stack_size(_WORKER_STACK)
            with ThreadPoolExecutor(max_workers=self.jobs) as pool:
                while pending:
                    ready = [k for k in pending if all(d in done for d in self.modules[k].imports)]
                    list(pool.map(self._check_one, ready))
                    done.update(ready)
                    pending = [k for k in pending if k not in done]
        diags = []
        for k in self.order:
            m = self.modules[k]
            if m.error is not None:
                d = Diagnostic.from_error(m.error)
                if d.span is None:
                    d.span = Span(m.display, 1, 1, 1, 1)
                diags.append(d)
        last = self.modules[self.order[-1]] if self.order else None
        return Result([self.modules[k] for k in self.order], diags, last.env if last else None)

    def env_for(self, key: str) -> Optional[GlobalEnv]:
        return self.modules[key].env


def check_files(paths: Sequence[Path], search_path=None, fuel=None, jobs=1) -> Result:
    loader = Loader(search_path, fuel, jobs)
    for p in paths:
        loader.add_file(Path(p))
    return loader.check()


def load_module(name: str, search_path=None, fuel=None) -> GlobalEnv:
    """Load and check module ``name`` with its imports; raise on the first error."""
    loader = Loader(search_path, fuel)
    key = loader.add_module(name)
    result = loader.check()
    if result.diagnostics:
        first = next(m.error for m in result.modules if m.error)
        raise first
    return loader.env_for(key)


def manifest() -> list[str]:
    """Module names of the bundled library in check order."""
    data = json.loads((STDLIB_DIR / "manifest.json").read_text(encoding="utf-8"))
    return [entry["module"] for entry in data["files"]]
