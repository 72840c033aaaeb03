"""End-to-end driver: source text to final value and counters."""
from __future__ import annotations

import sys
import threading
from dataclasses import dataclass, field

from .config import Configuration
from .runtime.errors import GTLRuntimeError
from .runtime.interp import CostCounters, Mode, Runtime
from .runtime.values import render
from .shapes import check_shape, shape_of
from .syntax import desugar_program, parse
from .transient import DEEP, SHALLOW, InstrumentedModule, insert_checks, optimize
from .types.checker import typecheck

STACK_BYTES = 512 * 1024 * 1024
RECURSION_LIMIT = 200_000


def load_program(source):
    """Kernel modules from GTL text or already-parsed modules."""
    modules = parse(source) if isinstance(source, str) else list(source)
    return desugar_program(modules)


def configuration(modules, config):
    if isinstance(config, Configuration):
        return config
    return Configuration.for_program(modules, config)


@dataclass
class Prepared:
    prog: object  # TypedProgram
    mode: Mode
    instrumented: dict  # module name -> InstrumentedModule

    def sites(self):
        return [s for m in self.prog.modules for s in self.instrumented[m.name].sites]


def prepare(source, config="typed", mode=Mode.SHALLOW, *, lax=False, check_desugared=False):
    """Typecheck under ``config`` and instrument for ``mode``.

    Raises ParseError or StaticTypeError."""
    mode = Mode(mode)
    modules = load_program(source)
    prog = typecheck(modules, configuration(modules, config))
    ims = {}
    for m in prog.modules:
        if mode in (Mode.SHALLOW, Mode.SB):
            im = optimize(insert_checks(m, prog, lax=lax, check_desugared=check_desugared),
                          SHALLOW, prog)
        elif mode is Mode.DEEP:
            im = optimize(InstrumentedModule(m), DEEP, prog)
        else:
            im = InstrumentedModule(m)
        ims[m.name] = im
    return Prepared(prog, mode, ims)


@dataclass
class Outcome:
    value: object
    counters: CostCounters
    error: GTLRuntimeError = None
    output: list = field(default_factory=list)
    runtime: Runtime = None

    @property
    def ok(self):
        return self.error is None

    @property
    def rendered(self):
        return None if self.value is None else render(self.value)


def run_with_big_stack(fn):
    """Run ``fn`` on a thread with a large stack; the evaluator recurses
    once per nested expression."""
    box = {}

    def target():
        old = sys.getrecursionlimit()
        sys.setrecursionlimit(max(old, RECURSION_LIMIT))
        try:
            box["value"] = fn()
        except BaseException as e:  # re-raised on the calling thread
            box["error"] = e
        finally:
            sys.setrecursionlimit(old)

    prev = threading.stack_size()
    threading.stack_size(STACK_BYTES)
    try:
        t = threading.Thread(target=target)
        t.start()
    finally:
        threading.stack_size(prev)
    t.join()
    if "error" in box:
        raise box["error"]
    return box["value"]


def execute(prepared, *, init_trusted=False, step_budget=None):
    rt = Runtime(prepared.prog, prepared.mode, prepared.instrumented,
                 init_trusted=init_trusted, step_budget=step_budget)

    def go():
        try:
            return Outcome(rt.run(), rt.counters, None, rt.output, rt)
        except GTLRuntimeError as e:
            return Outcome(None, e.counters or rt.counters.copy(), e, rt.output, rt)

    return run_with_big_stack(go)


def evaluate(source, config="typed", mode=Mode.SHALLOW, *, lax=False, check_desugared=False,
             init_trusted=False, step_budget=None):
    """Run a program.  Runtime errors are returned in the outcome, static
    errors are raised."""
    prepared = prepare(source, config, mode, lax=lax, check_desugared=check_desugared)
    return execute(prepared, init_trusted=init_trusted, step_budget=step_budget)


def weak_soundness_probe(t, v):
    """Does a result have the outline its static type promises?"""
    return check_shape(shape_of(t), v).passed
