"""Configuration-lattice benchmarking with deterministic cost counters.

A program with N configurable modules has 2^N configurations.  Each one is
run under a semantics, its counters are folded into a scalar cost, and the
cost is divided by the cost of the all-untyped configuration run with types
erased.  The overhead CDF then says what fraction of configurations run
within X times that baseline.
"""
from __future__ import annotations

import csv
import io
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .config import Configuration, configurable_modules
from .pipeline import execute, load_program, prepare
from .runtime.interp import CostCounters, Mode

MAX_MODULES = 16

DEFAULT_WEIGHTS = {
    "shape_checks": 1.0,
    "flat_checks": 1.0,
    "wrapped_calls": 3.0,
    "wrappers_allocated": 5.0,
    "blame_ops": 2.0,
    "steps": 0.01,
}

CDF_POINTS = (1, 1.2, 1.4, 1.6, 1.8, 2) + tuple(range(4, 21, 2))

TIMEOUT = "TO"

CSV_HEADER = ["config_bits", "mode", "shape_checks", "flat_checks", "wrappers", "wrapped_calls",
              "blame_ops", "steps", "cost", "overhead", "status"]


class LatticeTooLarge(ValueError):
    pass


def enumerate_lattice(program):
    """All configurations of ``program`` in ascending binary order."""
    modules = load_program(program)
    names = configurable_modules(modules)
    if len(names) > MAX_MODULES:
        raise LatticeTooLarge(f"{len(names)} configurable modules (limit {MAX_MODULES})")
    return [Configuration(names, b) for b in range(1 << len(names))]


def cost(counters, weights=None):
    w = DEFAULT_WEIGHTS if weights is None else weights
    c = counters.as_dict() if isinstance(counters, CostCounters) else counters
    return sum(w.get(k, 0.0) * c[k] for k in DEFAULT_WEIGHTS)


@dataclass
class Row:
    config: Configuration
    mode: str
    counters: CostCounters
    cost: float
    overhead: float
    status: str = "ok"
    seconds: float = None

    @property
    def ok(self):
        return self.status == "ok"

    def csv_fields(self):
        c = self.counters
        out = [self.config.bitstring or "-", self.mode, c.shape_checks, c.flat_checks,
               c.wrappers_allocated, c.wrapped_calls, c.blame_ops, c.steps, _num(self.cost),
               _num(self.overhead), self.status]
        if self.seconds is not None:
            out.append(f"{self.seconds:.6f}")
        return out


def _num(x):
    return f"{x:.6g}" if isinstance(x, float) else str(x)


def overhead_cdf(overheads, xs=CDF_POINTS):
    """(x, percent of overheads <= x) at each tick, plus the maximum so the
    curve always ends at 100%."""
    ovs = sorted(overheads)
    if not ovs:
        return []
    points = list(xs)
    if ovs[-1] > points[-1]:
        points.append(ovs[-1])
    n = len(ovs)
    return [(x, 100.0 * sum(1 for o in ovs if o <= x) / n) for x in points]


@dataclass
class LatticeReport:
    mode: str
    rows: list
    baseline: float
    weights: dict = field(default_factory=lambda: dict(DEFAULT_WEIGHTS))

    @property
    def ok_rows(self):
        return [r for r in self.rows if r.ok]

    @property
    def errors(self):
        return [r for r in self.rows if not r.ok]

    @property
    def timed_out(self):
        return any(r.status == TIMEOUT for r in self.rows)

    @property
    def worst_overhead(self):
        ok = self.ok_rows
        return max(r.overhead for r in ok) if ok else None

    def row(self, bits):
        for r in self.rows:
            if r.config.bits == bits:
                return r
        raise KeyError(bits)

    def cdf(self, xs=CDF_POINTS):
        return overhead_cdf([r.overhead for r in self.ok_rows], xs)

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        header = CSV_HEADER + (["seconds"] if any(r.seconds is not None for r in self.rows) else [])
        w.writerow(header)
        for r in self.rows:
            w.writerow(r.csv_fields())
        return buf.getvalue()

    def cdf_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["mode", "x", "percent"])
        for x, p in self.cdf():
            w.writerow([self.mode, _num(float(x)), _num(p)])
        return buf.getvalue()


def _status(outcome):
    if outcome.error is None:
        return "ok"
    if outcome.error.category == "timeout":
        return TIMEOUT
    return f"error:{outcome.error.category}"


def run_config(modules, config, mode, step_budget=None, wall_clock=False):
    """Counters and status of one configuration; with ``wall_clock`` the
    run is repeated 9 times and the last 8 timings are averaged."""
    prepared = prepare(modules, config, mode)
    if not wall_clock:
        out = execute(prepared, step_budget=step_budget)
        return out.counters, _status(out), None
    times = []
    for _ in range(9):
        t0 = time.perf_counter()
        out = execute(prepared, step_budget=step_budget)
        times.append(time.perf_counter() - t0)
    return out.counters, _status(out), sum(times[1:]) / 8


def _worker(args):
    source, bits, mode, step_budget, wall_clock = args
    modules = load_program(source)
    config = Configuration.for_program(modules, bits)
    counters, status, secs = run_config(modules, config, mode, step_budget, wall_clock)
    return counters.as_dict(), status, secs


def baseline_cost(modules, weights=None, step_budget=None):
    """Cost of the all-untyped configuration with types erased."""
    config = Configuration.for_program(modules, "untyped")
    counters, _, _ = run_config(modules, config, Mode.ERASED, step_budget)
    return cost(counters, weights)


def run_lattice(program, mode, *, weights=None, step_budget=None, jobs=1, wall_clock=False):
    mode = Mode(mode)
    weights = dict(DEFAULT_WEIGHTS if weights is None else weights)
    modules = load_program(program)
    configs = enumerate_lattice(modules)
    base = baseline_cost(modules, weights, step_budget)
    if jobs > 1 and isinstance(program, str):
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            raw = list(pool.map(_worker, [(program, c.bits, mode.value, step_budget, wall_clock)
                                          for c in configs]))
        results = [(CostCounters(**c), s, t) for c, s, t in raw]
    else:
        results = [run_config(modules, c, mode, step_budget, wall_clock) for c in configs]
    rows = []
    for c, (counters, status, secs) in zip(configs, results):
        k = cost(counters, weights)
        rows.append(Row(c, mode.value, counters, k, k / base, status, secs))
    return LatticeReport(mode.value, rows, base, weights)


@dataclass
class BlameCostRow:
    """Worst Shallow and Deep overhead over the lattice, and SB overhead on
    the fully-typed configuration; ``TO`` marks a run over the step budget."""

    name: str
    shallow_worst: object
    deep_worst: object
    sb_typed: object

    def cells(self):
        return [self.name] + [v if v == TIMEOUT or v is None else f"{v:.2f}"
                              for v in (self.shallow_worst, self.deep_worst, self.sb_typed)]

    def __str__(self):
        return ",".join(str(c) for c in self.cells())


def blame_cost_report(program, name="program", *, weights=None, step_budget=None):
    modules = load_program(program)
    shallow = run_lattice(modules, Mode.SHALLOW, weights=weights, step_budget=step_budget)
    deep = run_lattice(modules, Mode.DEEP, weights=weights, step_budget=step_budget)
    typed = Configuration.for_program(modules, "typed")
    counters, status, _ = run_config(modules, typed, Mode.SB, step_budget)
    if status == TIMEOUT:
        sb = TIMEOUT
    else:
        sb = cost(counters, weights) / shallow.baseline
    return BlameCostRow(
        name,
        TIMEOUT if shallow.timed_out else shallow.worst_overhead,
        TIMEOUT if deep.timed_out else deep.worst_overhead,
        sb,
    )
