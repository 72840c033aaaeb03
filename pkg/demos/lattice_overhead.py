"""Overhead across every configuration of the shipped benchmarks.

Prints, for each benchmark, the overhead of every configuration under
Shallow, Deep and Shallow-with-blame, the overhead CDF, and the summary row
that ``gtl report`` prints.
"""
import sys

from gtl import fixtures
from gtl.bench import blame_cost_report, run_lattice

MODES = ("shallow", "deep", "sb")


def table(name):
    src = fixtures.read(name)
    reports = {m: run_lattice(src, m) for m in MODES}
    print(f"== {name}")
    print("config  " + "  ".join(f"{m:>8}" for m in MODES))
    for i, row in enumerate(reports["shallow"].rows):
        cells = "  ".join(f"{reports[m].rows[i].overhead:8.2f}" for m in MODES)
        print(f"{row.config.bitstring:7} {cells}")
    print("CDF (x: percent of configurations within x)")
    for m in MODES:
        points = ", ".join(f"{x:g}:{p:.0f}" for x, p in reports[m].cdf())
        print(f"  {m:8} {points}")


def main(names):
    for name in names:
        table(name)
    print()
    print("program,shallow_worst,deep_worst,sb_typed")
    for name in names:
        print(blame_cost_report(fixtures.read(name), name))


if __name__ == "__main__":
    main(sys.argv[1:] or list(fixtures.BENCHMARKS))
