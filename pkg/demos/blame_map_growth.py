"""The blame map only grows.

The growth fixture hands a freshly allocated list across a typed boundary
on every iteration.  Each crossing adds an entry, and entries are never
removed, so the map's size is linear in the iteration count.
"""
import statistics

from gtl import fixtures
from gtl.pipeline import evaluate


def main():
    ns = [10**2, 10**3, 10**4]
    sizes = []
    for n in ns:
        out = evaluate(fixtures.growth_source(n), "typed", "sb")
        sizes.append(out.counters.map_size)
        print(f"N={n:>6}  map_size={out.counters.map_size:>6}  blame_ops={out.counters.blame_ops}")
    slope, intercept = statistics.linear_regression(ns, sizes)
    r = statistics.correlation(ns, sizes)
    print(f"fit: map_size = {slope:.3f}*N + {intercept:.1f}  (R^2 = {r * r:.6f})")


if __name__ == "__main__":
    main()
