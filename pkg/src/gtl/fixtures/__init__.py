"""Example programs shipped with the package."""
from __future__ import annotations

from importlib import resources

BENCHMARKS = ("sieve", "dungeon", "stats", "growth", "control")


def path(name):
    return resources.files(__name__) / f"{name}.gtl"


def read(name):
    return path(name).read_text()


def growth_source(n):
    """The growth benchmark with ``n`` loop iterations."""
    text = read("growth")
    return text.replace("(define main (run 200))", f"(define main (run {n}))")
