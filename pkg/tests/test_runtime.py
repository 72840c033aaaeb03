import dataclasses

import pytest

from gtl import fixtures
from gtl.pipeline import evaluate, weak_soundness_probe
from gtl.runtime.errors import ContractError, DynamicError, ShapeError
from gtl.runtime.interp import Mode
from gtl.runtime.values import from_list
from gtl.types.tsyntax import type_from_string as T

MODES = list(Mode)
BENCH = ["sieve", "dungeon", "stats", "growth", "control"]


def test_fig1_shallow_fails_at_the_typed_comparison():
    out = evaluate(fixtures.read("fig1"), "111", "shallow")
    assert isinstance(out.error, ShapeError)
    assert out.error.site.label == "FnEntry(0)"
    assert out.error.loc.module == "lt"
    assert out.error.witness == '"a"'
    assert out.error.blame is None


def test_fig1_untyped_comparison_fails_in_the_primitive():
    out = evaluate(fixtures.read("fig1"), "110", "shallow")
    assert isinstance(out.error, DynamicError)
    assert out.error.primitive == "<"


def test_fig1_sb_blames_the_client_boundaries():
    out = evaluate(fixtures.read("fig1"), "111", "sb")
    blame = out.error.blame
    assert blame is not None
    assert {e.client_loc.module for e in blame.boundaries} == {"client"}
    assert {e.spec_loc.module for e in blame.boundaries} == {"lt", "median"}


def test_fig1_deep_blames_client():
    out = evaluate(fixtures.read("fig1"), "111", "deep")
    assert isinstance(out.error, ContractError) and out.error.party == "client"


def test_bear_shallow_completes_deep_fails():
    src = fixtures.read("bear")
    for mode in ("shallow", "sb", "erased"):
        out = evaluate(src, "typed", mode)
        assert out.ok, mode
        assert "rabbit" in out.rendered
    assert isinstance(evaluate(src, "typed", "deep").error, ContractError)


@pytest.mark.parametrize("name", BENCH + ["fig1"])
def test_all_untyped_runs_identically_in_every_mode(name):
    src = fixtures.read(name)
    outs = [evaluate(src, "untyped", m) for m in MODES]
    first = outs[0]
    for o in outs:
        assert o.rendered == first.rendered
        assert str(o.error) == str(first.error)
        assert o.counters == first.counters
        assert o.counters.blame_ops == 0


@pytest.mark.parametrize("mode", MODES)
def test_determinism(mode):
    src = fixtures.read("dungeon")
    a = evaluate(src, "101", mode)
    b = evaluate(src, "101", mode)
    assert (a.rendered, str(a.error), a.counters) == (b.rendered, str(b.error), b.counters)


def _all_configs(name):
    src = fixtures.read(name)
    return src, [format(b, "03b") for b in range(8)]


@pytest.mark.parametrize("name", BENCH)
def test_counter_invariants(name):
    src, configs = _all_configs(name)
    for cfg in configs:
        er = evaluate(src, cfg, "erased").counters
        assert (er.shape_checks, er.flat_checks, er.wrappers_allocated, er.blame_ops) == (0, 0, 0, 0)
        sh = evaluate(src, cfg, "shallow")
        sb = evaluate(src, cfg, "sb")
        dp = evaluate(src, cfg, "deep")
        assert sh.counters.wrappers_allocated == 0
        assert dp.counters.blame_ops == 0
        s, b = dataclasses.asdict(sh.counters), dataclasses.asdict(sb.counters)
        assert all(b[k] >= s[k] for k in s), cfg
        values = {o.rendered for o in (sh, sb, dp, evaluate(src, cfg, "erased"))}
        assert len(values) == 1 and None not in values


def test_weak_soundness_probe():
    assert weak_soundness_probe(T("(Listof (Listof Integer))"), from_list(["a", "b"]))
    assert weak_soundness_probe(T("Integer"), 7)
    assert not weak_soundness_probe(T("Integer"), "7")


LOOP = """
(module loop untyped
  (define (spin n) (if (= n 0) 0 (spin (- n 1))))
  (define main (spin 1000000)))
"""


def test_step_budget_stops_a_long_run():
    out = evaluate(LOOP, "untyped", "erased", step_budget=1000)
    assert out.error is not None and out.error.category == "timeout"
    assert out.counters.steps <= 1001


PRIM_RESULT = """
(module data untyped
  (define xs (list (list 1) (list "two"))))
(module use typed
  (require data [xs (Listof (Listof Integer))])
  (define main : Integer (first (list-ref xs 1))))
"""


def test_init_trusted_records_primitive_results():
    plain = evaluate(PRIM_RESULT, "typed", "sb")
    trusted = evaluate(PRIM_RESULT, "typed", "sb", init_trusted=True)
    assert isinstance(plain.error, ShapeError) and isinstance(trusted.error, ShapeError)
    assert trusted.counters.map_size > plain.counters.map_size
    assert len(trusted.error.blame.unfiltered) > len(plain.error.blame.unfiltered)
