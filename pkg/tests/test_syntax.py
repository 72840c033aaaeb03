import pytest
from hypothesis import given, settings, strategies as st

from gtl import fixtures
from gtl.fuzz import generate
from gtl.syntax import desugar_program, parse
from gtl.syntax.ast import ForSkip, ForSum, If, Lang, Origin, PrimCall, App, RecordGet, walk
from gtl.syntax.desugar import desugar
from gtl.syntax.printer import show_program
from gtl.syntax.reader import ParseError, read_all


def test_minimal_program():
    (m,) = parse("(module m untyped (define x 5))")
    assert m.name == "m" and m.lang is Lang.UNTYPED
    assert [d.name for d in m.defs] == ["x"]


def test_unbalanced_paren_reports_opening_offset():
    text = "(module m untyped\n  (define x (+ 1 2))"
    with pytest.raises(ParseError) as e:
        parse(text)
    assert e.value.offset == 0
    assert (e.value.line, e.value.column) == (1, 1)


def test_unclosed_inner_form_points_at_its_delimiter():
    text = "(module m untyped (define x (+ 1 2)"
    with pytest.raises(ParseError) as e:
        read_all(text)
    assert text[e.value.offset] == "("


def test_comments_and_strings():
    (d,) = read_all('; comment\n("a \\"q\\" b" 1 2.5 #t)')
    assert [a.value for a in d.items] == ['a "q" b', 1, 2.5, True]


def test_fig1_structure():
    mods = parse(fixtures.read("fig1"))
    names = [m.name for m in mods]
    assert names == ["sort", "median", "lt", "client"]
    client = mods[-1]
    assert {(i.source, i.binding) for i in client.imports} == {("median", "median"), ("lt", "lt")}
    assert client.lang is Lang.UNTYPED


def test_import_of_own_module_rejected():
    with pytest.raises(ParseError):
        parse("(module m untyped (require m x) (define y 1))")


def test_duplicate_definition_rejected():
    with pytest.raises(ParseError):
        parse("(module m untyped (define y 1) (define y 2))")


def _desugared_elims(m):
    out = []
    for d in m.defs:
        for n in walk(d.expr):
            if n.origin is Origin.DESUGARED and isinstance(n, (App, PrimCall, RecordGet)):
                out.append(n)
    return out


def test_for_sum_has_three_desugared_eliminations():
    (m, _client) = desugar_program(parse(fixtures.read("fig2")))
    elims = _desugared_elims(m)
    assert sorted(n.op for n in elims if isinstance(n, PrimCall) and n.op != "+") == \
        ["first", "null?", "rest"]
    # the kernel module no longer contains loop forms
    assert not any(isinstance(n, (ForSum, ForSkip)) for d in m.defs for n in walk(d.expr))


def test_for_skip_guards_element_use_with_sentinel_test():
    (m, _client) = desugar_program(parse(fixtures.read("figskip")))
    guards = [n for d in m.defs for n in walk(d.expr)
              if isinstance(n, If) and isinstance(n.test, App)
              and isinstance(n.test.fn, RecordGet) and n.test.fn.field == "use-val?"]
    assert len(guards) == 1
    # the user's loop variable is bound only in the guarded branch
    then_vars = {getattr(n, "name", None) for n in walk(guards[0].then)}
    else_vars = {getattr(n, "name", None) for n in walk(guards[0].orelse)}
    assert "b" in then_vars and "b" not in else_vars


def test_no_loops_is_identity():
    mods = parse(fixtures.read("sieve"))
    assert desugar_program(mods) == mods
    for m in desugar_program(mods):
        assert all(n.origin is Origin.USER for d in m.defs for n in walk(d.expr))


@pytest.mark.parametrize("name", ["fig1", "fig2", "figskip", "bear", "sieve", "dungeon"])
def test_desugar_is_idempotent(name):
    once = desugar_program(parse(fixtures.read(name)))
    assert [desugar(m) for m in once] == once


@pytest.mark.parametrize("name", ["fig2", "figskip"])
def test_desugared_spans_inside_user_nodes(name):
    for m in desugar_program(parse(fixtures.read(name))):
        users = [n for d in m.defs for n in walk(d.expr) if n.origin is Origin.USER]
        for d in m.defs:
            for n in walk(d.expr):
                if n.origin is Origin.DESUGARED:
                    assert any(u.loc.contains(n.loc) for u in users)


ALL_FIXTURES = ["fig1", "fig2", "figskip", "fig4-id", "fig4-any", "bear", "doubly",
                *fixtures.BENCHMARKS]


@pytest.mark.parametrize("name", ALL_FIXTURES)
def test_print_parse_round_trip_fixtures(name):
    mods = parse(fixtures.read(name))
    assert parse(show_program(mods)) == mods


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_print_parse_round_trip_generated(seed):
    mods = parse(generate(seed).source)
    assert parse(show_program(mods)) == mods


def test_parse_is_deterministic():
    text = fixtures.read("stats")
    assert parse(text) == parse(text)
