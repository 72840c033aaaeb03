import itertools

import pytest
from hypothesis import given, settings, strategies as st

from gtl import fixtures
from gtl.config import Configuration
from gtl.syntax import desugar_program, parse
from gtl.types.checker import StaticTypeError, UnboundVariable, typecheck
from gtl.types.core import (
    BOOL, INT, NAT, REAL, STR, CaseFun, Forall, Fun, Listof, Record, TVar, U, VecFixed, VecOf,
    join, subtype, substitute, union,
)
from gtl.types.prims import PRIMS
from gtl.types.tsyntax import type_from_string

BASES = [NAT, INT, REAL, BOOL, STR]


def universe(depth):
    """Every type of depth <= ``depth`` over five bases (one-parameter
    functions, two-member unions, fixed vectors of length 1)."""
    level = list(BASES)
    for _ in range(depth):
        nxt = list(level)
        for t in level:
            nxt += [Listof(t), VecOf(t), VecFixed((t,))]
        for a in level:
            for b in BASES:
                nxt.append(Fun((a,), b))
        for a, b in itertools.combinations(BASES, 2):
            nxt.append(U((a, b)))
        level = list(dict.fromkeys(nxt))
    return level


UNIVERSE_1 = universe(1)
UNIVERSE_2 = universe(2)


def test_numeric_tower():
    assert subtype(INT, REAL) and subtype(NAT, INT) and not subtype(REAL, INT)


def test_function_contravariance():
    assert subtype(Fun((REAL,), BOOL), Fun((INT,), BOOL))
    assert not subtype(Fun((INT,), BOOL), Fun((REAL,), BOOL))


def test_union_membership_and_record_width():
    assert subtype(INT, U((INT, STR)))
    wide = Record("pt", (("x", INT), ("y", INT)))
    narrow = Record("pt", (("x", INT),))
    assert subtype(wide, narrow) and not subtype(narrow, wide)
    assert not subtype(wide, Record("other", (("x", INT),)))


def test_mutable_vectors_are_invariant():
    assert not subtype(VecOf(NAT), VecOf(INT))
    assert subtype(VecFixed((NAT,)), VecFixed((INT,)))


def test_reflexivity_depth_two():
    assert all(subtype(t, t) for t in UNIVERSE_2)


def test_transitivity_depth_one_exhaustive():
    sub = {(a, b): subtype(a, b) for a in UNIVERSE_1 for b in UNIVERSE_1}
    for a, b, c in itertools.product(UNIVERSE_1, repeat=3):
        if sub[a, b] and sub[b, c]:
            assert sub[a, c], (a, b, c)


@settings(max_examples=3000, deadline=None)
@given(st.sampled_from(UNIVERSE_2), st.sampled_from(UNIVERSE_2), st.sampled_from(UNIVERSE_2))
def test_transitivity_depth_two(a, b, c):
    if subtype(a, b) and subtype(b, c):
        assert subtype(a, c)


@settings(max_examples=500, deadline=None)
@given(st.sampled_from(UNIVERSE_2), st.sampled_from(UNIVERSE_2))
def test_join_is_an_upper_bound(a, b):
    j = join(a, b)
    assert subtype(a, j) and subtype(b, j)


def test_union_flattens_and_deduplicates():
    assert union([INT, U((INT, STR)), STR]) == U((INT, STR))
    assert union([INT, INT]) == INT


def test_substitution_avoids_capture():
    t = Forall("b", Fun((TVar("a"),), TVar("b")))
    out = substitute(t, "a", TVar("b"))
    assert out.var != "b" and out.body.params == (TVar("b"),)


def test_case_fun_requires_distinct_arities():
    with pytest.raises(ValueError):
        CaseFun((Fun((INT,), INT), Fun((STR,), INT)))


def test_type_syntax():
    t = type_from_string("(case-> (-> Real Boolean) (-> String String Real))")
    assert t == CaseFun((Fun((REAL,), BOOL), Fun((STR, STR), REAL)))
    assert type_from_string("(All (a) (-> a a))") == Forall("a", Fun((TVar("a"),), TVar("a")))


def test_prim_result_flags():
    flags = {n: PRIMS[n].result_guaranteed for n in
             ("map", "length", "list-ref", "hash-ref", "vector-ref")}
    assert flags == {"map": True, "length": True, "list-ref": False, "hash-ref": False,
                     "vector-ref": False}


def _check(source, config="typed"):
    mods = desugar_program(parse(source))
    return typecheck(mods, Configuration.for_program(mods, config))


def test_fig1_median_typed_against_untyped_sort():
    prog = _check(fixtures.read("fig1"), "010")
    assert prog.typed["median"] and not prog.typed["sort"]
    assert str(prog.def_types[("median", "median")]) == "(-> (Listof Real) (-> Real Real Bool) Real)"


def test_arity_mismatch():
    with pytest.raises(StaticTypeError):
        _check("(module m typed (define (f [x : Integer] [y : Integer]) : Integer x)"
               " (define z : Integer (f 1)))")


def test_inst_of_all_a_a_is_well_typed():
    prog = _check("(module ids untyped (define anything 42))"
                  " (module client typed (require ids [anything (All (a) a)])"
                  " (define main : String (inst anything String)))")
    assert prog.def_types[("client", "main")] == STR


def test_cast_types_as_target():
    prog = _check('(module m typed (define x : Integer (cast "a" Integer)))')
    assert prog.def_types[("m", "x")] == INT


def test_typed_import_from_untyped_needs_a_type():
    with pytest.raises(StaticTypeError):
        _check("(module a untyped (define x 1)) (module b typed (require a x) (define y : Integer 2))")


def test_unbound_variable_in_untyped_code():
    with pytest.raises(UnboundVariable):
        _check("(module a untyped (define x y))")


@pytest.mark.parametrize("name", ["fig1", "bear", *fixtures.BENCHMARKS])
def test_fully_untyped_configuration_always_checks(name):
    _check(fixtures.read(name), "untyped")


@pytest.mark.parametrize("name", ["fig1", "stats", "sieve"])
def test_declaration_order_does_not_matter(name):
    mods = desugar_program(parse(fixtures.read(name)))
    cfg = Configuration.for_program(mods, "typed")
    a = typecheck(mods, cfg)
    b = typecheck(list(reversed(mods)), cfg)
    assert a.def_types == b.def_types


@pytest.mark.parametrize("bits", range(8))
def test_boundary_imports_carry_declared_types(bits):
    mods = desugar_program(parse(fixtures.read("fig1")))
    prog = typecheck(mods, Configuration.for_program(mods, bits))
    typed_side = {(m.name, i.binding) for m, i in prog.boundary_imports() if prog.typed[m.name]}
    declared_used = {(m.name, i.binding) for m in prog.modules for i in m.imports
                     if prog.typed[m.name] and not prog.typed[i.source]}
    assert typed_side == declared_used
    for m, i in prog.boundary_imports():
        if prog.typed[m.name]:
            assert i.declared_type is not None
