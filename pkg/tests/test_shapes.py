from types import SimpleNamespace

import pytest
from hypothesis import given, settings, strategies as st

from gtl.runtime.values import EMPTY, Hash, Pair, Primitive, RecordV, Vector, from_list
from gtl.shapes import (
    ANY_SHAPE, IS_NAT, IS_PROPER_LIST, IS_REAL, IS_STR, AnyOf, IsProcArity, IsRecordWith,
    IsVectorLen, Unsupported, check_shape, shape_of,
)
from gtl.types.core import (
    BOOL, INT, NAT, REAL, STR, CaseFun, Forall, Fun, HashTable, Listof, Record, TVar, U,
    VecFixed, VecOf, subtype,
)
from gtl.types.tsyntax import type_from_string


def rt():
    return SimpleNamespace(proper_lists=set(), counters=SimpleNamespace(steps=0))


# -- the five worked examples ----------------------------------------------------

def test_listof_accepts_proper_lists_only():
    s = shape_of(type_from_string("(Listof Real)"))
    assert s == IS_PROPER_LIST
    assert not check_shape(s, Pair(1, 2)).passed
    assert check_shape(s, from_list([1, 2])).passed


def test_fixed_vector_checks_length():
    s = shape_of(type_from_string("(Vector Real Real)"))
    assert s == IsVectorLen(2)
    assert check_shape(s, Vector([1, 2])).passed
    assert not check_shape(s, Vector([1, 2, 3])).passed


def test_union_passes_on_a_member_without_element_checks():
    s = shape_of(type_from_string("(U Real String (Listof Real))"))
    assert s == AnyOf((IS_REAL, IS_STR, IS_PROPER_LIST))
    assert check_shape(s, from_list([1, 2, 3, 4, 5])).passed
    # elements are never looked at
    assert check_shape(s, from_list(["a", "b"])).passed


def test_record_checks_field_membership():
    s = shape_of(type_from_string("(Record pt [x Integer] [y Integer])"))
    assert s == IsRecordWith("pt", ("x", "y"))
    assert check_shape(s, RecordV("pt", {"x": "not a number", "y": 2, "z": 3})).passed
    assert not check_shape(s, RecordV("pt", {"x": 1})).passed
    assert not check_shape(s, RecordV("other", {"x": 1, "y": 2})).passed


def test_case_lambda_checks_every_arity():
    s = shape_of(type_from_string("(case-> (-> Real Boolean) (-> String String Real))"))
    assert s == IsProcArity(frozenset({1, 2}))
    both = Primitive("p", frozenset({1, 2}), None)
    one = Primitive("q", frozenset({1}), None)
    assert check_shape(s, both).passed and not check_shape(s, one).passed


# -- universal types ---------------------------------------------------------------

def test_forall_under_constructor_has_a_shape():
    assert shape_of(type_from_string("(All (a) (-> a a))")) == IsProcArity(frozenset({1}))


def test_forall_bare_variable_is_unsupported():
    assert isinstance(shape_of(type_from_string("(All (a) a)")), Unsupported)
    assert isinstance(shape_of(type_from_string("(All (a) (U a Integer))")), Unsupported)


def test_nat_and_rendering():
    assert shape_of(NAT) == IS_NAT
    assert not check_shape(IS_NAT, -1).passed
    assert str(IsVectorLen(2)) == "(vector/len 2)"
    assert str(AnyOf((IS_REAL, IS_STR, IS_PROPER_LIST))) == "(or real? string? list?)"
    assert str(IS_PROPER_LIST) == "list?"


def test_failing_outcome_has_witness():
    out = check_shape(IS_STR, 5)
    assert not out.passed and out.witness == "5"


def test_unsupported_shape_cannot_be_checked():
    with pytest.raises(ValueError):
        check_shape(Unsupported("x"), 1)


# -- reference predicate ---------------------------------------------------------------

def reference(t, v):
    """Top-level membership written directly against types."""
    if t == NAT:
        return type(v) is int and v >= 0
    if t == INT:
        return type(v) is int
    if t == REAL:
        return type(v) in (int, float)
    if t == BOOL:
        return type(v) is bool
    if t == STR:
        return type(v) is str
    if isinstance(t, Listof):
        seen = set()
        while type(v) is Pair:
            if id(v) in seen:
                return False
            seen.add(id(v))
            v = v.tail
        return v is EMPTY
    if isinstance(t, VecFixed):
        return type(v) is Vector and len(v.items) == len(t.elems)
    if isinstance(t, VecOf):
        return type(v) is Vector
    if isinstance(t, HashTable):
        return type(v) is Hash
    if isinstance(t, Record):
        return type(v) is RecordV and v.tag == t.tag and set(t.field_names) <= set(v.fields)
    if isinstance(t, Fun):
        return type(v) is Primitive and t.arity in v.arities
    if isinstance(t, CaseFun):
        return type(v) is Primitive and all(b.arity in v.arities for b in t.branches)
    if isinstance(t, U):
        return any(reference(m, v) for m in t.members)
    raise AssertionError(t)


base_types = st.sampled_from([NAT, INT, REAL, BOOL, STR])


def types(depth=2):
    if depth == 0:
        return base_types
    sub = types(depth - 1)
    return st.one_of(
        base_types,
        sub.map(Listof),
        sub.map(VecOf),
        st.lists(sub, min_size=0, max_size=3).map(lambda es: VecFixed(tuple(es))),
        st.tuples(sub, sub).map(lambda kv: HashTable(*kv)),
        st.tuples(st.sampled_from(["pt", "box"]), st.lists(st.sampled_from("xyz"), max_size=3,
                                                            unique=True), sub).map(
            lambda a: Record(a[0], tuple((n, a[2]) for n in a[1]))),
        st.lists(sub, min_size=0, max_size=2).map(lambda ps: Fun(tuple(ps), INT)),
        st.tuples(sub, sub).filter(lambda ab: ab[0] != ab[1]).map(lambda ab: U(ab)),
    )


def values(depth=3):
    leaf = st.one_of(st.integers(-3, 3), st.floats(allow_nan=False, width=16), st.booleans(),
                     st.text(max_size=2), st.just(EMPTY))
    if depth == 0:
        return leaf
    sub = values(depth - 1)
    return st.one_of(
        leaf,
        st.tuples(sub, sub).map(lambda p: Pair(*p)),
        st.lists(sub, max_size=3).map(from_list),
        st.lists(sub, max_size=3).map(Vector),
        st.lists(st.tuples(st.integers(0, 3), sub), max_size=2).map(Hash),
        st.tuples(st.sampled_from(["pt", "box"]),
                  st.dictionaries(st.sampled_from("xyzw"), sub, max_size=3)).map(
            lambda a: RecordV(*a)),
        st.frozensets(st.integers(0, 3), min_size=1, max_size=3).map(
            lambda ar: Primitive("p", ar, None)),
    )


@settings(max_examples=1500, deadline=None)
@given(types(), values())
def test_check_shape_agrees_with_reference(t, v):
    assert check_shape(shape_of(t), v).passed == reference(t, v)


FIRST_ORDER = st.recursive(
    base_types,
    lambda sub: st.one_of(sub.map(Listof),
                          st.lists(sub, max_size=2).map(lambda es: VecFixed(tuple(es))),
                          st.tuples(sub, sub).filter(lambda ab: ab[0] != ab[1]).map(U)),
    max_leaves=4)


@settings(max_examples=800, deadline=None)
@given(FIRST_ORDER, FIRST_ORDER, values())
def test_shapes_are_monotone_under_subtyping(a, b, v):
    if subtype(a, b) and check_shape(shape_of(a), v).passed:
        assert check_shape(shape_of(b), v).passed


FUNCTIONS = st.one_of(
    st.lists(base_types, max_size=2).map(lambda ps: Fun(tuple(ps), INT)),
    st.lists(st.lists(base_types, max_size=2), min_size=1, max_size=3).map(
        lambda bs: CaseFun(tuple({len(ps): Fun(tuple(ps), INT) for ps in bs}.values()))),
)


@settings(max_examples=800, deadline=None)
@given(FUNCTIONS, FUNCTIONS, st.frozensets(st.integers(0, 3), min_size=1, max_size=3))
def test_arity_shapes_are_monotone_under_function_subtyping(a, b, arities):
    # arities must match for Fun <: Fun, and a case-> subtype covers every
    # branch of its supertype, so arity shapes never shrink upward
    v = Primitive("p", arities, None)
    if subtype(a, b) and check_shape(shape_of(a), v).passed:
        assert check_shape(shape_of(b), v).passed


@settings(max_examples=200, deadline=None)
@given(st.sampled_from([NAT, INT, Listof(STR), U((INT, STR)), Forall("a", Fun((TVar("a"),), INT))]))
def test_shape_of_is_deterministic(t):
    assert shape_of(t) == shape_of(t)


# -- proper-list traversal ------------------------------------------------------------------

def test_proper_list_cache_makes_second_check_constant():
    r = rt()
    lst = from_list(list(range(100)))
    assert check_shape(IS_PROPER_LIST, lst, r).passed
    first = r.counters.steps
    assert first == 100
    assert check_shape(IS_PROPER_LIST, lst, r).passed
    assert r.counters.steps == first
    # a new cell in front of a cached spine costs one step
    assert check_shape(IS_PROPER_LIST, Pair(0, lst), r).passed
    assert r.counters.steps == first + 1


def test_cyclic_spine_is_not_a_list():
    a = Pair(1, EMPTY)
    b = Pair(2, a)
    a.tail = b
    assert not check_shape(IS_PROPER_LIST, b, rt()).passed


def test_only_lists_cost_proportional_to_size():
    r = rt()
    for s, v in [(IsVectorLen(3), Vector(range(1000))), (IS_STR, "x" * 1000),
                 (IsRecordWith("pt", ("x",)), RecordV("pt", {"x": 1})), (ANY_SHAPE, 1)]:
        check_shape(s, v, r)
    assert r.counters.steps == 0
