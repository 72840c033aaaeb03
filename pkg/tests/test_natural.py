import pytest

from gtl import fixtures
from gtl.natural import (
    Boundary, Flat, FunGuard, Reject, UnionPick, VecGuard, apply_contract, call_wrapped,
    compile_contract,
)
from gtl.pipeline import evaluate
from gtl.runtime.errors import ContractError, UnsupportedBoundaryType
from gtl.runtime.values import Primitive, Vector, WrappedValue, from_list, strip
from gtl.syntax.ast import SourceLoc
from gtl.types.tsyntax import type_from_string as T

B = Boundary(1, SourceLoc("client", 10, 20), SourceLoc("lib", 5, 9), None, "lib", "client")


def prim(fn, arity=1):
    return Primitive("f", frozenset({arity}), lambda rt, args, call: fn(*args))


def call(w, *args):
    return call_wrapped(None, w, list(args), lambda g, a: g.fn(None, a, None))


def test_first_order_list_is_checked_deeply_at_the_crossing():
    c = compile_contract(T("(Listof Integer)"))
    assert c == Flat(T("(Listof Integer)"))
    good = from_list([1, 2])
    assert apply_contract(c, good, B) is good
    with pytest.raises(ContractError) as e:
        apply_contract(c, from_list([1, "a"]), B)
    assert e.value.party == "lib"


def test_function_argument_failure_blames_the_consumer():
    c = compile_contract(T("(-> Integer Integer)"))
    assert isinstance(c, FunGuard)
    w = apply_contract(c, prim(lambda x: x), B)
    assert isinstance(w, WrappedValue)
    assert call(w, 3) == 3
    with pytest.raises(ContractError) as e:
        call(w, "x")
    assert e.value.party == "client"


def test_function_result_failure_blames_the_producer():
    w = apply_contract(compile_contract(T("(-> Integer Integer)")), prim(lambda x: "oops"), B)
    with pytest.raises(ContractError) as e:
        call(w, 1)
    assert e.value.party == "lib"


def test_polymorphic_types_are_rejected():
    c = compile_contract(T("(All (a) (-> a a))"))
    assert isinstance(c, Reject)
    with pytest.raises(UnsupportedBoundaryType):
        apply_contract(c, prim(lambda x: x), B)


def test_flat_pass_through_allocates_nothing():
    out = evaluate("(module a untyped (define x 5))"
                   " (module b typed (require a [x Integer]) (define main : Integer x))",
                   "typed", "deep")
    assert out.rendered == "5"
    assert out.counters.wrappers_allocated == 0 and out.counters.flat_checks == 1


def test_unions_need_distinguishable_members():
    assert isinstance(compile_contract(T("(U Integer (-> Integer Integer))")), UnionPick)
    assert isinstance(compile_contract(T("(U (-> Integer Integer) (-> String String))")), Reject)


def test_mutable_vector_is_guarded_lazily():
    c = compile_contract(T("(Vectorof Integer)"))
    assert isinstance(c, VecGuard) and c.elems is None
    w = apply_contract(c, Vector([1, "bad"]), B)  # not inspected yet
    assert isinstance(w, WrappedValue)


def test_fixed_vector_is_checked_eagerly():
    c = compile_contract(T("(Vector Integer (-> Integer Integer))"))
    with pytest.raises(ContractError):
        apply_contract(c, Vector(["bad", prim(lambda x: x)]), B)


def test_wrapping_a_wrapper_checks_both():
    t = T("(-> Integer Integer)")
    b2 = Boundary(2, SourceLoc("other", 0, 1), SourceLoc("client", 0, 1), t, "client", "other")
    inner = apply_contract(compile_contract(t), prim(lambda x: x), B)
    outer = apply_contract(compile_contract(t), inner, b2)
    assert strip(outer) is inner.value
    with pytest.raises(ContractError) as e:
        call(outer, "x")
    assert e.value.boundary.id == 2  # the outermost boundary sees the bad argument first


# -- whole programs -------------------------------------------------------------------------

def test_fig1_deep_blames_client_at_median_boundary():
    out = evaluate(fixtures.read("fig1"), "111", "deep")
    err = out.error
    assert isinstance(err, ContractError)
    assert err.party == "client"
    assert err.boundary.importer_loc.module == "client"
    assert err.boundary.exporter_loc.module == "median"


def test_doubly_crossed_function_trace_counts():
    # link: two function guards (one arity check each);
    # call: outer arg, inner arg, inner result, outer result
    out = evaluate(fixtures.read("doubly"), "typed", "deep")
    assert out.rendered == "6"
    c = out.counters
    assert (c.wrappers_allocated, c.wrapped_calls, c.flat_checks) == (2, 2, 6)


def test_bear_deep_blames_implementation():
    out = evaluate(fixtures.read("bear"), "typed", "deep")
    assert isinstance(out.error, ContractError)
    assert out.error.party == "bear-impl"


@pytest.mark.parametrize("name", ["sieve", "dungeon", "stats", "growth", "control", "doubly"])
def test_complete_monitoring(name):
    source = fixtures.read(name)
    n = 3
    for bits in range(1 << n) if name != "doubly" else ["-"]:
        config = "typed" if bits == "-" else bits
        out = evaluate(source, config, "deep")
        assert out.ok
        assert out.runtime.monitoring_report() == []


@pytest.mark.parametrize("name", ["sieve", "stats", "control", "doubly", "fig2", "figskip"])
def test_deep_agrees_with_erased(name):
    source = fixtures.read(name)
    assert evaluate(source, "typed", "deep").rendered == evaluate(source, "typed", "erased").rendered
