"""Implementations of the trusted primitives.

Each primitive is ``fn(rt, args, call)`` where ``call`` carries the source
location, whether the caller is typed code, and whether a vector bounds
check may be skipped.  Misuse raises :class:`DynamicError` in every mode:
this is the language catching errors at its own level.
"""
from __future__ import annotations

import operator
from dataclasses import dataclass

from ..shapes import proper_list
from ..types.prims import PRIMS
from .errors import DynamicError
from .values import (
    EMPTY, EOF, Hash, Pair, Primitive, RecordV, Vector, WrappedValue, from_list, is_int, is_number,
    is_procedure, render, sketch, strip,
)


@dataclass(frozen=True)
class Call:
    loc: object
    caller_typed: bool = False
    bounds_checked: bool = True


def _err(call, op, v, detail=""):
    raise DynamicError(call.loc, op, sketch(v), detail)


def _num(call, op, v):
    if not is_number(v):
        _err(call, op, v, "expected a number")
    return v


def _nat(call, op, v):
    if not (is_int(v) and v >= 0):
        _err(call, op, v, "expected a natural number")
    return v


def _list(rt, call, op, v):
    """Elements of a proper list (the check is cached like any list? test)."""
    if not proper_list(v, rt):
        _err(call, op, v, "expected a list")
    out = []
    while v is not EMPTY:
        out.append(v.head)
        v = v.tail
    return out


def _pair(rt, call, op, v):
    if not (isinstance(v, Pair) and proper_list(v, rt)):
        _err(call, op, v, "expected a non-empty list")
    return v


def _proc(call, op, v):
    if not is_procedure(v):
        _err(call, op, v, "expected a procedure")
    return v


def _arith(op):
    def fn(rt, args, call):
        a, b = (_num(call, op, x) for x in args)
        if op == "+":
            return a + b
        if op == "-":
            return a - b
        if op == "*":
            return a * b
        if b == 0:
            _err(call, op, b, "division by zero")
        if is_int(a) and is_int(b) and a % b == 0:
            return a // b
        return a / b
    return fn


def _intop(op):
    def fn(rt, args, call):
        a, b = args
        for x in args:
            if not is_int(x):
                _err(call, op, x, "expected an integer")
        if b == 0:
            _err(call, op, b, "division by zero")
        if op == "quotient":
            q = abs(a) // abs(b)
            return q if (a >= 0) == (b >= 0) else -q
        return a % b
    return fn


def _cmp(op):
    f = {"<": operator.lt, "<=": operator.le, ">": operator.gt, ">=": operator.ge,
         "=": operator.eq}[op]

    def fn(rt, args, call):
        a, b = (_num(call, op, x) for x in args)
        return f(a, b)
    return fn


def values_equal(a, b):
    a, b = strip(a), strip(b)
    if isinstance(a, bool) or isinstance(b, bool):
        return a is b
    if is_number(a) and is_number(b):
        return a == b and isinstance(a, float) == isinstance(b, float)
    if isinstance(a, str) and isinstance(b, str):
        return a == b
    if isinstance(a, Pair) and isinstance(b, Pair):
        while isinstance(a, Pair) and isinstance(b, Pair):
            if not values_equal(a.head, b.head):
                return False
            a, b = a.tail, b.tail
        return values_equal(a, b)
    if isinstance(a, Vector) and isinstance(b, Vector):
        return len(a.items) == len(b.items) and all(map(values_equal, a.items, b.items))
    if isinstance(a, RecordV) and isinstance(b, RecordV):
        return (a.tag == b.tag and a.fields.keys() == b.fields.keys()
                and all(values_equal(a.fields[k], b.fields[k]) for k in a.fields))
    if isinstance(a, Hash) and isinstance(b, Hash):
        return a.table.keys() == b.table.keys() and all(
            values_equal(a.table[k][1], b.table[k][1]) for k in a.table)
    return a is b


def _vector(call, op, v):
    if not isinstance(strip(v), Vector):
        _err(call, op, v, "expected a vector")
    return v


def _hash(call, op, v):
    if not isinstance(strip(v), Hash):
        _err(call, op, v, "expected a hash table")
    return v


def _vector_ref(rt, args, call):
    v, i = args
    _vector(call, "vector-ref", v)
    _nat(call, "vector-ref", i)

    def read(u):
        if call.bounds_checked and i >= len(u.items):
            _err(call, "vector-ref", i, f"index out of range for length {len(u.items)}")
        return u.items[i]

    if isinstance(v, WrappedValue):
        return rt.guarded_read(v, read)
    return read(v)


def _vector_set(rt, args, call):
    v, i, x = args
    _vector(call, "vector-set!", v)
    _nat(call, "vector-set!", i)

    def write(u, _key, val):
        if not u.mutable:
            _err(call, "vector-set!", u, "immutable vector")
        if i >= len(u.items):
            _err(call, "vector-set!", i, f"index out of range for length {len(u.items)}")
        u.items[i] = val

    if isinstance(v, WrappedValue):
        rt.guarded_write(v, x, write)
    else:
        write(v, None, x)
    return v


def _hash_ref(rt, args, call):
    h, k = args
    _hash(call, "hash-ref", h)
    if isinstance(h, WrappedValue):
        k = rt.guarded_key(h, k)

    def read(u):
        if not u.has(k):
            _err(call, "hash-ref", k, "no value for key")
        return u.get(k)

    if isinstance(h, WrappedValue):
        return rt.guarded_read(h, read)
    return read(h)


def _hash_set(rt, args, call):
    h, k, x = args
    _hash(call, "hash-set!", h)

    def write(u, key, val):
        u.set(key, val)

    if isinstance(h, WrappedValue):
        rt.guarded_write(h, x, write, key=k)
    else:
        write(h, k, x)
    return h


def _hash_has(rt, args, call):
    h, k = args
    _hash(call, "hash-has-key?", h)
    if isinstance(h, WrappedValue):
        k = rt.guarded_key(h, k)
    return strip(h).has(k)


def _map(rt, args, call):
    f, lst = args
    _proc(call, "map", f)
    return from_list([rt.call_value(f, [x], call) for x in _list(rt, call, "map", lst)])


def _foldl(rt, args, call):
    f, acc, lst = args
    _proc(call, "foldl", f)
    for x in _list(rt, call, "foldl", lst):
        acc = rt.call_value(f, [x, acc], call)
    return acc


def _list_ref(rt, args, call):
    lst, i = args
    items = _list(rt, call, "list-ref", lst)
    _nat(call, "list-ref", i)
    if i >= len(items):
        _err(call, "list-ref", i, f"index out of range for length {len(items)}")
    return items[i]


def _string(call, op, v):
    if not isinstance(v, str):
        _err(call, op, v, "expected a string")
    return v


def _number_to_string(rt, args, call):
    return render(_num(call, "number->string", args[0]))


def _print(rt, args, call):
    rt.output.append(render(args[0]))
    return args[0]


def _byte_source(rt, args, call):
    data = [_nat(call, "byte-source", x) for x in _list(rt, call, "byte-source", args[0])]
    n = len(data)

    def pos(op, p):
        return _nat(call, op, p)

    fields = {
        "pos0": 0,
        "more?": Primitive("more?", {1}, lambda rt, a, c: pos("more?", a[0]) <= n),
        # one past the end yields the sentinel, which use-val? rejects
        "get-val": Primitive("get-val", {1},
                             lambda rt, a, c: data[a[0]] if pos("get-val", a[0]) < n else EOF),
        "use-val?": Primitive("use-val?", {1}, lambda rt, a, c: a[0] is not EOF),
        "next": Primitive("next", {1}, lambda rt, a, c: pos("next", a[0]) + 1),
    }
    return RecordV("seq", fields)


def _range(rt, args, call):
    return from_list(list(range(_nat(call, "range", args[0]))))


IMPLS = {
    "+": _arith("+"), "-": _arith("-"), "*": _arith("*"), "/": _arith("/"),
    "quotient": _intop("quotient"), "modulo": _intop("modulo"),
    "<": _cmp("<"), "<=": _cmp("<="), ">": _cmp(">"), ">=": _cmp(">="), "=": _cmp("="),
    "equal?": lambda rt, a, c: values_equal(a[0], a[1]),
    "not": lambda rt, a, c: a[0] is False,
    "cons": lambda rt, a, c: Pair(a[0], a[1]),
    "first": lambda rt, a, c: _pair(rt, c, "first", a[0]).head,
    "rest": lambda rt, a, c: _pair(rt, c, "rest", a[0]).tail,
    "null?": lambda rt, a, c: a[0] is EMPTY,
    "length": lambda rt, a, c: len(_list(rt, c, "length", a[0])),
    "list-ref": _list_ref,
    "map": _map,
    "foldl": _foldl,
    "append": lambda rt, a, c: from_list(_list(rt, c, "append", a[0]) + _list(rt, c, "append", a[1])),
    "reverse": lambda rt, a, c: from_list(_list(rt, c, "reverse", a[0])[::-1]),
    "range": _range,
    "vector-ref": _vector_ref,
    "vector-set!": _vector_set,
    "vector-length": lambda rt, a, c: len(strip(_vector(c, "vector-length", a[0])).items),
    "make-vector": lambda rt, a, c: Vector([a[1]] * _nat(c, "make-vector", a[0]), mutable=True),
    "make-hash": lambda rt, a, c: Hash(),
    "hash-ref": _hash_ref,
    "hash-set!": _hash_set,
    "hash-has-key?": _hash_has,
    "hash-count": lambda rt, a, c: len(strip(_hash(c, "hash-count", a[0])).table),
    "string-append": lambda rt, a, c: _string(c, "string-append", a[0]) + _string(c, "string-append", a[1]),
    "string-length": lambda rt, a, c: len(_string(c, "string-length", a[0])),
    "number->string": _number_to_string,
    "print": _print,
    "byte-source": _byte_source,
    "eof?": lambda rt, a, c: a[0] is EOF,
}

assert set(IMPLS) == set(PRIMS), set(IMPLS) ^ set(PRIMS)


def make_primitives():
    """Fresh primitive procedure values for one runtime."""
    return {name: Primitive(name, PRIMS[name].arities, IMPLS[name]) for name in PRIMS}
