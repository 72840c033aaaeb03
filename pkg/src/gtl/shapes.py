"""Type shapes: the first-order part of a type, and the predicate deciding it.

A shape looks at the outermost constructor of a value only.  ``(Listof
Int)`` becomes "is a proper list"; the elements are never examined.  Proper
lists are the one shape whose check cost grows with the value, so the
runtime keeps a cache of spine cells already known to end in ``empty``.
"""
from __future__ import annotations

from dataclasses import dataclass

from .runtime.values import (
    EMPTY, CaseClosure, Closure, Hash, Pair, Primitive, RecordV, Vector, WrappedValue, is_int,
    is_number, sketch, strip,
)
from .types.core import (
    BOOL, INT, NAT, NOTHING, REAL, STR, CaseFun, Forall, Fun, HashTable, Listof, Record, TVar,
    TypeOf, U, VecFixed, VecOf,
)


class Shape:
    pass


@dataclass(frozen=True)
class _Named(Shape):
    name: str

    def __str__(self):
        return self.name


IS_INT = _Named("integer?")
IS_NAT = _Named("natural?")
IS_REAL = _Named("real?")
IS_BOOL = _Named("boolean?")
IS_STR = _Named("string?")
IS_PROPER_LIST = _Named("list?")
IS_VECTOR = _Named("vector?")
IS_HASH = _Named("hash?")
# lax mode only: a one-cell test instead of a spine traversal
IS_LIST_HEAD = _Named("(or null? pair?)")


@dataclass(frozen=True)
class IsVectorLen(Shape):
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vector length must be non-negative")

    def __str__(self):
        return f"(vector/len {self.n})"


@dataclass(frozen=True)
class IsRecordWith(Shape):
    tag: str
    names: tuple

    def __str__(self):
        return f"(record/fields {self.tag}" + "".join(" " + n for n in self.names) + ")"


@dataclass(frozen=True)
class IsProcArity(Shape):
    arities: frozenset

    def __post_init__(self):
        if not self.arities:
            raise ValueError("IsProcArity needs at least one arity")

    def __str__(self):
        return "(procedure-arity-includes " + " ".join(map(str, sorted(self.arities))) + ")"


@dataclass(frozen=True)
class AnyOf(Shape):
    members: tuple

    def __post_init__(self):
        if len(self.members) < 2:
            raise ValueError("AnyOf needs at least two members")

    def __str__(self):
        return "(or " + " ".join(map(str, self.members)) + ")"


@dataclass(frozen=True)
class _Any(Shape):
    def __str__(self):
        return "any/c"


ANY_SHAPE = _Any()


@dataclass(frozen=True)
class Unsupported(Shape):
    reason: str

    def __str__(self):
        return f"(unsupported {self.reason})"


@dataclass(frozen=True)
class ShapeCheckOutcome:
    passed: bool
    witness: str = ""

    def __post_init__(self):
        if not self.passed and not self.witness:
            raise ValueError("failing outcome needs a witness description")

    def __bool__(self):
        return self.passed


PASS = ShapeCheckOutcome(True)

_BASE_SHAPES = {INT: IS_INT, NAT: IS_NAT, REAL: IS_REAL, BOOL: IS_BOOL, STR: IS_STR}


def shape_of(t, lax=False):
    """Compile a type to its shape.  ``lax`` collapses unions to ``any/c``
    and replaces the list traversal by a head test."""
    if t in _BASE_SHAPES:
        return _BASE_SHAPES[t]
    if t == NOTHING or isinstance(t, TVar):
        # no value inhabits Nothing, and a variable's shape is unknown
        return ANY_SHAPE
    if isinstance(t, Listof):
        return IS_LIST_HEAD if lax else IS_PROPER_LIST
    if isinstance(t, VecFixed):
        return IsVectorLen(len(t.elems))
    if isinstance(t, VecOf):
        return IS_VECTOR
    if isinstance(t, HashTable):
        return IS_HASH
    if isinstance(t, Record):
        return IsRecordWith(t.tag, t.field_names)
    if isinstance(t, Fun):
        return IsProcArity(frozenset({t.arity}))
    if isinstance(t, CaseFun):
        return IsProcArity(frozenset(b.arity for b in t.branches))
    if isinstance(t, U):
        if lax:
            return ANY_SHAPE
        return any_of(shape_of(m, lax) for m in t.members)
    if isinstance(t, Forall):
        if occurs_unguarded(t.var, t.body):
            return Unsupported(f"{t.var} is not under a type constructor in {t}")
        return shape_of(t.body, lax)
    if isinstance(t, TypeOf):
        raise TypeError(f"unresolved {t}")
    raise TypeError(f"no shape for {t!r}")


def any_of(shapes):
    """Union of shapes, flattened and deduplicated."""
    out = []
    for s in shapes:
        if isinstance(s, Unsupported):
            return s
        if s is ANY_SHAPE:
            return ANY_SHAPE
        for m in (s.members if isinstance(s, AnyOf) else (s,)):
            if m not in out:
                out.append(m)
    if len(out) == 1:
        return out[0]
    return AnyOf(tuple(out))


def occurs_unguarded(var, t):
    """Does ``var`` occur in ``t`` outside every type constructor?"""
    if isinstance(t, TVar):
        return t.name == var
    if isinstance(t, U):
        return any(occurs_unguarded(var, m) for m in t.members)
    if isinstance(t, Forall):
        return t.var != var and occurs_unguarded(var, t.body)
    return False


def check_shape(s, v, rt=None):
    """Decide whether ``v`` has shape ``s``.

    ``rt`` is the owning runtime, if any: its ``proper_lists`` cache is read
    and extended, and each spine cell traversed bumps ``counters.steps``.
    """
    if isinstance(s, Unsupported):
        raise ValueError(f"cannot check {s}")
    if holds(s, v, rt):
        return PASS
    return ShapeCheckOutcome(False, sketch(v))


def holds(s, v, rt=None):
    if s is ANY_SHAPE:
        return True
    if isinstance(s, AnyOf):
        return any(holds(m, v, rt) for m in s.members)
    v = strip(v)
    if s is IS_INT:
        return is_int(v)
    if s is IS_NAT:
        return is_int(v) and v >= 0
    if s is IS_REAL:
        return is_number(v)
    if s is IS_BOOL:
        return isinstance(v, bool)
    if s is IS_STR:
        return isinstance(v, str)
    if s is IS_PROPER_LIST:
        return proper_list(v, rt)
    if s is IS_LIST_HEAD:
        return v is EMPTY or isinstance(v, Pair)
    if s is IS_VECTOR:
        return isinstance(v, Vector)
    if isinstance(s, IsVectorLen):
        return isinstance(v, Vector) and len(v.items) == s.n
    if s is IS_HASH:
        return isinstance(v, Hash)
    if isinstance(s, IsRecordWith):
        return isinstance(v, RecordV) and v.tag == s.tag and all(n in v.fields for n in s.names)
    if isinstance(s, IsProcArity):
        return isinstance(v, (Closure, CaseClosure, Primitive, WrappedValue)) and s.arities <= v.arities
    raise TypeError(f"unknown shape {s!r}")


def proper_list(v, rt=None):
    """Cycle-safe spine walk, consulting and filling the runtime's cache."""
    cache = getattr(rt, "proper_lists", None)
    counters = getattr(rt, "counters", None)
    cells = []
    seen = set()
    cur = v
    while True:
        if cur is EMPTY:
            break
        if not isinstance(cur, Pair):
            return False
        if cache is not None and cur in cache:
            break
        if id(cur) in seen:
            return False
        seen.add(id(cur))
        cells.append(cur)
        if counters is not None:
            counters.steps += 1
        cur = cur.tail
    if cache is not None:
        cache.update(cells)
    return True
