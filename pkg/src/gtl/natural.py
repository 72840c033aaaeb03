"""Deep boundary enforcement: types become contracts at module boundaries.

First-order values are checked completely when they cross.  Functions,
mutable vectors and hash tables are wrapped, and the wrapper checks each
use.  A failure always names the one boundary the value crossed and the
party on the wrong side of it.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .runtime.errors import ContractError, UnsupportedBoundaryType
from .runtime.values import (
    Hash, RecordV, Vector, WrappedValue, from_list, sketch, strip, to_list,
)
from .shapes import (
    IS_BOOL, IS_HASH, IS_INT, IS_NAT, IS_REAL, IS_STR, IS_VECTOR, IsProcArity, IsRecordWith,
    IsVectorLen, holds, shape_of,
)
from .types.core import (
    NOTHING, CaseFun, Forall, Fun, HashTable, Listof, Record, TVar, U, VecFixed, VecOf, children,
)

__all__ = [
    "Boundary", "Flat", "FunGuard", "ListGuard", "VecGuard", "HashGuard", "RecordGuard",
    "UnionPick", "Reject", "WrappedValue", "compile_contract", "apply_contract",
]


@dataclass(frozen=True)
class Boundary:
    id: int
    importer_loc: object
    exporter_loc: object
    type: object
    positive: str  # producer of the value
    negative: str  # consumer of the value

    def __post_init__(self):
        if self.positive == self.negative:
            raise ValueError("a boundary separates two different parties")

    def party(self, swapped):
        return self.negative if swapped else self.positive


class BoundaryCounter:
    """Hands out boundary ids, unique within one run."""

    def __init__(self):
        self._ids = itertools.count(1)

    def make(self, importer_loc, exporter_loc, t, positive, negative):
        return Boundary(next(self._ids), importer_loc, exporter_loc, t, positive, negative)


class Contract:
    pass


@dataclass(frozen=True)
class Flat(Contract):
    """Complete first-order check, including every list element."""

    type: object


@dataclass(frozen=True)
class FunGuard(Contract):
    type: object
    branches: tuple  # of (param contracts, result contract)

    @property
    def arities(self):
        return frozenset(len(ps) for ps, _ in self.branches)

    def branch(self, n):
        for ps, r in self.branches:
            if len(ps) == n:
                return ps, r
        return None


@dataclass(frozen=True)
class ListGuard(Contract):
    """Eagerly rebuilds an immutable list whose elements need wrappers."""

    type: object
    elem: Contract


@dataclass(frozen=True)
class VecGuard(Contract):
    """Mutable vectors are guarded lazily on reads and writes; fixed-size
    (immutable) vectors are checked eagerly, element by element."""

    type: object
    elem: Contract = None
    elems: tuple = None


@dataclass(frozen=True)
class HashGuard(Contract):
    type: object
    key: Contract
    val: Contract


@dataclass(frozen=True)
class RecordGuard(Contract):
    type: object
    fields: tuple  # of (name, contract)


@dataclass(frozen=True)
class UnionPick(Contract):
    type: object
    members: tuple  # of (shape, contract); shapes are pairwise exclusive


@dataclass(frozen=True)
class Reject(Contract):
    type: object
    reason: str


def is_first_order(t):
    if isinstance(t, (Fun, CaseFun, VecOf, HashTable, Forall, TVar)):
        return False
    return all(is_first_order(c) for c in children(t))


def compile_contract(t):
    """Contract enforcing ``t`` at a boundary (pure; the boundary is
    supplied when the contract is applied)."""
    if isinstance(t, (Forall, TVar)):
        return Reject(t, "no contract enforces a polymorphic type")
    if is_first_order(t):
        return Flat(t)
    if isinstance(t, Fun):
        return _guard_fun(t, (t,))
    if isinstance(t, CaseFun):
        return _guard_fun(t, t.branches)
    if isinstance(t, Listof):
        return _lift(ListGuard, t, compile_contract(t.elem))
    if isinstance(t, VecOf):
        return _lift(VecGuard, t, compile_contract(t.elem))
    if isinstance(t, VecFixed):
        cs = tuple(compile_contract(e) for e in t.elems)
        bad = _first_reject(cs)
        return bad or VecGuard(t, elems=cs)
    if isinstance(t, HashTable):
        k, v = compile_contract(t.key), compile_contract(t.val)
        return _first_reject((k, v)) or HashGuard(t, k, v)
    if isinstance(t, Record):
        cs = tuple((n, compile_contract(ft)) for n, ft in t.fields)
        return _first_reject(c for _, c in cs) or RecordGuard(t, cs)
    if isinstance(t, U):
        return _union(t)
    raise TypeError(f"no contract for {t!r}")


def _first_reject(cs):
    for c in cs:
        if isinstance(c, Reject):
            return c
    return None


def _lift(cls, t, inner):
    return inner if isinstance(inner, Reject) else cls(t, inner)


def _guard_fun(t, branches):
    out = []
    for b in branches:
        ps = tuple(compile_contract(p) for p in b.params)
        r = compile_contract(b.result)
        bad = _first_reject(ps + (r,))
        if bad:
            return bad
        out.append((ps, r))
    return FunGuard(t, tuple(out))


def _shape_class(s):
    """Coarse family of a shape; members of one family may overlap."""
    if s in (IS_INT, IS_NAT, IS_REAL):
        return "number"
    if s in (IS_BOOL, IS_STR, IS_HASH):
        return str(s)
    if s == IS_VECTOR or isinstance(s, IsVectorLen):
        return "vector"
    if isinstance(s, IsRecordWith):
        return ("record", s.tag)
    if isinstance(s, IsProcArity):
        return "procedure"
    return "list"


def _union(t):
    members = []
    seen = set()
    for m in t.members:
        c = compile_contract(m)
        if isinstance(c, Reject):
            return c
        cls = _shape_class(shape_of(m))
        if cls in seen:
            return Reject(t, "union members are not distinguishable by shape")
        seen.add(cls)
        members.append((shape_of(m), c))
    return UnionPick(t, tuple(members))


# -- applying contracts ---------------------------------------------------


def _fail(b, swapped, expected, v):
    raise ContractError(b, b.party(swapped), expected, sketch(v))


def _bump(rt, name, n=1):
    if rt is not None:
        setattr(rt.counters, name, getattr(rt.counters, name) + n)


def deep_check(t, v, rt=None):
    """Complete structural check of a first-order type."""
    _bump(rt, "flat_checks")
    v = strip(v)
    if t == NOTHING:
        return False
    if isinstance(t, Listof):
        items = to_list(v)
        if items is None:
            return False
        _bump(rt, "steps", len(items))
        return all(deep_check(t.elem, x, rt) for x in items)
    if isinstance(t, VecFixed):
        return (isinstance(v, Vector) and len(v.items) == len(t.elems)
                and all(deep_check(e, x, rt) for e, x in zip(t.elems, v.items)))
    if isinstance(t, Record):
        return (isinstance(v, RecordV) and v.tag == t.tag
                and all(n in v.fields and deep_check(ft, v.fields[n], rt) for n, ft in t.fields))
    if isinstance(t, U):
        return any(deep_check(m, v, rt) for m in t.members)
    return holds(shape_of(t), v)


def apply_contract(c, v, b, rt=None, swapped=False):
    """Check ``v`` against ``c`` as it crosses ``b``.

    Returns ``v`` itself for passing first-order values, a wrapper or a
    rebuilt container otherwise.  ``swapped`` means the value travels from
    the negative party to the positive one (an argument to a wrapped
    function, a write into a guarded vector).
    """
    if isinstance(c, Flat):
        if not deep_check(c.type, v, rt):
            _fail(b, swapped, c.type, v)
        return v
    if isinstance(c, Reject):
        raise UnsupportedBoundaryType(b.importer_loc, c.type, "deep", c.reason)
    _bump(rt, "flat_checks")
    if isinstance(c, FunGuard):
        if not holds(IsProcArity(c.arities), v):
            _fail(b, swapped, c.type, v)
        return _wrap(v, c, b, rt, swapped)
    if isinstance(c, ListGuard):
        items = to_list(strip(v))
        if items is None:
            _fail(b, swapped, c.type, v)
        _bump(rt, "steps", len(items))
        return from_list([apply_contract(c.elem, x, b, rt, swapped) for x in items])
    if isinstance(c, VecGuard):
        u = strip(v)
        if c.elems is not None:
            if not (isinstance(u, Vector) and len(u.items) == len(c.elems)):
                _fail(b, swapped, c.type, v)
            return Vector([apply_contract(ec, x, b, rt, swapped) for ec, x in zip(c.elems, u.items)],
                          mutable=False)
        if not isinstance(u, Vector):
            _fail(b, swapped, c.type, v)
        return _wrap(v, c, b, rt, swapped)
    if isinstance(c, HashGuard):
        if not isinstance(strip(v), Hash):
            _fail(b, swapped, c.type, v)
        return _wrap(v, c, b, rt, swapped)
    if isinstance(c, RecordGuard):
        u = strip(v)
        if not (isinstance(u, RecordV) and u.tag == c.type.tag
                and all(n in u.fields for n, _ in c.fields)):
            _fail(b, swapped, c.type, v)
        fields = dict(u.fields)
        for n, fc in c.fields:
            fields[n] = apply_contract(fc, u.fields[n], b, rt, swapped)
        return RecordV(u.tag, fields)
    if isinstance(c, UnionPick):
        for s, mc in c.members:
            if holds(s, v):
                return apply_contract(mc, v, b, rt, swapped)
        _fail(b, swapped, c.type, v)
    raise TypeError(f"unknown contract {c!r}")


def _wrap(v, c, b, rt, swapped):
    _bump(rt, "wrappers_allocated")
    return WrappedValue(v, c, b, swapped)


# -- using wrapped values ---------------------------------------------------


def call_wrapped(rt, w, args, call):
    """Apply wrapper ``w``: check the arguments on the way in and the
    result on the way out.  ``call(f, args)`` performs the inner call."""
    c, b, sw = w.contract, w.boundary, w.swapped
    _bump(rt, "wrapped_calls")
    br = c.branch(len(args))
    if br is None:
        raise ContractError(b, b.party(not sw), c.type, f"{len(args)} argument(s)")
    ps, r = br
    checked = [apply_contract(pc, a, b, rt, not sw) for pc, a in zip(ps, args)]
    return apply_contract(r, call(w.value, checked), b, rt, sw)


def guarded_read(rt, w, read):
    """Read through a vector or hash wrapper; the value read is checked as
    coming from the producer."""
    c = w.contract
    elem = c.elem if isinstance(c, VecGuard) else c.val
    return apply_contract(elem, read(w.value), w.boundary, rt, w.swapped)


def guarded_write(rt, w, value, write, key=None):
    """Write through a wrapper; the written value (and hash key) is checked
    as coming from the consumer."""
    c = w.contract
    if isinstance(c, HashGuard):
        key = apply_contract(c.key, key, w.boundary, rt, not w.swapped)
        value = apply_contract(c.val, value, w.boundary, rt, not w.swapped)
    else:
        value = apply_contract(c.elem, value, w.boundary, rt, not w.swapped)
    return write(w.value, key, value)


def guarded_key(rt, w, key):
    """Check a lookup key against a hash wrapper's key contract."""
    return apply_contract(w.contract.key, key, w.boundary, rt, not w.swapped)


def monitoring_violations(value, t):
    """Places in ``value`` where a higher-order part of ``t`` is not behind
    a wrapper.  Empty for values that crossed a Deep boundary."""
    out = []
    _monitor(value, t, out, "")
    return out


def _monitor(v, t, out, path):
    if isinstance(t, (Fun, CaseFun, VecOf, HashTable)):
        if not isinstance(v, WrappedValue):
            out.append(path or "<value>")
        return
    if isinstance(t, Listof) and not is_first_order(t):
        for i, x in enumerate(to_list(strip(v)) or []):
            _monitor(x, t.elem, out, f"{path}[{i}]")
    elif isinstance(t, VecFixed) and not is_first_order(t):
        u = strip(v)
        for i, (x, et) in enumerate(zip(getattr(u, "items", []), t.elems)):
            _monitor(x, et, out, f"{path}[{i}]")
    elif isinstance(t, Record) and not is_first_order(t):
        u = strip(v)
        for n, ft in t.fields:
            if isinstance(u, RecordV) and n in u.fields:
                _monitor(u.fields[n], ft, out, f"{path}.{n}")
    elif isinstance(t, U) and not is_first_order(t):
        for m in t.members:
            if holds(shape_of(m), v):
                _monitor(v, m, out, path)
                break
