"""Concrete syntax for types: s-expression -> Type."""
from __future__ import annotations

from ..syntax.reader import Atom, ParseError, SList, read_all
from .core import (
    BASES, NOTHING, CaseFun, Forall, Fun, HashTable, Listof, Record, TVar, TypeOf,
    VecFixed, VecOf, union,
)

# surface aliases accepted for the base types
_ALIASES = {
    "Integer": "Int", "Natural": "Nat", "Number": "Real", "Boolean": "Bool", "String": "Str",
}


def parse_type(sx, tvars=frozenset(), text=None):
    """Convert a reader datum into a Type.  ``tvars`` holds the bound type
    variables in scope."""
    if isinstance(sx, Atom):
        if sx.kind != "sym":
            raise ParseError(f"expected a type, got {sx.value!r}", sx.start, text)
        name = _ALIASES.get(sx.value, sx.value)
        if name in tvars:
            return TVar(name)
        if name in BASES and name != NOTHING.name:
            return BASES[name]
        raise ParseError(f"unknown type {sx.value}", sx.start, text)
    if not sx.items or not isinstance(sx.items[0], Atom) or sx.items[0].kind != "sym":
        raise ParseError("expected a type constructor", sx.start, text)
    head = sx.items[0].value
    args = sx.items[1:]

    def sub(x):
        return parse_type(x, tvars, text)

    def need(n):
        if len(args) != n:
            raise ParseError(f"{head} expects {n} argument(s)", sx.start, text)

    if head == "->":
        if not args:
            raise ParseError("-> needs a result type", sx.start, text)
        return Fun(tuple(sub(a) for a in args[:-1]), sub(args[-1]))
    if head == "case->":
        branches = tuple(sub(a) for a in args)
        if not branches or not all(isinstance(b, Fun) for b in branches):
            raise ParseError("case-> expects function types", sx.start, text)
        try:
            return CaseFun(branches)
        except ValueError as e:
            raise ParseError(str(e), sx.start, text) from None
    if head == "Listof":
        need(1)
        return Listof(sub(args[0]))
    if head == "Vector":
        return VecFixed(tuple(sub(a) for a in args))
    if head == "Vectorof":
        need(1)
        return VecOf(sub(args[0]))
    if head == "HashTable":
        need(2)
        return HashTable(sub(args[0]), sub(args[1]))
    if head == "Record":
        if not args or not isinstance(args[0], Atom) or args[0].kind != "sym":
            raise ParseError("Record needs a tag", sx.start, text)
        fields = []
        for f in args[1:]:
            if not (isinstance(f, SList) and len(f.items) == 2 and isinstance(f.items[0], Atom)):
                raise ParseError("record field must be [name Type]", getattr(f, "start", sx.start), text)
            fields.append((f.items[0].value, sub(f.items[1])))
        try:
            return Record(args[0].value, tuple(fields))
        except ValueError as e:
            raise ParseError(str(e), sx.start, text) from None
    if head == "U":
        members = [sub(a) for a in args]
        if len(set(members)) < 2:
            raise ParseError("U needs at least two distinct members", sx.start, text)
        return union(members)
    if head in ("All", "∀"):
        if len(args) != 2 or not isinstance(args[0], SList) or not args[0].items:
            raise ParseError("All expects (All (a ...) Type)", sx.start, text)
        names = [a.value for a in args[0].items]
        body = parse_type(args[1], tvars | set(names), text)
        for name in reversed(names):
            body = Forall(name, body)
        return body
    if head == "typeof":
        need(1)
        return TypeOf(args[0].value)
    raise ParseError(f"unknown type constructor {head}", sx.start, text)


def type_from_string(s):
    (sx,) = read_all(s)
    return parse_type(sx)
