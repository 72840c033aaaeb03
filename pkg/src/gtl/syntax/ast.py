"""Surface and kernel AST for GTL.

Every node carries a :class:`SourceLoc` and a program-unique ``nid`` used to
key side tables (static types, check sites).  Neither participates in
structural equality.
"""
from __future__ import annotations

import dataclasses
import itertools
from dataclasses import dataclass, field
from enum import Enum


class Origin(Enum):
    USER = "user"
    DESUGARED = "desugared"


class Lang(Enum):
    TYPED = "typed"
    UNTYPED = "untyped"
    CONFIGURABLE = "configurable"


@dataclass(frozen=True)
class SourceLoc:
    module: str
    start: int
    end: int
    origin: Origin = Origin.USER

    def __post_init__(self):
        if self.start > self.end:
            raise ValueError(f"bad span {self.start}..{self.end}")

    def desugared(self):
        return dataclasses.replace(self, origin=Origin.DESUGARED)

    def contains(self, other):
        return self.module == other.module and self.start <= other.start and other.end <= self.end

    def __str__(self):
        return f"{self.module}:{self.start}"


NOWHERE = SourceLoc("<runtime>", 0, 0)

_ids = itertools.count(1)


def fresh_id():
    return next(_ids)


def _loc():
    return field(default=NOWHERE, compare=False, repr=False, kw_only=True)


def _nid():
    return field(default_factory=fresh_id, compare=False, repr=False, kw_only=True)


@dataclass
class Node:
    loc: SourceLoc = _loc()
    nid: int = _nid()

    @property
    def origin(self):
        return self.loc.origin


@dataclass
class Lit(Node):
    value: object  # int | float | bool | str | EMPTY


class _Empty:
    """The literal empty list."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "empty"


EMPTY = _Empty()


@dataclass
class Var(Node):
    name: str


@dataclass
class Param(Node):
    name: str
    type: object = None


@dataclass
class Lambda(Node):
    params: list
    ret: object  # Type | None
    body: Node

    @property
    def arity(self):
        return len(self.params)


@dataclass
class CaseLambda(Node):
    branches: list  # of Lambda


@dataclass
class App(Node):
    fn: Node
    args: list


@dataclass
class PrimCall(Node):
    op: str
    args: list
    # cleared by the optimizer when a bounds check is statically redundant
    bounds_checked: bool = True


@dataclass
class If(Node):
    test: Node
    then: Node
    orelse: Node


@dataclass
class Binding(Node):
    name: str
    type: object
    expr: Node


@dataclass
class Let(Node):
    """Sequential bindings (each sees the previous ones)."""

    bindings: list
    body: Node


@dataclass
class Letrec(Node):
    bindings: list
    body: Node


@dataclass
class Begin(Node):
    exprs: list


@dataclass
class ListLit(Node):
    elems: list


@dataclass
class VectorLit(Node):
    elems: list


@dataclass
class HashLit(Node):
    pairs: list  # of (key, value) node tuples


@dataclass
class RecordLit(Node):
    tag: str
    fields: list  # of (name, node) tuples


@dataclass
class RecordGet(Node):
    expr: Node
    field: str


@dataclass
class Cast(Node):
    expr: Node
    type: object


@dataclass
class Inst(Node):
    expr: Node
    type: object


@dataclass
class ForSum(Node):
    """Surface only: sum ``body`` over the elements of a list."""

    var: str
    seq: Node
    body: Node
    acc_type: object = None


@dataclass
class ForSkip(Node):
    """Surface only: sum ``body`` over a sequence object that may yield
    values the loop must skip (the ``use-val?`` protocol)."""

    var: str
    src: Node
    body: Node
    acc_type: object = None


@dataclass
class Import(Node):
    source: str
    binding: str
    declared_type: object = None


@dataclass
class Define(Node):
    name: str
    type: object
    expr: Node


@dataclass
class ModuleDecl(Node):
    name: str
    lang: Lang
    imports: list
    defs: list

    def __post_init__(self):
        seen = set()
        for imp in self.imports:
            if imp.binding in seen:
                raise ValueError(f"duplicate import {imp.binding} in {self.name}")
            if imp.source == self.name:
                raise ValueError(f"module {self.name} imports itself")
            seen.add(imp.binding)

    def definition(self, name):
        for d in self.defs:
            if d.name == name:
                return d
        return None


def child_nodes(node):
    """Direct AST children of ``node``, in field order."""
    out = []
    for f in dataclasses.fields(node):
        if f.name in ("loc", "nid"):
            continue
        _collect(getattr(node, f.name), out)
    return out


def _collect(x, out):
    if isinstance(x, Node):
        out.append(x)
    elif isinstance(x, (list, tuple)):
        for y in x:
            _collect(y, out)


def walk(node):
    """Pre-order traversal of every node under (and including) ``node``."""
    stack = [node]
    while stack:
        n = stack.pop()
        yield n
        stack.extend(reversed(child_nodes(n)))
