"""Static types, their concrete syntax, substitution and subtyping."""
from __future__ import annotations

from dataclasses import dataclass


class Type:
    __slots__ = ()


@dataclass(frozen=True)
class Base(Type):
    name: str

    def __str__(self):
        return self.name


INT = Base("Int")
NAT = Base("Nat")
REAL = Base("Real")
BOOL = Base("Bool")
STR = Base("Str")
# Bottom; only ever inferred for empty constructors, never written by users.
NOTHING = Base("Nothing")

BASES = {t.name: t for t in (INT, NAT, REAL, BOOL, STR, NOTHING)}
NUMERIC_RANK = {NAT: 0, INT: 1, REAL: 2}


@dataclass(frozen=True)
class Fun(Type):
    params: tuple
    result: Type

    @property
    def arity(self):
        return len(self.params)

    def __str__(self):
        return "(-> " + " ".join(str(t) for t in (*self.params, self.result)) + ")"


@dataclass(frozen=True)
class CaseFun(Type):
    branches: tuple

    def __post_init__(self):
        arities = [b.arity for b in self.branches]
        if len(set(arities)) != len(arities):
            raise ValueError("case-> branches must have distinct arities")

    def branch_for(self, arity):
        for b in self.branches:
            if b.arity == arity:
                return b
        return None

    def __str__(self):
        return "(case-> " + " ".join(map(str, self.branches)) + ")"


@dataclass(frozen=True)
class Listof(Type):
    elem: Type

    def __str__(self):
        return f"(Listof {self.elem})"


@dataclass(frozen=True)
class VecFixed(Type):
    elems: tuple

    def __str__(self):
        return "(Vector" + "".join(f" {e}" for e in self.elems) + ")"


@dataclass(frozen=True)
class VecOf(Type):
    elem: Type

    def __str__(self):
        return f"(Vectorof {self.elem})"


@dataclass(frozen=True)
class HashTable(Type):
    key: Type
    val: Type

    def __str__(self):
        return f"(HashTable {self.key} {self.val})"


@dataclass(frozen=True)
class Record(Type):
    tag: str
    fields: tuple  # ((name, Type), ...)

    def __post_init__(self):
        names = [f for f, _ in self.fields]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate field in record {self.tag}")

    def field_type(self, name):
        for f, t in self.fields:
            if f == name:
                return t
        return None

    @property
    def field_names(self):
        return tuple(f for f, _ in self.fields)

    def __str__(self):
        return f"(Record {self.tag}" + "".join(f" [{f} {t}]" for f, t in self.fields) + ")"


@dataclass(frozen=True)
class U(Type):
    members: tuple

    def __post_init__(self):
        if len(self.members) < 2 or len(set(self.members)) != len(self.members):
            raise ValueError("a union needs at least two distinct members")

    def __str__(self):
        return "(U " + " ".join(map(str, self.members)) + ")"


@dataclass(frozen=True)
class Forall(Type):
    var: str
    body: Type

    def __str__(self):
        return f"(All ({self.var}) {self.body})"


@dataclass(frozen=True)
class TVar(Type):
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class TypeOf(Type):
    """The static type of a variable in scope; emitted only by the desugarer."""

    name: str

    def __str__(self):
        return f"(typeof {self.name})"


def union(types):
    """Build a union, flattening nested unions and dropping duplicates."""
    out = []
    for t in types:
        for m in (t.members if isinstance(t, U) else (t,)):
            if m == NOTHING or m in out:
                continue
            out.append(m)
    if not out:
        return NOTHING
    if len(out) == 1:
        return out[0]
    return U(tuple(out))


def children(t):
    if isinstance(t, Fun):
        return (*t.params, t.result)
    if isinstance(t, CaseFun):
        return t.branches
    if isinstance(t, (Listof, VecOf)):
        return (t.elem,)
    if isinstance(t, VecFixed):
        return t.elems
    if isinstance(t, HashTable):
        return (t.key, t.val)
    if isinstance(t, Record):
        return tuple(ft for _, ft in t.fields)
    if isinstance(t, U):
        return t.members
    if isinstance(t, Forall):
        return (t.body,)
    return ()


def free_vars(t):
    if isinstance(t, TVar):
        return {t.name}
    if isinstance(t, Forall):
        return free_vars(t.body) - {t.var}
    out = set()
    for c in children(t):
        out |= free_vars(c)
    return out


def is_higher_order(t):
    """True if any position of ``t`` is a function or mutable container."""
    if isinstance(t, (Fun, CaseFun, VecOf, HashTable, Forall, TVar)):
        return True
    return any(is_higher_order(c) for c in children(t))


def substitute(t, var, replacement):
    if isinstance(t, TVar):
        return replacement if t.name == var else t
    if isinstance(t, Base) or isinstance(t, TypeOf):
        return t
    if isinstance(t, Forall):
        if t.var == var:
            return t
        if t.var in free_vars(replacement):
            fresh = _fresh_name(t.var, free_vars(replacement) | free_vars(t.body))
            body = substitute(t.body, t.var, TVar(fresh))
            return Forall(fresh, substitute(body, var, replacement))
        return Forall(t.var, substitute(t.body, var, replacement))
    return map_children(t, lambda c: substitute(c, var, replacement))


def _fresh_name(base, avoid):
    i = 1
    while f"{base}{i}" in avoid:
        i += 1
    return f"{base}{i}"


def map_children(t, f):
    if isinstance(t, Fun):
        return Fun(tuple(f(p) for p in t.params), f(t.result))
    if isinstance(t, CaseFun):
        return CaseFun(tuple(f(b) for b in t.branches))
    if isinstance(t, Listof):
        return Listof(f(t.elem))
    if isinstance(t, VecOf):
        return VecOf(f(t.elem))
    if isinstance(t, VecFixed):
        return VecFixed(tuple(f(e) for e in t.elems))
    if isinstance(t, HashTable):
        return HashTable(f(t.key), f(t.val))
    if isinstance(t, Record):
        return Record(t.tag, tuple((n, f(ft)) for n, ft in t.fields))
    if isinstance(t, U):
        return union([f(m) for m in t.members])
    if isinstance(t, Forall):
        return Forall(t.var, f(t.body))
    return t


def subtype(a, b):
    """Structural subtyping: Nat <: Int <: Real, contravariant domains,
    covariant immutable containers, invariant mutable ones, record width."""
    if a == b or a == NOTHING:
        return True
    if isinstance(a, U):
        return all(subtype(m, b) for m in a.members)
    if isinstance(b, U):
        return any(subtype(a, m) for m in b.members)
    if a in NUMERIC_RANK and b in NUMERIC_RANK:
        return NUMERIC_RANK[a] <= NUMERIC_RANK[b]
    if isinstance(a, Fun) and isinstance(b, Fun):
        return (
            a.arity == b.arity
            and all(subtype(pb, pa) for pa, pb in zip(a.params, b.params))
            and subtype(a.result, b.result)
        )
    if isinstance(b, CaseFun):
        return all(subtype(a, br) for br in b.branches)
    if isinstance(a, CaseFun) and isinstance(b, Fun):
        return any(subtype(br, b) for br in a.branches)
    if isinstance(a, Listof) and isinstance(b, Listof):
        return subtype(a.elem, b.elem)
    if isinstance(a, VecFixed) and isinstance(b, VecFixed):
        return len(a.elems) == len(b.elems) and all(map(subtype, a.elems, b.elems))
    if isinstance(a, VecOf) and isinstance(b, VecOf):
        return a.elem == NOTHING or equivalent(a.elem, b.elem)
    if isinstance(a, HashTable) and isinstance(b, HashTable):
        if a.key == NOTHING and a.val == NOTHING:
            return True
        return equivalent(a.key, b.key) and equivalent(a.val, b.val)
    if isinstance(a, Record) and isinstance(b, Record):
        if a.tag != b.tag:
            return False
        for name, bt in b.fields:
            at = a.field_type(name)
            if at is None or not subtype(at, bt):
                return False
        return True
    if isinstance(a, Forall) and isinstance(b, Forall):
        return subtype(a.body, substitute(b.body, b.var, TVar(a.var)))
    return False


def equivalent(a, b):
    return subtype(a, b) and subtype(b, a)


def join(a, b):
    """Least-ish upper bound used for if-branches and list literals."""
    if subtype(a, b):
        return b
    if subtype(b, a):
        return a
    if a in NUMERIC_RANK and b in NUMERIC_RANK:
        return max(a, b, key=NUMERIC_RANK.get)
    if isinstance(a, Listof) and isinstance(b, Listof):
        return Listof(join(a.elem, b.elem))
    return union([a, b])


def join_all(types):
    out = NOTHING
    for t in types:
        out = join(out, t)
    return out
