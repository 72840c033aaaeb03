"""Collaborative blame for Shallow code.

Every value that crosses a typed/untyped boundary gets a *boundary entry*
(its type, the untyped client's location, and the location of the type
specification).  Every hooked elimination in typed code records a *link
entry* from the value it produced back to the value it came out of, with an
action saying how.  When a shape check fails, the map is walked from the
failing value back to every boundary it descends from (gathering), and the
boundaries whose type agrees with the value at that position are dropped
(filtering).
"""
from __future__ import annotations

from dataclasses import dataclass

from .runtime.values import is_trackable, sketch
from .shapes import Unsupported, check_shape, shape_of
from .types.core import (
    CaseFun, Forall, Fun, HashTable, Listof, Record, TVar, Type, VecFixed, VecOf, children,
)


class Action:
    pass


@dataclass(frozen=True)
class Dom(Action):
    n: int

    def __str__(self):
        return f"(dom {self.n})"


@dataclass(frozen=True)
class Cod(Action):
    n: int = 0

    def __str__(self):
        return f"(cod {self.n})"


@dataclass(frozen=True)
class ListElemAt(Action):
    n: int

    def __str__(self):
        return f"(list-elem {self.n})"


@dataclass(frozen=True)
class RecordField(Action):
    name: str

    def __str__(self):
        return f"(field {self.name})"


@dataclass(frozen=True)
class _Simple(Action):
    name: str

    def __str__(self):
        return self.name


LIST_ELEM = _Simple("list-elem")
LIST_REST = _Simple("list-rest")
HASH_KEY = _Simple("hash-key")
HASH_VALUE = _Simple("hash-value")
NOOP = _Simple("noop")


@dataclass(frozen=True)
class LabeledType:
    """A type with a blame label on every position.

    ``label`` is a SourceLoc, or None for an unblamable position.  Children
    follow the structure of ``type``.
    """

    type: Type
    label: object
    children: tuple = ()

    def __str__(self):
        mark = "-" if self.label is None else str(self.label)
        t = self.type
        kids = [str(c) for c in self.children]
        if isinstance(t, Fun):
            body = "(-> " + " ".join(kids) + ")"
        elif isinstance(t, CaseFun):
            body = "(case-> " + " ".join(kids) + ")"
        elif isinstance(t, Listof):
            body = f"(Listof {kids[0]})"
        elif isinstance(t, VecFixed):
            body = "(Vector" + "".join(" " + k for k in kids) + ")"
        elif isinstance(t, VecOf):
            body = f"(Vectorof {kids[0]})"
        elif isinstance(t, HashTable):
            body = f"(HashTable {kids[0]} {kids[1]})"
        elif isinstance(t, Record):
            body = f"(Record {t.tag}" + "".join(
                f" [{n} {k}]" for (n, _), k in zip(t.fields, kids)) + ")"
        else:
            return f"{t}@{mark}"
        return f"{body}@{mark}"


def label_type(t, client_loc, label=None):
    """Label every position of ``t`` with ``client_loc`` except function
    results, which are unblamable."""
    if label is None:
        label = client_loc
    if isinstance(t, Fun):
        kids = tuple(label_type(p, client_loc) for p in t.params) + (
            _unblamable(t.result, client_loc),)
        return LabeledType(t, label, kids)
    if isinstance(t, CaseFun):
        return LabeledType(t, label, tuple(label_type(b, client_loc) for b in t.branches))
    if isinstance(t, (Listof, VecOf)):
        return LabeledType(t, label, (label_type(t.elem, client_loc),))
    if isinstance(t, VecFixed):
        return LabeledType(t, label, tuple(label_type(e, client_loc) for e in t.elems))
    if isinstance(t, HashTable):
        return LabeledType(t, label, (label_type(t.key, client_loc), label_type(t.val, client_loc)))
    if isinstance(t, Record):
        return LabeledType(t, label, tuple(label_type(ft, client_loc) for _, ft in t.fields))
    return LabeledType(t, label)


def _unblamable(t, client_loc):
    inner = label_type(t, client_loc)
    return LabeledType(inner.type, None, inner.children)


@dataclass(frozen=True, eq=False)
class BoundaryEntry:
    labeled: LabeledType
    client_loc: object
    spec_loc: object

    @property
    def type(self):
        return self.labeled.type

    def __str__(self):
        return f"{self.client_loc} ⇄ {self.spec_loc} : {self.labeled}"


@dataclass(frozen=True, eq=False)
class LinkEntry:
    parent: int  # identity key of the parent value
    action: Action


class BlameMap:
    """Identity-keyed, append-only table of boundary and link entries.

    Values are held strongly so their identities stay valid for the life of
    the run; the map grows without bound by design.
    """

    def __init__(self, counters=None):
        self.entries = {}
        self._alive = {}
        self.counters = counters
        self.size = 0

    def key(self, v):
        return id(v) if is_trackable(v) else None

    def _append(self, v, entry):
        k = id(v)
        self._alive[k] = v
        self.entries.setdefault(k, []).append(entry)
        self.size += 1
        if self.counters is not None:
            self.counters.map_size = self.size

    def _bump(self):
        if self.counters is not None:
            self.counters.blame_ops += 1

    def record_boundary(self, v, t, client_loc, spec_loc):
        self._bump()
        if is_trackable(v):
            self._append(v, BoundaryEntry(label_type(t, client_loc), client_loc, spec_loc))

    def record_link(self, child, parent, action):
        self._bump()
        if is_trackable(child) and is_trackable(parent):
            self._alive[id(parent)] = parent
            self._append(child, LinkEntry(id(parent), action))

    def entries_of(self, v):
        return list(self.entries.get(id(v), ())) if is_trackable(v) else []

    def value_of(self, key):
        return self._alive.get(key)

    # -- gathering ----------------------------------------------------

    def gather_with_paths(self, start):
        """Boundary entries reachable from ``start`` with the action path
        leading from each entry's value down to the start.

        ``start`` is a value, or a ``(parent, action)`` pair when the failing
        value itself is untracked.  Depth-first, visited-set, discovery order.
        """
        if isinstance(start, tuple):
            parent, action = start
            if not is_trackable(parent):
                return []
            todo = [(id(parent), (action,))]
        else:
            if not is_trackable(start):
                return []
            todo = [(id(start), ())]
        out = []
        visited = set()
        # explicit stack of entry iterators: link chains can be very long
        for key, path in todo:
            if key in visited:
                continue
            visited.add(key)
            stack = [(iter(self.entries.get(key, ())), path)]
            while stack:
                it, p = stack[-1]
                e = next(it, None)
                if e is None:
                    stack.pop()
                elif isinstance(e, BoundaryEntry):
                    out.append((e, p))
                elif e.parent not in visited:
                    visited.add(e.parent)
                    stack.append((iter(self.entries.get(e.parent, ())), (e.action,) + p))
        return out

    def gather(self, start):
        return [e for e, _ in self.gather_with_paths(start)]


def position_type(t, path):
    """The type found by following ``path`` into ``t``, or None when an
    action does not fit the type's structure."""
    for a in path:
        t = _step(t, a)
        if t is None:
            return None
    return t


def _step(t, a):
    if a == NOOP:
        return t
    if isinstance(a, Dom):
        if isinstance(t, Fun) and a.n < t.arity:
            return t.params[a.n]
        return None
    if isinstance(a, Cod):
        if isinstance(t, Fun) and a.n == 0:
            return t.result
        return None
    if a == LIST_ELEM:
        if isinstance(t, (Listof, VecOf)):
            return t.elem
        return None
    if isinstance(a, ListElemAt):
        if isinstance(t, (Listof, VecOf)):
            return t.elem
        if isinstance(t, VecFixed) and a.n < len(t.elems):
            return t.elems[a.n]
        return None
    if a == LIST_REST:
        return t if isinstance(t, Listof) else None
    if a == HASH_KEY:
        return t.key if isinstance(t, HashTable) else None
    if a == HASH_VALUE:
        return t.val if isinstance(t, HashTable) else None
    if isinstance(a, RecordField):
        return t.field_type(a.name) if isinstance(t, Record) else None
    return None


def _contains_tvar(t):
    if isinstance(t, (TVar, Forall)):
        return True
    return any(_contains_tvar(c) for c in children(t))


def filter_blame(witness, gathered):
    """Keep the entries whose expectation at the witness's position
    disagrees with the witness.

    ``gathered`` is a sequence of ``(entry, path)`` pairs.  An entry is also
    kept when the path cannot be followed through its type, or the position
    holds a type variable: pruning is only done when it is certain.
    """
    out = []
    for entry, path in gathered:
        pos = position_type(entry.type, path)
        if pos is None or _contains_tvar(pos):
            out.append(entry)
            continue
        s = shape_of(pos)
        if isinstance(s, Unsupported) or not check_shape(s, witness).passed:
            out.append(entry)
    return out


@dataclass
class BlameReport:
    witness: str
    site: object
    filtered: list
    unfiltered: list

    @property
    def boundaries(self):
        """Entries to show the programmer; falls back to everything
        gathered when filtering pruned all of them."""
        return self.filtered if self.filtered else self.unfiltered

    def lines(self):
        out = [f"witness: {self.witness}", f"check: {self.site}"]
        if not self.filtered and self.unfiltered:
            out.append("filtering pruned every boundary; showing all gathered boundaries")
        for e in self.boundaries:
            out.append(str(e))
        out.append(f"unfiltered: {len(self.unfiltered)}")
        return out


def blame_for(bmap, witness, hook, site):
    """Gather from the witness (or from the site's hook when the witness is
    untracked) and filter."""
    if is_trackable(witness) and bmap.entries.get(id(witness)):
        gathered = bmap.gather_with_paths(witness)
    elif hook is not None:
        gathered = bmap.gather_with_paths(hook)
    else:
        gathered = bmap.gather_with_paths(witness)
    return BlameReport(sketch(witness), site, filter_blame(witness, gathered),
                       [e for e, _ in gathered])
