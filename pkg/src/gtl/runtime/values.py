"""Runtime values.

Numbers, booleans and strings are plain Python ``int``/``float``/``bool``/
``str``; the empty list is the reader's ``EMPTY`` constant.  Everything else
is a heap object with identity, which is what the blame map keys on.
"""
from __future__ import annotations

from ..syntax.ast import EMPTY


class Pair:
    """Immutable cons cell."""

    __slots__ = ("head", "tail", "__weakref__")

    def __init__(self, head, tail):
        self.head = head
        self.tail = tail


class Vector:
    __slots__ = ("items", "mutable", "__weakref__")

    def __init__(self, items, mutable=True):
        self.items = list(items)
        self.mutable = mutable


class Hash:
    __slots__ = ("table", "__weakref__")

    def __init__(self, pairs=()):
        self.table = {}
        for k, v in pairs:
            self.set(k, v)

    def set(self, k, v):
        self.table[hash_key(k)] = (k, v)

    def get(self, k):
        return self.table[hash_key(k)][1]

    def has(self, k):
        return hash_key(k) in self.table

    def items(self):
        return list(self.table.values())


def hash_key(k):
    # keep 1, 1.0 and #t apart
    if isinstance(k, (bool, int, float, str)):
        return (type(k).__name__, k)
    return ("ref", id(k))


class RecordV:
    __slots__ = ("tag", "fields", "__weakref__")

    def __init__(self, tag, fields):
        self.tag = tag
        self.fields = dict(fields)


class Closure:
    __slots__ = ("lam", "env", "module", "typed", "name", "__weakref__")

    def __init__(self, lam, env, module, typed, name=None):
        self.lam = lam
        self.env = env
        self.module = module
        self.typed = typed
        self.name = name

    @property
    def arities(self):
        return frozenset({len(self.lam.params)})


class CaseClosure:
    __slots__ = ("node", "branches", "module", "typed", "name", "__weakref__")

    def __init__(self, node, branches, module, typed, name=None):
        self.node = node
        self.branches = branches  # Closures, one per arity
        self.module = module
        self.typed = typed
        self.name = name

    @property
    def arities(self):
        return frozenset(len(b.lam.params) for b in self.branches)

    def branch_for(self, n):
        for b in self.branches:
            if len(b.lam.params) == n:
                return b
        return None


class Primitive:
    """A trusted runtime-library procedure."""

    __slots__ = ("name", "arities", "fn", "__weakref__")

    def __init__(self, name, arities, fn):
        self.name = name
        self.arities = frozenset(arities)
        self.fn = fn


class WrappedValue:
    """A value seen through a Deep-mode contract.

    ``swapped`` is set when the wrapper guards the value travelling in the
    reverse direction (a callback handed back across the boundary), which
    flips who is blamed for what.
    """

    __slots__ = ("value", "contract", "boundary", "swapped", "__weakref__")

    def __init__(self, value, contract, boundary, swapped=False):
        self.value = value
        self.contract = contract
        self.boundary = boundary
        self.swapped = swapped

    @property
    def arities(self):
        return getattr(self.value, "arities", None)

    def unwrap(self):
        v = self
        while isinstance(v, WrappedValue):
            v = v.value
        return v


def strip(v):
    while isinstance(v, WrappedValue):
        v = v.value
    return v


class _Sentinel:
    __slots__ = ()

    def __repr__(self):
        return "#<eof>"


EOF = _Sentinel()


def is_number(v):
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def is_int(v):
    return isinstance(v, int) and not isinstance(v, bool)


def is_procedure(v):
    return getattr(v, "arities", None) is not None


def is_trackable(v):
    """Heap values with identity; numbers, booleans, strings, ``empty`` and
    the sentinel are never tracked."""
    return not (v is None or v is EMPTY or v is EOF or isinstance(v, (bool, int, float, str)))


def from_list(items):
    out = EMPTY
    for x in reversed(items):
        out = Pair(x, out)
    return out


def to_list(v):
    """Python list of a proper GTL list, or None."""
    out = []
    seen = set()
    while isinstance(v, Pair):
        if id(v) in seen:
            return None
        seen.add(id(v))
        out.append(v.head)
        v = v.tail
    return out if v is EMPTY else None


def render(v, depth=0):
    """Printed form of a value; wrappers print as what they wrap."""
    v = strip(v)
    if depth > 50:
        return "..."
    if v is EMPTY:
        return "()"
    if isinstance(v, bool):
        return "#t" if v else "#f"
    if isinstance(v, (int, float)):
        return repr(v)
    if isinstance(v, str):
        return '"' + v.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(v, Pair):
        parts = []
        seen = set()
        while isinstance(v, Pair) and id(v) not in seen:
            seen.add(id(v))
            parts.append(render(v.head, depth + 1))
            v = v.tail
        if v is EMPTY:
            return "(" + " ".join(parts) + ")"
        return "(" + " ".join(parts) + " . " + render(v, depth + 1) + ")"
    if isinstance(v, Vector):
        return "#(" + " ".join(render(x, depth + 1) for x in v.items) + ")"
    if isinstance(v, Hash):
        items = sorted((render(k, depth + 1), render(x, depth + 1)) for k, x in v.items())
        return "#hash(" + " ".join(f"({k} . {x})" for k, x in items) + ")"
    if isinstance(v, RecordV):
        return f"#<{v.tag}" + "".join(f" [{k} {render(x, depth + 1)}]" for k, x in v.fields.items()) + ">"
    if isinstance(v, (Closure, CaseClosure, Primitive)):
        return f"#<procedure:{v.name}>" if v.name else "#<procedure>"
    if v is EOF:
        return "#<eof>"
    return repr(v)


def sketch(v, limit=40):
    """Short description of a value for error messages; never empty."""
    s = render(v)
    if len(s) > limit:
        s = s[: limit - 3] + "..."
    return s or "?"
