"""Base type environment for the trusted primitives.

``result_guaranteed`` marks primitives whose implementation always returns
a value matching the shape of the declared result type; call sites of those
need no result check.
"""
from __future__ import annotations

from dataclasses import dataclass

from .core import NOTHING, CaseFun, Forall, Fun, HashTable
from .tsyntax import type_from_string


@dataclass(frozen=True)
class PrimSig:
    name: str
    type: object
    result_guaranteed: bool

    @property
    def arities(self):
        t = self.type
        while isinstance(t, Forall):
            t = t.body
        if isinstance(t, CaseFun):
            return frozenset(b.arity for b in t.branches)
        assert isinstance(t, Fun), self.name
        return frozenset({t.arity})


SEQ_TYPE_SRC = (
    "(Record seq [pos0 Nat] [more? (-> Nat Bool)] [get-val (-> Nat Nat)]"
    " [use-val? (-> Nat Bool)] [next (-> Nat Nat)])"
)

_TABLE = [
    # arithmetic: the checker refines results along Nat <: Int <: Real
    ("+", "(-> Real Real Real)", True),
    ("-", "(-> Real Real Real)", True),
    ("*", "(-> Real Real Real)", True),
    ("/", "(-> Real Real Real)", True),
    ("quotient", "(-> Int Int Int)", True),
    ("modulo", "(-> Int Int Int)", True),
    ("<", "(-> Real Real Bool)", True),
    ("<=", "(-> Real Real Bool)", True),
    (">", "(-> Real Real Bool)", True),
    (">=", "(-> Real Real Bool)", True),
    ("=", "(-> Real Real Bool)", True),
    ("equal?", "(All (a b) (-> a b Bool))", True),
    ("not", "(All (a) (-> a Bool))", True),
    # lists
    ("cons", "(All (a) (-> a (Listof a) (Listof a)))", True),
    ("first", "(All (a) (-> (Listof a) a))", False),
    ("rest", "(All (a) (-> (Listof a) (Listof a)))", True),
    ("null?", "(All (a) (-> (Listof a) Bool))", True),
    ("length", "(All (a) (-> (Listof a) Nat))", True),
    ("list-ref", "(All (a) (-> (Listof a) Nat a))", False),
    ("map", "(All (a b) (-> (-> a b) (Listof a) (Listof b)))", True),
    ("foldl", "(All (a b) (-> (-> a b b) b (Listof a) b))", False),
    ("append", "(All (a) (-> (Listof a) (Listof a) (Listof a)))", True),
    ("reverse", "(All (a) (-> (Listof a) (Listof a)))", True),
    ("range", "(-> Nat (Listof Nat))", True),
    # vectors
    ("vector-ref", "(All (a) (-> (Vectorof a) Nat a))", False),
    ("vector-set!", "(All (a) (-> (Vectorof a) Nat a (Vectorof a)))", True),
    ("vector-length", "(All (a) (-> (Vectorof a) Nat))", True),
    ("make-vector", "(All (a) (-> Nat a (Vectorof a)))", True),
    # hashes
    ("make-hash", "(-> (HashTable Nothing Nothing))", True),
    ("hash-ref", "(All (k v) (-> (HashTable k v) k v))", False),
    ("hash-set!", "(All (k v) (-> (HashTable k v) k v (HashTable k v)))", True),
    ("hash-has-key?", "(All (k v) (-> (HashTable k v) k Bool))", True),
    ("hash-count", "(All (k v) (-> (HashTable k v) Nat))", True),
    # strings and output
    ("string-append", "(-> Str Str Str)", True),
    ("string-length", "(-> Str Nat)", True),
    ("number->string", "(-> Real Str)", True),
    ("print", "(All (a) (-> a a))", False),
    # sequences that may yield an end-of-data sentinel
    ("byte-source", f"(-> (Listof Nat) {SEQ_TYPE_SRC})", True),
    ("eof?", "(All (a) (-> a Bool))", True),
]


def _build():
    table = {}
    for name, src, guaranteed in _TABLE:
        if name == "make-hash":
            # Nothing is not writable in type syntax
            ty = Fun((), HashTable(NOTHING, NOTHING))
        else:
            ty = type_from_string(src)
        table[name] = PrimSig(name, ty, guaranteed)
    return table


PRIMS = _build()
PRIM_NAMES = frozenset(PRIMS)
SEQ_TYPE = type_from_string(SEQ_TYPE_SRC)
NUMERIC_OPS = frozenset({"+", "-", "*", "/", "quotient", "modulo"})
