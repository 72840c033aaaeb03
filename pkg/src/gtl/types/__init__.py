"""Type representation, subtyping, base environment and the checker."""
from .checker import StaticTypeError, TypedProgram, UnboundVariable, dependency_order, typecheck
from .core import (
    BOOL, INT, NAT, NOTHING, REAL, STR, Base, CaseFun, Forall, Fun, HashTable, Listof, Record,
    TVar, Type, TypeOf, U, VecFixed, VecOf, equivalent, join, subtype, substitute, union,
)
from .prims import PRIMS, PrimSig
from .tsyntax import parse_type, type_from_string

__all__ = [
    "StaticTypeError", "TypedProgram", "UnboundVariable", "dependency_order", "typecheck",
    "BOOL", "INT", "NAT", "NOTHING", "REAL", "STR", "Base", "CaseFun", "Forall", "Fun",
    "HashTable", "Listof", "Record", "TVar", "Type", "TypeOf", "U", "VecFixed", "VecOf",
    "equivalent", "join", "subtype", "substitute", "union", "PRIMS", "PrimSig", "parse_type",
    "type_from_string",
]
