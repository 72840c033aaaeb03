"""Check insertion for Shallow code, plus the small type-directed optimizer.

Typed modules are instrumented with shape checks at function entries, at
the results of elimination forms, at casts and instantiations, and once per
import from untyped code.  Code the desugarer injected is left alone: its
eliminations are correct by construction, and checking them can reject
correct programs.

Checks are kept in a side table keyed by node id rather than spliced into
the AST, so the same kernel module can be run under every semantics.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from enum import Enum

from .shapes import ANY_SHAPE, Unsupported, shape_of
from .blamemap import HASH_VALUE, LIST_ELEM, NOOP, Cod, Dom, ListElemAt, RecordField
from .syntax.ast import (
    App, Cast, If, Inst, Lambda, Lit, ModuleDecl, Node, Origin, PrimCall, RecordGet, walk,
)
from .types.core import VecFixed
from .types.prims import PRIMS


class CheckKind(Enum):
    FN_ENTRY = "FnEntry"
    ELIM_RESULT = "ElimResult"
    CAST = "Cast"
    INST = "Inst"
    BOUNDARY_IMPORT = "BoundaryImport"


@dataclass(frozen=True)
class CheckSite:
    """One shape check.

    ``hook`` is ``(role, action)``: which value the checked value came out
    of (``"operator"``, ``"arg0"``, ``"record"`` or ``"self"`` for the
    function being entered) and how.  Only blame tracking reads it.
    ``reject`` holds a reason when the site's type has no shape, which makes
    the module fail at load time.
    """

    kind: CheckKind
    loc: object
    shape: object
    node: int  # nid of the node the check is attached to
    index: int = None
    hook: tuple = None
    reject: str = None

    def __post_init__(self):
        if isinstance(self.shape, Unsupported) and self.kind is not CheckKind.BOUNDARY_IMPORT:
            raise ValueError("only boundary imports may carry an unsupported shape")

    @property
    def label(self):
        if self.kind is CheckKind.FN_ENTRY:
            return f"FnEntry({self.index})"
        return self.kind.value

    def __str__(self):
        return f"{self.label} {self.loc} {self.shape}"


@dataclass
class InstrumentedModule:
    module: ModuleDecl
    sites: list = field(default_factory=list)

    def __post_init__(self):
        self.by_node = {}
        for s in self.sites:
            self.by_node.setdefault(s.node, []).append(s)

    def dump(self):
        return [str(s) for s in self.sites]


def _prim_hook(node):
    op = node.op
    if op in ("first",):
        return ("arg0", LIST_ELEM)
    if op in ("list-ref", "vector-ref"):
        idx = node.args[1] if len(node.args) > 1 else None
        if isinstance(idx, Lit) and isinstance(idx.value, int) and not isinstance(idx.value, bool):
            return ("arg0", ListElemAt(idx.value))
        return ("arg0", LIST_ELEM)
    if op == "hash-ref":
        return ("arg0", HASH_VALUE)
    if op == "foldl":
        return ("arg0", Cod(0))
    if op == "print":
        return ("arg0", NOOP)
    return None


def _site(kind, loc, t, nid, lax, index=None, hook=None):
    s = shape_of(t, lax)
    if isinstance(s, Unsupported):
        return CheckSite(kind, loc, ANY_SHAPE, nid, index, hook, reject=s.reason)
    return CheckSite(kind, loc, s, nid, index, hook)


def insert_checks(m, prog, lax=False, check_desugared=False):
    """Compute the check sites of module ``m`` under the typing ``prog``.

    ``check_desugared`` also checks eliminations the desugarer introduced;
    it exists only to demonstrate why that is wrong.
    """
    if not prog.typed[m.name]:
        return InstrumentedModule(m, [])
    sites = []
    for imp in m.imports:
        if not prog.typed[imp.source]:
            s = shape_of(imp.declared_type, lax)
            sites.append(CheckSite(CheckKind.BOUNDARY_IMPORT, imp.loc, s, imp.nid,
                                   reject=s.reason if isinstance(s, Unsupported) else None))
    for d in m.defs:
        for node in walk(d.expr):
            user = node.origin is Origin.USER
            if isinstance(node, Lambda) and user:
                for i, p in enumerate(node.params):
                    s = shape_of(prog.node_types[p.nid], lax)
                    if s is ANY_SHAPE:
                        continue
                    sites.append(_site(CheckKind.FN_ENTRY, p.loc, prog.node_types[p.nid], node.nid,
                                       lax, index=i, hook=("self", Dom(i))))
            elif not (user or check_desugared):
                continue
            elif isinstance(node, App):
                sites.append(_site(CheckKind.ELIM_RESULT, node.loc, prog.node_types[node.nid],
                                   node.nid, lax, hook=("operator", Cod(0))))
            elif isinstance(node, PrimCall) and not PRIMS[node.op].result_guaranteed:
                sites.append(_site(CheckKind.ELIM_RESULT, node.loc, prog.node_types[node.nid],
                                   node.nid, lax, hook=_prim_hook(node)))
            elif isinstance(node, RecordGet):
                sites.append(_site(CheckKind.ELIM_RESULT, node.loc, prog.node_types[node.nid],
                                   node.nid, lax, hook=("record", RecordField(node.field))))
            elif isinstance(node, Cast) and user:
                sites.append(_site(CheckKind.CAST, node.loc, node.type, node.nid, lax))
            elif isinstance(node, Inst) and user:
                sites.append(_site(CheckKind.INST, node.loc, prog.inst_types[node.nid][1],
                                   node.nid, lax))
    return InstrumentedModule(m, sites)


# -- optimizer --------------------------------------------------------

DEEP = "deep"
SHALLOW = "shallow"


def optimize(im, mode, prog):
    """Type-directed rewrites that are safe under ``mode``.

    Both modes drop the bounds check of ``vector-ref`` on a fixed-length
    vector at a constant in-range index: the length shape guarantees it.
    Only Deep removes branches of constant conditionals; Shallow refuses,
    since its types do not promise that the untaken branch is unreachable.
    """
    if mode not in (DEEP, SHALLOW):
        raise ValueError(f"optimize: unknown mode {mode!r}")
    m = im.module
    if not prog.typed[m.name]:
        return im
    defs = [dataclasses.replace(d, expr=_opt(d.expr, mode, prog), nid=d.nid) for d in m.defs]
    new = dataclasses.replace(m, defs=defs, nid=m.nid)
    if all(a.expr is b.expr for a, b in zip(defs, m.defs)):
        return im
    live = {n.nid for d in defs for n in walk(d)} | {i.nid for i in m.imports}
    return InstrumentedModule(new, [s for s in im.sites if s.node in live])


def _opt(node, mode, prog):
    if isinstance(node, If) and mode == DEEP and isinstance(node.test, Lit) \
            and isinstance(node.test.value, bool):
        return _opt(node.then if node.test.value else node.orelse, mode, prog)
    changes = {}
    for f in dataclasses.fields(node):
        if f.name in ("loc", "nid"):
            continue
        old = getattr(node, f.name)
        new = _opt_value(old, mode, prog)
        if new is not old:
            changes[f.name] = new
    if isinstance(node, PrimCall) and node.op == "vector-ref" and node.bounds_checked \
            and _constant_in_range(node, prog):
        changes["bounds_checked"] = False
    if not changes:
        return node
    return dataclasses.replace(node, **changes, nid=node.nid)


def _opt_value(x, mode, prog):
    if isinstance(x, Node):
        return _opt(x, mode, prog)
    if isinstance(x, (list, tuple)):
        new = [_opt_value(y, mode, prog) for y in x]
        if all(a is b for a, b in zip(new, x)):
            return x
        return type(x)(new)
    return x


def _constant_in_range(node, prog):
    if len(node.args) != 2:
        return False
    vt = prog.node_types.get(node.args[0].nid)
    idx = node.args[1]
    return (isinstance(vt, VecFixed) and isinstance(idx, Lit) and isinstance(idx.value, int)
            and not isinstance(idx.value, bool) and 0 <= idx.value < len(vt.elems))
