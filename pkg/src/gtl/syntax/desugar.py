"""Origin-tagging desugarer: surface GTL -> kernel GTL.

Loops become explicit recursion.  Every node the desugarer introduces carries
``Origin.DESUGARED`` and the span of the loop form it came from, so the
check-insertion pass can tell injected eliminations from user-written ones.
User subterms are reused as-is and keep ``Origin.USER``.
"""
from __future__ import annotations

import dataclasses
import itertools

from ..types.core import NAT, REAL, TypeOf
from .ast import (
    App, Binding, ForSkip, ForSum, If, Lambda, Let, Letrec, Lit, ModuleDecl, Node, Param,
    PrimCall, RecordGet, Var,
)


def desugar(m: ModuleDecl) -> ModuleDecl:
    counter = itertools.count(1)
    defs = [dataclasses.replace(d, expr=_ds(d.expr, counter)) for d in m.defs]
    return dataclasses.replace(m, defs=defs, nid=m.nid)


def desugar_program(modules):
    return [desugar(m) for m in modules]


def _ds(node, counter):
    if isinstance(node, ForSum):
        return _for_sum(node, counter)
    if isinstance(node, ForSkip):
        return _for_skip(node, counter)
    changes = {}
    for f in dataclasses.fields(node):
        if f.name in ("loc", "nid"):
            continue
        old = getattr(node, f.name)
        new = _ds_value(old, counter)
        if new is not old:
            changes[f.name] = new
    if not changes:
        return node
    return dataclasses.replace(node, **changes, nid=node.nid)


def _ds_value(x, counter):
    if isinstance(x, Node):
        return _ds(x, counter)
    if isinstance(x, list):
        new = [_ds_value(y, counter) for y in x]
        return x if all(a is b for a, b in zip(new, x)) else new
    if isinstance(x, tuple):
        new = tuple(_ds_value(y, counter) for y in x)
        return x if all(a is b for a, b in zip(new, x)) else new
    return x


class _Builder:
    """Node factory stamping every node with the loop's desugared loc."""

    def __init__(self, loc):
        self.loc = loc.desugared()

    def __getattr__(self, name):
        cls = _NODES[name]
        return lambda *a, **k: cls(*a, **k, loc=self.loc)


_NODES = {c.__name__: c for c in (App, Binding, If, Lambda, Let, Letrec, Lit, Param, PrimCall,
                                  RecordGet, Var)}


def _for_sum(node, counter):
    n = next(counter)
    d = _Builder(node.loc)
    xs, loop, lst, acc = f"for-seq%{n}", f"for-loop%{n}", f"for-lst%{n}", f"for-acc%{n}"
    acc_type = node.acc_type or REAL
    seq = _ds(node.seq, counter)
    body = _ds(node.body, counter)
    # the three list eliminations below are injected code
    step = d.PrimCall("+", [d.Var(acc), d.Let([d.Binding(node.var, None, d.PrimCall("first", [d.Var(lst)]))],
                                              body)])
    lam = d.Lambda(
        [d.Param(lst, TypeOf(xs)), d.Param(acc, acc_type)],
        acc_type,
        d.If(d.PrimCall("null?", [d.Var(lst)]),
             d.Var(acc),
             d.App(d.Var(loop), [d.PrimCall("rest", [d.Var(lst)]), step])),
    )
    return d.Let(
        [d.Binding(xs, None, seq)],
        d.Letrec([d.Binding(loop, None, lam)], d.App(d.Var(loop), [d.Var(xs), d.Lit(0)])),
    )


def _for_skip(node, counter):
    n = next(counter)
    d = _Builder(node.loc)
    s, loop, pos, acc, v = (f"for-src%{n}", f"for-loop%{n}", f"for-pos%{n}", f"for-acc%{n}",
                            f"for-val%{n}")
    acc_type = node.acc_type or REAL
    src = _ds(node.src, counter)
    body = _ds(node.body, counter)

    def method(name, *args):
        return d.App(d.RecordGet(d.Var(s), name), list(args))

    # get-val may hand back a skip value; it is used only when use-val? blesses it
    use = d.If(method("use-val?", d.Var(v)),
               d.PrimCall("+", [d.Var(acc), d.Let([d.Binding(node.var, None, d.Var(v))], body)]),
               d.Var(acc))
    lam = d.Lambda(
        [d.Param(pos, NAT), d.Param(acc, acc_type)],
        acc_type,
        d.If(method("more?", d.Var(pos)),
             d.Let([d.Binding(v, None, method("get-val", d.Var(pos)))],
                   d.App(d.Var(loop), [method("next", d.Var(pos)), use])),
             d.Var(acc)),
    )
    return d.Let(
        [d.Binding(s, None, src)],
        d.Letrec([d.Binding(loop, None, lam)],
                 d.App(d.Var(loop), [d.RecordGet(d.Var(s), "pos0"), d.Lit(0)])),
    )
