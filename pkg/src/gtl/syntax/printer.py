"""Render AST back to GTL concrete syntax (parse(show(m)) == m)."""
from __future__ import annotations

from .ast import (
    EMPTY, App, Begin, CaseLambda, Cast, Define, ForSkip, ForSum, HashLit, If, Inst, Lambda,
    Let, Letrec, ListLit, Lit, ModuleDecl, PrimCall, RecordGet, RecordLit, Var, VectorLit,
)


def show_literal(v):
    if v is EMPTY:
        return "empty"
    if isinstance(v, bool):
        return "#t" if v else "#f"
    if isinstance(v, str):
        return '"' + v.replace("\\", "\\\\").replace('"', '\\"') + '"'
    return repr(v)


def _param(p):
    return p.name if p.type is None else f"[{p.name} : {p.type}]"


def _annot(t):
    return "" if t is None else f" : {t}"


def show(node):
    if isinstance(node, ModuleDecl):
        lines = [f"(module {node.name} {node.lang.value}"]
        for imp in node.imports:
            item = imp.binding if imp.declared_type is None else f"[{imp.binding} {imp.declared_type}]"
            lines.append(f"  (require {imp.source} {item})")
        for d in node.defs:
            lines.append("  " + show(d))
        return "\n".join(lines) + ")"
    if isinstance(node, Define):
        if node.type is None:
            return f"(define {node.name} {show(node.expr)})"
        return f"(define {node.name} : {node.type} {show(node.expr)})"
    if isinstance(node, Lit):
        return show_literal(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Lambda):
        ps = " ".join(_param(p) for p in node.params)
        return f"(lambda ({ps}){_annot(node.ret)} {show(node.body)})"
    if isinstance(node, CaseLambda):
        parts = []
        for b in node.branches:
            ps = " ".join(_param(p) for p in b.params)
            parts.append(f"[({ps}){_annot(b.ret)} {show(b.body)}]")
        return "(case-lambda " + " ".join(parts) + ")"
    if isinstance(node, App):
        return "(" + " ".join(show(x) for x in (node.fn, *node.args)) + ")"
    if isinstance(node, PrimCall):
        return "(" + " ".join([node.op, *(show(a) for a in node.args)]) + ")"
    if isinstance(node, If):
        return f"(if {show(node.test)} {show(node.then)} {show(node.orelse)})"
    if isinstance(node, (Let, Letrec)):
        kw = "let" if isinstance(node, Let) else "letrec"
        bs = " ".join(
            f"[{b.name} {show(b.expr)}]" if b.type is None else f"[{b.name} : {b.type} {show(b.expr)}]"
            for b in node.bindings
        )
        return f"({kw} ({bs}) {show(node.body)})"
    if isinstance(node, Begin):
        return "(begin " + " ".join(map(show, node.exprs)) + ")"
    if isinstance(node, ListLit):
        return "(list" + "".join(" " + show(e) for e in node.elems) + ")"
    if isinstance(node, VectorLit):
        return "(vector" + "".join(" " + show(e) for e in node.elems) + ")"
    if isinstance(node, HashLit):
        return "(hash" + "".join(f" {show(k)} {show(v)}" for k, v in node.pairs) + ")"
    if isinstance(node, RecordLit):
        return f"(record {node.tag}" + "".join(f" [{n} {show(e)}]" for n, e in node.fields) + ")"
    if isinstance(node, RecordGet):
        return f"(get {show(node.expr)} {node.field})"
    if isinstance(node, Cast):
        return f"(cast {show(node.expr)} {node.type})"
    if isinstance(node, Inst):
        return f"(inst {show(node.expr)} {node.type})"
    if isinstance(node, (ForSum, ForSkip)):
        kw = "for/sum" if isinstance(node, ForSum) else "for/skip"
        seq = node.seq if isinstance(node, ForSum) else node.src
        return f"({kw}{_annot(node.acc_type)} ([{node.var} {show(seq)}]) {show(node.body)})"
    raise TypeError(f"cannot show {type(node).__name__}")


def show_program(modules):
    return "\n\n".join(show(m) for m in modules) + "\n"
