"""Surface GTL parser: source text -> list of ModuleDecl."""
from __future__ import annotations

from ..types.core import Forall
from ..types.prims import PRIM_NAMES
from ..types.tsyntax import parse_type
from .ast import (
    EMPTY, App, Begin, Binding, CaseLambda, Cast, Define, ForSkip, ForSum, HashLit, If,
    Import, Inst, Lambda, Lang, Let, Letrec, ListLit, Lit, ModuleDecl, Param, PrimCall,
    RecordGet, RecordLit, SourceLoc, Var, VectorLit,
)
from .reader import Atom, ParseError, SList, read_all

KEYWORDS = frozenset({
    "lambda", "λ", "case-lambda", "if", "let", "letrec", "begin", "list", "vector", "hash",
    "record", "get", "cast", "inst", "for/sum", "for/skip", "define", "require", "module",
})

_CONSTANTS = {"empty": EMPTY, "null": EMPTY}


def parse(text):
    """Parse a whole ``.gtl`` file."""
    return [_ModuleParser(text, sx).parse() for sx in read_all(text)]


def parse_module(text):
    (m,) = parse(text)
    return m


class _ModuleParser:
    def __init__(self, text, sx):
        self.text = text
        self.sx = sx
        self.name = None
        # type variables of the enclosing polymorphic definition
        self.tvars = frozenset()

    def err(self, msg, sx):
        raise ParseError(msg, sx.start, self.text, self.name)

    def loc(self, sx):
        return SourceLoc(self.name or "?", sx.start, sx.end)

    def sym(self, sx, what="identifier"):
        if not (isinstance(sx, Atom) and sx.kind == "sym"):
            self.err(f"expected {what}", sx)
        return sx.value

    def type(self, sx):
        return parse_type(sx, self.tvars, self.text)

    def parse(self):
        sx = self.sx
        if not (isinstance(sx, SList) and len(sx.items) >= 3 and isinstance(sx.items[0], Atom)
                and sx.items[0].value == "module"):
            self.err("expected (module name lang form ...)", sx)
        self.name = self.sym(sx.items[1], "module name")
        lang_name = self.sym(sx.items[2], "typed, untyped or configurable")
        try:
            lang = Lang(lang_name)
        except ValueError:
            self.err(f"unknown module language {lang_name}", sx.items[2])
        imports, defs = [], []
        for form in sx.items[3:]:
            head = form.items[0] if isinstance(form, SList) and form.items else None
            if isinstance(head, Atom) and head.value == "require":
                imports.extend(self.require(form))
            elif isinstance(head, Atom) and head.value == "define":
                defs.append(form)
            else:
                self.err("expected require or define at module level", form)
        # module-level names shadow primitives everywhere in the module
        scope = frozenset(i.binding for i in imports) | frozenset(self.define_name(d) for d in defs)
        parsed_defs = [self.define(d, scope) for d in defs]
        names = [d.name for d in parsed_defs]
        for d in parsed_defs:
            if names.count(d.name) > 1:
                raise ParseError(f"duplicate definition {d.name}", d.loc.start, self.text, self.name)
        try:
            return ModuleDecl(self.name, lang, imports, parsed_defs, loc=self.loc(sx))
        except ValueError as e:
            self.err(str(e), sx)

    def require(self, form):
        if len(form.items) < 2:
            self.err("require needs a module name", form)
        source = self.sym(form.items[1], "module name")
        out = []
        for item in form.items[2:]:
            if isinstance(item, Atom):
                out.append(Import(source, self.sym(item), None, loc=self.loc(item)))
            elif isinstance(item, SList) and len(item.items) == 2:
                out.append(Import(source, self.sym(item.items[0]), self.type(item.items[1]),
                                  loc=self.loc(item)))
            else:
                self.err("import item must be name or [name Type]", item)
        return out

    def define_name(self, form):
        if len(form.items) < 3:
            self.err("malformed define", form)
        target = form.items[1]
        if isinstance(target, SList):
            if not target.items:
                self.err("malformed define", form)
            return self.sym(target.items[0])
        return self.sym(target)

    def define(self, form, scope):
        items = form.items
        target = items[1]
        if isinstance(target, SList):
            # (define (f params ...) [: R] body ...)
            name = self.sym(target.items[0])
            params = [self.param(p) for p in target.items[1:]]
            ret, body = self.opt_annot(items[2:], form)
            inner = scope | {p.name for p in params}
            lam = Lambda(params, ret, self.body(body, inner, form), loc=self.loc(form))
            return Define(name, None, lam, loc=self.loc(form))
        name = self.sym(target)
        if len(items) == 5 and isinstance(items[2], Atom) and items[2].value == ":":
            ty = self.type(items[3])
            # (define f : (All (a) T) e): a scopes over the annotations in e
            vs = set()
            t = ty
            while isinstance(t, Forall):
                vs.add(t.var)
                t = t.body
            self.tvars = frozenset(vs)
            try:
                expr = self.expr(items[4], scope)
            finally:
                self.tvars = frozenset()
            return Define(name, ty, expr, loc=self.loc(form))
        if len(items) != 3:
            self.err("malformed define", form)
        return Define(name, None, self.expr(items[2], scope), loc=self.loc(form))

    def opt_annot(self, items, form):
        if items and isinstance(items[0], Atom) and items[0].value == ":":
            if len(items) < 3:
                self.err("missing body after result annotation", form)
            return self.type(items[1]), items[2:]
        if not items:
            self.err("missing body", form)
        return None, items

    def param(self, sx):
        if isinstance(sx, Atom):
            return Param(self.sym(sx), None, loc=self.loc(sx))
        if isinstance(sx, SList) and len(sx.items) == 3 and isinstance(sx.items[1], Atom) \
                and sx.items[1].value == ":":
            return Param(self.sym(sx.items[0]), self.type(sx.items[2]), loc=self.loc(sx))
        self.err("parameter must be x or [x : Type]", sx)

    def body(self, forms, scope, whole):
        exprs = [self.expr(f, scope) for f in forms]
        if len(exprs) == 1:
            return exprs[0]
        return Begin(exprs, loc=self.loc(whole))

    def lambda_(self, sx, params_sx, rest, scope):
        if not isinstance(params_sx, SList):
            self.err("expected parameter list", params_sx)
        params = [self.param(p) for p in params_sx.items]
        ret, body = self.opt_annot(rest, sx)
        return Lambda(params, ret, self.body(body, scope | {p.name for p in params}, sx),
                      loc=self.loc(sx))

    def bindings(self, sx, scope, sequential):
        if not isinstance(sx, SList):
            self.err("expected binding list", sx)
        out = []
        names = [self.sym(b.items[0]) for b in sx.items if isinstance(b, SList) and b.items]
        inner = scope | set(names) if not sequential else scope
        for b in sx.items:
            if not isinstance(b, SList):
                self.err("binding must be [x e] or [x : T e]", b)
            if len(b.items) == 2:
                name, ty, e = self.sym(b.items[0]), None, b.items[1]
            elif len(b.items) == 4 and isinstance(b.items[1], Atom) and b.items[1].value == ":":
                name, ty, e = self.sym(b.items[0]), self.type(b.items[2]), b.items[3]
            else:
                self.err("binding must be [x e] or [x : T e]", b)
            out.append(Binding(name, ty, self.expr(e, inner), loc=self.loc(b)))
            if sequential:
                inner = inner | {name}
        return out, inner

    def loop(self, sx, scope, cls):
        items = sx.items[1:]
        acc = None
        if items and isinstance(items[0], Atom) and items[0].value == ":":
            acc = self.type(items[1])
            items = items[2:]
        if len(items) < 2 or not isinstance(items[0], SList) or len(items[0].items) != 1:
            self.err(f"expected ({sx.items[0].value} [: T] ([x e]) body ...)", sx)
        clause = items[0].items[0]
        if not (isinstance(clause, SList) and len(clause.items) == 2):
            self.err("loop clause must be [x e]", clause)
        var = self.sym(clause.items[0])
        seq = self.expr(clause.items[1], scope)
        body = self.body(items[1:], scope | {var}, sx)
        return cls(var, seq, body, acc, loc=self.loc(sx))

    def expr(self, sx, scope):
        loc = self.loc(sx)
        if isinstance(sx, Atom):
            if sx.kind == "sym":
                if sx.value in _CONSTANTS and sx.value not in scope:
                    return Lit(_CONSTANTS[sx.value], loc=loc)
                if sx.value in KEYWORDS or sx.value == ":":
                    self.err(f"unexpected keyword {sx.value}", sx)
                return Var(sx.value, loc=loc)
            return Lit(sx.value, loc=loc)
        if not sx.items:
            self.err("empty application", sx)
        head, args = sx.items[0], sx.items[1:]
        h = head.value if isinstance(head, Atom) and head.kind == "sym" else None
        if h is not None and h in scope:
            h = None  # locally bound names shadow keywords and primitives
        if h in ("lambda", "λ"):
            if not args:
                self.err("lambda needs parameters", sx)
            return self.lambda_(sx, args[0], args[1:], scope)
        if h == "case-lambda":
            branches = []
            for b in args:
                if not (isinstance(b, SList) and b.items):
                    self.err("case-lambda clause must be [(params) body]", b)
                branches.append(self.lambda_(b, b.items[0], b.items[1:], scope))
            arities = [b.arity for b in branches]
            if not branches or len(set(arities)) != len(arities):
                self.err("case-lambda clauses need distinct arities", sx)
            return CaseLambda(branches, loc=loc)
        if h == "if":
            if len(args) != 3:
                self.err("if expects test, then and else", sx)
            return If(*(self.expr(a, scope) for a in args), loc=loc)
        if h in ("let", "letrec"):
            if len(args) < 2:
                self.err(f"malformed {h}", sx)
            bs, inner = self.bindings(args[0], scope, sequential=(h == "let"))
            body = self.body(args[1:], inner, sx)
            return (Let if h == "let" else Letrec)(bs, body, loc=loc)
        if h == "begin":
            if not args:
                self.err("empty begin", sx)
            return Begin([self.expr(a, scope) for a in args], loc=loc)
        if h == "list":
            return ListLit([self.expr(a, scope) for a in args], loc=loc)
        if h == "vector":
            return VectorLit([self.expr(a, scope) for a in args], loc=loc)
        if h == "hash":
            if len(args) % 2:
                self.err("hash expects key/value pairs", sx)
            es = [self.expr(a, scope) for a in args]
            return HashLit(list(zip(es[::2], es[1::2])), loc=loc)
        if h == "record":
            if not args:
                self.err("record needs a tag", sx)
            tag = self.sym(args[0], "record tag")
            fields = []
            for f in args[1:]:
                if not (isinstance(f, SList) and len(f.items) == 2):
                    self.err("record field must be [name e]", f)
                fields.append((self.sym(f.items[0]), self.expr(f.items[1], scope)))
            if len({n for n, _ in fields}) != len(fields):
                self.err("duplicate record field", sx)
            return RecordLit(tag, fields, loc=loc)
        if h == "get":
            if len(args) != 2:
                self.err("get expects (get e field)", sx)
            return RecordGet(self.expr(args[0], scope), self.sym(args[1], "field name"), loc=loc)
        if h in ("cast", "inst"):
            if len(args) != 2:
                self.err(f"{h} expects an expression and a type", sx)
            return (Cast if h == "cast" else Inst)(self.expr(args[0], scope), self.type(args[1]),
                                                   loc=loc)
        if h == "for/sum":
            return self.loop(sx, scope, ForSum)
        if h == "for/skip":
            return self.loop(sx, scope, ForSkip)
        if h in ("define", "require", "module"):
            self.err(f"{h} is only allowed at module level", sx)
        if h in PRIM_NAMES:
            return PrimCall(h, [self.expr(a, scope) for a in args], loc=loc)
        return App(self.expr(head, scope), [self.expr(a, scope) for a in args], loc=loc)
