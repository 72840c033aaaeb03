"""Module-aware type checker.

Typed modules are fully checked; untyped modules are only scanned for
unbound variables.  The result is a :class:`TypedProgram` whose side tables
are keyed by node id and consumed by the instrumentation passes.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from ..syntax.ast import (
    EMPTY, App, Begin, CaseLambda, Cast, HashLit, If, Inst, Lambda, Let, Letrec, ListLit, Lit,
    PrimCall, RecordGet, RecordLit, Var, VectorLit, child_nodes,
)
from .core import (
    BOOL, INT, NAT, NOTHING, REAL, STR, CaseFun, Forall, Fun, HashTable, Listof, Record, TVar,
    TypeOf, U, VecFixed, VecOf, free_vars, join, join_all, map_children, substitute, subtype,
)
from .prims import PRIMS


class StaticTypeError(Exception):
    def __init__(self, loc, message):
        self.loc = loc
        self.message = message
        super().__init__(f"{loc.module}:{loc.start}: {message}")


class UnboundVariable(StaticTypeError):
    pass


@dataclass
class TypedProgram:
    modules: list  # kernel modules in dependency order
    config: object
    typed: dict  # module name -> bool
    node_types: dict = field(default_factory=dict)  # nid -> Type
    app_sigs: dict = field(default_factory=dict)  # nid -> Fun actually applied
    def_types: dict = field(default_factory=dict)  # (module, name) -> Type
    import_types: dict = field(default_factory=dict)  # (module, binding) -> Type
    inst_types: dict = field(default_factory=dict)  # nid -> (Forall, instantiated)

    def module(self, name):
        for m in self.modules:
            if m.name == name:
                return m
        raise KeyError(name)

    def is_boundary(self, importer, imp):
        return self.typed[importer.name] != self.typed[imp.source]

    def boundary_imports(self):
        """(importer, Import) pairs linking a typed module to an untyped one."""
        return [(m, imp) for m in self.modules for imp in m.imports if self.is_boundary(m, imp)]

    def boundary_type(self, importer, imp):
        """The type that governs a boundary import in either direction."""
        if self.typed[importer.name]:
            return imp.declared_type
        return self.def_types[(imp.source, imp.binding)]

    def type_of(self, node):
        return self.node_types.get(node.nid)


def dependency_order(modules):
    """Topological order by imports; ties broken by module name so the
    result does not depend on declaration order."""
    by_name = {}
    for m in modules:
        if m.name in by_name:
            raise StaticTypeError(m.loc, f"duplicate module {m.name}")
        by_name[m.name] = m
    for m in modules:
        for imp in m.imports:
            if imp.source not in by_name:
                raise StaticTypeError(imp.loc, f"unknown module {imp.source}")
    done, order, visiting = set(), [], set()

    def visit(m):
        if m.name in done:
            return
        if m.name in visiting:
            raise StaticTypeError(m.loc, f"import cycle through {m.name}")
        visiting.add(m.name)
        for imp in m.imports:
            visit(by_name[imp.source])
        visiting.discard(m.name)
        done.add(m.name)
        order.append(m)

    for m in sorted(modules, key=lambda m: m.name):
        visit(m)
    return order


def typecheck(modules, config):
    order = dependency_order(modules)
    prog = TypedProgram(order, config, {m.name: config.is_typed(m) for m in order})
    for m in order:
        for imp in m.imports:
            src = prog.module(imp.source)
            if src.definition(imp.binding) is None:
                raise UnboundVariable(imp.loc, f"{imp.source} does not define {imp.binding}")
        if prog.typed[m.name]:
            _ModuleChecker(prog, m).check()
        else:
            _scan_untyped(m)
    return prog


def _scan_untyped(m):
    top = set(PRIMS) | {i.binding for i in m.imports} | {d.name for d in m.defs}

    def scan(node, scope):
        if isinstance(node, Var):
            if node.name not in scope:
                raise UnboundVariable(node.loc, f"unbound variable {node.name}")
            return
        if isinstance(node, Lambda):
            scope = scope | {p.name for p in node.params}
            scan(node.body, scope)
            return
        if isinstance(node, Let):
            for b in node.bindings:
                scan(b.expr, scope)
                scope = scope | {b.name}
            scan(node.body, scope)
            return
        if isinstance(node, Letrec):
            scope = scope | {b.name for b in node.bindings}
            for b in node.bindings:
                scan(b.expr, scope)
            scan(node.body, scope)
            return
        for c in child_nodes(node):
            scan(c, scope)

    for d in m.defs:
        scan(d.expr, top)


def _numeric_result(op, a, b):
    if op in ("quotient", "modulo"):
        return NAT if subtype(a, NAT) and subtype(b, NAT) else INT
    if op == "/":
        return REAL
    if op in ("+", "*") and subtype(a, NAT) and subtype(b, NAT):
        return NAT
    if subtype(a, INT) and subtype(b, INT):
        return INT
    return REAL


def _strip_foralls(t):
    vs = []
    while isinstance(t, Forall):
        vs.append(t.var)
        t = t.body
    return vs, t


class _ModuleChecker:
    def __init__(self, prog, m):
        self.prog = prog
        self.m = m

    def err(self, node, msg):
        raise StaticTypeError(node.loc, msg)

    def record(self, node, t):
        self.prog.node_types[node.nid] = t
        return t

    # -- module level -------------------------------------------------

    def check(self):
        prog, m = self.prog, self.m
        env = {name: sig.type for name, sig in PRIMS.items()}
        for imp in m.imports:
            if prog.typed[imp.source]:
                t = prog.def_types.get((imp.source, imp.binding))
                if t is None:
                    self.err(imp, f"{imp.source}.{imp.binding} has no static type")
            else:
                if imp.declared_type is None:
                    self.err(imp, f"import of {imp.binding} from untyped {imp.source} needs a type")
                if free_vars(imp.declared_type):
                    self.err(imp, "declared import type has free type variables")
                t = imp.declared_type
            prog.import_types[(m.name, imp.binding)] = t
            env[imp.binding] = t
        pending = set()
        for d in m.defs:
            t = self.declared(d)
            if t is not None:
                env[d.name] = t
                prog.def_types[(m.name, d.name)] = t
            else:
                pending.add(d.name)
                env.pop(d.name, None)
        for d in m.defs:
            t = self.expr(d.expr, env)
            if d.name in pending:
                env[d.name] = t
                prog.def_types[(m.name, d.name)] = t
                pending.discard(d.name)
                continue
            want = env[d.name]
            if isinstance(want, Forall) and isinstance(d.expr, (Lambda, CaseLambda)):
                # a polymorphic function is checked with its variables held abstract
                want = _strip_foralls(want)[1]
            if not subtype(t, want):
                self.err(d, f"{d.name}: expected {env[d.name]}, got {t}")

    def declared(self, d):
        if d.type is not None:
            return d.type
        if isinstance(d.expr, Lambda):
            return self.lambda_type(d.expr, require_ret=False)
        if isinstance(d.expr, CaseLambda):
            branches = [self.lambda_type(b, require_ret=False) for b in d.expr.branches]
            if all(b is not None for b in branches):
                return CaseFun(tuple(branches))
        return None

    def lambda_type(self, lam, require_ret, env=None):
        params = []
        for p in lam.params:
            if p.type is None:
                self.err(p, f"parameter {p.name} needs a type annotation in typed code")
            params.append(self.resolve(p.type, env, p))
        if lam.ret is None:
            if require_ret:
                self.err(lam, "recursive function needs a result annotation")
            return None
        return Fun(tuple(params), self.resolve(lam.ret, env, lam))

    def resolve(self, t, env, node):
        """Replace desugarer-introduced ``typeof`` references."""
        if isinstance(t, TypeOf):
            if env is None or t.name not in env:
                self.err(node, f"cannot resolve {t}")
            return env[t.name]
        return map_children(t, lambda c: self.resolve(c, env, node))

    # -- expressions --------------------------------------------------

    def expr(self, node, env):
        return self.record(node, self._expr(node, env))

    def _expr(self, node, env):
        if isinstance(node, Lit):
            v = node.value
            if v is EMPTY:
                return Listof(NOTHING)
            if isinstance(v, bool):
                return BOOL
            if isinstance(v, int):
                return NAT if v >= 0 else INT
            if isinstance(v, float):
                return REAL
            return STR
        if isinstance(node, Var):
            if node.name not in env:
                raise UnboundVariable(node.loc, f"unbound variable {node.name}")
            return env[node.name]
        if isinstance(node, Lambda):
            return self.lambda_(node, env)
        if isinstance(node, CaseLambda):
            return CaseFun(tuple(self.expr(b, env) for b in node.branches))
        if isinstance(node, App):
            ft = self.expr(node.fn, env)
            args = [self.expr(a, env) for a in node.args]
            return self.apply(node, ft, args)
        if isinstance(node, PrimCall):
            return self.prim(node, env)
        if isinstance(node, If):
            self.expr(node.test, env)
            return join(self.expr(node.then, env), self.expr(node.orelse, env))
        if isinstance(node, Let):
            env = dict(env)
            for b in node.bindings:
                env[b.name] = self.binding(b, env)
            return self.expr(node.body, env)
        if isinstance(node, Letrec):
            env = dict(env)
            for b in node.bindings:
                if b.type is not None:
                    env[b.name] = self.resolve(b.type, env, b)
                elif isinstance(b.expr, Lambda):
                    env[b.name] = self.lambda_type(b.expr, require_ret=True, env=env)
                else:
                    self.err(b, "letrec binding needs a type")
            for b in node.bindings:
                t = self.expr(b.expr, env)
                if not subtype(t, env[b.name]):
                    self.err(b, f"{b.name}: expected {env[b.name]}, got {t}")
                self.record(b, env[b.name])
            return self.expr(node.body, env)
        if isinstance(node, Begin):
            t = NOTHING
            for e in node.exprs:
                t = self.expr(e, env)
            return t
        if isinstance(node, ListLit):
            return Listof(join_all(self.expr(e, env) for e in node.elems))
        if isinstance(node, VectorLit):
            return VecFixed(tuple(self.expr(e, env) for e in node.elems))
        if isinstance(node, HashLit):
            ks = [self.expr(k, env) for k, _ in node.pairs]
            vs = [self.expr(v, env) for _, v in node.pairs]
            return HashTable(join_all(ks), join_all(vs))
        if isinstance(node, RecordLit):
            return Record(node.tag, tuple((n, self.expr(e, env)) for n, e in node.fields))
        if isinstance(node, RecordGet):
            rt = self.expr(node.expr, env)
            if not isinstance(rt, Record) or rt.field_type(node.field) is None:
                self.err(node, f"{rt} has no field {node.field}")
            return rt.field_type(node.field)
        if isinstance(node, Cast):
            self.expr(node.expr, env)
            return node.type
        if isinstance(node, Inst):
            t = self.expr(node.expr, env)
            if not isinstance(t, Forall):
                self.err(node, f"inst expects a polymorphic value, got {t}")
            out = substitute(t.body, t.var, node.type)
            self.prog.inst_types[node.nid] = (t, out)
            return out
        self.err(node, f"{type(node).__name__} is not a kernel form")

    def binding(self, b, env):
        t = self.expr(b.expr, env)
        if b.type is not None:
            want = self.resolve(b.type, env, b)
            if not subtype(t, want):
                self.err(b, f"{b.name}: expected {want}, got {t}")
            t = want
        return self.record(b, t)

    def lambda_(self, node, env):
        env = dict(env)
        params = []
        for p in node.params:
            if p.type is None:
                self.err(p, f"parameter {p.name} needs a type annotation in typed code")
            t = self.resolve(p.type, env, p)
            self.record(p, t)
            params.append(t)
        for p, t in zip(node.params, params):
            env[p.name] = t
        body = self.expr(node.body, env)
        if node.ret is not None:
            ret = self.resolve(node.ret, env, node)
            if not subtype(body, ret):
                self.err(node.body, f"expected result {ret}, got {body}")
        else:
            ret = body
        return Fun(tuple(params), ret)

    def apply(self, node, ft, args):
        n = len(args)
        if isinstance(ft, Forall):
            ft = self.infer_instance(node, ft, args)
        if isinstance(ft, CaseFun):
            br = ft.branch_for(n)
            if br is None:
                self.err(node, f"no case of {ft} accepts {n} argument(s)")
            ft = br
        if not isinstance(ft, Fun):
            self.err(node, f"cannot apply a value of type {ft}")
        if ft.arity != n:
            self.err(node, f"arity mismatch: expected {ft.arity} argument(s), got {n}")
        for i, (p, a) in enumerate(zip(ft.params, args)):
            if not subtype(a, p):
                self.err(node.args[i], f"argument {i}: expected {p}, got {a}")
        self.prog.app_sigs[node.nid] = ft
        return ft.result

    def infer_instance(self, node, ft, args):
        vars_, body = _strip_foralls(ft)
        if isinstance(body, CaseFun):
            body = body.branch_for(len(args)) or body
        subst = {}
        if isinstance(body, Fun) and body.arity == len(args):
            for p, a in zip(body.params, args):
                _match(p, a, vars_, subst)
        out = body
        for v in vars_:
            out = substitute(out, v, subst.get(v, NOTHING))
        return out

    def prim(self, node, env):
        op = node.op
        args = [self.expr(a, env) for a in node.args]
        if op in ("+", "-", "*", "/", "quotient", "modulo") and len(args) == 2:
            bound = INT if op in ("quotient", "modulo") else REAL
            for i, a in enumerate(args):
                if not subtype(a, bound):
                    self.err(node.args[i], f"{op}: expected {bound}, got {a}")
            res = _numeric_result(op, *args)
            self.prog.app_sigs[node.nid] = Fun(tuple(args), res)
            return res
        if op in ("vector-ref", "vector-length", "vector-set!") and args and isinstance(args[0], VecFixed):
            return self.fixed_vector(node, args)
        return self.apply(node, PRIMS[op].type, args)

    def fixed_vector(self, node, args):
        vt = args[0]
        op = node.op
        if op == "vector-set!":
            self.err(node, "vector-set!: fixed-size vectors are immutable")
        if op == "vector-length":
            if len(args) != 1:
                self.err(node, "vector-length expects 1 argument")
            self.prog.app_sigs[node.nid] = Fun((vt,), NAT)
            return NAT
        if len(args) != 2 or not subtype(args[1], NAT):
            self.err(node, "vector-ref expects a vector and a Nat index")
        idx = node.args[1]
        if isinstance(idx, Lit) and isinstance(idx.value, int) and not isinstance(idx.value, bool):
            if idx.value >= len(vt.elems):
                self.err(node, f"index {idx.value} out of range for {vt}")
            res = vt.elems[idx.value]
        else:
            res = join_all(vt.elems)
        self.prog.app_sigs[node.nid] = Fun((vt, NAT), res)
        return res


def _match(p, a, vars_, subst):
    if isinstance(p, TVar) and p.name in vars_:
        subst[p.name] = join(subst[p.name], a) if p.name in subst else a
        return
    if a == NOTHING:
        return
    if isinstance(a, U):
        for m in a.members:
            _match(p, m, vars_, subst)
        return
    if isinstance(p, (Listof, VecOf)) and isinstance(a, type(p)):
        _match(p.elem, a.elem, vars_, subst)
    elif isinstance(p, VecOf) and isinstance(a, VecFixed):
        _match(p.elem, join_all(a.elems), vars_, subst)
    elif isinstance(p, HashTable) and isinstance(a, HashTable):
        _match(p.key, a.key, vars_, subst)
        _match(p.val, a.val, vars_, subst)
    elif isinstance(p, Fun) and isinstance(a, CaseFun):
        br = a.branch_for(p.arity)
        if br is not None:
            _match(p, br, vars_, subst)
    elif isinstance(p, Fun) and isinstance(a, Fun) and p.arity == a.arity:
        for pp, ap in zip(p.params, a.params):
            _match(pp, ap, vars_, subst)
        _match(p.result, a.result, vars_, subst)
    elif isinstance(p, Record) and isinstance(a, Record):
        for name, pt in p.fields:
            at = a.field_type(name)
            if at is not None:
                _match(pt, at, vars_, subst)
