"""Tree-walking evaluator for kernel GTL under one of four semantics.

* ``erased``: types are ignored entirely.
* ``deep``: values crossing a typed/untyped boundary meet contracts.
* ``shallow``: typed modules run their shape checks.
* ``sb``: shallow plus the blame map.

Every check, wrapper and blame-map operation bumps a counter, and the
counters (not wall-clock time) are what the benchmark harness measures.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from enum import Enum

from ..blamemap import BlameMap, Cod, Dom, RecordField, blame_for
from ..natural import (
    BoundaryCounter, apply_contract, call_wrapped, compile_contract, guarded_key, guarded_read,
    guarded_write, monitoring_violations,
)
from ..shapes import ANY_SHAPE, check_shape
from ..syntax.ast import (
    App, Begin, CaseLambda, Cast, HashLit, If, Inst, Lambda, Let, Letrec, ListLit, Lit, PrimCall,
    RecordGet, RecordLit, SourceLoc, Var, VectorLit,
)
from ..transient import CheckKind
from ..types.prims import PRIMS
from .errors import DynamicError, GTLRuntimeError, ShapeError, StepBudgetExceeded, UnsupportedBoundaryType
from .library import Call, make_primitives
from .values import (
    CaseClosure, Closure, Hash, Primitive, RecordV, Vector, WrappedValue, from_list, sketch, strip,
)


class Mode(str, Enum):
    ERASED = "erased"
    DEEP = "deep"
    SHALLOW = "shallow"
    SB = "sb"

    def __str__(self):
        return self.value


@dataclass
class CostCounters:
    shape_checks: int = 0
    flat_checks: int = 0
    wrappers_allocated: int = 0
    wrapped_calls: int = 0
    blame_ops: int = 0
    steps: int = 0
    map_size: int = 0

    def as_dict(self):
        return dataclasses.asdict(self)

    def copy(self):
        return dataclasses.replace(self)

    def lines(self):
        return [f"{k}={v}" for k, v in self.as_dict().items()]


class _Unset:
    def __repr__(self):
        return "#<undefined>"


UNSET = _Unset()


class Env:
    __slots__ = ("vars", "parent")

    def __init__(self, vars_, parent):
        self.vars = vars_
        self.parent = parent


@dataclass
class ModuleCtx:
    name: str
    typed: bool
    im: object  # InstrumentedModule
    globals: dict


class Runtime:
    """One run of one program under one configuration and mode.

    Owns all mutable state of the run: counters, the proper-list cache, the
    blame map and the module environments.
    """

    def __init__(self, prog, mode, instrumented, *, init_trusted=False, step_budget=None):
        self.prog = prog
        self.mode = Mode(mode)
        self.instrumented = instrumented
        self.init_trusted = init_trusted
        self.step_budget = step_budget
        self.counters = CostCounters()
        self.proper_lists = set()
        self.output = []
        self.shallow = self.mode in (Mode.SHALLOW, Mode.SB)
        self.sb = self.mode is Mode.SB
        self.deep = self.mode is Mode.DEEP
        self.bmap = BlameMap(self.counters) if self.sb else None
        self.boundaries = BoundaryCounter()
        self.prims = make_primitives()
        self.ctxs = {}
        self._dispatch = {
            Lit: self._lit, Var: self._var, Lambda: self._lambda, CaseLambda: self._case_lambda,
            App: self._app, PrimCall: self._prim, If: self._if, Let: self._let, Letrec: self._letrec,
            Begin: self._begin, ListLit: self._list, VectorLit: self._vector, HashLit: self._hash,
            RecordLit: self._record, RecordGet: self._get, Cast: self._cast, Inst: self._inst,
        }

    # -- loading ------------------------------------------------------------

    def run(self):
        """Load every module in dependency order; return the value of
        ``main`` (None when no module defines it)."""
        try:
            main = None
            for m in self.prog.modules:
                self._load(m)
                if m.definition("main") is not None:
                    main = self.ctxs[m.name].globals["main"]
            return main
        except RecursionError:
            err = DynamicError(SourceLoc("<runtime>", 0, 0), "eval", "deep recursion",
                               "stack exhausted")
            err.counters = self.counters.copy()
            raise err from None
        except GTLRuntimeError as e:
            e.counters = self.counters.copy()
            raise

    def _load(self, m):
        im = self.instrumented[m.name]
        typed = self.prog.typed[m.name]
        ctx = ModuleCtx(m.name, typed, im, dict(self.prims))
        self.ctxs[m.name] = ctx
        for imp in m.imports:
            ctx.globals[imp.binding] = self._link(m, imp, ctx)
        if self.shallow:
            for site in im.sites:
                if site.reject and site.kind is not CheckKind.BOUNDARY_IMPORT:
                    raise UnsupportedBoundaryType(site.loc, site.label, str(self.mode), site.reject)
        for d in im.module.defs:
            v = self.ev(d.expr, None, ctx)
            if isinstance(v, (Closure, CaseClosure)) and v.name is None:
                v.name = d.name
            ctx.globals[d.name] = v

    def _link(self, m, imp, ctx):
        exporter = self.prog.module(imp.source)
        v = self.ctxs[imp.source].globals[imp.binding]
        if not self.prog.is_boundary(m, imp) or self.mode is Mode.ERASED:
            return v
        t = self.prog.boundary_type(m, imp)
        def_loc = exporter.definition(imp.binding).loc
        if self.deep:
            b = self.boundaries.make(imp.loc, def_loc, t, positive=imp.source, negative=m.name)
            return apply_contract(compile_contract(t), v, b, self)
        if ctx.typed:
            if self.sb:
                self.bmap.record_boundary(v, t, def_loc, imp.loc)
            (site,) = ctx.im.by_node[imp.nid]
            if site.reject:
                raise UnsupportedBoundaryType(imp.loc, t, str(self.mode), site.reject)
            self.check(site, v)
        elif self.sb:
            self.bmap.record_boundary(v, t, imp.loc, def_loc)
        return v

    # -- checks ---------------------------------------------------------------

    def check(self, site, v, hook=None):
        if site.shape is ANY_SHAPE:
            return
        self.counters.shape_checks += 1
        out = check_shape(site.shape, v, self)
        if not out.passed:
            blame = blame_for(self.bmap, v, hook, site) if self.sb else None
            raise ShapeError(site, out.witness, blame)

    def _elim_site(self, ctx, node):
        if not (self.shallow and ctx.typed):
            return None
        sites = ctx.im.by_node.get(node.nid)
        return sites[0] if sites else None

    # Deep wrapper plumbing used by the primitive library
    def guarded_read(self, w, read):
        return guarded_read(self, w, read)

    def guarded_write(self, w, value, write, key=None):
        return guarded_write(self, w, value, write, key)

    def guarded_key(self, w, key):
        return guarded_key(self, w, key)

    # -- evaluation -----------------------------------------------------------

    def ev(self, node, env, ctx):
        c = self.counters
        c.steps += 1
        if self.step_budget is not None and c.steps > self.step_budget:
            raise StepBudgetExceeded(self.step_budget)
        return self._dispatch[type(node)](node, env, ctx)

    def _lit(self, node, env, ctx):
        return node.value

    def _var(self, node, env, ctx):
        name = node.name
        e = env
        while e is not None:
            if name in e.vars:
                v = e.vars[name]
                break
            e = e.parent
        else:
            v = ctx.globals.get(name, UNSET)
        if v is UNSET:
            raise DynamicError(node.loc, name, "#<undefined>", "used before its definition")
        return v

    def _lambda(self, node, env, ctx):
        return Closure(node, env, ctx.name, ctx.typed)

    def _case_lambda(self, node, env, ctx):
        return CaseClosure(node, [Closure(b, env, ctx.name, ctx.typed) for b in node.branches],
                           ctx.name, ctx.typed)

    def _if(self, node, env, ctx):
        if self.ev(node.test, env, ctx) is not False:
            return self.ev(node.then, env, ctx)
        return self.ev(node.orelse, env, ctx)

    def _let(self, node, env, ctx):
        for b in node.bindings:
            v = self.ev(b.expr, env, ctx)
            if isinstance(b.expr, (Lambda, CaseLambda)) and v.name is None:
                v.name = b.name
            env = Env({b.name: v}, env)
        return self.ev(node.body, env, ctx)

    def _letrec(self, node, env, ctx):
        env = Env({b.name: UNSET for b in node.bindings}, env)
        for b in node.bindings:
            v = self.ev(b.expr, env, ctx)
            if isinstance(b.expr, (Lambda, CaseLambda)) and v.name is None:
                v.name = b.name
            env.vars[b.name] = v
        return self.ev(node.body, env, ctx)

    def _begin(self, node, env, ctx):
        v = None
        for e in node.exprs:
            v = self.ev(e, env, ctx)
        return v

    def _list(self, node, env, ctx):
        return from_list([self.ev(e, env, ctx) for e in node.elems])

    def _vector(self, node, env, ctx):
        return Vector([self.ev(e, env, ctx) for e in node.elems], mutable=False)

    def _hash(self, node, env, ctx):
        return Hash([(self.ev(k, env, ctx), self.ev(v, env, ctx)) for k, v in node.pairs])

    def _record(self, node, env, ctx):
        return RecordV(node.tag, [(n, self.ev(e, env, ctx)) for n, e in node.fields])

    def _get(self, node, env, ctx):
        v = self.ev(node.expr, env, ctx)
        u = strip(v)
        if not (isinstance(u, RecordV) and node.field in u.fields):
            raise DynamicError(node.loc, "get", sketch(v), f"no field {node.field}")
        r = u.fields[node.field]
        site = self._elim_site(ctx, node)
        if site is not None:
            action = RecordField(node.field)
            if self.sb:
                self.bmap.record_link(r, v, action)
            self.check(site, r, (v, action))
        return r

    def _cast(self, node, env, ctx):
        v = self.ev(node.expr, env, ctx)
        if not ctx.typed:
            return v
        if self.shallow:
            self.check(ctx.im.by_node[node.nid][0], v)
        elif self.deep:
            b = self.boundaries.make(node.loc, node.loc, node.type,
                                     positive=f"cast at {node.loc}", negative=ctx.name)
            v = apply_contract(compile_contract(node.type), v, b, self)
        return v

    def _inst(self, node, env, ctx):
        v = self.ev(node.expr, env, ctx)
        if self.shallow and ctx.typed:
            self.check(ctx.im.by_node[node.nid][0], v)
        return v

    def _prim(self, node, env, ctx):
        args = [self.ev(a, env, ctx) for a in node.args]
        prim = self.prims[node.op]
        if len(args) not in prim.arities:
            raise DynamicError(node.loc, node.op, f"{len(args)} argument(s)", "arity mismatch")
        r = prim.fn(self, args, Call(node.loc, ctx.typed, node.bounds_checked))
        if self.sb and ctx.typed and self.init_trusted and not PRIMS[node.op].result_guaranteed:
            self.bmap.record_boundary(r, self.prog.node_types[node.nid], node.loc,
                                      SourceLoc(f"<trusted:{node.op}>", 0, 0))
        site = self._elim_site(ctx, node)
        if site is not None:
            hook = None
            if site.hook is not None and args:
                hook = (args[0], site.hook[1])
                if self.sb:
                    self.bmap.record_link(r, args[0], site.hook[1])
            self.check(site, r, hook)
        return r

    def _app(self, node, env, ctx):
        f = self.ev(node.fn, env, ctx)
        args = [self.ev(a, env, ctx) for a in node.args]
        call = Call(node.loc, ctx.typed)
        crossing = (self.sb and ctx.typed and isinstance(f, (Closure, CaseClosure))
                    and not f.typed)
        if crossing:
            sig = self.prog.app_sigs[node.nid]
            client = (f.lam if isinstance(f, Closure) else f.node).loc
            for a, t in zip(args, sig.params):
                self.bmap.record_boundary(a, t, client, node.loc)
        r = self.apply(f, args, call)
        if crossing:
            self.bmap.record_boundary(r, sig.result, client, node.loc)
        site = self._elim_site(ctx, node)
        if site is not None:
            if self.sb and not crossing:
                self.bmap.record_link(r, f, Cod(0))
            self.check(site, r, (f, Cod(0)))
        return r

    # -- procedure calls -----------------------------------------------------

    def apply(self, f, args, call):
        if isinstance(f, Closure):
            if len(args) != len(f.lam.params):
                raise DynamicError(call.loc, "application", sketch(f),
                                   f"arity mismatch: expected {len(f.lam.params)}, given {len(args)}")
            return self.enter(f, f, args, call)
        if isinstance(f, Primitive):
            if len(args) not in f.arities:
                raise DynamicError(call.loc, f.name, f"{len(args)} argument(s)", "arity mismatch")
            return f.fn(self, args, call)
        if isinstance(f, CaseClosure):
            br = f.branch_for(len(args))
            if br is None:
                raise DynamicError(call.loc, "application", sketch(f),
                                   f"no case accepts {len(args)} argument(s)")
            return self.enter(f, br, args, call)
        if isinstance(f, WrappedValue):
            return call_wrapped(self, f, args, lambda g, a: self.apply(g, a, call))
        raise DynamicError(call.loc, "application", sketch(f), "not a procedure")

    call_value = apply

    def enter(self, fval, clo, args, call):
        lam = clo.lam
        ctx = self.ctxs[clo.module]
        env = Env({p.name: a for p, a in zip(lam.params, args)}, clo.env)
        checked = self.shallow and clo.typed
        if checked:
            for site in ctx.im.by_node.get(lam.nid, ()):
                a = args[site.index]
                if self.sb:
                    if call.caller_typed:
                        self.bmap.record_link(a, fval, Dom(site.index))
                    else:
                        p = lam.params[site.index]
                        self.bmap.record_boundary(a, self.prog.node_types[p.nid], call.loc, p.loc)
                self.check(site, a, (fval, Dom(site.index)))
        # a result handed back to an untyped caller meets no check and no
        # typed elimination, so nothing records it
        return self.ev(lam.body, env, ctx)

    # -- debugging ------------------------------------------------------------

    def monitoring_report(self):
        """Deep mode: higher-order values imported across a boundary that
        are not behind a wrapper (should always be empty)."""
        out = []
        for m, imp in self.prog.boundary_imports():
            if m.name not in self.ctxs:
                continue
            v = self.ctxs[m.name].globals[imp.binding]
            for where in monitoring_violations(v, self.prog.boundary_type(m, imp)):
                out.append(f"{m.name}.{imp.binding}{'' if where == '<value>' else where}")
        return out
