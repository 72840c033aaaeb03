"""Random well-typed mixed programs for soundness testing.

Each program has three modules: an untyped library whose values may
disagree with the types they are imported at, a configurable middle
module of typed functions over those imports, and a typed ``main``.
Any run that finishes without an error must produce a value that fits the
static type of ``main``: its top-level shape under Shallow, and its whole
first-order structure under Deep.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from .runtime.values import (
    EMPTY, Pair, RecordV, Vector, WrappedValue, is_int, is_procedure,
)

INT, BOOL, STR = ("Int",), ("Bool",), ("Str",)
BASE = (INT, BOOL, STR)
POINT = ("Rec", "pt", (("x", INT), ("y", INT)))


def listof(t):
    return ("List", t)


def vec2(a, b):
    return ("Vec", a, b)


def fun(a, r):
    return ("Fun", a, r)


def box(t):
    return ("Rec", "box", (("v", t),))


UNION = ("U", INT, BOOL)


def type_src(t):
    k = t[0]
    if k == "Int":
        return "Integer"
    if k == "Bool":
        return "Boolean"
    if k == "Str":
        return "String"
    if k == "List":
        return f"(Listof {type_src(t[1])})"
    if k == "Vec":
        return f"(Vector {type_src(t[1])} {type_src(t[2])})"
    if k == "Rec":
        fields = " ".join(f"[{n} {type_src(ft)}]" for n, ft in t[2])
        return f"(Record {t[1]} {fields})"
    if k == "Fun":
        return f"(-> {type_src(t[1])} {type_src(t[2])})"
    if k == "U":
        return "(U " + " ".join(type_src(m) for m in t[1:]) + ")"
    raise ValueError(t)


def conforms(t, v):
    """Full structural membership of a first-order value; functions are
    only required to be procedures."""
    if isinstance(v, WrappedValue):
        v = v.unwrap()
    k = t[0]
    if k == "Int":
        return is_int(v)
    if k == "Bool":
        return isinstance(v, bool)
    if k == "Str":
        return isinstance(v, str)
    if k == "List":
        while isinstance(v, Pair):
            if not conforms(t[1], v.head):
                return False
            v = v.tail
        return v is EMPTY
    if k == "Vec":
        return (isinstance(v, Vector) and len(v.items) == 2
                and conforms(t[1], v.items[0]) and conforms(t[2], v.items[1]))
    if k == "Rec":
        return (isinstance(v, RecordV) and v.tag == t[1]
                and all(n in v.fields and conforms(ft, v.fields[n]) for n, ft in t[2]))
    if k == "Fun":
        return is_procedure(v)
    if k == "U":
        return any(conforms(m, v) for m in t[1:])
    raise ValueError(t)


def first_order(t):
    k = t[0]
    if k == "Fun":
        return False
    if k == "List":
        return first_order(t[1])
    if k == "Vec":
        return first_order(t[1]) and first_order(t[2])
    if k == "Rec":
        return all(first_order(ft) for _, ft in t[2])
    return True


class Generator:
    def __init__(self, seed):
        self.rng = random.Random(seed)

    def chance(self, p):
        return self.rng.random() < p

    # -- types ----------------------------------------------------------------

    def type(self, depth=2):
        r = self.rng
        if depth == 0:
            return r.choice(BASE)
        pick = r.randrange(8)
        if pick < 3:
            return r.choice(BASE)
        if pick == 3:
            return listof(self.type(depth - 1))
        if pick == 4:
            return vec2(self.type(depth - 1), self.type(depth - 1))
        if pick == 5:
            return r.choice([POINT, box(self.type(depth - 1))])
        if pick == 6:
            return fun(self.type(depth - 1), self.type(depth - 1))
        return UNION

    # -- untyped values, possibly wrong ---------------------------------------

    def untyped(self, t, wrong=0.25, depth=2):
        if self.chance(wrong):
            other = self.type(1)
            if other != t:
                t = other
        r = self.rng
        k = t[0]
        if k == "Int":
            return str(r.randint(-5, 20))
        if k == "Bool":
            return r.choice(["#t", "#f"])
        if k == "Str":
            return r.choice(['"a"', '"bc"', '""'])
        if k == "List":
            n = r.randint(0, 3)
            return "(list" + "".join(" " + self.untyped(t[1], wrong / 2, depth - 1)
                                     for _ in range(n)) + ")"
        if k == "Vec":
            return f"(vector {self.untyped(t[1], wrong / 2)} {self.untyped(t[2], wrong / 2)})"
        if k == "Rec":
            fields = " ".join(f"[{n} {self.untyped(ft, wrong / 2)}]" for n, ft in t[2])
            return f"(record {t[1]} {fields})"
        if k == "Fun":
            if t[1] == t[2] and self.chance(0.5):
                return "(lambda (x) x)"
            return f"(lambda (x) {self.untyped(t[2], wrong / 2)})"
        return self.untyped(r.choice(t[1:]), wrong)

    # -- typed expressions ------------------------------------------------------

    def expr(self, t, env, depth=3):
        """A typed expression of type ``t`` over ``env`` (name -> type)."""
        r = self.rng
        exact = [n for n, vt in env.items() if vt == t]
        if exact and self.chance(0.4):
            return r.choice(exact)
        if depth > 0 and self.chance(0.5):
            elim = self.elimination(t, env, depth)
            if elim is not None:
                return elim
        return self.intro(t, env, depth)

    def elimination(self, t, env, depth):
        r = self.rng
        options = []
        for n, vt in env.items():
            k = vt[0]
            if k == "Fun" and vt[2] == t:
                options.append(lambda n=n, vt=vt: f"({n} {self.expr(vt[1], env, depth - 1)})")
            if k == "List" and vt[1] == t:
                options.append(lambda n=n: f"(first {n})")
                options.append(lambda n=n: f"(list-ref {n} {r.randint(0, 1)})")
            if k == "Vec":
                for i in (1, 2):
                    if vt[i] == t:
                        options.append(lambda n=n, i=i: f"(vector-ref {n} {i - 1})")
            if k == "Rec":
                for fname, ft in vt[2]:
                    if ft == t:
                        options.append(lambda n=n, f=fname: f"(get {n} {f})")
        if t == INT:
            lists = [n for n, vt in env.items() if vt[0] == "List"]
            if lists:
                options.append(lambda: f"(length {r.choice(lists)})")
        if t == BOOL:
            lists = [n for n, vt in env.items() if vt[0] == "List"]
            if lists:
                options.append(lambda: f"(null? {r.choice(lists)})")
        if not options:
            return None
        return r.choice(options)()

    def intro(self, t, env, depth):
        r = self.rng
        k = t[0]
        d = depth - 1
        if k == "Int":
            if d > 0 and self.chance(0.4):
                return f"(+ {self.expr(INT, env, d)} {self.expr(INT, env, d)})"
            return str(r.randint(0, 9))
        if k == "Bool":
            if d > 0 and self.chance(0.4):
                return f"(< {self.expr(INT, env, d)} {self.expr(INT, env, d)})"
            return r.choice(["#t", "#f"])
        if k == "Str":
            if d > 0 and self.chance(0.3):
                return f"(string-append {self.expr(STR, env, d)} {self.expr(STR, env, d)})"
            return r.choice(['"x"', '"yz"'])
        if k == "List":
            if d > 0 and self.chance(0.3):
                src = self.type(1)
                lam = self.lam(fun(src, t[1]), env, d)
                return f"(map {lam} (list {self.expr(src, env, d)}))"
            n = r.randint(1, 3)
            return "(list" + "".join(" " + self.expr(t[1], env, d) for _ in range(n)) + ")"
        if k == "Vec":
            return f"(vector {self.expr(t[1], env, d)} {self.expr(t[2], env, d)})"
        if k == "Rec":
            fields = " ".join(f"[{n} {self.expr(ft, env, d)}]" for n, ft in t[2])
            return f"(record {t[1]} {fields})"
        if k == "Fun":
            return self.lam(t, env, d)
        if k == "U":
            return self.expr(r.choice(t[1:]), env, d)
        raise ValueError(t)

    def lam(self, t, env, depth):
        name = f"a{len(env)}"
        body = self.expr(t[2], {**env, name: t[1]}, max(depth, 1))
        return f"(lambda ([{name} : {type_src(t[1])}]) {body})"


@dataclass
class FuzzProgram:
    seed: int
    source: str
    main_type: tuple


def generate(seed):
    g = Generator(seed)
    imports = {f"u{i}": g.type() for i in range(3)}
    lib = "\n".join(f"  (define {n} {g.untyped(t)})" for n, t in imports.items())
    req = " ".join(f"[{n} {type_src(t)}]" for n, t in imports.items())
    funs = {}
    defs = []
    for i in range(2):
        a, res = g.type(1), g.type()
        funs[f"f{i}"] = fun(a, res)
        body = g.expr(res, {**imports, "p": a})
        defs.append(f"  (define (f{i} [p : {type_src(a)}]) : {type_src(res)}\n    {body})")
    main_t = g.type()
    env = dict(funs)
    env["u0"] = imports["u0"]
    main = g.expr(main_t, env, depth=4)
    source = (
        f"(module lib untyped\n{lib})\n\n"
        f"(module mid configurable\n  (require lib {req})\n" + "\n".join(defs) + ")\n\n"
        f"(module main typed\n"
        f"  (require mid " + " ".join(f"[{n} {type_src(t)}]" for n, t in funs.items()) + ")\n"
        f"  (require lib [u0 {type_src(imports['u0'])}])\n"
        f"  (define main : {type_src(main_t)}\n    {main}))\n"
    )
    return FuzzProgram(seed, source, main_t)
