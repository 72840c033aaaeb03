"""S-expression reader with character-offset spans."""
from __future__ import annotations

import re
from dataclasses import dataclass, field

_INT_RE = re.compile(r"[-+]?\d+\Z")
_REAL_RE = re.compile(r"[-+]?(\d+\.\d*|\.\d+|\d+(\.\d*)?[eE][-+]?\d+)\Z")
_DELIMS = set("()[];\"'")
_CLOSERS = {"(": ")", "[": "]"}


class ParseError(Exception):
    """Raised for malformed input; carries the offending character offset."""

    def __init__(self, message, offset, text=None, module=None):
        self.message = message
        self.offset = offset
        self.module = module
        self.line, self.column = line_col(text, offset) if text is not None else (None, None)
        where = f"{self.line}:{self.column}" if self.line is not None else f"offset {offset}"
        super().__init__(f"{where}: {message}")


def line_col(text, offset):
    """1-based (line, column) for a character offset; display only."""
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


@dataclass
class Atom:
    kind: str  # int | real | bool | str | sym
    value: object
    start: int
    end: int

    def is_sym(self, name=None):
        return self.kind == "sym" and (name is None or self.value == name)


@dataclass
class SList:
    items: list = field(default_factory=list)
    start: int = 0
    end: int = 0
    bracket: str = "("


def _classify(tok):
    if tok in ("#t", "#true"):
        return "bool", True
    if tok in ("#f", "#false"):
        return "bool", False
    if _INT_RE.match(tok):
        return "int", int(tok)
    if _REAL_RE.match(tok):
        return "real", float(tok)
    return "sym", tok


def read_all(text):
    """Read every datum in ``text``; raises ParseError on malformed input."""
    pos = 0
    n = len(text)
    stack = []  # open SLists
    top = []

    def emit(d):
        (stack[-1].items if stack else top).append(d)

    while pos < n:
        c = text[pos]
        if c.isspace():
            pos += 1
        elif c == ";":
            nl = text.find("\n", pos)
            pos = n if nl < 0 else nl + 1
        elif c in "([":
            stack.append(SList([], pos, pos, c))
            pos += 1
        elif c in ")]":
            if not stack:
                raise ParseError(f"unexpected '{c}'", pos, text)
            lst = stack.pop()
            if _CLOSERS[lst.bracket] != c:
                raise ParseError(
                    f"expected '{_CLOSERS[lst.bracket]}' to close '{lst.bracket}'", lst.start, text
                )
            lst.end = pos + 1
            emit(lst)
            pos += 1
        elif c == '"':
            start = pos
            pos += 1
            buf = []
            while True:
                if pos >= n:
                    raise ParseError("unterminated string", start, text)
                ch = text[pos]
                if ch == "\\":
                    if pos + 1 < n and text[pos + 1] in '"\\':
                        buf.append(text[pos + 1])
                        pos += 2
                        continue
                    raise ParseError("unsupported string escape", pos, text)
                if ch == '"':
                    pos += 1
                    break
                buf.append(ch)
                pos += 1
            emit(Atom("str", "".join(buf), start, pos))
        elif c == "'":
            # only '() is supported: the empty list
            m = re.compile(r"'\(\s*\)").match(text, pos)
            if not m:
                raise ParseError("quote is only supported for '()", pos, text)
            emit(Atom("sym", "empty", pos, m.end()))
            pos = m.end()
        else:
            start = pos
            while pos < n and not text[pos].isspace() and text[pos] not in _DELIMS:
                pos += 1
            tok = text[start:pos]
            kind, value = _classify(tok)
            emit(Atom(kind, value, start, pos))
    if stack:
        raise ParseError(f"unbalanced '{stack[-1].bracket}'", stack[-1].start, text)
    return top
