"""Reader, surface AST, parser, printer and origin-tagging desugarer."""
from .ast import EMPTY, Lang, ModuleDecl, Origin, SourceLoc, walk
from .desugar import desugar, desugar_program
from .parser import parse, parse_module
from .printer import show, show_program
from .reader import ParseError, line_col

__all__ = [
    "EMPTY", "Lang", "ModuleDecl", "Origin", "SourceLoc", "walk", "desugar", "desugar_program",
    "parse", "parse_module", "show", "show_program", "ParseError", "line_col",
]
