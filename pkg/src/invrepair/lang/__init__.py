from .ast import *  # noqa: F401,F403
from .checker import Diagnostic, check
from .parser import (DuplicateDeclaration, ProgramSyntaxError, UndeclaredVariable,
                     parse, parse_expr)
from .printer import expr_str, pretty_print

__all__ = [
    "Diagnostic", "check", "parse", "parse_expr", "pretty_print", "expr_str",
    "ProgramSyntaxError", "DuplicateDeclaration", "UndeclaredVariable",
]
