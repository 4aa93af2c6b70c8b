"""Lexer, parser and pretty-printer for scene specs and model files."""

from . import ast
from .lexer import Token, tokenize
from .parser import parse_model, parse_spec
from .printer import format_decl, format_expr, format_models, format_spec

__all__ = [
    "ast", "Token", "tokenize", "parse_model", "parse_spec",
    "format_decl", "format_expr", "format_models", "format_spec",
]
