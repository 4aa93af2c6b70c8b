"""Recursive-descent parser for model files and scene specs.

Grammar, informally::

    spec       := (decl? NEWLINE)*
    decl       := [IDENT "="] CLASS [specifier ("," specifier)*]
    specifier  := "with" NAME expr
                | "at" expr ["relative" "to" expr]
                | "beyond" expr "by" expr "from" expr
                | "in" expr
                | DIRECTION "of" expr
                | ["completely"] "on" expr
                | "aligned" "with" expr ("on" | "along") AXIS
                | "facing" ["toward" | "towards"] expr
    expr       := term (("+" | "-") term)*
    term       := ["-"] NUMBER | STRING | IDENT | IDENT "(" args ")"
                | "V3D" "(" expr "," expr "," expr ")"
                | "(" FACE+ IDENT ")" | "(" expr "," expr ")" | "(" expr ")"

    models     := ("class" NAME ":" NEWLINE (NAME ":" expr NEWLINE)*)*

Newlines inside parentheses are ignored by the lexer, and a trailing comma
lets a specifier list continue on the next line.
"""

from __future__ import annotations

import hashlib

from ..errors import (
    DuplicateClass,
    DuplicateProperty,
    DuplicateVariable,
    MultipleOrientationSpecifiers,
    ParseError,
    UnknownClass,
    UnknownVariable,
)
from ..geom import FACE_TAGS
from . import ast as A
from .lexer import Token, tokenize
from .printer import format_models

REGION_CONSTRUCTORS = ("Cuboid", "Rect3D", "Halfspace", "All", "Empty")


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0
        self.bindings: set[str] = set()
        self.check_vars = True

    # -- token helpers -------------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, kind: str, value: str | None = None) -> bool:
        t = self.tok
        return t.kind == kind and (value is None or t.value == value)

    def at_kw(self, *words: str) -> bool:
        return self.tok.kind == "KW" and self.tok.value in words

    def advance(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def expect(self, kind: str, value: str | None = None, what: str | None = None) -> Token:
        if not self.at(kind, value):
            want = what or (repr(value) if value else kind.lower())
            raise self.error(f"expected {want}, found {self._describe(self.tok)}")
        return self.advance()

    def error(self, message: str, tok: Token | None = None) -> ParseError:
        t = tok or self.tok
        return ParseError(message, t.line, t.col)

    @staticmethod
    def _describe(t: Token) -> str:
        if t.kind == "EOF":
            return "end of input"
        if t.kind == "NEWLINE":
            return "end of line"
        return repr(t.value)

    def skip_newlines(self):
        while self.at("NEWLINE"):
            self.advance()

    def end_of_statement(self):
        if self.at("EOF"):
            return
        self.expect("NEWLINE", what="end of line")

    # -- expressions ---------------------------------------------------------

    def expr(self) -> A.Expr:
        left = self.term()
        while self.at("PLUS") or self.at("MINUS"):
            op = self.advance().value
            left = A.BinOp(op, left, self.term())
        return left

    def signed_number(self) -> float:
        neg = False
        if self.at("MINUS"):
            self.advance()
            neg = True
        t = self.expect("NUMBER", what="number")
        v = float(t.value)
        return -v if neg else v

    def term(self) -> A.Expr:
        t = self.tok
        if t.kind == "MINUS" and self.peek().kind == "NUMBER":
            return A.NumLit(self.signed_number())
        if t.kind == "NUMBER":
            return A.NumLit(self.signed_number())
        if t.kind == "STRING":
            self.advance()
            return A.StringLit(t.value)
        if t.kind == "KW" and t.value == "V3D":
            self.advance()
            self.expect("LPAREN")
            x = self.expr()
            self.expect("COMMA")
            y = self.expr()
            self.expect("COMMA")
            z = self.expr()
            self.expect("RPAREN")
            return A.Vec3Lit(x, y, z)
        if t.kind == "IDENT":
            self.advance()
            if self.at("LPAREN") and t.value in REGION_CONSTRUCTORS:
                self.advance()
                args = []
                if not self.at("RPAREN"):
                    args.append(self.expr())
                    while self.at("COMMA"):
                        self.advance()
                        args.append(self.expr())
                self.expect("RPAREN")
                return A.Call(t.value, tuple(args))
            return self.var(t)
        if t.kind == "LPAREN":
            return self.paren()
        raise self.error(f"expected an expression, found {self._describe(t)}")

    def var(self, t: Token) -> A.VarRef:
        if self.check_vars and t.value not in self.bindings:
            raise UnknownVariable(f"unknown variable {t.value!r}", t.line, t.col)
        return A.VarRef(t.value, t.line, t.col)

    def paren(self) -> A.Expr:
        open_tok = self.expect("LPAREN")
        if self.at("KW") and self.tok.value in FACE_TAGS:
            tags = []
            while self.at("KW") and self.tok.value in FACE_TAGS:
                tags.append(self.advance().value)
            target = self.var(self.expect("IDENT", what="object name"))
            self.expect("RPAREN")
            return A.AnchorExpr(tuple(tags), target)
        first = self.expr()
        if self.at("COMMA"):
            self.advance()
            second = self.expr()
            self.expect("RPAREN")
            if not (isinstance(first, A.NumLit) and isinstance(second, A.NumLit)):
                raise self.error("range bounds must be numbers", open_tok)
            if not first.value < second.value:
                raise self.error(f"empty range ({first.value}, {second.value})", open_tok)
            return A.RangeLit(first.value, second.value)
        self.expect("RPAREN")
        return first

    # -- specifiers ----------------------------------------------------------

    def specifier(self) -> A.Specifier:
        t = self.tok
        loc = dict(line=t.line, col=t.col)
        if t.kind != "KW":
            raise self.error(f"expected a specifier, found {self._describe(t)}")
        word = t.value
        if word == "with":
            self.advance()
            name = self.tok
            if name.kind not in ("IDENT", "KW") or name.value == "V3D":
                raise self.error("expected property name after 'with'")
            self.advance()
            return A.With(name.value, self.expr(), **loc)
        if word == "at":
            self.advance()
            value = self.expr()
            rel = None
            if self.at_kw("relative"):
                self.advance()
                self.expect("KW", "to")
                rel = self.expr()
            return A.At(value, rel, **loc)
        if word == "beyond":
            self.advance()
            target = self.expr()
            self.expect("KW", "by")
            by = self.expr()
            self.expect("KW", "from")
            return A.Beyond(target, by, self.expr(), **loc)
        if word == "in":
            self.advance()
            return A.In(self.expr(), **loc)
        if word in A.DIRECTIONS:
            self.advance()
            self.expect("KW", "of")
            return A.Directional(word, self.expr(), **loc)
        if word in ("completely", "on"):
            completely = word == "completely"
            self.advance()
            if completely:
                self.expect("KW", "on")
            return A.On(self.expr(), completely, **loc)
        if word == "aligned":
            self.advance()
            self.expect("KW", "with")
            target = self.expr()
            if not self.at_kw("on", "along"):
                raise self.error("expected 'on' or 'along' after aligned-with target")
            self.advance()
            axis = self.expect("IDENT", what="axis x, y or z")
            if axis.value not in A.AXES:
                raise self.error(f"unknown axis {axis.value!r}", axis)
            return A.AlignedWith(target, axis.value, **loc)
        if word == "facing":
            self.advance()
            if self.at_kw("toward", "towards"):
                self.advance()
                return A.FacingToward(self.expr(), **loc)
            return A.Facing(self.expr(), **loc)
        raise self.error(f"unexpected keyword {word!r}")

    # -- declarations --------------------------------------------------------

    def declaration(self, models: dict, index: int) -> A.ObjectDecl:
        start = self.tok
        binding = None
        if self.at("IDENT") and self.peek().kind == "EQUALS":
            binding = self.advance().value
            self.advance()
            if binding in self.bindings:
                raise DuplicateVariable(f"variable {binding!r} already defined", start.line, start.col)
        cls_tok = self.expect("IDENT", what="object class name")
        if cls_tok.value not in models:
            raise UnknownClass(f"unknown class {cls_tok.value!r}", cls_tok.line, cls_tok.col)
        specs = []
        if not (self.at("NEWLINE") or self.at("EOF")):
            specs.append(self.specifier())
            while self.at("COMMA"):
                self.advance()
                self.skip_newlines()
                specs.append(self.specifier())
        self.end_of_statement()
        orient = [s for s in specs if A.is_orientation_specifier(s)]
        if len(orient) > 1:
            s = orient[1]
            raise MultipleOrientationSpecifiers(
                "an object takes at most one orientation specifier", s.line, s.col
            )
        name = binding if binding is not None else f"_obj{index}"
        if binding is not None:
            self.bindings.add(binding)
        return A.ObjectDecl(binding, name, cls_tok.value, tuple(specs), start.line, start.col)

    def spec(self, models: dict) -> tuple[A.ObjectDecl, ...]:
        decls = []
        unbound = 0
        self.skip_newlines()
        while not self.at("EOF"):
            d = self.declaration(models, unbound)
            if d.binding is None:
                unbound += 1
            decls.append(d)
            self.skip_newlines()
        return tuple(decls)

    def model_value(self) -> A.Expr:
        e = self.expr()
        if not isinstance(e, (A.NumLit, A.StringLit, A.RangeLit, A.Vec3Lit)):
            raise self.error("model defaults must be literals, ranges or vectors")
        return e

    def models(self) -> list[A.ModelClass]:
        classes: list[A.ModelClass] = []
        seen: set[str] = set()
        self.skip_newlines()
        while not self.at("EOF"):
            head = self.expect("KW", "class", what="'class'")
            name = self.expect("IDENT", what="class name")
            if name.value in seen:
                raise DuplicateClass(f"class {name.value!r} defined twice", name.line, name.col)
            seen.add(name.value)
            self.expect("COLON")
            self.end_of_statement()
            self.skip_newlines()
            defaults: dict[str, A.Expr] = {}
            while self.tok.kind in ("IDENT", "KW") and not self.at_kw("class") and self.peek().kind == "COLON":
                prop = self.advance()
                self.advance()
                if prop.value in defaults:
                    raise DuplicateProperty(
                        f"property {prop.value!r} repeated in class {name.value!r}", prop.line, prop.col
                    )
                defaults[prop.value] = self.model_value()
                self.end_of_statement()
                self.skip_newlines()
            defaults.setdefault(A.POSITION, A.Vec3Lit(A.NumLit(0.0), A.NumLit(0.0), A.NumLit(0.0)))
            defaults.setdefault(A.ORIENTATION, A.Vec3Lit(A.NumLit(0.0), A.NumLit(1.0), A.NumLit(0.0)))
            classes.append(A.ModelClass(name.value, defaults, head.line))
        return classes


def parse_model(text: str) -> list[A.ModelClass]:
    """Parse a models file into class definitions.

    Every class gets implicit ``position`` (origin) and ``orientation``
    (forward along +y, i.e. identity) defaults unless it sets them itself.
    """
    p = _Parser(text)
    p.check_vars = False
    return p.models()


def parse_spec(text: str, models) -> A.SpecAST:
    if isinstance(models, dict):
        model_map = dict(models)
    else:
        model_map = {}
        for m in models:
            if m.name in model_map:
                raise DuplicateClass(f"class {m.name!r} defined twice", m.line)
            model_map[m.name] = m
    decls = _Parser(text).spec(model_map)

    digest = hashlib.sha256()
    digest.update(text.encode("utf-8"))
    digest.update(b"\0")
    digest.update(format_models(model_map.values()).encode("utf-8"))
    return A.SpecAST(model_map, decls, digest.hexdigest())
