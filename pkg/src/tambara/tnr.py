"""A small expression language for transfer-norm-restriction words.

Expressions are built from the universal element ``theta``, the unary
operators ``t[f]``, ``n[f]``, ``r[f]`` referring to named equivariant
maps, and the semiring operations ``+`` and ``*``.  Parsing, level
typechecking, and evaluation through the bispan engine are separate
passes, so a syntactically valid word can still be rejected when the
named maps do not line up.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .bispans import Element, add, mul, norm, restrict_along, theta_element, transfer
from .errors import (
    GroupMismatch,
    InputError,
    PortMismatch,
    TnrSyntaxError,
    UnknownName,
)
from .gsets import GMap, GSet


@dataclass(frozen=True)
class MapContext:
    """Named G-sets and G-maps over one group, with a designated generator."""

    generator: GSet
    gsets: dict = field(default_factory=dict)
    gmaps: dict = field(default_factory=dict)

    def __post_init__(self):
        G = self.generator.group
        for name, X in self.gsets.items():
            if X.group != G:
                raise GroupMismatch(f"G-set {name!r} over a different group")
        for name, f in self.gmaps.items():
            if f.source.group != G:
                raise GroupMismatch(f"map {name!r} over a different group")

    def lookup(self, name: str) -> GMap:
        if name not in self.gmaps:
            raise UnknownName(name)
        return self.gmaps[name]


# --- abstract syntax --------------------------------------------------------

@dataclass(frozen=True, eq=False)
class TnrExpr:
    pass


@dataclass(frozen=True, eq=False)
class Theta(TnrExpr):
    pass


@dataclass(frozen=True, eq=False)
class Unary(TnrExpr):
    kind: str  # "t" | "n" | "r"
    name: str
    arg: TnrExpr


@dataclass(frozen=True, eq=False)
class Binary(TnrExpr):
    op: str  # "+" | "*"
    left: TnrExpr
    right: TnrExpr


def pretty_print(e: TnrExpr) -> str:
    if isinstance(e, Theta):
        return "theta"
    if isinstance(e, Unary):
        arg = pretty_print(e.arg)
        if isinstance(e.arg, Binary):
            arg = f"({arg})"
        return f"{e.kind}[{e.name}] {arg}"
    if isinstance(e, Binary):
        left, right = pretty_print(e.left), pretty_print(e.right)
        if e.op == "*":
            if isinstance(e.left, Binary) and e.left.op == "+":
                left = f"({left})"
            if isinstance(e.right, Binary) and e.right.op == "+":
                right = f"({right})"
        return f"{left} {e.op} {right}"
    raise InputError(f"unknown node {e!r}")


# --- parsing ----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:([A-Za-z_][A-Za-z0-9_]*)|([\[\]()+*])|(\S))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        word, sym, bad = m.groups()
        if bad is not None:
            raise TnrSyntaxError(f"unexpected character {bad!r}", m.start(3))
        if word is not None:
            tokens.append(("word", word, m.start(1)))
        elif sym is not None:
            tokens.append(("sym", sym, m.start(2)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_sym(self, sym):
        kind, value, pos = self.take()
        if kind != "sym" or value != sym:
            raise TnrSyntaxError(f"expected {sym!r}, found {value!r}", pos)

    def expr(self) -> TnrExpr:
        out = self.product()
        while self.peek()[:2] == ("sym", "+"):
            self.take()
            out = Binary(op="+", left=out, right=self.product())
        return out

    def product(self) -> TnrExpr:
        out = self.term()
        while self.peek()[:2] == ("sym", "*"):
            self.take()
            out = Binary(op="*", left=out, right=self.term())
        return out

    def term(self) -> TnrExpr:
        kind, value, pos = self.take()
        if kind == "word":
            if value == "theta":
                return Theta()
            if value in ("t", "n", "r"):
                self.expect_sym("[")
                nkind, name, npos = self.take()
                if nkind != "word":
                    raise TnrSyntaxError("expected a map name", npos)
                self.expect_sym("]")
                return Unary(kind=value, name=name, arg=self.term())
            raise TnrSyntaxError(f"unexpected word {value!r}", pos)
        if (kind, value) == ("sym", "("):
            out = self.expr()
            self.expect_sym(")")
            return out
        raise TnrSyntaxError(f"unexpected token {value!r}", pos)


def parse(text: str) -> TnrExpr:
    parser = _Parser(_tokenize(text))
    out = parser.expr()
    kind, value, pos = parser.peek()
    if kind != "end":
        raise TnrSyntaxError(f"trailing input {value!r}", pos)
    return out


# --- typechecking -----------------------------------------------------------

def typecheck(e: TnrExpr, ctx: MapContext) -> dict:
    """Assign a level (a G-set) to every node; keys are node identities."""
    ports: dict = {}

    def visit(node) -> GSet:
        if isinstance(node, Theta):
            port = ctx.generator
        elif isinstance(node, Unary):
            inner = visit(node.arg)
            f = ctx.lookup(node.name)
            if node.kind == "r":
                if f.target != inner:
                    raise PortMismatch(
                        f"restriction {node.name!r} expects level of its "
                        f"target under {pretty_print(node)!r}"
                    )
                port = f.source
            else:
                if f.source != inner:
                    raise PortMismatch(
                        f"operator {node.kind}[{node.name}] expects level of "
                        f"its source under {pretty_print(node)!r}"
                    )
                port = f.target
        elif isinstance(node, Binary):
            left = visit(node.left)
            right = visit(node.right)
            if left != right:
                raise PortMismatch(
                    f"operands of {node.op!r} live at different levels in "
                    f"{pretty_print(node)!r}"
                )
            port = left
        else:
            raise InputError(f"unknown node {node!r}")
        ports[id(node)] = port
        return port

    visit(e)
    return ports


# --- evaluation -------------------------------------------------------------

def evaluate(e: TnrExpr, ctx: MapContext) -> Element:
    typecheck(e, ctx)

    def visit(node) -> Element:
        if isinstance(node, Theta):
            return theta_element(ctx.generator)
        if isinstance(node, Unary):
            inner = visit(node.arg)
            f = ctx.lookup(node.name)
            if node.kind == "t":
                return transfer(inner, f)
            if node.kind == "n":
                return norm(inner, f)
            return restrict_along(inner, f)
        if isinstance(node, Binary):
            left = visit(node.left)
            right = visit(node.right)
            return add(left, right) if node.op == "+" else mul(left, right)
        raise InputError(f"unknown node {node!r}")

    return visit(e)
