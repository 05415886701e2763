"""Recursive-descent parser for scalars and algebra expressions.

Grammar (whitespace ignored, juxtaposition means ``*``)::

    expr   := ['-'] term (('+' | '-') term)*
    term   := factor (('*' | '/' | <juxtaposition>) factor)*
    factor := '-' factor | atom ['^' ['-'] INT]
    atom   := INT | 'p' | 'q' | SYMBOL | 'a' | 'b' | 'c' | 'd'
            | 'u' '[' INT ',' INT ']' | 'e' '[' ['-'] INT ']' | '(' expr ')'

``q`` is an alias for ``p^2``.  Division and negative exponents are only
allowed on scalars.  SYMBOL is any parameter name of the coefficient field
(for example ``rho`` and ``lam`` when the Podles parameters are symbolic).
Columns in error messages are 1-based; an expression cut off inside
parentheses reports the innermost unclosed parenthesis.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .qfield import QP, QHalf

TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")
A_LETTERS = ("a", "b", "c", "d")


class ParseError(ValueError):
    """Syntax or typing error with a 1-based column and the expected tokens."""

    def __init__(self, msg, column, expected=()):
        self.column = column
        self.expected = tuple(expected)
        text = f"column {column}: {msg}"
        if expected:
            text += " (expected " + " or ".join(expected) + ")"
        super().__init__(text)


@dataclass
class Tok:
    kind: str   # 'int', 'name', 'op', 'end'
    text: str
    col: int


def tokenize(text: str):
    out = []
    pos = 0
    n = len(text)
    while pos < n:
        m = TOKEN.match(text, pos)
        if not m or m.end() == pos:
            break
        if m.group(1) is not None:
            out.append(Tok("int", m.group(1), m.start(1) + 1))
        elif m.group(2) is not None:
            out.append(Tok("name", m.group(2), m.start(2) + 1))
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch not in "+-*/^()[],":
                raise ParseError(f"unexpected character {ch!r}", m.start(3) + 1)
            out.append(Tok("op", ch, m.start(3) + 1))
        pos = m.end()
    out.append(Tok("end", "", n + 1))
    return out


# ---------------------------------------------------------------------------
# AST

@dataclass
class Node:
    op: str          # 'num', 'sym', 'gen', 'u', 'e', 'add', 'sub', 'mul', 'div', 'neg', 'pow'
    args: tuple
    col: int


class _Parser:
    def __init__(self, text, symbols=()):
        self.toks = tokenize(text)
        self.i = 0
        self.symbols = set(symbols)
        self.open = []          # columns of unclosed parentheses

    @property
    def tok(self):
        return self.toks[self.i]

    def _fail(self, msg, expected=()):
        t = self.tok
        if t.kind == "end" and self.open:
            raise ParseError("unclosed parenthesis", self.open[-1], expected)
        raise ParseError(msg, t.col, expected)

    def eat(self, kind, text=None):
        t = self.tok
        if t.kind == kind and (text is None or t.text == text):
            self.i += 1
            return t
        self._fail(f"unexpected {t.text or 'end of input'!r}", (repr(text) if text else kind,))

    def parse(self):
        if self.tok.kind == "end":
            self._fail("empty expression", ("expression",))
        node = self.expr()
        if self.tok.kind != "end":
            self._fail(f"unexpected {self.tok.text!r}", ("operator", "end of input"))
        return node

    def expr(self):
        col = self.tok.col
        if self.tok.kind == "op" and self.tok.text == "-":
            self.i += 1
            node = Node("neg", (self.term(),), col)
        else:
            node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            t = self.tok
            self.i += 1
            node = Node("add" if t.text == "+" else "sub", (node, self.term()), t.col)
        return node

    def _starts_atom(self):
        t = self.tok
        return t.kind in ("int", "name") or (t.kind == "op" and t.text == "(")

    def term(self):
        node = self.factor()
        while True:
            t = self.tok
            if t.kind == "op" and t.text in "*/":
                self.i += 1
                node = Node("mul" if t.text == "*" else "div", (node, self.factor()), t.col)
            elif self._starts_atom():
                node = Node("mul", (node, self.factor()), t.col)
            else:
                return node

    def factor(self):
        t = self.tok
        if t.kind == "op" and t.text == "-":
            self.i += 1
            return Node("neg", (self.factor(),), t.col)
        node = self.atom()
        if self.tok.kind == "op" and self.tok.text == "^":
            c = self.tok.col
            self.i += 1
            sign = 1
            if self.tok.kind == "op" and self.tok.text == "-":
                self.i += 1
                sign = -1
            k = self.eat("int")
            node = Node("pow", (node, sign * int(k.text)), c)
        return node

    def atom(self):
        t = self.tok
        if t.kind == "int":
            self.i += 1
            return Node("num", (int(t.text),), t.col)
        if t.kind == "op" and t.text == "(":
            self.i += 1
            self.open.append(t.col)
            node = self.expr()
            self.eat("op", ")")
            self.open.pop()
            return node
        if t.kind == "name":
            name = t.text
            self.i += 1
            if name in ("p", "q"):
                return Node("sym", (name,), t.col)
            if name in A_LETTERS:
                return Node("gen", (name,), t.col)
            if name == "u":
                self.eat("op", "[")
                i = int(self.eat("int").text)
                self.eat("op", ",")
                j = int(self.eat("int").text)
                self.eat("op", "]")
                if not (i in (1, 2) and j in (1, 2)):
                    raise ParseError("u[i,j] needs i, j in {1, 2}", t.col)
                return Node("u", (i, j), t.col)
            if name == "e":
                self.eat("op", "[")
                sign = 1
                if self.tok.kind == "op" and self.tok.text == "-":
                    self.i += 1
                    sign = -1
                k = sign * int(self.eat("int").text)
                self.eat("op", "]")
                if k not in (-1, 0, 1):
                    raise ParseError("e[i] needs i in {-1, 0, 1}", t.col)
                return Node("e", (k,), t.col)
            if name in self.symbols:
                return Node("sym", (name,), t.col)
            raise ParseError(f"unknown identifier {name!r}", t.col,
                             ("p", "q", "a", "b", "c", "d", "u[i,j]", "e[i]"))
        self._fail(f"unexpected {t.text or 'end of input'!r}", ("number", "identifier", "'('"))


def parse_ast(text: str, symbols=()) -> Node:
    return _Parser(text, symbols).parse()


def letters(node: Node) -> set:
    """{'A', 'B'} subset: which generator alphabets occur."""
    if node.op in ("gen", "u"):
        return {"A"}
    if node.op == "e":
        return {"B"}
    out = set()
    for a in node.args:
        if isinstance(a, Node):
            out |= letters(a)
    return out


# ---------------------------------------------------------------------------
# evaluation

def _is_scalar(x, F):
    return not hasattr(x, "terms")


def evaluate(node: Node, F=QP, alg=None, B=None, E=None):
    """Evaluate an AST; e-letters go to B, or through E into A when A-letters also occur."""
    kinds = letters(node)
    to_a = "A" in kinds and "B" in kinds
    if to_a and E is None:
        raise ParseError("mixing e-letters and a, b, c, d needs an embedding", node.col)
    if "A" in kinds and alg is None:
        raise ParseError("a, b, c, d need the algebra O(SL_q(2))", node.col)
    if "B" in kinds and B is None and E is None:
        raise ParseError("e-letters need a Podles algebra", node.col)
    if "B" in kinds and B is None:
        B = E.B

    def ev(n: Node):
        op, a = n.op, n.args
        if op == "num":
            return F.coerce(a[0])
        if op == "sym":
            if a[0] == "p":
                return F.p
            if a[0] == "q":
                return F.q
            return F.sym(a[0])
        if op == "gen":
            return alg.gen(a[0])
        if op == "u":
            return alg.u(*a)
        if op == "e":
            x = B.gen(a[0])
            return E.image(x) if to_a else x
        if op == "neg":
            return -ev(a[0])
        if op in ("add", "sub", "mul"):
            x, y = ev(a[0]), ev(a[1])
            if op == "add":
                return x + y
            if op == "sub":
                return x - y
            if _is_scalar(x, F) and not _is_scalar(y, F):
                return y * x
            return x * y
        if op == "div":
            x, y = ev(a[0]), ev(a[1])
            if not _is_scalar(y, F):
                raise ParseError("division by a non-scalar", n.col)
            if not y:
                raise ParseError("division by zero", n.col)
            return x / y if _is_scalar(x, F) else x * (F.one / y)
        if op == "pow":
            x, k = ev(a[0]), a[1]
            if k < 0:
                if not _is_scalar(x, F):
                    raise ParseError("negative power of a non-scalar", n.col)
                if not x:
                    raise ParseError("division by zero", n.col)
                return (F.one / x) ** (-k)
            if _is_scalar(x, F):
                return x ** k if k else F.one
            return x ** k
        raise AssertionError(op)

    return ev(node)


def parse_scalar(text: str, F=QP):
    """Parse a scalar of the coefficient field (``q`` = ``p^2``)."""
    node = parse_ast(text, getattr(F, "names", ()))
    if letters(node):
        raise ParseError("generators are not allowed in a scalar", node.col)
    return evaluate(node, F)


def parse_expression(text: str, alg=None, B=None, E=None, F=None):
    """Parse an element of O(SL_q(2)) or of B_c (canonical normal form)."""
    if F is None:
        F = (alg.F if alg is not None else (E.F if E is not None else (B.F if B is not None else QP)))
    node = parse_ast(text, getattr(F, "names", ()))
    return evaluate(node, F, alg, B, E)


def render_value(x) -> str:
    """Render a scalar, NCPoly or BElem in the same grammar."""
    from .ncpoly import render_scalar
    if isinstance(x, QHalf) or not hasattr(x, "terms"):
        return render_scalar(x)
    return str(x)
