"""Tiny expression language for phase-space observables.

Grammar (EBNF):

    expr   := ('+'|'-')? term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := base ('^' number)?
    base   := number | ident | func '(' expr (',' expr)* ')' | '(' expr ')'
    ident  in {r, theta, x, y, curve}
    func   in {sin, cos, exp, abs, sqrt, min2, max2}

min2/max2 take two arguments; the unary functions take one (arity is checked
at parse time).  Exponents are numeric literals.  Trees evaluate over numpy
arrays and pretty-print back to parseable source.
"""

import math
from dataclasses import dataclass

import numpy as np

VARIABLES = ("r", "theta", "x", "y", "curve")
FUNCTIONS = {"sin": 1, "cos": 1, "exp": 1, "abs": 1, "sqrt": 1, "min2": 2, "max2": 2}


class ParseError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class EvalError(RuntimeError):
    """Evaluation produced a non-finite value (division by zero, sqrt of a
    negative number, overflow)."""


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int


def _tokenize(src: str) -> list[Token]:
    toks = []
    i = 0
    n = len(src)
    while i < n:
        c = src[i]
        if c.isspace():
            i += 1
            continue
        if c.isdigit() or (c == "." and i + 1 < n and src[i + 1].isdigit()):
            j = i
            while j < n and (src[j].isdigit() or src[j] == "."):
                j += 1
            if j < n and src[j] in "eE":
                k = j + 1
                if k < n and src[k] in "+-":
                    k += 1
                if k < n and src[k].isdigit():
                    j = k
                    while j < n and src[j].isdigit():
                        j += 1
            try:
                float(src[i:j])
            except ValueError:
                raise ParseError(f"malformed number {src[i:j]!r}", i) from None
            toks.append(Token("num", src[i:j], i))
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (src[j].isalnum() or src[j] == "_"):
                j += 1
            toks.append(Token("name", src[i:j], i))
            i = j
            continue
        if c in "+-*/^(),":
            toks.append(Token(c, c, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {c!r}", i)
    toks.append(Token("end", "", n))
    return toks


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.toks = _tokenize(src)
        self.i = 0

    def peek(self) -> Token:
        return self.toks[self.i]

    def take(self) -> Token:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(f"expected {kind!r}, found {tok.text or 'end of input'!r}", tok.pos)
        return self.take()

    def parse(self):
        tree = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            raise ParseError(f"unexpected trailing input {tok.text!r}", tok.pos)
        return tree

    def expr(self):
        tok = self.peek()
        neg = False
        if tok.kind in "+-":
            self.take()
            neg = tok.kind == "-"
        node = self.term()
        if neg:
            # unary minus normalizes to (0 - term) so trees round-trip exactly
            node = ("bin", "-", ("num", 0.0), node)
        while self.peek().kind in "+-":
            op = self.take().kind
            rhs = self.term()
            node = ("bin", op, node, rhs)
        return node

    def term(self):
        node = self.factor()
        while self.peek().kind in "*/":
            op = self.take().kind
            rhs = self.factor()
            node = ("bin", op, node, rhs)
        return node

    def factor(self):
        node = self.base()
        if self.peek().kind == "^":
            self.take()
            sign = 1.0
            if self.peek().kind == "-":
                self.take()
                sign = -1.0
            tok = self.expect("num")
            node = ("pow", node, sign * float(tok.text))
        return node

    def base(self):
        tok = self.take()
        if tok.kind == "num":
            return ("num", float(tok.text))
        if tok.kind == "(":
            node = self.expr()
            self.expect(")")
            return node
        if tok.kind == "name":
            if tok.text in FUNCTIONS:
                arity = FUNCTIONS[tok.text]
                self.expect("(")
                args = [self.expr()]
                while self.peek().kind == ",":
                    self.take()
                    args.append(self.expr())
                self.expect(")")
                if len(args) != arity:
                    raise ParseError(
                        f"{tok.text} takes {arity} argument(s), got {len(args)}", tok.pos
                    )
                return ("call", tok.text, tuple(args))
            if tok.text in VARIABLES:
                return ("var", tok.text)
            raise ParseError(f"unknown identifier {tok.text!r}", tok.pos)
        raise ParseError(f"expected a value, found {tok.text or 'end of input'!r}", tok.pos)


def parse_expression(src: str):
    """Source text to expression tree; raises ParseError with the offset."""
    return _Parser(src).parse()


_FUNC_IMPL = {
    "sin": np.sin,
    "cos": np.cos,
    "exp": np.exp,
    "abs": np.abs,
    "sqrt": np.sqrt,
    "min2": np.minimum,
    "max2": np.maximum,
}


def eval_tree(tree, cols: dict):
    kind = tree[0]
    if kind == "num":
        return tree[1]
    if kind == "var":
        name = tree[1]
        if name not in cols:
            raise EvalError(f"variable {name!r} not available in this context")
        return cols[name]
    if kind == "neg":
        return -eval_tree(tree[1], cols)
    if kind == "pow":
        base = eval_tree(tree[1], cols)
        with np.errstate(all="ignore"):
            return np.power(base, tree[2])
    if kind == "bin":
        op, lhs, rhs = tree[1], eval_tree(tree[2], cols), eval_tree(tree[3], cols)
        with np.errstate(all="ignore"):
            if op == "+":
                return lhs + rhs
            if op == "-":
                return lhs - rhs
            if op == "*":
                return lhs * rhs
            return lhs / rhs
    if kind == "call":
        args = [eval_tree(a, cols) for a in tree[2]]
        with np.errstate(all="ignore"):
            return _FUNC_IMPL[tree[1]](*args)
    raise AssertionError(f"bad node {tree!r}")


def _num_repr(v: float) -> str:
    if v == math.floor(v) and abs(v) < 1e16:
        return str(int(v))
    return repr(v)


def pretty(tree) -> str:
    """Parseable source for a tree; parse(pretty(t)) rebuilds t."""
    kind = tree[0]
    if kind == "num":
        return _num_repr(tree[1])
    if kind == "var":
        return tree[1]
    if kind == "neg":
        return f"-({pretty(tree[1])})"
    if kind == "pow":
        exponent = _num_repr(abs(tree[2]))
        sign = "-" if tree[2] < 0 else ""
        return f"({pretty(tree[1])})^{sign}{exponent}"
    if kind == "bin":
        return f"({pretty(tree[2])} {tree[1]} {pretty(tree[3])})"
    if kind == "call":
        return f"{tree[1]}({', '.join(pretty(a) for a in tree[2])})"
    raise AssertionError(f"bad node {tree!r}")
