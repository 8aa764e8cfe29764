"""Tiny product-expression language shared by the claim-file syntaxes.

An expression is a product of factors separated by whitespace or ``*``.
A factor is a call ``name(args)``, a bare name (a definition or a
constant such as ``id``), or a parenthesised product, optionally raised to
an integer power with ``^k``.  Argument text is handed to the engine
unparsed, so each engine owns its atom vocabulary.

Two reading conventions exist for a product ``A B``:

``rtl``
    ``A B`` is the composite ``A o B``: ``B`` acts first.  This is the
    default, and agrees with ordinary matrix multiplication.
``ltr``
    ``A B`` means ``A`` acts first, i.e. the composite ``B o A``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Any

CONVENTIONS = ("rtl", "ltr")

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_INT = re.compile(r"[+-]?\d+")


class ExpressionError(ValueError):
    """Malformed expression text."""


@dataclass(frozen=True)
class Call:
    name: str
    args: str


@dataclass(frozen=True)
class Name:
    name: str


@dataclass(frozen=True)
class Power:
    base: Any
    exponent: int


@dataclass(frozen=True)
class Product:
    factors: tuple


def _skip_ws(text, i):
    while i < len(text) and text[i].isspace():
        i += 1
    return i


def _balanced(text, i):
    """Index just past the ``)`` matching the ``(`` at ``text[i]``."""
    depth = 0
    quote = None
    j = i
    while j < len(text):
        c = text[j]
        if quote:
            if c == quote:
                quote = None
        elif c in "\"'":
            quote = c
        elif c == "(":
            depth += 1
        elif c == ")":
            depth -= 1
            if depth == 0:
                return j + 1
        j += 1
    raise ExpressionError(f"unbalanced parentheses in {text!r}")


class _Parser:
    def __init__(self, text):
        self.text = text
        self.i = 0

    def product(self, closing=None):
        factors = []
        while True:
            self.i = _skip_ws(self.text, self.i)
            if self.i >= len(self.text):
                break
            c = self.text[self.i]
            if c == ")":
                if closing != ")":
                    raise ExpressionError(f"stray ')' in {self.text!r}")
                break
            if c == "*":
                if not factors:
                    raise ExpressionError(f"leading '*' in {self.text!r}")
                self.i += 1
                continue
            factors.append(self.factor())
        if not factors:
            raise ExpressionError(f"empty product in {self.text!r}")
        return factors[0] if len(factors) == 1 else Product(tuple(factors))

    def factor(self):
        node = self.atom()
        while True:
            j = _skip_ws(self.text, self.i)
            if j < len(self.text) and self.text[j] == "^":
                j = _skip_ws(self.text, j + 1)
                m = _INT.match(self.text, j)
                if not m:
                    raise ExpressionError(f"bad exponent in {self.text!r}")
                node = Power(node, int(m.group()))
                self.i = m.end()
            else:
                return node

    def atom(self):
        text = self.text
        if text[self.i] == "(":
            self.i += 1
            node = self.product(closing=")")
            if self.i >= len(text) or text[self.i] != ")":
                raise ExpressionError(f"missing ')' in {text!r}")
            self.i += 1
            return node
        m = _NAME.match(text, self.i)
        if not m:
            raise ExpressionError(f"unexpected {text[self.i]!r} in {text!r}")
        self.i = m.end()
        if self.i < len(text) and text[self.i] == "(":
            end = _balanced(text, self.i)
            args = text[self.i + 1 : end - 1]
            self.i = end
            return Call(m.group(), args)
        return Name(m.group())


def parse(text: str):
    if not isinstance(text, str) or not text.strip():
        raise ExpressionError(f"empty expression {text!r}")
    p = _Parser(text)
    node = p.product()
    if _skip_ws(text, p.i) != len(text):
        raise ExpressionError(f"trailing text in {text!r}")
    return node


def split_args(args: str, sep: str = ",") -> list[str]:
    """Split argument text at top-level separators, honouring nesting and quotes."""
    out, depth, quote, start = [], 0, None, 0
    for i, c in enumerate(args):
        if quote:
            if c == quote:
                quote = None
        elif c in "\"'":
            quote = c
        elif c == "(":
            depth += 1
        elif c == ")":
            depth -= 1
        elif c == sep and depth == 0:
            out.append(args[start:i].strip())
            start = i + 1
    tail = args[start:].strip()
    if tail or out:
        out.append(tail)
    return out


def unquote(s: str) -> str:
    s = s.strip()
    if len(s) >= 2 and s[0] == s[-1] and s[0] in "\"'":
        return s[1:-1]
    raise ExpressionError(f"expected a quoted string, got {s!r}")


class Algebra:
    """What an engine supplies to evaluate expressions.

    ``mul(f, g)`` must return the composite ``f o g`` (``g`` acts first).
    """

    def atom(self, name: str, args: str | None):
        raise NotImplementedError

    def identity(self):
        raise NotImplementedError

    def mul(self, f, g):
        raise NotImplementedError

    def inverse(self, f):
        raise NotImplementedError

    def power(self, f, k: int):
        if k == 0:
            return self.identity()
        if k < 0:
            f, k = self.inverse(f), -k
        result = None
        base = f
        while k:
            if k & 1:
                result = base if result is None else self.mul(result, base)
            k >>= 1
            if k:
                base = self.mul(base, base)
        return result


def evaluate(
    text_or_node,
    algebra: Algebra,
    convention: str = "rtl",
    defs: dict[str, str] | None = None,
):
    """Evaluate an expression to an engine element under ``convention``."""
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}")
    node = parse(text_or_node) if isinstance(text_or_node, str) else text_or_node
    defs = defs or {}
    cache: dict[str, Any] = {}
    active: set[str] = set()

    def ev(n):
        if isinstance(n, Product):
            acc = ev(n.factors[0])
            for f in n.factors[1:]:
                x = ev(f)
                acc = algebra.mul(acc, x) if convention == "rtl" else algebra.mul(x, acc)
            return acc
        if isinstance(n, Power):
            return algebra.power(ev(n.base), n.exponent)
        if isinstance(n, Call):
            return algebra.atom(n.name, n.args)
        if n.name in defs:
            if n.name not in cache:
                if n.name in active:
                    raise ExpressionError(f"recursive definition of {n.name!r}")
                active.add(n.name)
                cache[n.name] = ev(parse(defs[n.name]))
                active.discard(n.name)
            return cache[n.name]
        return algebra.atom(n.name, None)

    return ev(node)

