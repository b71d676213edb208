"""Text form of elements.

Grammar: rationals, generator names (``dname`` for one-forms), ``+ - * ^``,
parentheses, ``/`` by a nonzero scalar or by a unit (scalar times product of
invertibles), and ``i`` for the imaginary unit in Gaussian signatures.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .algebra import Element, Signature, inverse_unit
from .errors import NotInvertibleError, ParseError
from .scalars import I, format_scalar

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


def _tokenize(text: str) -> list:
    out = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        num, name, op = m.groups()
        if num is not None:
            out.append(("num", num))
        elif name is not None:
            out.append(("name", name))
        else:
            if op not in "+-*/^()":
                raise ParseError(f"unexpected character {op!r} in {text!r}")
            out.append(("op", op))
        pos = m.end()
    out.append(("end", ""))
    return out


class _Parser:
    def __init__(self, sig: Signature, text: str) -> None:
        self.sig = sig
        self.text = text
        self.toks = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.toks[self.pos]

    def take(self):
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def expect(self, op: str) -> None:
        t = self.take()
        if t != ("op", op):
            raise ParseError(f"expected {op!r} in {self.text!r}")

    def parse(self) -> Element:
        if self.peek()[0] == "end":
            raise ParseError("empty expression")
        e = self.sum()
        if self.peek()[0] != "end":
            raise ParseError(f"trailing input in {self.text!r}")
        return e

    def sum(self) -> Element:
        e = self.product()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.product()
            e = e + rhs if op == "+" else e - rhs
        return e

    def product(self) -> Element:
        e = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            rhs = self.unary()
            if op == "*":
                e = e * rhs
            else:
                e = self._divide(e, rhs)
        return e

    def _divide(self, e: Element, rhs: Element) -> Element:
        if rhs.is_constant():
            c = rhs.constant_value()
            if not c:
                raise ParseError(f"division by zero in {self.text!r}")
            return e * (1 / c)
        try:
            return e * inverse_unit(rhs)
        except NotInvertibleError:
            raise ParseError(f"cannot divide by {rhs} (not a product of invertibles)") from None

    def unary(self) -> Element:
        t = self.peek()
        if t == ("op", "-"):
            self.take()
            return -self.unary()
        if t == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Element:
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            t = self.take()
            if t[0] != "num":
                raise ParseError(f"exponent must be a non-negative integer in {self.text!r}")
            return base ** int(t[1])
        return base

    def atom(self) -> Element:
        kind, val = self.take()
        if kind == "num":
            return self.sig.const(Fraction(int(val)))
        if kind == "name":
            if val in self.sig.index:
                return self.sig.gen(val)
            if val == "i":
                if not self.sig.gaussian:
                    raise ParseError("the imaginary unit needs the Gaussian field")
                return self.sig.const(I)
            raise ParseError(f"unknown generator {val!r}")
        if (kind, val) == ("op", "("):
            e = self.sum()
            self.expect(")")
            return e
        raise ParseError(f"unexpected token {val!r} in {self.text!r}")


def parse_expression(sig: Signature, text: str) -> Element:
    if not isinstance(text, str):
        raise ParseError(f"expected an expression string, got {type(text).__name__}")
    return _Parser(sig, text).parse()


# ----------------------------------------------------------------- printing


def _mono_key(sig: Signature, m) -> tuple:
    v = [0] * len(sig.gens)
    for i, e in m:
        v[i] = e
    return tuple(v)


def _format_monomial(sig: Signature, m) -> str:
    parts = []
    for i, e in m:
        name = sig.gens[i].name
        parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts)


def format_terms(sig: Signature, terms: dict) -> str:
    if not terms:
        return "0"
    out = []
    for m in sorted(terms, key=lambda m: _mono_key(sig, m), reverse=True):
        c = terms[m]
        neg = False
        if not hasattr(c, "im") and c < 0:
            neg, c = True, -c
        mono = _format_monomial(sig, m)
        cs = format_scalar(c)
        if not mono:
            body = cs
        elif c == 1:
            body = mono
        else:
            body = f"{cs}*{mono}"
        if body.startswith("-"):
            neg, body = not neg, body[1:]
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


def format_element(e: Element) -> str:
    num = format_terms(e.sig, e.terms)
    if not any(e.den):
        return num
    factors = []
    for j, a in enumerate(e.den):
        if a:
            q = format_terms(e.sig, e.sig.inv_terms[j])
            if len(e.sig.inv_terms[j]) > 1 or (a > 1 and "*" in q):
                q = f"({q})"
            factors.append(q + (f"^{a}" if a > 1 else ""))
    if len(e.terms) > 1 or " " in num:
        num = f"({num})"
    den = "*".join(factors)
    if len(factors) > 1:
        den = f"({den})"
    return f"{num}/{den}"
