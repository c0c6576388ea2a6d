"""Bigraded Poincaré polynomials ``sum dim * q^maslov t^alexander``."""

from __future__ import annotations

import math
import re
from collections.abc import Mapping


class BigradedPoly(Mapping):
    """Immutable map ``(alexander, maslov) -> dimension`` with no zero entries.

    Negative entries are allowed only transiently (see :meth:`__sub__`);
    homology tables are always nonnegative.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms=()):
        acc = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for (a, m), d in items:
            key = (int(a), int(m))
            acc[key] = acc.get(key, 0) + int(d)
        self._terms = {k: v for k, v in sorted(acc.items()) if v}

    def __getitem__(self, key):
        return self._terms[key]

    def get(self, key, default=0):
        return self._terms.get(key, default)

    def __iter__(self):
        return iter(self._terms)

    def __len__(self):
        return len(self._terms)

    def __eq__(self, other):
        if isinstance(other, BigradedPoly):
            return self._terms == other._terms
        if isinstance(other, Mapping):
            return self == BigradedPoly(other)
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self._terms.items()))

    def __repr__(self):
        return f"BigradedPoly({self._terms!r})"

    def __str__(self):
        return format_poly(self)

    def __add__(self, other):
        return BigradedPoly(list(self.items()) + list(other.items()))

    def __sub__(self, other):
        return BigradedPoly(list(self.items()) + [(k, -v) for k, v in other.items()])

    def __mul__(self, other):
        out = {}
        for (a1, m1), d1 in self.items():
            for (a2, m2), d2 in other.items():
                key = (a1 + a2, m1 + m2)
                out[key] = out.get(key, 0) + d1 * d2
        return BigradedPoly(out)

    def total(self):
        return sum(self._terms.values())

    def alexander_support(self):
        return sorted({a for a, _ in self._terms})

    def restrict(self, min_alexander=None, max_alexander=None):
        return BigradedPoly(
            (k, v)
            for k, v in self.items()
            if (min_alexander is None or k[0] >= min_alexander)
            and (max_alexander is None or k[0] <= max_alexander)
        )

    def mirror(self):
        """HFK of the mirror knot: ``(a, m) -> (a, 2a - m)``."""
        return BigradedPoly(((a, 2 * a - m), d) for (a, m), d in self.items())

    def diagonals(self):
        """Set of ``m - a`` values in the support."""
        return sorted({m - a for a, m in self._terms})

    def to_json(self):
        return [{"a": a, "m": m, "dim": d} for (a, m), d in self.items()]

    @classmethod
    def from_json(cls, records):
        return cls(((r["a"], r["m"]), r["dim"]) for r in records)

    @classmethod
    def parse(cls, text):
        return parse_poly(text)


S_FACTOR = BigradedPoly({(0, 0): 1, (-1, -1): 1})
ONE = BigradedPoly({(0, 0): 1})


def s_power(k):
    """``(1 + q^-1 t^-1) ** k`` as a BigradedPoly."""
    return BigradedPoly(((-i, -i), math.comb(k, i)) for i in range(k + 1))


# ---------------------------------------------------------------- formatting


def _power(var, e):
    if e == 0:
        return ""
    if e == 1:
        return var
    if 0 <= e <= 9:
        return f"{var}^{e}"
    return f"{var}^{{{e}}}"


def _monomial(coef, m, a):
    body = _power("q", m) + _power("t", a)
    if not body:
        return str(coef)
    return body if coef == 1 else f"{coef}{body}"


def format_poly(p, grouped=True):
    """Render as in published tables, e.g. ``q^{-1}t^{-1}+3+qt``.

    With ``grouped`` several Maslov terms sharing a nonzero Alexander grading
    are collected as ``4(q^{-1}+1)t^{-1}``.
    """
    if not p:
        return "0"
    by_a = {}
    for (a, m), d in p.items():
        by_a.setdefault(a, []).append((m, d))
    parts = []
    for a in sorted(by_a):
        terms = sorted(by_a[a])
        if not grouped or a == 0 or len(terms) == 1:
            parts.extend(_monomial(d, m, a) for m, d in terms)
            continue
        common = math.gcd(*(d for _, d in terms))
        inner = "+".join(_monomial(d // common, m, 0) for m, d in terms)
        lead = "" if common == 1 else str(common)
        parts.append(f"{lead}({inner}){_power('t', a)}")
    return "+".join(parts)


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(r"\s*(?:(\d+)|([qt])|(\^)|([{}()+\-]))")


class PolyParseError(ValueError):
    pass


class _Parser:
    def __init__(self, text):
        self.tokens = []
        pos = 0
        text = text.strip()
        while pos < len(text):
            mt = _TOKEN.match(text, pos)
            if not mt or mt.end() == pos:
                raise PolyParseError(f"unexpected character at {pos} in {text!r}")
            self.tokens.append(next(g for g in mt.groups() if g is not None))
            pos = mt.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise PolyParseError(f"expected {expected!r}, got {tok!r}")
        self.i += 1
        return tok

    def exponent(self):
        if self.peek() != "^":
            return 1
        self.take("^")
        if self.peek() == "{":
            self.take("{")
            sign = -1 if self.peek() == "-" else 1
            if sign < 0:
                self.take("-")
            tok = self.take()
            if not tok.isdigit():
                raise PolyParseError(f"bad exponent {tok!r}")
            value = int(tok)
            self.take("}")
            return sign * value
        sign = -1 if self.peek() == "-" else 1
        if sign < 0:
            self.take("-")
        tok = self.take()
        if not tok.isdigit():
            raise PolyParseError(f"bad exponent {tok!r}")
        # bare exponents are single digits, as in "q^2t^2"
        if len(tok) > 1:
            self.tokens[self.i - 1 : self.i] = [tok[0], tok[1:]]
            tok = tok[0]
        return sign * int(tok)

    def coefficient(self):
        if self.peek() is not None and self.peek().isdigit():
            return int(self.take())
        return 1

    def monomial_q(self):
        """``[coef] [q^e]`` -> (coef, m)."""
        start = self.i
        coef = self.coefficient()
        m = 0
        if self.peek() == "q":
            self.take("q")
            m = self.exponent()
        if self.i == start:
            raise PolyParseError(f"empty term before {self.peek()!r}")
        return coef, m

    def term(self):
        start = self.i
        coef = self.coefficient()
        if self.peek() == "(":
            self.take("(")
            inner = [self.monomial_q()]
            while self.peek() == "+":
                self.take("+")
                inner.append(self.monomial_q())
            self.take(")")
        else:
            m = 0
            if self.peek() == "q":
                self.take("q")
                m = self.exponent()
            inner = [(1, m)]
        a = 0
        if self.peek() == "t":
            self.take("t")
            a = self.exponent()
        if self.i == start:
            raise PolyParseError(f"empty term before {self.peek()!r}")
        return [((a, m), coef * c) for c, m in inner]

    def poly(self):
        terms = self.term()
        while self.peek() == "+":
            self.take("+")
            terms.extend(self.term())
        if self.peek() is not None:
            raise PolyParseError(f"trailing input at token {self.peek()!r}")
        return BigradedPoly(terms)


def parse_poly(text):
    """Parse the table notation, including grouped forms like ``4(q^{-1}+1)t^{-1}``."""
    if text.strip() == "0":
        return BigradedPoly()
    return _Parser(text).poly()
