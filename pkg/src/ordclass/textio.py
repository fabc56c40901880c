"""Concrete syntax: parsing ordinal and space expressions, printing normal forms.

Ordinal grammar (``^`` right-associative, binding tighter than ``*``, which
binds tighter than ``+``)::

    ordinal := sum
    sum     := prod ("+" prod)*
    prod    := pow ("*" pow)*
    pow     := atom ("^" pow)?
    atom    := NAT | "w" | "w_" NAT | "w_[" ordinal "]" | "(" ordinal ")"

Spaces: ``C(ord)``, ``C(ord, l_P)`` and ``K(C(ord, l_P), C(ord, l_Q))`` where
``P`` and ``Q`` are written ``2``, ``3/2`` or ``1.5``.

The parser also reads the Unicode forms the printer can emit (``ω``, ``ω₁``, ``·``).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .classifier import (
    AxiomContext,
    CanonicalPair,
    KSpace,
    ScalarC,
    Verdict,
    VectorC,
)
from .ordinals import (
    AlephExpr,
    Add,
    Atom,
    Mul,
    Nat,
    ONE,
    Omega,
    Ordinal,
    Pow,
    cardinality,
    divide,
    finite_value,
    initial_ordinal,
    is_finite,
    is_zero,
    normalize,
)

_SUBSCRIPTS = "₀₁₂₃₄₅₆₇₈₉"
_SUB_TO_DIGIT = {c: str(i) for i, c in enumerate(_SUBSCRIPTS)}


@dataclass(frozen=True)
class SourceSpan:
    """Byte offsets into the UTF-8 encoded input."""

    start: int
    end: int


class ParseError(ValueError):
    """Malformed input; carries the offending span and the tokens that would fit."""

    def __init__(self, message: str, span: SourceSpan, expected=frozenset()):
        self.span = span
        self.expected = frozenset(expected)
        detail = f"syntax error at offset {span.start}: {message}"
        if self.expected:
            detail += f" (expected one of: {', '.join(sorted(self.expected))})"
        super().__init__(detail)


class SpaceDomainError(ValueError):
    """Well-formed input naming an unsupported space (p <= 1, C(0), ...)."""

    def __init__(self, message: str, span: Optional[SourceSpan] = None):
        self.span = span
        super().__init__(message)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    start: int
    end: int
    value: object = None


_PUNCT = {"+": "+", "*": "*", "·": "*", "^": "^", "(": "(", ")": ")", "]": "]", ",": ",", "/": "/", ".": "."}


def _tokenize(text: str):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        start = i
        if ch.isdigit() and ch.isascii():
            while i < n and text[i].isdigit() and text[i].isascii():
                i += 1
            tokens.append(Token("NAT", text[start:i], start, i, int(text[start:i])))
            continue
        if ch in "wω":
            i += 1
            if i < n and text[i] in _SUB_TO_DIGIT:
                while i < n and text[i] in _SUB_TO_DIGIT:
                    i += 1
                digits = "".join(_SUB_TO_DIGIT[c] for c in text[start + 1 : i])
                tokens.append(Token("w_NAT", text[start:i], start, i, int(digits)))
                continue
            if i < n and text[i] == "_":
                i += 1
                if i < n and text[i] == "[":
                    tokens.append(Token("w_[", text[start : i + 1], start, i + 1))
                    i += 1
                    continue
                j = i
                while j < n and text[j].isdigit() and text[j].isascii():
                    j += 1
                if j == i:
                    tokens.append(Token("INVALID", text[start:i], start, i))
                    i = n
                    break
                tokens.append(Token("w_NAT", text[start:j], start, j, int(text[i:j])))
                i = j
                continue
            tokens.append(Token("w", text[start:i], start, i))
            continue
        if ch == "l" and i + 1 < n and text[i + 1] == "_":
            tokens.append(Token("l_", "l_", start, i + 2))
            i += 2
            continue
        if ch in "CK":
            tokens.append(Token(ch, ch, start, i + 1))
            i += 1
            continue
        if ch in _PUNCT:
            tokens.append(Token(_PUNCT[ch], ch, start, i + 1))
            i += 1
            continue
        tokens.append(Token("INVALID", ch, start, i + 1))
        break
    tokens.append(Token("EOF", "", n, n))
    return tokens


_ATOM_START = frozenset({"NAT", "w", "w_NAT", "w_[", "("})


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        t = self.tokens[self.pos]
        if t.kind != "EOF":
            self.pos += 1
        return t

    def span(self, start: int, end: int) -> SourceSpan:
        # tokens hold character positions; spans report bytes
        return SourceSpan(len(self.text[:start].encode()), len(self.text[:end].encode()))

    def fail(self, expected):
        t = self.tok
        found = "end of input" if t.kind == "EOF" else repr(t.text)
        raise ParseError(f"unexpected {found}", self.span(t.start, t.end), expected)

    def expect(self, kind: str) -> Token:
        if self.tok.kind != kind:
            self.fail({kind})
        return self.advance()

    def finish(self):
        if self.tok.kind != "EOF":
            self.fail({"EOF"})

    # ordinal := sum
    def ordinal(self):
        node = self.prod()
        while self.tok.kind == "+":
            self.advance()
            node = Add(node, self.prod())
        return node

    def prod(self):
        node = self.pow()
        while self.tok.kind == "*":
            self.advance()
            node = Mul(node, self.pow())
        return node

    def pow(self):
        base = self.atom()
        if self.tok.kind == "^":
            self.advance()
            return Pow(base, self.pow())
        return base

    def atom(self):
        t = self.tok
        if t.kind == "NAT":
            self.advance()
            return Nat(t.value)
        if t.kind == "w":
            self.advance()
            return Omega()
        if t.kind == "w_NAT":
            self.advance()
            return AlephExpr(Nat(t.value))
        if t.kind == "w_[":
            self.advance()
            node = self.ordinal()
            self.expect("]")
            return AlephExpr(node)
        if t.kind == "(":
            self.advance()
            node = self.ordinal()
            self.expect(")")
            return node
        self.fail(_ATOM_START)

    # spaces
    def space(self):
        t = self.tok
        if t.kind == "C":
            return self.c_space(allow_scalar=True)
        if t.kind == "K":
            self.advance()
            self.expect("(")
            lam, p = self.c_space(allow_scalar=False)
            self.expect(",")
            xi, q = self.c_space(allow_scalar=False)
            self.expect(")")
            return KSpace(lam, p, xi, q)
        self.fail({"C", "K"})

    def c_space(self, allow_scalar: bool):
        self.expect("C")
        self.expect("(")
        start = self.tok.start
        xi = normalize(self.ordinal())
        if is_zero(xi):
            raise SpaceDomainError("C(0) is not a space here: the ordinal must be at least 1",
                                   self.span(start, self.tokens[self.pos - 1].end))
        if allow_scalar and self.tok.kind == ")":
            self.advance()
            return ScalarC(xi)
        self.expect(",")
        p = self.exponent()
        self.expect(")")
        if allow_scalar:
            return VectorC(xi, p)
        return xi, p

    def exponent(self) -> Fraction:
        self.expect("l_")
        first = self.expect("NAT")
        start, value = first.start, Fraction(first.value)
        if self.tok.kind == "/":
            self.advance()
            den = self.expect("NAT")
            if den.value == 0:
                raise SpaceDomainError("zero denominator", self.span(den.start, den.end))
            value = Fraction(first.value, den.value)
        elif self.tok.kind == ".":
            self.advance()
            frac = self.expect("NAT")
            value = Fraction(f"{first.value}.{frac.text}")
        end = self.tokens[self.pos - 1].end
        if value <= 1:
            raise SpaceDomainError(f"l_p needs p > 1, got p = {value}", self.span(start, end))
        return value


def parse_ordinal(text: str):
    """Parse ``text`` into an :data:`~ordclass.ordinals.OrdinalExpr` tree."""
    parser = _Parser(text)
    node = parser.ordinal()
    parser.finish()
    return node


def parse_space(text: str):
    parser = _Parser(text)
    node = parser.space()
    parser.finish()
    return node


# -- printing --------------------------------------------------------------------


class _Style:
    def __init__(self, unicode: bool):
        self.unicode = unicode
        self.w = "ω" if unicode else "w"
        self.times = "·" if unicode else "*"

    def atom(self, index: Ordinal) -> str:
        if is_finite(index):
            n = str(finite_value(index))
            if self.unicode:
                return "ω" + "".join(_SUBSCRIPTS[int(d)] for d in n)
            return f"w_{n}"
        return f"{self.w}_[{render(index, self)}]"


def _needs_parens(text: str) -> bool:
    depth = 0
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif depth == 0 and ch in "+*·":
            return True
    return False


def _wrap(text: str) -> str:
    return f"({text})" if _needs_parens(text) else text


def _render_power(exp: Ordinal, style: _Style) -> str:
    """Render ``w^exp`` for ``exp >= 1``."""
    if is_finite(exp):
        k = finite_value(exp)
        return style.w if k == 1 else f"{style.w}^{k}"
    if is_zero(cardinality(exp).index):
        return f"{style.w}^{_wrap(render(exp, style))}"
    # w^exp = A^beta * w^rho with A the initial ordinal of exp and exp = A*beta + rho
    atom = initial_ordinal(exp)
    beta, rho = divide(exp, atom)
    head = style.atom(atom.index)
    if beta != ONE:
        head = f"{head}^{_wrap(render(beta, style))}"
    if is_zero(rho):
        return head
    return f"{head}{style.times}{_render_power(rho, style)}"


def render(x: Ordinal, style: _Style) -> str:
    if isinstance(x, Atom):
        return style.atom(x.index)
    if not x.terms:
        return "0"
    parts = []
    for exp, coef in x.terms:
        if is_zero(exp):
            parts.append(str(coef))
            continue
        text = _render_power(exp, style)
        if coef != 1:
            text = f"{text}{style.times}{coef}"
        parts.append(text)
    return " + ".join(parts)


def print_normal(x: Ordinal, unicode: bool = False) -> str:
    """Canonical text of a normal form, e.g. ``w^2*4 + 1`` or ``w_1*w``."""
    return render(x, _Style(unicode))


def print_fraction(p: Fraction) -> str:
    return str(p.numerator) if p.denominator == 1 else f"{p.numerator}/{p.denominator}"


def print_space(s, unicode: bool = False) -> str:
    if isinstance(s, ScalarC):
        return f"C({print_normal(s.xi, unicode)})"
    if isinstance(s, VectorC):
        return f"C({print_normal(s.xi, unicode)}, l_{print_fraction(s.p)})"
    return (
        f"K(C({print_normal(s.lam, unicode)}, l_{print_fraction(s.p)}), "
        f"C({print_normal(s.xi, unicode)}, l_{print_fraction(s.q)}))"
    )


# -- machine output --------------------------------------------------------------


def _pair_json(pair: Optional[CanonicalPair]):
    if pair is None:
        return None
    return {"lambda0": print_normal(pair.lambda0), "psi": print_normal(pair.psi)}


def verdict_to_json(verdict: Verdict, ctx: AxiomContext) -> dict:
    left, right = verdict.canonical if verdict.canonical else (None, None)
    return {
        "verdict": verdict.outcome.value,
        "canonical_left": _pair_json(left),
        "canonical_right": _pair_json(right),
        "trace": [{"case": s.case, "citation": s.citation} for s in verdict.trace],
        "assumptions": sorted(str(a) for a in verdict.assumptions),
        "psi_mode": ctx.psi_mode,
    }


VERDICT_SCHEMA = {
    "type": "object",
    "required": ["verdict", "canonical_left", "canonical_right", "trace", "assumptions", "psi_mode"],
    "additionalProperties": False,
    "properties": {
        "verdict": {"enum": ["Isomorphic", "NotIsomorphic", "Undecided", "OutOfScope"]},
        "canonical_left": {"$ref": "#/definitions/pair"},
        "canonical_right": {"$ref": "#/definitions/pair"},
        "trace": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["case", "citation"],
                "additionalProperties": False,
                "properties": {"case": {"type": "string"}, "citation": {"type": "string"}},
            },
        },
        "assumptions": {"type": "array", "items": {"type": "string"}},
        "psi_mode": {"enum": ["repaired", "literal"]},
    },
    "definitions": {
        "pair": {
            "oneOf": [
                {"type": "null"},
                {
                    "type": "object",
                    "required": ["lambda0", "psi"],
                    "additionalProperties": False,
                    "properties": {"lambda0": {"type": "string"}, "psi": {"type": "string"}},
                },
            ]
        }
    },
}

