"""
Rational functions acting on the projective line P^1(F_q).

Covers the reduced representation, evaluation at points (including
infinity), brute-force permutation tests, the Mobius group and its action
from both sides, the fractional-jump bijection, and the text format used on
the command line:

    ratfunc := poly ["/" poly]
    poly    := ["-"] term (("+" | "-") term)*
    term    := factor ("*" factor)*
    factor  := atom ["^" uint]
    atom    := "x" | "w" | uint | "(" poly ")"
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

from cubic_prf_lib.error_handler import FieldError, NotPermutationError, ParseError, ValidationError
from cubic_prf_lib.gf import ExtCtx, FieldCtx, FieldElem
from cubic_prf_lib.polyring import Poly, derivative, format_poly, gcd_monic

logger = logging.getLogger(__name__)


# =============================================================================
# Points
# =============================================================================


@dataclass(frozen=True)
class ProjPoint:
    """A point of P^1: a field element, or infinity when ``value`` is None."""

    value: Optional[FieldElem] = None

    @classmethod
    def infinity(cls) -> ProjPoint:
        return cls(None)

    @property
    def is_infinity(self) -> bool:
        return self.value is None

    def code(self, q: int) -> int:
        """Element code, or q for infinity."""
        return q if self.value is None else self.value.value

    def __str__(self) -> str:
        return "inf" if self.value is None else str(self.value)


def points(ctx: FieldCtx) -> list[ProjPoint]:
    """The q + 1 points: field elements in enumeration order, then infinity."""
    return [ProjPoint(a) for a in ctx.elements()] + [ProjPoint.infinity()]


# =============================================================================
# Rational functions
# =============================================================================


@dataclass(frozen=True)
class RatFunc:
    """num/den with gcd 1 and den monic. Build with :func:`ratfunc_new`."""

    num: Poly
    den: Poly

    @property
    def ctx(self) -> FieldCtx:
        return self.num.ctx

    @property
    def degree(self) -> int:
        return max(self.num.deg, self.den.deg, 0)

    def is_polynomial(self) -> bool:
        return self.den.deg == 0

    def __call__(self, point: ProjPoint) -> ProjPoint:
        return eval_point(self, point)

    def __str__(self) -> str:
        return format_ratfunc(self)

    def __repr__(self) -> str:
        return f"RatFunc({self.ctx.spec}, {self})"


def ratfunc_new(f: Poly, g: Poly) -> RatFunc:
    """Reduce f/g: divide out the gcd and make the denominator monic."""
    if g.is_zero():
        raise ValidationError(
            "rational function with zero denominator", operation="ratfunc_new",
            details={"num": str(f)},
        )
    if f.is_zero():
        return RatFunc(f, Poly.const(g.ctx, 1))
    common = gcd_monic(f, g)
    if common.deg > 0:
        f, g = f // common, g // common
    inv = g.lc().inverse()
    return RatFunc(f * inv, g * inv)


def from_poly(f: Poly) -> RatFunc:
    return RatFunc(f, Poly.const(f.ctx, 1))


def eval_point(phi: RatFunc, point: ProjPoint) -> ProjPoint:
    num, den = phi.num, phi.den
    if point.value is not None:
        d = den(point.value)
        if not d:
            return ProjPoint.infinity()
        return ProjPoint(num(point.value) / d)
    if num.deg > den.deg:
        return ProjPoint.infinity()
    if num.deg < den.deg:
        return ProjPoint(phi.ctx.zero)
    return ProjPoint(num.lc() / den.lc())


def image_codes(phi: RatFunc) -> list[int]:
    """Codes of phi(P) for P = 0, 1, ..., q-1, inf (infinity coded as q)."""
    q = phi.ctx.q
    return [eval_point(phi, p).code(q) for p in points(phi.ctx)]


def is_permutation_bruteforce(phi: RatFunc) -> bool:
    return len(set(image_codes(phi))) == phi.ctx.q + 1


def is_separable(phi: RatFunc) -> bool:
    """num' den - num den' is nonzero."""
    wronskian = derivative(phi.num) * phi.den - phi.num * derivative(phi.den)
    return not wronskian.is_zero()


def shift_by_x(phi: RatFunc, lam: FieldElem) -> RatFunc:
    """phi + lam*x, fully reduced."""
    ctx = phi.ctx
    return ratfunc_new(phi.num + Poly(ctx, [0, lam]) * phi.den, phi.den)


def lift_ratfunc(phi: RatFunc, ext: ExtCtx) -> RatFunc:
    """The same function with coefficients embedded in ``ext``."""
    if phi.ctx is not ext.base:
        raise FieldError(f"{phi.ctx.spec} is not the base of {ext!r}", operation="lift")
    num = phi.num.map_coeffs(ext.embed, ext.field)
    den = phi.den.map_coeffs(ext.embed, ext.field)
    return RatFunc(num, den)


# =============================================================================
# Mobius transformations
# =============================================================================


@dataclass(frozen=True)
class Mobius:
    """
    x -> (a x + b)/(c x + d), normalized so the first nonzero of (a, c) is 1.

    Use :meth:`new` rather than the raw constructor.
    """

    a: FieldElem
    b: FieldElem
    c: FieldElem
    d: FieldElem

    @classmethod
    def new(cls, a, b, c, d, ctx: Optional[FieldCtx] = None) -> Mobius:
        ctx = ctx or next(v.ctx for v in (a, b, c, d) if isinstance(v, FieldElem))
        a, b, c, d = ctx(a), ctx(b), ctx(c), ctx(d)
        if not (a * d - b * c):
            raise FieldError(
                f"singular Mobius matrix [{a}, {b}; {c}, {d}]", operation="mobius",
            )
        scale = (a if a else c).inverse()
        return cls(a * scale, b * scale, c * scale, d * scale)

    @classmethod
    def identity(cls, ctx: FieldCtx) -> Mobius:
        return cls.new(1, 0, 0, 1, ctx)

    @classmethod
    def translation(cls, ctx: FieldCtx, shift) -> Mobius:
        return cls.new(1, shift, 0, 1, ctx)

    @classmethod
    def scaling(cls, ctx: FieldCtx, factor) -> Mobius:
        return cls.new(factor, 0, 0, 1, ctx)

    @classmethod
    def inversion(cls, ctx: FieldCtx) -> Mobius:
        return cls.new(0, 1, 1, 0, ctx)

    @property
    def ctx(self) -> FieldCtx:
        return self.a.ctx

    def compose(self, other: Mobius) -> Mobius:
        """self o other (apply ``other`` first)."""
        a, b, c, d = self.a, self.b, self.c, self.d
        e, f, g, h = other.a, other.b, other.c, other.d
        return Mobius.new(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h, self.ctx)

    def inverse(self) -> Mobius:
        return Mobius.new(self.d, -self.b, -self.c, self.a, self.ctx)

    def apply(self, point: ProjPoint) -> ProjPoint:
        if point.value is None:
            if not self.c:
                return ProjPoint.infinity()
            return ProjPoint(self.a / self.c)
        den = self.c * point.value + self.d
        if not den:
            return ProjPoint.infinity()
        return ProjPoint((self.a * point.value + self.b) / den)

    def as_ratfunc(self) -> RatFunc:
        ctx = self.ctx
        return ratfunc_new(Poly(ctx, [self.b, self.a]), Poly(ctx, [self.d, self.c]))

    def is_identity(self) -> bool:
        return self == Mobius.identity(self.ctx)

    def codes(self) -> tuple[int, int, int, int]:
        return self.a.value, self.b.value, self.c.value, self.d.value

    def __str__(self) -> str:
        return format_ratfunc(self.as_ratfunc())


def mobius_ops(m: Mobius, n: Mobius) -> Mobius:
    return m.compose(n)


def mobius_apply(m: Mobius, point: ProjPoint) -> ProjPoint:
    return m.apply(point)


def mobius_inverse(m: Mobius) -> Mobius:
    return m.inverse()


def compose_mobius(phi: RatFunc, m: Mobius, side: str) -> RatFunc:
    """m o phi for side="left", phi o m for side="right"; the result is reduced."""
    if m.ctx is not phi.ctx:
        raise FieldError("Mobius map and function live over different fields", operation="compose_mobius")
    f, g = phi.num, phi.den
    if side == "left":
        return ratfunc_new(f * m.a + g * m.b, f * m.c + g * m.d)
    if side != "right":
        raise ValidationError(f"side must be 'left' or 'right', got {side!r}", operation="compose_mobius")

    ctx = phi.ctx
    n = phi.degree
    top = Poly(ctx, [m.b, m.a])
    bottom = Poly(ctx, [m.d, m.c])
    top_pows = [Poly.const(ctx, 1)]
    bottom_pows = [Poly.const(ctx, 1)]
    for _ in range(n):
        top_pows.append(top_pows[-1] * top)
        bottom_pows.append(bottom_pows[-1] * bottom)

    def homogenize(h: Poly) -> Poly:
        acc = Poly(ctx)
        for i in range(n + 1):
            if h[i]:
                acc = acc + top_pows[i] * bottom_pows[n - i] * h[i]
        return acc

    return ratfunc_new(homogenize(f), homogenize(g))


def conjugate(phi: RatFunc, left: Mobius, right: Mobius) -> RatFunc:
    """left o phi o right."""
    return compose_mobius(compose_mobius(phi, right, "right"), left, "left")


def fractional_jump(phi: RatFunc) -> list[FieldElem]:
    """
    Bijection of F_q obtained by sending the pole of phi to phi(inf).

    Entry i of the result is the image of the element with code i. When
    phi fixes infinity the result is the plain restriction of phi.
    """
    if not is_permutation_bruteforce(phi):
        raise NotPermutationError(
            f"{phi} does not permute P^1(F_{phi.ctx.q})", operation="fractional_jump",
        )
    at_infinity = eval_point(phi, ProjPoint.infinity())
    table = []
    for a in phi.ctx.elements():
        image = eval_point(phi, ProjPoint(a))
        table.append(at_infinity.value if image.is_infinity else image.value)
    return table  # type: ignore[return-value]


# =============================================================================
# Text form
# =============================================================================


class Token:
    NUMBER = "number"
    X = "x"
    W = "w"
    OP = "op"
    LPAREN = "("
    RPAREN = ")"
    EOF = "eof"

    __slots__ = ("kind", "text", "position")

    def __init__(self, kind: str, text: str, position: int):
        self.kind = kind
        self.text = text
        self.position = position

    def __repr__(self) -> str:
        return f"({self.kind}, {self.text!r}@{self.position})"


def tokenize(text: str) -> list[Token]:
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            start = i
            while i < len(text) and text[i].isdigit():
                i += 1
            tokens.append(Token(Token.NUMBER, text[start:i], start))
        elif ch in "xX":
            tokens.append(Token(Token.X, ch, i))
            i += 1
        elif ch in "wW":
            tokens.append(Token(Token.W, ch, i))
            i += 1
        elif ch in "+-*/^":
            tokens.append(Token(Token.OP, ch, i))
            i += 1
        elif ch == "(":
            tokens.append(Token(Token.LPAREN, ch, i))
            i += 1
        elif ch == ")":
            tokens.append(Token(Token.RPAREN, ch, i))
            i += 1
        else:
            raise ParseError(f"unexpected character {ch!r}", text=text, position=i, operation="parse")
    tokens.append(Token(Token.EOF, "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, ctx: FieldCtx):
        self.text = text
        self.ctx = ctx
        self.tokens = tokenize(text)
        self.pos = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def error(self, message: str, token: Optional[Token] = None) -> ParseError:
        token = token or self.current
        return ParseError(message, text=self.text, position=token.position, operation="parse")

    def accept(self, kind: str, text: Optional[str] = None) -> Optional[Token]:
        tok = self.current
        if tok.kind == kind and (text is None or tok.text == text):
            self.pos += 1
            return tok
        return None

    def expect(self, kind: str, what: str) -> Token:
        tok = self.accept(kind)
        if tok is None:
            raise self.error(f"expected {what}")
        return tok

    def ratfunc(self) -> RatFunc:
        num = self.poly()
        den = Poly.const(self.ctx, 1)
        slash = self.accept(Token.OP, "/")
        if slash is not None:
            den = self.poly()
            if den.is_zero():
                raise self.error("denominator is zero", slash)
        if self.current.kind != Token.EOF:
            raise self.error(f"unexpected {self.current.text!r}")
        return ratfunc_new(num, den)

    def poly(self) -> Poly:
        negate = self.accept(Token.OP, "-") is not None
        acc = self.term()
        if negate:
            acc = -acc
        while True:
            if self.accept(Token.OP, "+"):
                acc = acc + self.term()
            elif self.accept(Token.OP, "-"):
                acc = acc - self.term()
            else:
                return acc

    def term(self) -> Poly:
        acc = self.factor()
        while self.accept(Token.OP, "*"):
            acc = acc * self.factor()
        return acc

    def factor(self) -> Poly:
        base = self.atom()
        if self.accept(Token.OP, "^"):
            exponent = self.expect(Token.NUMBER, "an exponent")
            return base ** int(exponent.text)
        return base

    def atom(self) -> Poly:
        tok = self.current
        if self.accept(Token.X):
            return Poly.x(self.ctx)
        if self.accept(Token.W):
            if self.ctx.k == 1:
                raise self.error(f"'w' is not an element of the prime field F_{self.ctx.p}", tok)
            return Poly.const(self.ctx, self.ctx.gen)
        if self.accept(Token.NUMBER):
            return Poly.const(self.ctx, int(tok.text))
        if self.accept(Token.LPAREN):
            inner = self.poly()
            self.expect(Token.RPAREN, "')'")
            return inner
        raise self.error("expected x, w, a number or '('" if tok.kind != Token.EOF else "unexpected end of input")


def parse_ratfunc(text: str, ctx: FieldCtx) -> RatFunc:
    """Parse a function such as ``"(x^3+x)/(2*x^2+1)"``; integers reduce mod p."""
    return _Parser(text, ctx).ratfunc()


def _operand(f: Poly) -> str:
    text = format_poly(f)
    # a lone term binds tighter than '/'; a constant such as w+1 does not
    if sum(1 for c in f.coeffs if c) == 1 and ("+" not in text or text.startswith("(")):
        return text
    return f"({text})"


def format_ratfunc(phi: RatFunc) -> str:
    if phi.den == 1:
        return format_poly(phi.num)
    return f"{_operand(phi.num)}/{_operand(phi.den)}"
