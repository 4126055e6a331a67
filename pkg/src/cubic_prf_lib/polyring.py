"""
Univariate polynomials over a FieldCtx.

The same class serves as F_q[x] (numerators and denominators of rational
functions) and as F_q[t] (pencil coefficients, discriminants, resolvents);
only the printed variable name differs.
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Iterable
from typing import Optional, Union

from cubic_prf_lib.error_handler import (
    ContextMismatchError,
    FieldError,
    ScopeError,
)
from cubic_prf_lib.gf import FieldCtx, FieldElem

logger = logging.getLogger(__name__)

Scalar = Union[FieldElem, int]


class Poly:
    """Immutable polynomial with ascending coefficients; the zero polynomial has degree -1."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FieldCtx, coeffs: Iterable[Scalar] = ()):
        cs = [ctx(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.ctx = ctx
        self.coeffs: tuple[FieldElem, ...] = tuple(cs)

    # ------------------------------------------------------------------
    # constructors
    # ------------------------------------------------------------------
    @classmethod
    def from_codes(cls, ctx: FieldCtx, codes: Iterable[int]) -> Poly:
        """Coefficients given as element codes (ascending)."""
        return cls(ctx, [ctx.from_code(c) for c in codes])

    @classmethod
    def x(cls, ctx: FieldCtx) -> Poly:
        return cls(ctx, [0, 1])

    @classmethod
    def const(cls, ctx: FieldCtx, c: Scalar) -> Poly:
        return cls(ctx, [c])

    @classmethod
    def monomial(cls, ctx: FieldCtx, degree: int, c: Scalar = 1) -> Poly:
        return cls(ctx, [0] * degree + [c])

    # ------------------------------------------------------------------
    # basic accessors
    # ------------------------------------------------------------------
    @property
    def deg(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lc(self) -> FieldElem:
        if not self.coeffs:
            return self.ctx.zero
        return self.coeffs[-1]

    def __getitem__(self, i: int) -> FieldElem:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.ctx.zero

    def codes(self) -> tuple[int, ...]:
        return tuple(c.value for c in self.coeffs)

    def padded(self, length: int) -> tuple[int, ...]:
        """Codes padded with zeros to ``length`` entries."""
        codes = self.codes()
        return codes + (0,) * (length - len(codes))

    def sort_key(self) -> tuple[int, tuple[int, ...]]:
        return self.deg, tuple(reversed(self.codes()))

    def monic(self) -> Poly:
        if self.is_zero():
            return self
        inv = self.lc().inverse()
        return Poly(self.ctx, [c * inv for c in self.coeffs])

    def is_monic(self) -> bool:
        return not self.is_zero() and self.lc() == 1

    def map_coeffs(self, fn: Callable[[FieldElem], FieldElem], ctx: FieldCtx) -> Poly:
        """Apply ``fn`` to every coefficient, landing in ``ctx`` (e.g. lifting to an extension)."""
        return Poly(ctx, [fn(c) for c in self.coeffs])

    # ------------------------------------------------------------------
    # arithmetic
    # ------------------------------------------------------------------
    def _lift(self, other: object) -> Optional[Poly]:
        if isinstance(other, Poly):
            if other.ctx is not self.ctx:
                raise ContextMismatchError(
                    f"cannot combine polynomials over {self.ctx.spec} and {other.ctx.spec}",
                    operation="poly_arith",
                )
            return other
        if isinstance(other, FieldElem) or (isinstance(other, int) and not isinstance(other, bool)):
            return Poly(self.ctx, [other])
        return None

    def __add__(self, other: object) -> Poly:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        n = max(len(self.coeffs), len(o.coeffs))
        return Poly(self.ctx, [self[i] + o[i] for i in range(n)])

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly(self.ctx, [-c for c in self.coeffs])

    def __sub__(self, other: object) -> Poly:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: object) -> Poly:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other: object) -> Poly:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if self.is_zero() or o.is_zero():
            return Poly(self.ctx)
        out = [self.ctx.zero] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(o.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(self.ctx, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> Poly:
        if n < 0:
            raise FieldError("negative polynomial power", operation="poly_arith")
        result = Poly(self.ctx, [1])
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other: object) -> tuple[Poly, Poly]:
        g = self._lift(other)
        if g is None:
            return NotImplemented
        if g.is_zero():
            raise FieldError("division by the zero polynomial", operation="poly_arith")
        rem = list(self.coeffs)
        dg = g.deg
        inv = g.lc().inverse()
        quot = [self.ctx.zero] * max(len(rem) - dg, 0)
        for shift in range(len(rem) - 1 - dg, -1, -1):
            c = rem[shift + dg] * inv
            if not c:
                continue
            quot[shift] = c
            for i, gc in enumerate(g.coeffs):
                rem[shift + i] = rem[shift + i] - c * gc
        return Poly(self.ctx, quot), Poly(self.ctx, rem[:dg] if dg > 0 else [])

    def __floordiv__(self, other: object) -> Poly:
        return divmod(self, other)[0]

    def __mod__(self, other: object) -> Poly:
        return divmod(self, other)[1]

    def __call__(self, x: Union[Scalar, Poly]) -> Union[FieldElem, Poly]:
        """Evaluate at a field element, or compose with a polynomial."""
        if isinstance(x, Poly):
            return self.compose(x)
        point = self.ctx(x)
        acc = self.ctx.zero
        for c in reversed(self.coeffs):
            acc = acc * point + c
        return acc

    def compose(self, inner: Poly) -> Poly:
        acc = Poly(inner.ctx)
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        return acc

    def scale_var(self, k: Scalar) -> Poly:
        """p(k*x)."""
        k = self.ctx(k)
        out, power = [], self.ctx.one
        for c in self.coeffs:
            out.append(c * power)
            power = power * k
        return Poly(self.ctx, out)

    # ------------------------------------------------------------------
    # value semantics
    # ------------------------------------------------------------------
    def __eq__(self, other: object) -> bool:
        if isinstance(other, Poly):
            return other.ctx is self.ctx and other.coeffs == self.coeffs
        if isinstance(other, (FieldElem, int)) and not isinstance(other, bool):
            return self == Poly(self.ctx, [other])
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.ctx.p, self.ctx.modulus, self.codes()))

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"Poly({self.ctx.spec}, {self})"


def format_poly(f: Poly, var: str = "x") -> str:
    """Human form, descending powers; multi-term coefficients are parenthesized."""
    if f.is_zero():
        return "0"
    terms = []
    for i in range(f.deg, -1, -1):
        c = f[i]
        if not c:
            continue
        text = str(c)
        if i == 0:
            terms.append(text)
            continue
        mono = var if i == 1 else f"{var}^{i}"
        if c == 1:
            terms.append(mono)
        elif "+" in text:
            terms.append(f"({text})*{mono}")
        else:
            terms.append(f"{text}*{mono}")
    return "+".join(terms)


def poly_arith(f: Poly, g: Union[Poly, Scalar, None], op: str) -> Union[Poly, tuple[Poly, Poly], FieldElem]:
    """Named-operation front end: add, sub, mul, divmod, scalar_mul, eval, compose."""
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op in ("mul", "scalar_mul"):
        return f * g
    if op == "divmod":
        return divmod(f, g)
    if op == "eval":
        return f(g)  # type: ignore[arg-type]
    if op == "compose":
        return f.compose(g)  # type: ignore[arg-type]
    raise FieldError(f"unknown polynomial operation {op!r}", operation="poly_arith")


# =============================================================================
# gcd, derivative, resultant
# =============================================================================


def gcd_monic(f: Poly, g: Poly) -> Poly:
    """Monic gcd by Euclid; gcd(f, 0) = monic(f)."""
    if f.is_zero() and g.is_zero():
        raise FieldError("gcd of two zero polynomials", operation="gcd_monic")
    a, b = f, g
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def derivative(f: Poly) -> Poly:
    return Poly(f.ctx, [c * i for i, c in enumerate(f.coeffs)][1:])


def _res(a: Poly, b: Poly) -> FieldElem:
    # Res(a, b) = lc(a)^deg b * prod over roots of a of b(root)
    if b.deg == 0:
        return b.lc() ** a.deg
    if a.deg == 0:
        return a.lc() ** b.deg
    r = b % a
    if r.is_zero():
        return a.ctx.zero
    sign = -1 if (a.deg * r.deg) % 2 else 1
    return a.lc() ** (b.deg - r.deg) * sign * _res(r, a)


def resultant(f: Poly, g: Poly) -> FieldElem:
    """
    Resultant with the convention Res(x - a, x - b) = b - a, i.e.
    lc(g)^deg f times the product of f over the roots of g.
    """
    if f.is_zero() or g.is_zero():
        raise FieldError("resultant of a zero polynomial", operation="resultant")
    if f.ctx is not g.ctx:
        raise ContextMismatchError("resultant across fields", operation="resultant")
    return _res(g, f)


def cubic_discriminant(c3, c2, c1, c0):
    """
    18 c3 c2 c1 c0 - 4 c2^3 c0 + c2^2 c1^2 - 4 c3 c1^3 - 27 c3^2 c0^2.

    Works for field elements and for polynomials in t alike.
    """
    if not c3:
        raise FieldError("cubic discriminant needs a nonzero leading coefficient", operation="cubic_discriminant")
    return (
        18 * c3 * c2 * c1 * c0
        - 4 * c2 * c2 * c2 * c0
        + c2 * c2 * c1 * c1
        - 4 * c3 * c1 * c1 * c1
        - 27 * c3 * c3 * c0 * c0
    )


# =============================================================================
# square decomposition and root finding
# =============================================================================


def const_square_decompose(delta: Poly) -> Optional[tuple[FieldElem, Poly]]:
    """
    Write delta = u * r^2 with r monic, or return None.

    Coefficients of r are matched from the top down.
    """
    if delta.ctx.p == 2:
        raise ScopeError("square decomposition needs odd characteristic", operation="const_square_decompose")
    if delta.is_zero():
        raise FieldError("square decomposition of the zero polynomial", operation="const_square_decompose")
    if delta.deg % 2:
        return None
    ctx = delta.ctx
    u = delta.lc()
    target = delta.monic()
    m = delta.deg // 2
    half = ctx(2).inverse()
    r = [ctx.zero] * (m + 1)
    r[m] = ctx.one
    for i in range(1, m + 1):
        top = 2 * m - i
        acc = target[top]
        for j in range(m - i + 1, m):
            partner = top - j
            if m - i < partner <= m:
                acc = acc - r[j] * r[partner]
        r[m - i] = acc * half
    root = Poly(ctx, r)
    if root * root * u != delta:
        return None
    return u, root


def quad_roots(beta: FieldElem, gamma: FieldElem, ctx: Optional[FieldCtx] = None) -> tuple[FieldElem, ...]:
    """Roots of x^2 + beta x + gamma, sorted in enumeration order."""
    ctx = ctx or beta.ctx
    beta, gamma = ctx(beta), ctx(gamma)
    if ctx.p != 2:
        root = (beta * beta - 4 * gamma).sqrt()
        if root is None:
            return ()
        half = ctx(2).inverse()
        return tuple(sorted({(-beta + root) * half, (-beta - root) * half}, key=int))
    if not beta:
        root = gamma.sqrt()
        assert root is not None
        return (root,)
    delta = gamma / (beta * beta)
    s = ctx.artin_schreier_code(delta.value)
    if s is None:
        return ()
    first = ctx.from_code(s) * beta
    return tuple(sorted({first, first + beta}, key=int))


def bounded_poly_root(B: Poly, C: Poly, deg_bound: int, ctx: Optional[FieldCtx] = None) -> tuple[Poly, ...]:
    """
    All S with deg S <= deg_bound and S^2 + B S + C = 0 (characteristic 2).

    Coefficients of S are fixed from the top: above deg B by a square root,
    at deg B by a quadratic (branching on its roots) and below deg B by a
    linear equation. Every candidate is checked by full expansion.
    """
    ctx = ctx or B.ctx
    if ctx.p != 2:
        raise ScopeError("bounded_poly_root is for characteristic 2", operation="bounded_poly_root")
    if B.ctx is not ctx or C.ctx is not ctx:
        raise ContextMismatchError("B and C must live over the solving field", operation="bounded_poly_root")

    d = deg_bound
    e = B.deg
    branches: list[dict[int, FieldElem]] = [{}]

    def known(s: dict[int, FieldElem], i: int) -> FieldElem:
        return s.get(i, ctx.zero) if i <= d else ctx.zero

    for j in range(d, -1, -1):
        grown: list[dict[int, FieldElem]] = []
        for s in branches:
            if B.is_zero() or j > e:
                acc = C[2 * j]
                for b in range(j + 1, d + 1):
                    acc = acc + B[2 * j - b] * known(s, b)
                root = acc.sqrt()
                assert root is not None
                grown.append({**s, j: root})
            elif j == e:
                k = C[2 * e]
                for b in range(e + 1, d + 1):
                    k = k + B[2 * e - b] * known(s, b)
                for root in quad_roots(B[e], k, ctx):
                    grown.append({**s, j: root})
            else:
                acc = C[j + e]
                if (j + e) % 2 == 0:
                    half = known(s, (j + e) // 2)
                    acc = acc + half * half
                for b in range(j + 1, d + 1):
                    acc = acc + B[j + e - b] * known(s, b)
                grown.append({**s, j: acc / B[e]})
        branches = grown

    found = set()
    for s in branches:
        S = Poly(ctx, [s[i] for i in range(d + 1)])
        if (S * S + B * S + C).is_zero():
            found.add(S)
    return tuple(sorted(found, key=Poly.sort_key))


def is_irreducible_small(f: Poly) -> bool:
    """Irreducibility for degree <= 4 via root search and quadratic trial division."""
    if f.deg > 4:
        raise ScopeError(f"degree {f.deg} exceeds the small irreducibility test", operation="is_irreducible_small")
    if f.deg <= 0:
        return False
    if f.deg == 1:
        return True
    ctx = f.ctx
    if any(not f(a) for a in ctx.elements()):
        return False
    if f.deg <= 3:
        return True
    for quad in irreducible_quadratics(ctx):
        if (f % quad).is_zero():
            return False
    return True


def irreducible_quadratics(ctx: FieldCtx) -> list[Poly]:
    """Monic irreducible quadratics over ctx in enumeration order of (x-coefficient, constant)."""
    out = []
    for b in ctx.elements():
        for c in ctx.elements():
            quad = Poly(ctx, [c, b, 1])
            if all(quad(a) for a in ctx.elements()):
                out.append(quad)
    return out
