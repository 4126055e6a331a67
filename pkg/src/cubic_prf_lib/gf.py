"""
Finite fields F_q = F_p[z]/(m) and relative extensions F_{q^d} / F_q.

Elements are coded as integers: the element c_0 + c_1 z + ... + c_{k-1} z^{k-1}
has code sum(c_i * p**i). The enumeration order of a field is the order of
these codes, which is lexicographic on (c_{k-1}, ..., c_0) and starts with 0.

Multiplication goes through exp/log tables built from the first primitive
element. Addition is XOR in characteristic 2, plain modular addition in prime
fields and a digit table otherwise.

Usage:
    from cubic_prf_lib.gf import field_create, parse_field_spec

    f7 = field_create(7, 1)
    three = f7(3)
    assert (three * ~three) == 1
"""

from __future__ import annotations

import logging
from collections.abc import Iterator, Sequence
from functools import cached_property, lru_cache
from typing import Optional, Union

import numpy as np
from sympy import factorint, isprime

from cubic_prf_lib.error_handler import (
    ContextMismatchError,
    FieldError,
    GuardExceededError,
    InternalConsistencyError,
    ScopeError,
)
from cubic_prf_lib.validators import validate_field_spec

logger = logging.getLogger(__name__)

TABLE_LIMIT = 1 << 16
LOOKUP_LIMIT = 1024
EXHAUSTIVE_SQRT_BELOW = 64

IntPoly = list[int]


# =============================================================================
# Integer-list polynomials over F_p (ascending coefficients)
# =============================================================================


def _trim(a: IntPoly) -> IntPoly:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmul(a: IntPoly, b: IntPoly, p: int) -> IntPoly:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _pmod(a: IntPoly, m: IntPoly, p: int) -> IntPoly:
    """Remainder of a modulo the monic polynomial m."""
    a = _trim(list(a))
    dm = len(m) - 1
    while len(a) - 1 >= dm and a:
        shift = len(a) - 1 - dm
        c = a[-1]
        for i, mc in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mc) % p
        _trim(a)
    return a


def _psub(a: IntPoly, b: IntPoly, p: int) -> IntPoly:
    out = [0] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] = x
    for i, y in enumerate(b):
        out[i] = (out[i] - y) % p
    return _trim(out)


def _pgcd(a: IntPoly, b: IntPoly, p: int) -> IntPoly:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        inv = pow(b[-1], p - 2, p)
        b = [(c * inv) % p for c in b]
        a, b = b, _pmod(a, b, p)
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [(c * inv) % p for c in a]
    return a


def _frobenius_power(m: IntPoly, p: int, times: int) -> IntPoly:
    """x^(p^times) mod m."""
    h: IntPoly = _pmod([0, 1], m, p)
    for _ in range(times):
        result: IntPoly = [1]
        base, e = h, p
        while e:
            if e & 1:
                result = _pmod(_pmul(result, base, p), m, p)
            base = _pmod(_pmul(base, base, p), m, p)
            e >>= 1
        h = result
    return h


def is_irreducible_mod_p(m: Sequence[int], p: int) -> bool:
    """Rabin's test for a monic polynomial over F_p given by ascending coefficients."""
    m = _trim([c % p for c in m])
    k = len(m) - 1
    if k < 1 or m[-1] != 1:
        return False
    if k == 1:
        return True
    x = [0, 1]
    if _psub(_frobenius_power(m, p, k), x, p) != []:
        return False
    for r in factorint(k):
        h = _psub(_frobenius_power(m, p, k // r), x, p)
        if len(_pgcd(m, h, p)) != 1:
            return False
    return True


def least_irreducible(p: int, k: int) -> tuple[int, ...]:
    """The first monic irreducible of degree k over F_p in enumeration order of its lower coefficients."""
    for code in range(p**k):
        lower = [(code // p**i) % p for i in range(k)]
        candidate = lower + [1]
        if is_irreducible_mod_p(candidate, p):
            return tuple(candidate)
    raise InternalConsistencyError(f"no irreducible polynomial of degree {k} over F_{p}")


# =============================================================================
# Field context
# =============================================================================


class FieldCtx:
    """
    The field F_q = F_p[z]/(modulus).

    Instances are built through :func:`field_create`, which caches them, so
    two requests for the same field return the same object.
    """

    def __init__(self, p: int, k: int, modulus: tuple[int, ...], default_modulus: bool):
        self.p = p
        self.k = k
        self.q = p**k
        self.modulus = modulus
        self.default_modulus = default_modulus
        if self.q > TABLE_LIMIT:
            raise GuardExceededError(
                f"field of size {self.q} exceeds the table limit {TABLE_LIMIT}",
                operation="field_create",
            )
        self._powers = [p**i for i in range(k)]
        self._build_tables()
        logger.debug("built %s (modulus %s, primitive element %s)", self.spec, modulus, self.primitive)

    # ------------------------------------------------------------------
    # construction helpers
    # ------------------------------------------------------------------
    def digits(self, code: int) -> tuple[int, ...]:
        return tuple((code // pw) % self.p for pw in self._powers)

    def _code(self, digits: Sequence[int]) -> int:
        return sum((d % self.p) * pw for d, pw in zip(digits, self._powers))

    def _mul_slow(self, a: int, b: int) -> int:
        prod = _pmul(_trim(list(self.digits(a))), _trim(list(self.digits(b))), self.p)
        return self._code(_pmod(prod, list(self.modulus), self.p))

    def _pow_slow(self, a: int, n: int) -> int:
        result, base = 1, a
        while n:
            if n & 1:
                result = self._mul_slow(result, base)
            base = self._mul_slow(base, base)
            n >>= 1
        return result

    def _build_tables(self) -> None:
        q, p = self.q, self.p
        order = q - 1
        prime_factors = list(factorint(order)) if order > 1 else []
        for g in range(1, q):
            if all(self._pow_slow(g, order // r) != 1 for r in prime_factors):
                break
        self.primitive = g

        exp = [0] * (2 * order)
        log = [0] * q
        x = 1
        for i in range(order):
            exp[i] = x
            log[x] = i
            x = self._mul_slow(x, g)
        for i in range(order, 2 * order):
            exp[i] = exp[i - order]
        self._exp = exp
        self._log = log

        if p == 2:
            self._neg = list(range(q))
        else:
            self._neg = [self._code([-d for d in self.digits(a)]) for a in range(q)]
        self._add_rows: Optional[list[list[int]]] = None
        if self.k > 1 and p != 2:
            self._add_rows = [
                [self._code([x + y for x, y in zip(self.digits(a), self.digits(b))]) for b in range(q)]
                for a in range(q)
            ] if q <= LOOKUP_LIMIT else None

    # ------------------------------------------------------------------
    # integer-code arithmetic
    # ------------------------------------------------------------------
    def add_codes(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.k == 1:
            return (a + b) % self.p
        if self._add_rows is not None:
            return self._add_rows[a][b]
        return self._code([x + y for x, y in zip(self.digits(a), self.digits(b))])

    def neg_code(self, a: int) -> int:
        return self._neg[a]

    def mul_codes(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv_code(self, a: int) -> int:
        if a == 0:
            raise FieldError("division by zero", operation="arith", details={"field": self.spec})
        return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)] if self.q > 2 else 1

    def pow_code(self, a: int, n: int) -> int:
        if n < 0:
            a, n = self.inv_code(a), -n
        if n == 0:
            return 1
        if a == 0:
            return 0
        return self._exp[(self._log[a] * n) % (self.q - 1)]

    # ------------------------------------------------------------------
    # public surface
    # ------------------------------------------------------------------
    def __call__(self, value: Union[int, FieldElem]) -> FieldElem:
        """Coerce an integer into the prime subfield (or check an element's field)."""
        if isinstance(value, FieldElem):
            if value.ctx is not self:
                raise ContextMismatchError(
                    f"element of {value.ctx.spec} used in {self.spec}", operation="arith"
                )
            return value
        return FieldElem(self, int(value) % self.p)

    def from_code(self, code: int) -> FieldElem:
        if not 0 <= code < self.q:
            raise FieldError(f"code {code} outside [0, {self.q})", operation="arith")
        return FieldElem(self, code)

    def from_coeffs(self, coeffs: Sequence[int]) -> FieldElem:
        """Element from ascending coordinates w.r.t. 1, z, ..., z^{k-1}."""
        if len(coeffs) > self.k:
            raise FieldError(f"{len(coeffs)} coordinates for a degree-{self.k} field", operation="arith")
        return FieldElem(self, self._code(coeffs))

    @property
    def zero(self) -> FieldElem:
        return FieldElem(self, 0)

    @property
    def one(self) -> FieldElem:
        return FieldElem(self, 1)

    @property
    def gen(self) -> FieldElem:
        """The class of z (spelled ``w`` in expressions)."""
        if self.k == 1:
            raise FieldError("a prime field has no extension generator", operation="parse")
        return FieldElem(self, self.p)

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def spec(self) -> str:
        if self.default_modulus:
            return f"{self.p}^{self.k}"
        return f"{self.p}^{self.k}:[{','.join(map(str, self.modulus))}]"

    def elements(self) -> Iterator[FieldElem]:
        """All q elements in enumeration order, starting with 0."""
        for code in range(self.q):
            yield FieldElem(self, code)

    def nonzero(self) -> Iterator[FieldElem]:
        for code in range(1, self.q):
            yield FieldElem(self, code)

    def format_code(self, code: int) -> str:
        if self.k == 1:
            return str(code)
        terms = []
        for i, c in reversed(list(enumerate(self.digits(code)))):
            if c == 0:
                continue
            mono = "" if i == 0 else ("w" if i == 1 else f"w^{i}")
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            else:
                terms.append(f"{c}*{mono}")
        return "+".join(terms) if terms else "0"

    @cached_property
    def first_nonsquare(self) -> int:
        if self.p == 2:
            raise ScopeError("every element of an even field is a square", operation="is_square")
        return next(a for a in range(1, self.q) if self._log[a] % 2 == 1)

    def is_square_code(self, a: int) -> bool:
        return a == 0 or self.p == 2 or self._log[a] % 2 == 0

    def sqrt_code(self, a: int) -> Optional[int]:
        if a == 0:
            return 0
        if self.p == 2:
            return self.pow_code(a, self.q // 2)
        if not self.is_square_code(a):
            return None
        if self.q < EXHAUSTIVE_SQRT_BELOW:
            return next(x for x in range(self.q) if self.mul_codes(x, x) == a)
        x = self._tonelli_shanks(a)
        return min(x, self.neg_code(x))

    def _tonelli_shanks(self, a: int) -> int:
        s, t = 0, self.q - 1
        while t % 2 == 0:
            s, t = s + 1, t // 2
        m = s
        c = self.pow_code(self.first_nonsquare, t)
        x = self.pow_code(a, (t + 1) // 2)
        b = self.pow_code(a, t)
        while b != 1:
            i, b2 = 0, b
            while b2 != 1:
                b2 = self.mul_codes(b2, b2)
                i += 1
            e = self.pow_code(c, 1 << (m - i - 1))
            x = self.mul_codes(x, e)
            c = self.mul_codes(e, e)
            b = self.mul_codes(b, c)
            m = i
        return x

    def abs_trace2_code(self, a: int) -> int:
        if self.p != 2:
            raise ScopeError(
                f"absolute trace to F_2 needs characteristic 2, got {self.p}",
                operation="abs_trace2",
            )
        acc, t = a, a
        for _ in range(self.k - 1):
            t = self.mul_codes(t, t)
            acc ^= t
        return acc

    @cached_property
    def _artin_schreier_matrix(self) -> np.ndarray:
        """Columns are the bit vectors of s^2 + s for the basis vectors s = 2^i."""
        n = self.k
        matrix = np.zeros((n, n), dtype=np.uint8)
        for col in range(n):
            e = 1 << col
            image = self.mul_codes(e, e) ^ e
            for row in range(n):
                matrix[row, col] = (image >> row) & 1
        return matrix

    def artin_schreier_code(self, delta: int) -> Optional[int]:
        """Some s with s^2 + s = delta (characteristic 2), or None."""
        if self.p != 2:
            raise ScopeError("s^2 + s = delta is solved only in characteristic 2", operation="quad_roots")
        rhs = np.array([(delta >> i) & 1 for i in range(self.k)], dtype=np.uint8)
        solution = _solve_mod_2(self._artin_schreier_matrix, rhs)
        if solution is None:
            return None
        return int(sum(int(bit) << i for i, bit in enumerate(solution)))

    @cached_property
    def lookup(self) -> FieldLookup:
        """numpy tables for vectorized evaluation (q <= LOOKUP_LIMIT)."""
        if self.q > LOOKUP_LIMIT:
            raise GuardExceededError(
                f"lookup tables need q <= {LOOKUP_LIMIT}, got {self.q}", operation="lookup"
            )
        return FieldLookup(self)

    def __repr__(self) -> str:
        return f"FieldCtx({self.spec})"


class FieldLookup:
    """Dense integer tables of a field: add, mul, neg and inv indexed by codes."""

    def __init__(self, ctx: FieldCtx):
        q = ctx.q
        codes = np.arange(q, dtype=np.int64)
        exp = np.array(ctx._exp, dtype=np.int64)
        log = np.array(ctx._log, dtype=np.int64)

        mul = exp[log[:, None] + log[None, :]]
        mul[0, :] = 0
        mul[:, 0] = 0
        self.mul = mul

        if ctx.p == 2:
            self.add = np.bitwise_xor.outer(codes, codes)
        else:
            powers = np.array(ctx._powers, dtype=np.int64)
            digits = (codes[:, None] // powers[None, :]) % ctx.p
            summed = (digits[:, None, :] + digits[None, :, :]) % ctx.p
            self.add = summed @ powers
        self.neg = np.array(ctx._neg, dtype=np.int64)
        inv = np.zeros(q, dtype=np.int64)
        inv[1:] = [ctx.inv_code(a) for a in range(1, q)]
        self.inv = inv


def _solve_mod_2(matrix: np.ndarray, rhs: np.ndarray) -> Optional[np.ndarray]:
    """
    Solve ``matrix @ x = rhs`` over GF(2) by Gaussian elimination.

    Free variables are set to zero. Returns None when the system is inconsistent.
    """
    a = matrix.copy() % 2
    b = rhs.copy() % 2
    rows, cols = a.shape
    pivots: list[int] = []
    row = 0
    for col in range(cols):
        if row == rows:
            break
        hits = np.nonzero(a[row:, col])[0]
        if hits.size == 0:
            continue
        pivot = row + int(hits[0])
        if pivot != row:
            a[[pivot, row]] = a[[row, pivot]]
            b[[pivot, row]] = b[[row, pivot]]
        for i in range(rows):
            if i != row and a[i, col]:
                a[i] ^= a[row]
                b[i] ^= b[row]
        pivots.append(col)
        row += 1

    if np.any(b[row:]):
        return None
    x = np.zeros(cols, dtype=np.uint8)
    for r, col in enumerate(pivots):
        x[col] = b[r]
    return x


# =============================================================================
# Field elements
# =============================================================================


class FieldElem:
    """An element of a :class:`FieldCtx`, stored as its integer code."""

    __slots__ = ("ctx", "value")

    def __init__(self, ctx: FieldCtx, value: int):
        self.ctx = ctx
        self.value = value

    def _other(self, other: object) -> Optional[int]:
        if isinstance(other, FieldElem):
            if other.ctx is not self.ctx:
                raise ContextMismatchError(
                    f"cannot combine elements of {self.ctx.spec} and {other.ctx.spec}",
                    operation="arith",
                )
            return other.value
        if isinstance(other, int) and not isinstance(other, bool):
            return other % self.ctx.p
        return None

    def __add__(self, other: object) -> FieldElem:
        b = self._other(other)
        if b is None:
            return NotImplemented
        return FieldElem(self.ctx, self.ctx.add_codes(self.value, b))

    __radd__ = __add__

    def __neg__(self) -> FieldElem:
        return FieldElem(self.ctx, self.ctx.neg_code(self.value))

    def __sub__(self, other: object) -> FieldElem:
        b = self._other(other)
        if b is None:
            return NotImplemented
        return FieldElem(self.ctx, self.ctx.add_codes(self.value, self.ctx.neg_code(b)))

    def __rsub__(self, other: object) -> FieldElem:
        b = self._other(other)
        if b is None:
            return NotImplemented
        return FieldElem(self.ctx, self.ctx.add_codes(b, self.ctx.neg_code(self.value)))

    def __mul__(self, other: object) -> FieldElem:
        b = self._other(other)
        if b is None:
            return NotImplemented
        return FieldElem(self.ctx, self.ctx.mul_codes(self.value, b))

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> FieldElem:
        b = self._other(other)
        if b is None:
            return NotImplemented
        return FieldElem(self.ctx, self.ctx.mul_codes(self.value, self.ctx.inv_code(b)))

    def __rtruediv__(self, other: object) -> FieldElem:
        b = self._other(other)
        if b is None:
            return NotImplemented
        return FieldElem(self.ctx, self.ctx.mul_codes(b, self.ctx.inv_code(self.value)))

    def __pow__(self, n: int) -> FieldElem:
        return FieldElem(self.ctx, self.ctx.pow_code(self.value, n))

    def __invert__(self) -> FieldElem:
        return self.inverse()

    def inverse(self) -> FieldElem:
        return FieldElem(self.ctx, self.ctx.inv_code(self.value))

    def __eq__(self, other: object) -> bool:
        if isinstance(other, FieldElem):
            return other.ctx is self.ctx and other.value == self.value
        if isinstance(other, int) and not isinstance(other, bool):
            return self.value == other % self.ctx.p
        return NotImplemented

    def __lt__(self, other: FieldElem) -> bool:
        return self.value < self._other(other)  # type: ignore[operator]

    def __hash__(self) -> int:
        return hash((self.ctx.p, self.ctx.modulus, self.value))

    def __bool__(self) -> bool:
        return self.value != 0

    def __int__(self) -> int:
        return self.value

    @property
    def coeffs(self) -> tuple[int, ...]:
        """Coordinates w.r.t. 1, z, ..., z^{k-1}."""
        return self.ctx.digits(self.value)

    def is_zero(self) -> bool:
        return self.value == 0

    def is_square(self) -> bool:
        return self.ctx.is_square_code(self.value)

    def sqrt(self) -> Optional[FieldElem]:
        root = self.ctx.sqrt_code(self.value)
        return None if root is None else FieldElem(self.ctx, root)

    def abs_trace2(self) -> int:
        return self.ctx.abs_trace2_code(self.value)

    def __str__(self) -> str:
        return self.ctx.format_code(self.value)

    def __repr__(self) -> str:
        return f"FieldElem({self.ctx.spec}, {self})"


# =============================================================================
# Construction
# =============================================================================


@lru_cache(maxsize=None)
def _cached_field(p: int, k: int, modulus: tuple[int, ...], default_modulus: bool) -> FieldCtx:
    return FieldCtx(p, k, modulus, default_modulus)


def field_create(p: int, k: int = 1, modulus: Optional[Sequence[int]] = None) -> FieldCtx:
    """
    Build (or fetch) the field F_{p^k}.

    Args:
        p: characteristic, must be prime
        k: extension degree >= 1
        modulus: optional ascending coefficients of a monic irreducible of degree k

    Raises:
        FieldError: p composite, k < 1, or modulus reducible / wrong degree
    """
    if not isinstance(p, int) or not isprime(p):
        raise FieldError(f"{p} is not prime", operation="field_create", details={"p": p})
    if k < 1:
        raise FieldError(f"extension degree must be >= 1, got {k}", operation="field_create")

    default = least_irreducible(p, k)
    if modulus is None:
        mod = default
    else:
        mod = tuple(int(c) % p for c in modulus)
        if len(mod) != k + 1 or mod[-1] != 1:
            raise FieldError(
                f"modulus must be monic of degree {k}, got {list(modulus)}", operation="field_create"
            )
        if not is_irreducible_mod_p(mod, p):
            raise FieldError(f"modulus {list(modulus)} is reducible over F_{p}", operation="field_create")
    return _cached_field(p, k, mod, mod == default)


def parse_field_spec(text: str) -> FieldCtx:
    """Field from ``"p^k"``, ``"p^k:[c0,...,1]"``, ``"7"`` or ``"9"``."""
    p, k, modulus = validate_field_spec(text)
    return field_create(p, k, modulus)


def arith(a: FieldElem, b: Optional[FieldElem], op: str, n: int = 0) -> FieldElem:
    """Named-operation front end: add, sub, mul, div, neg, inv, pow."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "neg":
        return -a
    if op == "inv":
        return a.inverse()
    if op == "pow":
        return a**n
    raise FieldError(f"unknown operation {op!r}", operation="arith")


def is_square(a: FieldElem) -> bool:
    return a.is_square()


def sqrt(a: FieldElem) -> Optional[FieldElem]:
    """Square root, the smaller of the two in enumeration order; None for non-squares."""
    return a.sqrt()


def abs_trace2(a: FieldElem) -> int:
    return a.abs_trace2()


def enumerate_field(ctx: FieldCtx) -> Iterator[FieldElem]:
    return ctx.elements()


# =============================================================================
# Relative extensions
# =============================================================================


class ExtCtx:
    """
    F_{q^d} as an extension of a base field F_q.

    The extension is realised as the absolute field F_{p^{kd}} with its default
    modulus; the base embeds through the first root (in enumeration order) of
    the base modulus.
    """

    def __init__(self, base: FieldCtx, d: int):
        if d < 2:
            raise FieldError(f"relative degree must be >= 2, got {d}", operation="ext_create")
        self.base = base
        self.d = d
        self.field = field_create(base.p, base.k * d)
        self.q = base.q

        top = self.field
        root = next(
            y for y in range(top.q)
            if _eval_int_poly(top, base.modulus, y) == 0
        )
        table = [0] * base.q
        for code in range(base.q):
            acc = 0
            for c in reversed(base.digits(code)):
                acc = top.add_codes(top.mul_codes(acc, root), c)
            table[code] = acc
        self._embed = table
        self._to_base = {v: i for i, v in enumerate(table)}
        self.modulus = self._relative_modulus()
        logger.debug("built extension of degree %d over %s inside %s", d, base.spec, top.spec)

    def _relative_modulus(self) -> tuple[FieldElem, ...]:
        top = self.field
        y = top.from_code(top.p) if top.k > 1 else top.zero
        poly = [top.one]
        conj = y
        for _ in range(self.d):
            # poly *= (X - conj)
            shifted = [top.zero] + poly
            for i, c in enumerate(poly):
                shifted[i] = shifted[i] - c * conj
            poly = shifted
            conj = conj**self.q
        return tuple(self.to_base(c) for c in poly)

    def embed(self, a: FieldElem) -> FieldElem:
        if a.ctx is not self.base:
            raise ContextMismatchError(f"element of {a.ctx.spec} is not in {self.base.spec}", operation="embed")
        return FieldElem(self.field, self._embed[a.value])

    def in_base(self, u: FieldElem) -> bool:
        return u.value in self._to_base

    def to_base(self, u: FieldElem) -> FieldElem:
        if u.ctx is not self.field:
            raise ContextMismatchError(f"element of {u.ctx.spec} is not in {self.field.spec}", operation="to_base")
        try:
            return FieldElem(self.base, self._to_base[u.value])
        except KeyError:
            raise InternalConsistencyError(
                f"{u} does not lie in the embedded {self.base.spec}", operation="to_base"
            ) from None

    def frobenius(self, u: FieldElem) -> FieldElem:
        return u**self.q

    def conjugates(self, u: FieldElem) -> list[FieldElem]:
        out = [u]
        for _ in range(self.d - 1):
            out.append(self.frobenius(out[-1]))
        return out

    def trace(self, u: FieldElem) -> FieldElem:
        total = self.field.zero
        for c in self.conjugates(u):
            total = total + c
        return self.to_base(total)

    def norm(self, u: FieldElem) -> FieldElem:
        total = self.field.one
        for c in self.conjugates(u):
            total = total * c
        return self.to_base(total)

    @cached_property
    def _coordinate_table(self) -> dict[int, tuple[int, ...]]:
        top = self.field
        y = top.from_code(top.p) if top.k > 1 else top.zero
        basis = [y**j for j in range(self.d)]
        table: dict[int, tuple[int, ...]] = {}
        for combo in np.ndindex(*([self.base.q] * self.d)):
            acc = top.zero
            for b, coeff in zip(basis, combo):
                acc = acc + b * FieldElem(top, self._embed[coeff])
            table[acc.value] = tuple(int(c) for c in combo)
        return table

    def coordinates(self, u: FieldElem) -> tuple[FieldElem, ...]:
        """Base-field coordinates of u w.r.t. 1, y, ..., y^{d-1} (y the absolute generator)."""
        return tuple(FieldElem(self.base, c) for c in self._coordinate_table[u.value])

    def __repr__(self) -> str:
        return f"ExtCtx({self.base.spec}, d={self.d})"


def _eval_int_poly(ctx: FieldCtx, coeffs: Sequence[int], x: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = ctx.add_codes(ctx.mul_codes(acc, x), c % ctx.p)
    return acc


@lru_cache(maxsize=None)
def ext_create(base: FieldCtx, d: int) -> ExtCtx:
    """Cached relative extension of degree d over ``base``."""
    if base.q**d > TABLE_LIMIT:
        raise GuardExceededError(
            f"extension of size {base.q}^{d} exceeds the table limit {TABLE_LIMIT}",
            operation="ext_create",
        )
    return ExtCtx(base, d)


def ext_ops(ext: ExtCtx, u: FieldElem) -> tuple[FieldElem, FieldElem, FieldElem]:
    """(relative trace, relative norm, Frobenius image) of u."""
    return ext.trace(u), ext.norm(u), ext.frobenius(u)
