"""
Degree-3 permutation rational functions of P^1(F_q).

Deciding:
    * brute force over the q + 1 points;
    * odd characteristic: the discriminant of the pencil f - t g must be
      u * r(t)^2 with u a non-square;
    * characteristic 2: the quadratic resolvent of f - t g must be
      irreducible over F_q(t) and split over F_{q^2}(t);
    * inseparable input (char 3 only) is always a permutation.

Canonicalizing: every separable permutation is moved by explicit Mobius
maps onto one normal form per characteristic parity, then onto the fixed
representative for q mod 6. The witnesses (m1, m2) always satisfy
m1 o phi o m2 == representative exactly.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Optional

from cubic_prf_lib.config_manager import Guards, get_guards
from cubic_prf_lib.error_handler import (
    CrosscheckError,
    FieldError,
    GuardExceededError,
    InternalConsistencyError,
    NotPermutationError,
    ScopeError,
    ValidationError,
)
from cubic_prf_lib.gf import ExtCtx, FieldCtx, FieldElem, ext_create
from cubic_prf_lib.polyring import (
    Poly,
    bounded_poly_root,
    const_square_decompose,
    cubic_discriminant,
    quad_roots,
)
from cubic_prf_lib.projfunc import (
    Mobius,
    ProjPoint,
    RatFunc,
    compose_mobius,
    conjugate,
    eval_point,
    is_permutation_bruteforce,
    is_separable,
    lift_ratfunc,
    ratfunc_new,
    shift_by_x,
)
from cubic_prf_lib.validators import validate_choice, validate_extension_degree

logger = logging.getLogger(__name__)

MODES = ["auto", "criterion", "brute", "crosscheck"]

PERMUTATION = "Permutation"
NOT_PERMUTATION = "NotPermutation"

ODD_FRACTIONAL = "OddFractional"
CUBE = "Cube"
CHAR3_CUBE = "Char3Cube"
CHAR3_LINEARIZED = "Char3Linearized"
EVEN_FRACTIONAL = "EvenFractional"


# =============================================================================
# JSON helpers
# =============================================================================


def elem_json(a: FieldElem) -> list[int]:
    return list(a.coeffs)


def poly_json(f: Poly) -> list[list[int]]:
    return [elem_json(c) for c in f.coeffs]


def mobius_json(m: Mobius) -> list[list[int]]:
    return [elem_json(m.a), elem_json(m.b), elem_json(m.c), elem_json(m.d)]


# =============================================================================
# Types
# =============================================================================


@dataclass(frozen=True)
class PencilCubic:
    """f - t g as a monic cubic in x with coefficients in F_q[t]."""

    c2: Poly
    c1: Poly
    c0: Poly
    left: Mobius

    @property
    def c3(self) -> Poly:
        return Poly.const(self.c2.ctx, 1)


@dataclass(frozen=True)
class CanonForm:
    tag: str
    params: tuple[FieldElem, ...] = ()

    def ratfunc(self, ctx: FieldCtx) -> RatFunc:
        if self.tag in (CUBE, CHAR3_CUBE):
            return ratfunc_new(Poly.monomial(ctx, 3), Poly.const(ctx, 1))
        if self.tag == CHAR3_LINEARIZED:
            (a,) = self.params
            return ratfunc_new(Poly(ctx, [0, a, 0, 1]), Poly.const(ctx, 1))
        if self.tag == ODD_FRACTIONAL:
            a, b = self.params
            return ratfunc_new(Poly(ctx, [0, a, 0, 1]), Poly(ctx, [1, 0, b]))
        if self.tag == EVEN_FRACTIONAL:
            (b0,) = self.params
            return even_family_member(ctx, b0)
        raise ValidationError(f"unknown canonical tag {self.tag!r}", operation="canonicalize")

    def to_dict(self, ctx: FieldCtx) -> dict[str, Any]:
        return {
            "tag": self.tag,
            "params": [elem_json(p) for p in self.params],
            "representative": str(self.ratfunc(ctx)),
        }

    def __str__(self) -> str:
        if not self.params:
            return self.tag
        return f"{self.tag}({', '.join(map(str, self.params))})"


@dataclass(frozen=True)
class Decision:
    """Verdict without canonical data."""

    verdict: bool
    separable: bool
    method: str
    evidence: dict[str, Any] = field(default_factory=dict)


@dataclass
class ClassReport:
    function: RatFunc
    verdict: str
    separable: bool
    method: str
    canon: Optional[CanonForm] = None
    witnesses: Optional[tuple[Mobius, Mobius]] = None
    evidence: dict[str, Any] = field(default_factory=dict)

    @property
    def is_permutation(self) -> bool:
        return self.verdict == PERMUTATION

    def to_dict(self) -> dict[str, Any]:
        ctx = self.function.ctx
        return {
            "field": ctx.spec,
            "function": str(self.function),
            "verdict": self.verdict,
            "separable": self.separable,
            "method": self.method,
            "canon": self.canon.to_dict(ctx) if self.canon else None,
            "witnesses": (
                {"m1": mobius_json(self.witnesses[0]), "m2": mobius_json(self.witnesses[1])}
                if self.witnesses else None
            ),
            "evidence": self.evidence,
        }


# =============================================================================
# Resolvent and pencil
# =============================================================================


def quadratic_resolvent(a, b, c):
    """(ab - 3c, a^3 c + b^3 + 9c^2 - 6abc) for the monic cubic x^3 + a x^2 + b x + c."""
    return a * b - 3 * c, a * a * a * c + b * b * b + 9 * c * c - 6 * a * b * c


def _require_cubic(phi: RatFunc, operation: str) -> None:
    if phi.degree != 3:
        raise ValidationError(f"expected a degree-3 function, got degree {phi.degree}", operation=operation)


def build_pencil(phi: RatFunc) -> Optional[PencilCubic]:
    """
    Move phi so its numerator is monic of degree 3 and its denominator has
    degree <= 2, and return f - t g.

    Returns None when a denominator of degree 1 is left over: then both the
    root of the denominator and infinity map to infinity.
    """
    _require_cubic(phi, "build_pencil")
    ctx = phi.ctx
    left = Mobius.identity(ctx)
    psi = phi
    if psi.num.deg < 3:
        m = Mobius.inversion(ctx)
        psi, left = compose_mobius(psi, m, "left"), m.compose(left)
    if psi.den.deg == 3:
        lam = eval_point(psi, ProjPoint.infinity()).value
        m = Mobius.new(0, 1, 1, -lam, ctx)
        psi, left = compose_mobius(psi, m, "left"), m.compose(left)
    if psi.den.deg == 1:
        logger.debug("pencil of %s: denominator of degree 1 after normalization", phi)
        return None

    scale = psi.num.lc().inverse()
    f, g = psi.num * scale, psi.den * scale

    def coeff(i: int) -> Poly:
        return Poly(ctx, [f[i], -g[i]])

    return PencilCubic(coeff(2), coeff(1), coeff(0), left)


def _pencil_delta(pencil: PencilCubic) -> Poly:
    return cubic_discriminant(pencil.c3, pencil.c2, pencil.c1, pencil.c0)


def pencil_discriminant(phi: RatFunc) -> Poly:
    """Discriminant of f - t g in F_q[t] (odd characteristic)."""
    if phi.ctx.p == 2:
        raise ScopeError("the pencil discriminant criterion needs odd characteristic", operation="pencil_discriminant")
    pencil = build_pencil(phi)
    if pencil is None:
        raise NotPermutationError(f"{phi} has two poles counted with infinity", operation="pencil_discriminant")
    return _pencil_delta(pencil)


# =============================================================================
# Criteria
# =============================================================================


def discriminant_verdict(delta: Poly) -> tuple[bool, dict[str, Any]]:
    """Odd q: phi permutes iff delta = u r^2 with u a nonsquare constant."""
    evidence: dict[str, Any] = {"delta": poly_json(delta)}
    if delta.is_zero():
        return False, evidence
    decomposition = const_square_decompose(delta)
    if decomposition is None:
        return False, evidence
    u, r = decomposition
    evidence.update({"u": elem_json(u), "r": poly_json(r)})
    return not u.is_square(), evidence


def resolvent_verdict(B: Poly, C: Poly) -> tuple[bool, dict[str, Any]]:
    """Even q: phi permutes iff y^2 + B y + C has a root over F_{q^2}[t] but none over F_q[t]."""
    ctx = B.ctx
    evidence: dict[str, Any] = {"B": poly_json(B), "C": poly_json(C)}
    if B.is_zero():
        return False, evidence
    if bounded_poly_root(B, C, 2, ctx):
        evidence["split_over_base"] = True
        return False, evidence
    ext = ext_create(ctx, 2)
    roots = bounded_poly_root(_lift(B, ext), _lift(C, ext), 2, ext.field)
    evidence["roots"] = [
        [[elem_json(x) for x in ext.coordinates(c)] for c in s.coeffs] for s in roots
    ]
    return bool(roots), evidence


def _odd_criterion(phi: RatFunc) -> tuple[bool, dict[str, Any]]:
    pencil = build_pencil(phi)
    if pencil is None:
        return False, {"pencil": "denominator of degree 1"}
    return discriminant_verdict(_pencil_delta(pencil))


def _even_criterion(phi: RatFunc) -> tuple[bool, dict[str, Any]]:
    pencil = build_pencil(phi)
    if pencil is None:
        return False, {"pencil": "denominator of degree 1"}
    B, C = quadratic_resolvent(pencil.c2, pencil.c1, pencil.c0)
    return resolvent_verdict(B, C)


def _lift(f: Poly, ext: ExtCtx) -> Poly:
    return f.map_coeffs(ext.embed, ext.field)


def criterion_odd(phi: RatFunc) -> bool:
    if phi.ctx.p == 2:
        raise ScopeError("criterion_odd needs odd characteristic", operation="criterion_odd")
    _require_cubic(phi, "criterion_odd")
    if not is_separable(phi):
        raise ScopeError(f"{phi} is inseparable", operation="criterion_odd")
    return _odd_criterion(phi)[0]


def criterion_even(phi: RatFunc) -> bool:
    if phi.ctx.p != 2:
        raise ScopeError("criterion_even needs characteristic 2", operation="criterion_even")
    _require_cubic(phi, "criterion_even")
    return _even_criterion(phi)[0]


def decide_permutation(phi: RatFunc, mode: str = "auto", guards: Optional[Guards] = None) -> Decision:
    """Permutation verdict only; see :func:`is_permutation` for the full report."""
    _require_cubic(phi, "is_permutation")
    mode = validate_choice(mode, MODES, "mode")
    guards = guards or get_guards()
    ctx = phi.ctx

    if not is_separable(phi):
        # only char 3 reaches this: num and den lie in F_q[x^3]
        return Decision(True, False, "inseparable", {})

    criterion = _even_criterion if ctx.p == 2 else _odd_criterion
    if mode == "brute" or (mode == "auto" and ctx.q < guards.brute_threshold):
        return Decision(is_permutation_bruteforce(phi), True, "brute", {})
    if mode in ("criterion", "auto"):
        verdict, evidence = criterion(phi)
        return Decision(verdict, True, "criterion", evidence)

    brute = is_permutation_bruteforce(phi)
    verdict, evidence = criterion(phi)
    if brute != verdict:
        raise CrosscheckError(
            f"brute force says {brute}, criterion says {verdict} for {phi} over F_{ctx.q}",
            operation="is_permutation",
            details={"function": str(phi), "field": ctx.spec, "evidence": evidence},
        )
    return Decision(verdict, True, "crosscheck", evidence)


def is_permutation(phi: RatFunc, mode: str = "auto", guards: Optional[Guards] = None) -> ClassReport:
    """
    Decide whether phi permutes P^1(F_q).

    Permutations come back with their canonical form and witnesses attached.

    Raises:
        ValidationError: degree is not 3 or the mode is unknown
        CrosscheckError: crosscheck mode found brute force and criterion disagreeing
    """
    decision = decide_permutation(phi, mode, guards)
    report = ClassReport(
        function=phi,
        verdict=PERMUTATION if decision.verdict else NOT_PERMUTATION,
        separable=decision.separable,
        method=decision.method,
        evidence=decision.evidence,
    )
    if decision.verdict:
        canon, m1, m2 = _canonical_data(phi, decision.separable)
        report.canon = canon
        report.witnesses = (m1, m2)
    return report


def canonicalize(phi: RatFunc, guards: Optional[Guards] = None) -> ClassReport:
    """Report with canonical form and witnesses; raises NotPermutationError otherwise."""
    report = is_permutation(phi, "auto", guards)
    if not report.is_permutation:
        raise NotPermutationError(
            f"{phi} does not permute P^1(F_{phi.ctx.q})", operation="canonicalize",
        )
    return report


# =============================================================================
# Canonical parameters and representatives
# =============================================================================


@dataclass(frozen=True)
class CanonicalParameters:
    b_star: Optional[FieldElem]
    a_star: Optional[FieldElem]
    b0_star: Optional[FieldElem]


@lru_cache(maxsize=None)
def canonical_parameters(ctx: FieldCtx) -> CanonicalParameters:
    """First elements (enumeration order) with -b a non-square, resp. absolute trace 1."""
    if ctx.p == 2:
        b0 = next(a for a in ctx.elements() if a.abs_trace2() == 1)
        return CanonicalParameters(None, None, b0)
    b = next(a for a in ctx.nonzero() if not (-a).is_square())
    return CanonicalParameters(b, b if ctx.p == 3 else None, None)


def representative(ctx: FieldCtx, separable: bool = True) -> tuple[CanonForm, RatFunc]:
    """The fixed representative for q mod 6 (the inseparable class exists only for 3 | q)."""
    params = canonical_parameters(ctx)
    residue = ctx.q % 6
    if not separable:
        if ctx.p != 3:
            raise ScopeError("inseparable degree-3 functions exist only in characteristic 3", operation="representative")
        form = CanonForm(CHAR3_CUBE)
    elif residue == 1:
        b = params.b_star
        form = CanonForm(ODD_FRACTIONAL, (9 * b.inverse(), b))
    elif residue in (2, 5):
        form = CanonForm(CUBE)
    elif residue == 3:
        form = CanonForm(CHAR3_LINEARIZED, (params.a_star,))
    else:
        form = CanonForm(EVEN_FRACTIONAL, (params.b0_star,))
    return form, form.ratfunc(ctx)


def odd_family_member(ctx: FieldCtx, b: FieldElem) -> RatFunc:
    """(x^3 + (9/b) x)/(b x^2 + 1)."""
    if ctx.p == 2:
        raise ScopeError("odd family needs odd characteristic", operation="odd_family_member")
    b = ctx(b)
    if not b:
        raise FieldError("b must be nonzero", operation="odd_family_member")
    return ratfunc_new(Poly(ctx, [0, 9 * b.inverse(), 0, 1]), Poly(ctx, [1, 0, b]))


def even_family_member(ctx: FieldCtx, b0: FieldElem) -> RatFunc:
    """(x^3 + a2 x^2 + a1 x)/(x^2 + x + b0) with a1 = b0 + 1/b0 and a2 = 1 + 1/b0."""
    if ctx.p != 2:
        raise ScopeError("even family needs characteristic 2", operation="even_family_member")
    b0 = ctx(b0)
    if not b0:
        raise FieldError("b0 must be nonzero", operation="even_family_member")
    inv = b0.inverse()
    return ratfunc_new(Poly(ctx, [0, b0 + inv, 1 + inv, 1]), Poly(ctx, [b0, 1, 1]))


# =============================================================================
# Normalization
# =============================================================================


class _Normalizer:
    """Tracks psi = left o phi o right while Mobius moves are applied."""

    def __init__(self, phi: RatFunc):
        ctx = phi.ctx
        self.ctx = ctx
        self.psi = phi
        self.left = Mobius.identity(ctx)
        self.right = Mobius.identity(ctx)

    def apply_left(self, m: Mobius) -> None:
        self.psi = compose_mobius(self.psi, m, "left")
        self.left = m.compose(self.left)

    def apply_right(self, m: Mobius) -> None:
        self.psi = compose_mobius(self.psi, m, "right")
        self.right = self.right.compose(m)

    def drop_constant(self) -> None:
        """Left-translate so that the numerator has no constant term."""
        num, den = self.psi.num, self.psi.den
        if not den[0]:
            raise InternalConsistencyError(
                f"{self.psi} has a pole at 0 and at infinity", operation="canonicalize",
            )
        if num[0]:
            self.apply_left(Mobius.translation(self.ctx, -(num[0] / den[0])))

    def fail(self, what: str) -> InternalConsistencyError:
        return InternalConsistencyError(f"{what} while normalizing {self.psi}", operation="canonicalize")


def _normalize(phi: RatFunc) -> tuple[Mobius, Mobius, RatFunc]:
    """(L, R, N) with L o phi o R == N, the normal form of the characteristic."""
    ctx = phi.ctx
    norm = _Normalizer(phi)

    if norm.psi.num.deg < 3:
        norm.apply_left(Mobius.inversion(ctx))
    if norm.psi.den.deg == 3:
        lam = eval_point(norm.psi, ProjPoint.infinity()).value
        norm.apply_left(Mobius.new(0, 1, 1, -lam, ctx))
    norm.apply_left(Mobius.scaling(ctx, norm.psi.num.lc().inverse()))

    if norm.psi.den.deg == 0:
        _polynomial_moves(norm)
    if norm.psi.den.deg != 2:
        raise norm.fail(f"denominator of degree {norm.psi.den.deg}")

    if ctx.p == 2:
        _even_moves(norm)
    else:
        _odd_moves(norm)
    logger.debug("normalized %s to %s via L=%s, R=%s", phi, norm.psi, norm.left, norm.right)
    return norm.left, norm.right, norm.psi


def _polynomial_moves(norm: _Normalizer) -> None:
    ctx = norm.ctx
    norm.drop_constant()
    if ctx.p != 3:
        shift = -(norm.psi.num[2] / 3)
        norm.apply_right(Mobius.translation(ctx, shift))
        norm.drop_constant()
    num = norm.psi.num
    a, b = num[2], num[1]
    if b:
        # (1/x) o (x^3 + a x^2 + b x) o (1/x) = x^3/(b x^2 + a x + 1)
        norm.apply_left(Mobius.inversion(ctx))
        norm.apply_right(Mobius.inversion(ctx))
    elif not a:
        # (x/(x-1)) o x^3 o (x/(x+1)) = x^3/(-3x^2 - 3x - 1)
        norm.apply_left(Mobius.new(1, 0, 1, -1, ctx))
        norm.apply_right(Mobius.new(1, 0, 1, 1, ctx))
    else:
        raise norm.fail("non-permutation cubic polynomial")
    norm.apply_left(Mobius.scaling(ctx, norm.psi.num.lc().inverse()))


def _odd_moves(norm: _Normalizer) -> None:
    ctx = norm.ctx
    b_star = canonical_parameters(ctx).b_star
    half = ctx(2).inverse()

    norm.apply_right(Mobius.translation(ctx, -(norm.psi.den[1] * half)))
    norm.drop_constant()
    d0 = norm.psi.den[0]
    norm.apply_left(Mobius.scaling(ctx, d0 / norm.psi.num.lc()))
    b2 = d0.inverse()

    k = (b_star / b2).sqrt()
    if k is None:
        raise norm.fail("-b is a square")
    norm.apply_right(Mobius.scaling(ctx, k))
    norm.apply_left(Mobius.scaling(ctx, (k * k * k).inverse()))


def _even_moves(norm: _Normalizer) -> None:
    ctx = norm.ctx
    b0_star = canonical_parameters(ctx).b0_star

    g1 = norm.psi.den[1]
    if not g1:
        raise norm.fail("double pole")
    norm.apply_right(Mobius.scaling(ctx, g1))
    norm.apply_left(Mobius.scaling(ctx, norm.psi.num.lc().inverse()))
    norm.drop_constant()

    b0 = norm.psi.den[0]
    roots = quad_roots(ctx.one, b0 + b0_star, ctx)
    if not roots:
        raise norm.fail("b0 has absolute trace 0")
    norm.apply_right(Mobius.translation(ctx, roots[0]))
    norm.drop_constant()


def _canonical_data(phi: RatFunc, separable: bool) -> tuple[CanonForm, Mobius, Mobius]:
    ctx = phi.ctx
    form, target = representative(ctx, separable)
    if not separable:
        # phi = M o x^3 with M = (A x + B)/(C x + D)
        num, den = phi.num, phi.den
        outer = Mobius.new(num[3], num[0], den[3], den[0], ctx)
        m1, m2 = outer.inverse(), Mobius.identity(ctx)
    else:
        left, right, normal = _normalize(phi)
        if normal == target:
            m1, m2 = left, right
        else:
            left_t, right_t, normal_t = _normalize(target)
            if normal_t != normal:
                raise InternalConsistencyError(
                    f"normal forms differ: {normal} vs {normal_t}", operation="canonicalize",
                )
            m1 = left_t.inverse().compose(left)
            m2 = right.compose(right_t.inverse())

    if conjugate(phi, m1, m2) != target:
        raise InternalConsistencyError(
            f"witnesses do not map {phi} onto {target}", operation="canonicalize",
            details={"m1": str(m1), "m2": str(m2)},
        )
    return form, m1, m2


# =============================================================================
# Polynomials, completeness, extensions
# =============================================================================


def classify_normalized_poly(ctx: FieldCtx, a: FieldElem, b: Optional[FieldElem] = None) -> bool:
    """
    Verdict for a normalized cubic: x^3 + a x when 3 does not divide q,
    x^3 + a x^2 + b x when it does.
    """
    a = ctx(a)
    if ctx.p != 3:
        if b is not None:
            raise ValidationError("x^3 + a x takes no second coefficient when 3 does not divide q",
                                  operation="classify_normalized_poly")
        return not a and ctx.q % 3 == 2
    if b is None:
        raise ValidationError("x^3 + a x^2 + b x needs b when 3 divides q", operation="classify_normalized_poly")
    b = ctx(b)
    return not a and (not b or not (-b).is_square())


def shifted(phi: RatFunc, lam) -> RatFunc:
    """phi + lam x, reduced (the degree may drop)."""
    return shift_by_x(phi, phi.ctx(lam))


def is_lambda_complete(phi: RatFunc, lam) -> bool:
    lam = phi.ctx(lam)
    if not lam:
        raise ValidationError("lambda must be nonzero", operation="is_complete")
    return is_permutation_bruteforce(phi) and is_permutation_bruteforce(shifted(phi, lam))


def is_complete(phi: RatFunc) -> bool:
    """phi and phi + x both permute P^1(F_q)."""
    _require_cubic(phi, "is_complete")
    return is_lambda_complete(phi, 1)


def extension_permutation(phi: RatFunc, n: int, mode: str = "predict", guards: Optional[Guards] = None) -> bool:
    """
    Does phi permute P^1(F_{q^n})?

    ``predict`` answers "n is odd" for separable functions over odd q;
    ``verify`` lifts phi and checks all q^n + 1 points.
    """
    _require_cubic(phi, "extension_permutation")
    n = validate_extension_degree(n)
    mode = validate_choice(mode, ["predict", "verify"], "mode")
    guards = guards or get_guards()
    ctx = phi.ctx

    if mode == "predict":
        if ctx.p == 2:
            raise ScopeError("prediction covers odd characteristic only", operation="extension_permutation")
        if not is_separable(phi):
            raise ScopeError("prediction covers separable functions only", operation="extension_permutation")
        if not decide_permutation(phi, "auto", guards).verdict:
            raise NotPermutationError(f"{phi} does not permute P^1(F_{ctx.q})", operation="extension_permutation")
        return n % 2 == 1

    if ctx.q**n > guards.max_extension_points:
        raise GuardExceededError(
            f"q^n = {ctx.q**n} exceeds the extension guard {guards.max_extension_points}",
            operation="extension_permutation",
        )
    if n == 1:
        return is_permutation_bruteforce(phi)
    lifted = lift_ratfunc(phi, ext_create(ctx, n))
    return is_permutation_bruteforce(lifted)


# =============================================================================
# Characteristic-2 resolvent witnesses
# =============================================================================


@dataclass(frozen=True)
class ResolventWitness:
    ext: ExtCtx
    u0: FieldElem
    u1: FieldElem
    u2: FieldElem

    def root(self) -> Poly:
        """u2 t^2 + u1 t + u0 over F_{q^2}."""
        return Poly(self.ext.field, [self.u0, self.u1, self.u2])


def resolvent_witness(ctx: FieldCtx, b0: FieldElem) -> ResolventWitness:
    """u2 a root of x^2 + x + b0 in F_{q^2}, u1 = u2 + b0, u0 = (b0 + 1)^3 / b0^2 * u2."""
    if ctx.p != 2:
        raise ScopeError("resolvent witnesses are for characteristic 2", operation="resolvent_witness")
    b0 = ctx(b0)
    if not b0:
        raise FieldError("b0 must be nonzero", operation="resolvent_witness")
    ext = ext_create(ctx, 2)
    e_b0 = ext.embed(b0)
    roots = quad_roots(ext.field.one, e_b0, ext.field)
    if not roots:
        raise InternalConsistencyError(f"x^2 + x + {b0} has no root in F_{ext.field.q}", operation="resolvent_witness")
    u2 = roots[0]
    u1 = u2 + e_b0
    u0 = ext.embed((b0 + 1) ** 3 / (b0 * b0)) * u2
    return ResolventWitness(ext, u0, u1, u2)


def resolvent_system_holds(witness: ResolventWitness, a1: FieldElem, a2: FieldElem, b0: FieldElem) -> bool:
    """The eight trace/norm equations tying (u0, u1, u2) to (a1, a2, b0)."""
    ext = witness.ext
    u0, u1, u2 = witness.u0, witness.u1, witness.u2
    fr = ext.frobenius
    e = ext.embed
    try:
        checks = [
            ext.trace(u0) == a1 * a2,
            ext.trace(u1) == a1 + a2 + b0,
            ext.trace(u2) == 1,
            ext.norm(u0) == a1 * a1 * a1,
            ext.norm(u2) == b0,
            u0 * fr(u1) + fr(u0) * u1 == e(a1 * a1 + a2 * a2 * a2 * b0),
            u0 * fr(u2) + e(ext.norm(u1)) + fr(u0) * u2 == e(a1 + a2 * a2 * b0 + b0 * b0),
            fr(u1) * u2 + u1 * fr(u2) == e(a2 * b0 + 1),
        ]
    except InternalConsistencyError:
        return False
    return all(checks)
