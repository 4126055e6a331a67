"""Tests for projfunc module."""

import re

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cubic_prf_lib.error_handler import FieldError, NotPermutationError, ParseError, ValidationError
from cubic_prf_lib.gf import ext_create, field_create
from cubic_prf_lib.polyring import Poly
from cubic_prf_lib.projfunc import (
    Mobius,
    ProjPoint,
    compose_mobius,
    conjugate,
    eval_point,
    format_ratfunc,
    fractional_jump,
    from_poly,
    image_codes,
    is_permutation_bruteforce,
    is_separable,
    lift_ratfunc,
    mobius_apply,
    mobius_inverse,
    mobius_ops,
    parse_ratfunc,
    points,
    ratfunc_new,
    shift_by_x,
    tokenize,
)

pytestmark = pytest.mark.projfunc

F9 = field_create(3, 2)
INF = ProjPoint.infinity()


def _mobius(ctx):
    codes = st.integers(0, ctx.q - 1)
    return st.tuples(codes, codes, codes, codes).filter(
        lambda t: (ctx.from_code(t[0]) * ctx.from_code(t[3]) - ctx.from_code(t[1]) * ctx.from_code(t[2])).value
    ).map(lambda t: Mobius.new(*(ctx.from_code(c) for c in t), ctx))


def _poly(ctx, max_degree):
    return st.lists(st.integers(0, ctx.q - 1), max_size=max_degree + 1).map(lambda cs: Poly.from_codes(ctx, cs))


class TestRatFunc:
    def test_reduction(self, f7):
        f = Poly(f7, [6, 0, 1])  # (x - 1)(x + 1)
        g = Poly(f7, [2, 2])     # 2 (x + 1)
        phi = ratfunc_new(f, g)
        assert phi.num == Poly(f7, [3, 4])
        assert phi.den == 1
        assert phi.degree == 1

    def test_zero_numerator(self, f7):
        phi = ratfunc_new(Poly(f7), Poly(f7, [1, 3]))
        assert phi.den == 1
        assert phi.degree == 0

    def test_zero_denominator(self, f7):
        with pytest.raises(ValidationError):
            ratfunc_new(Poly(f7, [1]), Poly(f7))

    def test_from_poly(self, f5):
        phi = from_poly(Poly.monomial(f5, 3))
        assert phi.is_polynomial()
        assert str(phi) == "x^3"

    def test_points(self, f4):
        pts = points(f4)
        assert len(pts) == 5
        assert pts[-1].is_infinity
        assert [p.code(4) for p in pts] == [0, 1, 2, 3, 4]
        assert str(INF) == "inf"

    def test_eval_at_infinity(self, f7):
        x = Poly.x(f7)
        assert eval_point(ratfunc_new(x**3, Poly.const(f7, 1)), INF).is_infinity
        assert eval_point(ratfunc_new(x, x**2 + 1), INF) == ProjPoint(f7.zero)
        assert eval_point(ratfunc_new(x * 3 + 1, x + 1), INF) == ProjPoint(f7(3))

    def test_eval_at_pole(self, f7):
        phi = ratfunc_new(Poly(f7, [1]), Poly(f7, [6, 1]))
        assert phi(ProjPoint(f7.one)).is_infinity
        assert phi(ProjPoint(f7(2))) == ProjPoint(f7.one)

    def test_image_codes(self, f3):
        assert image_codes(from_poly(Poly.x(f3))) == [0, 1, 2, 3]

    def test_bruteforce(self, f5, f7):
        assert is_permutation_bruteforce(from_poly(Poly.monomial(f5, 3)))
        assert not is_permutation_bruteforce(from_poly(Poly.monomial(f7, 3)))

    def test_separability(self, f3, f9, f7):
        assert not is_separable(from_poly(Poly.monomial(f3, 3)))
        assert not is_separable(ratfunc_new(Poly(f9, [1, 0, 0, 1]), Poly(f9, [2, 0, 0, 1])))
        assert is_separable(from_poly(Poly.monomial(f7, 3)))

    def test_shift_by_x(self, f5):
        phi = from_poly(Poly.monomial(f5, 3))
        assert shift_by_x(phi, f5(2)).num == Poly(f5, [0, 2, 0, 1])

    def test_lift(self, f7):
        phi = parse_ratfunc("(x^3+x)/(2*x^2+1)", f7)
        ext = ext_create(f7, 2)
        lifted = lift_ratfunc(phi, ext)
        assert lifted.ctx is ext.field
        for a in f7.elements():
            image = eval_point(phi, ProjPoint(a))
            lifted_image = eval_point(lifted, ProjPoint(ext.embed(a)))
            assert lifted_image == (INF if image.is_infinity else ProjPoint(ext.embed(image.value)))

    def test_lift_wrong_base(self, f7, f5):
        with pytest.raises(FieldError):
            lift_ratfunc(from_poly(Poly.x(f5)), ext_create(f7, 2))


class TestMobius:
    def test_normalization(self, f7):
        m = Mobius.new(2, 4, 0, 2, f7)
        assert m.codes() == (1, 2, 0, 1)
        assert m == Mobius.translation(f7, 2)
        assert Mobius.new(0, 3, 3, 0, f7) == Mobius.inversion(f7)

    def test_singular(self, f7):
        with pytest.raises(FieldError, match="singular"):
            Mobius.new(1, 2, 2, 4, f7)

    def test_apply(self, f7):
        inv = Mobius.inversion(f7)
        assert inv.apply(INF) == ProjPoint(f7.zero)
        assert inv.apply(ProjPoint(f7.zero)).is_infinity
        assert mobius_apply(Mobius.scaling(f7, 3), ProjPoint(f7(2))) == ProjPoint(f7(6))

    def test_compose_and_inverse(self, f5):
        m = Mobius.new(1, 2, 3, 4, f5)
        assert mobius_ops(m, mobius_inverse(m)).is_identity()
        n = Mobius.scaling(f5, 2)
        for point in points(f5):
            assert mobius_ops(m, n).apply(point) == m.apply(n.apply(point))

    def test_str(self, f7):
        assert str(Mobius.translation(f7, 1)) == "x+1"
        assert str(Mobius.inversion(f7)) == "1/x"

    @settings(max_examples=40, deadline=None)
    @given(m=_mobius(F9))
    def test_as_ratfunc_matches_apply(self, m):
        phi = m.as_ratfunc()
        for point in points(F9):
            assert eval_point(phi, point) == m.apply(point)


class TestComposition:
    @settings(max_examples=40, deadline=None)
    @given(m=_mobius(F9), n=_mobius(F9))
    def test_conjugate_is_pointwise(self, m, n):
        phi = parse_ratfunc("(x^3+w*x)/(x^2+1)", F9)
        moved = conjugate(phi, m, n)
        assert moved.degree == 3
        for point in points(F9):
            assert eval_point(moved, point) == m.apply(eval_point(phi, n.apply(point)))

    def test_right_composition(self, f7):
        phi = parse_ratfunc("x^3+x", f7)
        m = Mobius.translation(f7, 1)
        assert compose_mobius(phi, m, "right") == parse_ratfunc("(x+1)^3+x+1", f7)

    def test_left_composition(self, f7):
        phi = parse_ratfunc("x^3", f7)
        assert compose_mobius(phi, Mobius.inversion(f7), "left") == parse_ratfunc("1/x^3", f7)

    def test_bad_side(self, f7):
        with pytest.raises(ValidationError):
            compose_mobius(parse_ratfunc("x^3", f7), Mobius.identity(f7), "middle")

    def test_field_mismatch(self, f7, f5):
        with pytest.raises(FieldError):
            compose_mobius(parse_ratfunc("x^3", f7), Mobius.identity(f5), "left")


class TestFractionalJump:
    def test_polynomial_is_restriction(self, f5):
        table = fractional_jump(parse_ratfunc("x^3", f5))
        assert [y.value for y in table] == [a**3 % 5 for a in range(5)]

    def test_pole_goes_to_value_at_infinity(self, f5):
        table = fractional_jump(parse_ratfunc("1/x", f5))
        assert table[0] == 0
        assert all(table[a] * a == 1 for a in range(1, 5))

    def test_is_bijection(self, f7):
        table = fractional_jump(parse_ratfunc("(x^3+x)/(2*x^2+1)", f7))
        assert sorted(y.value for y in table) == list(range(7))

    def test_not_permutation(self, f7):
        with pytest.raises(NotPermutationError):
            fractional_jump(parse_ratfunc("x^3", f7))


class TestParser:
    def test_example(self, f7):
        phi = parse_ratfunc("(x^3+x)/(2*x^2+1)", f7)
        assert phi.num == Poly(f7, [0, 4, 0, 4])
        assert phi.den == Poly(f7, [4, 0, 1])
        assert format_ratfunc(phi) == "(4*x^3+4*x)/(x^2+4)"

    @pytest.mark.parametrize("text, expected", [
        ("1/x^3", "1/x^3"),
        ("(2*x^3)/(x^2+1)", "2*x^3/(x^2+1)"),
        ("(x^3+1)/(x^2)", "(x^3+1)/x^2"),
        ("3/(x^3+x)", "3/(x^3+x)"),
    ])
    def test_single_terms_are_bare(self, f7, text, expected):
        assert format_ratfunc(parse_ratfunc(text, f7)) == expected

    def test_sum_constants_keep_parentheses(self, f9):
        phi = ratfunc_new(Poly(f9, [f9.gen + 1]), Poly(f9, [0, 0, 0, 1]))
        text = format_ratfunc(phi)
        assert text == f"({f9.gen + 1})/x^3"
        assert parse_ratfunc(text, f9) == phi
        coefficient = ratfunc_new(Poly(f9, [0, 0, 0, f9.gen + 1]), Poly(f9, [1, 0, 1]))
        assert format_ratfunc(coefficient).startswith(f"({f9.gen + 1})*x^3/")

    def test_integers_reduce_mod_p(self, f7):
        assert parse_ratfunc("8*x^3 - 7", f7) == parse_ratfunc("x^3", f7)

    def test_unary_minus_and_case(self, f5):
        assert parse_ratfunc("-X^3 + 2", f5).num == Poly(f5, [2, 0, 0, 4])

    def test_extension_constants(self, f9):
        phi = parse_ratfunc("(w+1)*x^3 + w", f9)
        assert phi.num[3] == f9.gen + 1
        assert phi.num[0] == f9.gen

    def test_tokenize_positions(self):
        tokens = tokenize("x ^ 12")
        assert [(t.kind, t.position) for t in tokens] == [("x", 0), ("op", 2), ("number", 4), ("eof", 6)]

    @pytest.mark.parametrize("text, position, message", [
        ("x^3+*x", 4, "expected x, w, a number"),
        ("x^", 2, "expected an exponent"),
        ("x^3 $", 4, "unexpected character"),
        ("(x+1", 4, "expected ')'"),
        ("x/0", 1, "denominator is zero"),
        ("x)", 1, "unexpected ')'"),
        ("", 0, "unexpected end of input"),
    ])
    def test_errors(self, f7, text, position, message):
        with pytest.raises(ParseError, match=re.escape(message)) as exc_info:
            parse_ratfunc(text, f7)
        assert exc_info.value.position == position
        assert exc_info.value.exit_code == 2

    def test_w_in_prime_field(self, f7):
        with pytest.raises(ParseError) as exc_info:
            parse_ratfunc("x^3 + w", f7)
        assert exc_info.value.position == 6

    @settings(max_examples=60, deadline=None)
    @given(f=_poly(F9, 3), g=_poly(F9, 3))
    def test_round_trip(self, f, g):
        if g.is_zero():
            return
        phi = ratfunc_new(f, g)
        assert parse_ratfunc(format_ratfunc(phi), F9) == phi
