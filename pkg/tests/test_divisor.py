"""Divisor arithmetic, principality via the group law, pullbacks."""

import pytest

from torbelyi.curve import EllipticCurve, INFINITY, affine
from torbelyi.divisor import (
    Divisor,
    combine,
    div_of_function,
    line_divisor,
    principal_check,
    pullback,
)
from torbelyi.errors import CurveMismatch, UnresolvedFiber
from torbelyi.funcfield import INF, parse_curve_function
from torbelyi.numfield import FE_ONE, FE_ZERO

E_CUBE = EllipticCurve(0, 0, 0, 0, 1)
E_CONG = EllipticCurve(0, 0, 0, -1, 0)


class TestCombination:
    def test_cancellation(self):
        D = Divisor.of_point(E_CUBE, affine(0, 1), 2)
        assert (D - D).is_zero

    def test_merging(self):
        P = affine(0, 1)
        D = combine(2, Divisor.of_point(E_CUBE, P), 3, Divisor.of_point(E_CUBE, P))
        assert D.coefficient(P) == 5 and D.degree == 5

    def test_base_point_differences(self):
        P, Q = affine(0, 1), affine(2, 3)
        O = INFINITY
        D1 = Divisor(E_CUBE, {P: 1, O: -1})
        D2 = Divisor(E_CUBE, {Q: 1, O: -1})
        total = D1 + D2
        assert total.coefficient(P) == 1
        assert total.coefficient(Q) == 1
        assert total.coefficient(O) == -2

    def test_curve_mismatch(self):
        with pytest.raises(CurveMismatch):
            Divisor.of_point(E_CUBE, affine(0, 1)) + Divisor.of_point(E_CONG, affine(0, 0))


class TestDivOfFunction:
    def test_motivating_map(self):
        D = div_of_function(parse_curve_function("(1-y)/2", E_CUBE))
        assert D == Divisor(E_CUBE, {affine(0, 1): 3, INFINITY: -3})

    def test_coordinate_function(self):
        D = div_of_function(parse_curve_function("x", E_CONG))
        assert D == Divisor(E_CONG, {affine(0, 0): 2, INFINITY: -2})

    def test_constant_gives_zero_divisor(self):
        assert div_of_function(parse_curve_function("5", E_CUBE)).is_zero

    def test_degree_zero_always(self):
        for expr, curve in [
            ("(1-y)/2", E_CUBE),
            ("x^2", E_CONG),
            ("-x^3", E_CUBE),
            ("(1-y)*(3+y)/4", E_CUBE),
            ("y/x", E_CONG),
        ]:
            assert div_of_function(parse_curve_function(expr, curve)).degree == 0

    def test_unresolved_zeros_raise(self):
        # zeros of x^3 - 2 on y^2 = x^3 + 1 need a cubic field
        with pytest.raises(UnresolvedFiber) as err:
            div_of_function(parse_curve_function("x^3 - 2", E_CUBE))
        assert err.value.factors


class TestPrincipality:
    def test_div_of_map_is_principal(self):
        D = div_of_function(parse_curve_function("(1-y)/2", E_CUBE))
        cert = principal_check(D)
        assert cert.is_principal and cert.witness.is_infinity

    def test_nontrivial_class_detected(self):
        # (P) - (O) is principal only for P = O
        D = Divisor(E_CUBE, {affine(2, 3): 1, INFINITY: -1})
        cert = principal_check(D)
        assert not cert.is_principal
        assert cert.witness == affine(2, 3)

    def test_empty_divisor(self):
        cert = principal_check(Divisor(E_CUBE, {}))
        assert cert.is_principal and cert.degree == 0

    def test_degree_nonzero_fails_fast(self):
        D = Divisor(E_CUBE, {INFINITY: 2})
        assert not principal_check(D).is_principal

    def test_translation_invariance_of_div(self):
        # div(beta) stays principal after replacing beta by a scalar multiple
        beta = parse_curve_function("(4*y + x^2 + 56)/108", EllipticCurve(0, 1, 0, 16, 180))
        for scale in (1, 3, 7):
            D = div_of_function(scale * beta)
            assert principal_check(D).is_principal


class TestPullback:
    def test_pullback_matches_div(self):
        beta = parse_curve_function("(1-y)/2", E_CUBE)
        assert pullback(beta, line_divisor(n0=1, n_inf=-1)) == div_of_function(beta)

    def test_pullback_of_nothing(self):
        beta = parse_curve_function("(1-y)/2", E_CUBE)
        assert pullback(beta, {}).is_zero

    def test_table_one_pullback(self):
        beta = parse_curve_function("x^2", E_CONG)
        D = pullback(beta, line_divisor(n1=1, n_inf=-1))
        assert D == Divisor(
            E_CONG, {affine(1, 0): 2, affine(-1, 0): 2, INFINITY: -4}
        )

    def test_pullback_of_one_matches_div_of_beta_minus_one(self):
        beta = parse_curve_function("x^2", E_CONG)
        assert pullback(beta, line_divisor(n1=1, n_inf=-1)) == div_of_function(beta - FE_ONE)

    def test_unsupported_support_rejected(self):
        beta = parse_curve_function("x", E_CONG)
        with pytest.raises(ValueError):
            pullback(beta, {FE_ONE + FE_ONE: 1})
