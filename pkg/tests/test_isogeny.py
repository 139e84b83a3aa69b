"""Isogeny verification, division-polynomial multiplication, composition."""

import pytest

from torbelyi.belyi import BelyiPair
from torbelyi.curve import EllipticCurve, INFINITY, affine
from torbelyi.errors import CurveMismatch, UnsupportedForm
from torbelyi.funcfield import parse_curve_function
from torbelyi.isogeny import (
    IsogenyMap,
    compose_pair,
    generate_family,
    isogeny_from_json,
    isogeny_to_json,
    isogeny_verify,
    mul_by_m,
    verify_main_theorem,
)

E_CUBE = EllipticCurve(0, 0, 0, 0, 1, label="36/a/4")
E_CONG = EllipticCurve(0, 0, 0, -1, 0, label="32/a/3")
E_6T4 = EllipticCurve(0, 0, 0, -15, 22, label="36/a/2")


def two_isogeny():
    """The degree-2 isogeny y^2 = x^3 - 15x + 22  ->  y^2 = x^3 + 1."""
    xi = parse_curve_function("(x^2 - 2*x - 3)/(4*(x-2))", E_6T4)
    omega = parse_curve_function("(x^2 - 4*x + 7)*y/(8*(x-2)^2)", E_6T4)
    return IsogenyMap.make(E_6T4, E_CUBE, xi, omega)


class TestIsogenyVerify:
    def test_table_isogeny(self):
        psi = two_isogeny()
        assert psi.degree == 2
        sample = [affine(2, 3), affine(3, 2), affine(-1, -6), INFINITY]
        on = [P for P in sample if E_6T4.on_curve(P)]
        assert len(on) >= 3
        diag = isogeny_verify(psi, sample_points=on)
        assert diag.ok and diag.curve_identity

    def test_identity_map(self):
        ident = mul_by_m(E_CUBE, 1)
        assert ident.degree == 1
        diag = isogeny_verify(ident, sample_points=[affine(0, 1), affine(2, 3)])
        assert diag.ok

    def test_perturbed_map_fails(self):
        psi = two_isogeny()
        broken = IsogenyMap(psi.source, psi.target, psi.xi + 1, psi.omega, psi.degree)
        diag = isogeny_verify(broken)
        assert not diag.curve_identity and not diag.ok

    def test_kernel_maps_to_infinity(self):
        psi = two_isogeny()
        # x = 2 gives y^2 = 8 - 30 + 22 = 0: the 2-torsion kernel point
        assert E_6T4.on_curve(affine(2, 0))
        assert psi.apply(affine(2, 0)).is_infinity
        assert psi.apply(INFINITY).is_infinity

    def test_round_trip_json(self):
        psi = two_isogeny()
        again = isogeny_from_json(isogeny_to_json(psi))
        assert again.xi == psi.xi and again.omega == psi.omega
        assert again.degree == psi.degree


class TestMulByM:
    def test_duplication_formula(self):
        iso = mul_by_m(E_CUBE, 2)
        expect = parse_curve_function("(x^4 - 8*x)/(4*x^3 + 4)", E_CUBE)
        assert iso.xi == expect
        assert iso.degree == 4

    def test_agrees_with_scalar_multiplication(self):
        pts = [affine(0, 1), affine(0, -1), affine(2, 3), affine(2, -3), affine(-1, 0)]
        for m in (2, 3):
            iso = mul_by_m(E_CUBE, m)
            assert iso.degree == m * m
            for P in pts:
                assert iso.apply(P) == E_CUBE.mul(m, P), (m, P)

    def test_long_form_rejected(self):
        long_curve = EllipticCurve(1, 1, 1, 22, -9)
        with pytest.raises(UnsupportedForm):
            mul_by_m(long_curve, 2)

    def test_homomorphism_on_sampled_pairs(self):
        iso = mul_by_m(E_CONG, 2)
        pts = [affine(0, 0), affine(1, 0), affine(-1, 0)]
        diag = isogeny_verify(iso, sample_points=pts)
        assert diag.ok


class TestComposePair:
    def test_6t4_exact_composition(self):
        phi = BelyiPair(E_CUBE, parse_curve_function("(1-y)/2", E_CUBE), "3T1")
        beta = compose_pair(phi, two_isogeny())
        expected = parse_curve_function(
            "(8*(x-2)^2 - (x^2 - 4*x + 7)*y)/(16*(x-2)^2)", E_6T4
        )
        assert beta.map == expected
        assert beta.curve == E_6T4

    def test_compose_with_identity(self):
        phi = BelyiPair(E_CUBE, parse_curve_function("(1-y)/2", E_CUBE), "3T1")
        assert compose_pair(phi, mul_by_m(E_CUBE, 1)).map == phi.map

    def test_degree_multiplies(self):
        phi = BelyiPair(E_CUBE, parse_curve_function("(1-y)/2", E_CUBE), "3T1")
        beta = compose_pair(phi, mul_by_m(E_CUBE, 2))
        assert beta.map.degree() == 12

    def test_curve_mismatch(self):
        phi = BelyiPair(E_CONG, parse_curve_function("x^2", E_CONG), "4T1")
        with pytest.raises(CurveMismatch):
            compose_pair(phi, mul_by_m(E_CUBE, 2))


class TestMainTheorem:
    def test_6t4_row(self):
        phi = BelyiPair(E_CUBE, parse_curve_function("(1-y)/2", E_CUBE), "3T1")
        rep = verify_main_theorem(phi, two_isogeny())
        assert rep.all_ok
        # Gamma generates Z_6 while G generates Z_3
        assert rep.report.group == "Z6"
        assert rep.g_report.group == "Z3"

    def test_identity_isogeny_preserves_everything(self):
        phi = BelyiPair(E_CUBE, parse_curve_function("(1-y)/2", E_CUBE), "3T1")
        rep = verify_main_theorem(phi, mul_by_m(E_CUBE, 1))
        assert rep.all_ok
        assert rep.report.group == rep.g_report.group == "Z3"

    def test_mul2_composition(self):
        phi = BelyiPair(E_CUBE, parse_curve_function("(1-y)/2", E_CUBE), "3T1")
        rep = verify_main_theorem(phi, mul_by_m(E_CUBE, 2))
        assert rep.all_ok
        assert rep.report.degree == 12
        # every resolved Gamma point is torsion and pushes into G
        for tag in "BWF":
            for P, order in rep.report.fibers[tag].orders.items():
                assert order is not None


class TestFamily:
    def test_family_members_check_out(self):
        family = generate_family(3)
        assert [m for m, _ in family] == [1, 2, 3]
        for m, rep in family:
            assert rep.all_ok, m
            totals = {tag: rep.report.fibers[tag].total for tag in "BWF"}
            assert set(totals.values()) == {3 * m * m}, (m, totals)

    def test_first_member_is_the_base_pair(self):
        family = generate_family(1)
        (m, rep), = family
        assert m == 1
        assert rep.pair.map == parse_curve_function("(1-y)/2", E_CUBE)
