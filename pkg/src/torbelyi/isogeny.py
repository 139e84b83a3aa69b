"""Isogenies as exact rational maps, and composition of Belyi pairs.

An isogeny psi: E -> X is carried as a pair of rational functions
(xi, omega) on E for the image coordinates.  Verification is twofold:
the algebraic identity (omega, xi) satisfies X's equation modulo E's
ideal, and additivity psi(P + Q) = psi(P) + psi(Q) on a finite sample.
Multiplication-by-m comes from the classical division polynomials on a
short Weierstrass model.

Composing a pair (X, phi) with psi gives beta = phi o psi on E; the
theorem checks compare the quasi-critical sets Gamma = beta^-1({0,1,inf})
and G = phi^-1({0,1,inf}): Gamma maps into G under psi, inherits torsion
from G, and is a group whenever G is.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .belyi import (
    BelyiPair,
    FIBER_TAGS,
    QuasiCriticalReport,
    analyze,
    is_belyi,
    subgroup_closure,
)
from .curve import INFINITY, CurvePoint, EllipticCurve
from .errors import CurveMismatch, UnsupportedForm
from .funcfield import (
    CurveFunction,
    INF,
    is_inf,
    parse_curve_function,
    poly_on_function,
)
from .localseries import ord_at_point, ram_index
from .numfield import FE_ONE, FieldElement


@dataclass(frozen=True)
class IsogenyMap:
    """Rational map between curves: P -> (xi(P), omega(P)), O -> O."""

    source: EllipticCurve
    target: EllipticCurve
    xi: CurveFunction
    omega: CurveFunction
    degree: int

    @staticmethod
    def make(source, target, xi: CurveFunction, omega: CurveFunction) -> IsogenyMap:
        """Build with the degree read off the x-coordinate map.

        For the isogenies in scope xi depends on x alone, so the degree
        is max(deg num, deg den) of xi as a rational function of x.
        """
        if xi.curve != source or omega.curve != source:
            raise CurveMismatch("coordinate maps must live on the source curve")
        if not xi.v.is_zero:
            raise UnsupportedForm("x-coordinate of the isogeny must be y-free")
        degree = max(xi.u.degree, xi.w.degree)
        return IsogenyMap(source, target, xi, omega, degree)

    def apply(self, P: CurvePoint) -> CurvePoint:
        """Image of a point; poles of the coordinates mean the kernel, so O."""
        if P.is_infinity:
            return INFINITY
        xv = self.xi.eval(P)
        yv = self.omega.eval(P)
        if is_inf(xv) or is_inf(yv):
            return INFINITY
        return CurvePoint(xv, yv)

    def ramification_at(self, P: CurvePoint) -> int:
        """e_psi(P): ord_P of a uniformizer at psi(P) pulled back through psi.

        Nonconstant isogenies over C are unramified, so this should be 1
        everywhere; it is computed rather than assumed.
        """
        Q = self.apply(P)
        if Q.is_infinity:
            # t = x/y at O pulls back to xi/omega
            return ord_at_point(self.xi / self.omega, P)
        df_dy = 2 * Q.y + self.target.a1 * Q.x + self.target.a3
        if not df_dy.is_zero:
            return ord_at_point(self.xi - Q.x, P)
        return ord_at_point(self.omega - Q.y, P)


@dataclass
class IsogenyDiagnostics:
    ok: bool
    curve_identity: bool
    additive_failures: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


def isogeny_verify(psi: IsogenyMap, sample_points=()) -> IsogenyDiagnostics:
    """Exact curve-to-curve identity plus additivity on sampled pairs."""
    X = psi.target
    xi, om = psi.xi, psi.omega
    residual = (
        om * om
        + om * xi * X.a1
        + om * X.a3
        - (xi ** 3 + xi * xi * X.a2 + xi * X.a4 + X.a6)
    )
    curve_identity = residual.is_zero
    failures = []
    pts = [P for P in sample_points if psi.source.on_curve(P)]
    for P in pts:
        for Q in pts:
            lhs = psi.apply(psi.source.add(P, Q))
            rhs = X.add(psi.apply(P), psi.apply(Q))
            if lhs != rhs:
                failures.append((P, Q, lhs, rhs))
    return IsogenyDiagnostics(curve_identity and not failures, curve_identity, failures)


def division_polynomials(E: EllipticCurve, top: int) -> list[CurveFunction]:
    """psi_0 .. psi_top as curve functions on a short Weierstrass curve.

    psi_1 = 1, psi_2 = 2y, psi_3 and psi_4 the classical quartic/sextic,
    then the doubling recurrences; the division by 2y in the even case is
    exact in the function field.
    """
    if not E.is_short_form:
        raise UnsupportedForm("division polynomials need y^2 = x^3 + Ax + B")
    A, B = E.a4, E.a6
    x = CurveFunction.coordinate_x(E)
    y = CurveFunction.coordinate_y(E)
    one = CurveFunction.constant(E, FE_ONE)
    psi = [CurveFunction.constant(E, 0), one, 2 * y]
    if top >= 3:
        psi.append(3 * x ** 4 + 6 * A * x * x + 12 * B * x - A * A * one)
    if top >= 4:
        psi.append(
            4
            * y
            * (
                x ** 6
                + 5 * A * x ** 4
                + 20 * B * x ** 3
                - 5 * A * A * x * x
                - 4 * A * B * x
                - (8 * B * B + A ** 3) * one
            )
        )
    for m in range(5, top + 1):
        k = m // 2
        if m % 2:
            psi.append(psi[k + 2] * psi[k] ** 3 - psi[k - 1] * psi[k + 1] ** 3)
        else:
            psi.append((psi[k] * (psi[k + 2] * psi[k - 1] ** 2 - psi[k - 2] * psi[k + 1] ** 2)) / (2 * y))
    return psi[: top + 1]


def mul_by_m(E: EllipticCurve, m: int) -> IsogenyMap:
    """The multiplication-by-m map via division polynomials; degree m^2."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if not E.is_short_form:
        raise UnsupportedForm("mul_by_m needs a short Weierstrass curve")
    x = CurveFunction.coordinate_x(E)
    y = CurveFunction.coordinate_y(E)
    if m == 1:
        return IsogenyMap(E, E, x, y, 1)
    psi = division_polynomials(E, 2 * m)
    psi_m_sq = psi[m] * psi[m]
    xi = (x * psi_m_sq - psi[m - 1] * psi[m + 1]) / psi_m_sq
    omega = psi[2 * m] / (2 * psi[m] ** 4)
    iso = IsogenyMap.make(E, E, xi, omega)
    if iso.degree != m * m:
        raise AssertionError(f"[{m}] came out with degree {iso.degree}, expected {m * m}")
    return iso


def compose_pair(phi_pair: BelyiPair, psi: IsogenyMap, label: str = "") -> BelyiPair:
    """beta = phi o psi on psi's source; degree multiplies."""
    if psi.target != phi_pair.curve:
        raise CurveMismatch("isogeny target differs from the curve of phi")
    phi = phi_pair.map
    num = poly_on_function(phi.u, psi.xi) + poly_on_function(phi.v, psi.xi) * psi.omega
    den = poly_on_function(phi.w, psi.xi)
    beta = num / den
    name = label or (phi_pair.label + " o psi")
    return BelyiPair(psi.source, beta, name)


@dataclass
class TheoremReport:
    """Desk-scale evidence for the composition theorem on one (phi, psi).

    Collects: the composed pair's analysis, Belyi status of beta,
    psi(Gamma) membership in G, the torsion transfer, closure of the
    resolved Gamma, and the ramification chain e_beta = e_phi(psi(P))
    with e_psi(P) = 1 asserted pointwise.
    """

    pair: BelyiPair
    report: QuasiCriticalReport
    g_report: QuasiCriticalReport
    belyi_ok: bool
    maps_into_g: bool
    torsion_transferred: bool
    closure_is_group: bool
    ram_chain_ok: bool
    isogeny_unramified: bool

    @property
    def all_ok(self) -> bool:
        return (
            self.belyi_ok
            and self.maps_into_g
            and self.torsion_transferred
            and self.closure_is_group
            and self.ram_chain_ok
            and self.isogeny_unramified
        )


def verify_main_theorem(
    phi_pair: BelyiPair,
    psi: IsogenyMap,
    torsion_bound: int = 24,
    closure_bound: int = 64,
    label: str = "",
) -> TheoremReport:
    composed = compose_pair(phi_pair, psi, label=label)
    report = analyze(composed, torsion_bound=torsion_bound, closure_bound=closure_bound)
    g_report = analyze(phi_pair, torsion_bound=torsion_bound, closure_bound=closure_bound)

    belyi_ok = report.belyi.status is not False

    gamma_points = {P for tag in FIBER_TAGS for P in report.fibers[tag].points}
    g_points = {P for tag in FIBER_TAGS for P in g_report.fibers[tag].points}
    maps_into_g = all(psi.apply(P) in g_points for P in gamma_points)

    torsion_transferred = True
    if g_report.all_torsion:
        for tag in FIBER_TAGS:
            for P, order in report.fibers[tag].orders.items():
                if order is None:
                    torsion_transferred = False

    closure = subgroup_closure(composed.curve, gamma_points, closure_bound)
    closure_is_group = closure is not None
    if closure_is_group and g_report.structure is not None:
        g_closure = set(g_report.closure or ())
        closure_is_group = all(psi.apply(P) in g_closure for P in closure)

    ram_chain_ok = True
    isogeny_unramified = True
    for tag in FIBER_TAGS:
        for P, e in report.fibers[tag].points.items():
            e_psi = psi.ramification_at(P)
            if e_psi != 1:
                isogeny_unramified = False
            Q = psi.apply(P)
            e_phi = ram_index(phi_pair.map, Q)
            if e != e_phi * e_psi:
                ram_chain_ok = False
    return TheoremReport(
        pair=composed,
        report=report,
        g_report=g_report,
        belyi_ok=belyi_ok,
        maps_into_g=maps_into_g,
        torsion_transferred=torsion_transferred,
        closure_is_group=closure_is_group,
        ram_chain_ok=ram_chain_ok,
        isogeny_unramified=isogeny_unramified,
    )


def generate_family(m_max: int, torsion_bound: int = 24, closure_bound: int = 64):
    """Degree-3m^2 pairs (E, (1-y)/2 o [m]) on y^2 = x^3 + 1, with reports.

    The base pair's quasi-critical set is the Z_3 subgroup, so every member
    of the family has a quasi-critical set forming a group -- the finite
    slice of the infinitude promised by the composition theorem.
    """
    if m_max < 1:
        raise ValueError("m_max must be >= 1")
    E = EllipticCurve(0, 0, 0, 0, 1, label="36/a/4")
    base = BelyiPair(E, parse_curve_function("(1-y)/2", E), "3T1-3_3_3-a")
    out = []
    for m in range(1, m_max + 1):
        psi = mul_by_m(E, m)
        rep = verify_main_theorem(
            base,
            psi,
            torsion_bound=torsion_bound,
            closure_bound=closure_bound,
            label=f"3T1-compose-mul{m}",
        )
        out.append((m, rep))
    return out


def isogeny_to_json(psi: IsogenyMap) -> dict:
    from .curve import curve_to_json

    return {
        "source": curve_to_json(psi.source),
        "target": curve_to_json(psi.target),
        "xi": psi.xi.to_expr(),
        "omega": psi.omega.to_expr(),
        "degree": psi.degree,
    }


def isogeny_from_json(data: dict) -> IsogenyMap:
    from .curve import curve_from_json

    source = curve_from_json(data["source"])
    target = curve_from_json(data["target"])
    xi = parse_curve_function(data["xi"], source)
    omega = parse_curve_function(data["omega"], source)
    return IsogenyMap.make(source, target, xi, omega)
