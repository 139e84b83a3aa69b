"""Quasi-critical analysis of Toroidal Belyi pairs.

The central computation: given a pair (E, beta), solve the three fibers
B = beta^-1(0), W = beta^-1(1), F = beta^-1(inf) exactly.  Fiber
equations are made univariate by multiplying the y-linear numerator by
its conjugate, the resulting norm polynomial is factored into degree <= 2
pieces, and each candidate point gets its ramification index from a local
series expansion.  Irreducible factors of degree >= 3 stay symbolic: we
track the total ramification they carry so the degree identity
sum(e_P) per fiber = deg(beta) still closes exactly.

On top of the fiber solver sit the Jacobian critical-point criterion,
the Belyi-property check, torsion classification, subgroup closure, and
group-structure identification.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd, lcm

from .curve import INFINITY, CurvePoint, EllipticCurve
from .errors import (
    ConstantFunction,
    CurveMismatch,
    NotAGroup,
    UnresolvedFiber,
)
from .funcfield import (
    INF,
    CurveFunction,
    ScalarMap,
    is_inf,
    parse_scalar_map,
    _poly_to_expr,
)
from .localseries import branch_expand, ram_index, series_of_function
from .numfield import FE_ONE, FE_ZERO, FieldElement, Polynomial, factor_deg_le2

FIBER_TAGS = ("B", "W", "F")
FIBER_VALUES = {"B": FE_ZERO, "W": FE_ONE, "F": INF}


@dataclass(frozen=True)
class BelyiPair:
    """An elliptic curve together with a nonconstant map to the value line."""

    curve: EllipticCurve
    map: CurveFunction
    label: str = ""

    def __post_init__(self):
        if self.map.curve != self.curve:
            raise CurveMismatch("map is not a function on the given curve")
        if self.map.is_constant:
            raise ConstantFunction("a Belyi map must be nonconstant")


@dataclass(frozen=True)
class UnresolvedFactor:
    """An irreducible factor whose points need a field of degree > 2.

    multiplicity is the factor's multiplicity in the fiber norm polynomial;
    contribution is the total ramification sum(e_P) carried by the points
    above its roots (0 when the denominator swallows them).
    """

    factor: Polynomial
    multiplicity: int
    contribution: int
    ambiguous: bool = False


@dataclass
class FiberData:
    """One fiber: resolved points with ramification plus symbolic leftovers."""

    points: dict[CurvePoint, int] = field(default_factory=dict)
    orders: dict[CurvePoint, int | None] = field(default_factory=dict)
    unresolved: list[UnresolvedFactor] = field(default_factory=list)

    @property
    def resolved_sum(self) -> int:
        return sum(self.points.values())

    @property
    def total(self) -> int:
        return self.resolved_sum + sum(u.contribution for u in self.unresolved)

    @property
    def fully_resolved(self) -> bool:
        return not self.unresolved

    @property
    def has_ambiguity(self) -> bool:
        return any(u.ambiguous for u in self.unresolved)

    def sorted_points(self):
        return sorted(self.points, key=lambda P: P.sort_key())


def _norm_polynomial(curve: EllipticCurve, s: Polynomial, t: Polynomial) -> Polynomial:
    """(s + t*y)(s + t*ybar) = s^2 - s*t*(a1 x + a3) - t^2 * rhs(x)."""
    ylin = curve.y_coeff_polynomial()
    rhs = curve.rhs_polynomial()
    return s * s - s * t * ylin - t * t * rhs


def _factor_multiplicity(p: Polynomial, f: Polynomial) -> int:
    mult = 0
    while not p.is_zero:
        q, r = divmod(p, f)
        if not r.is_zero:
            return mult
        p, mult = q, mult + 1
    return mult


def _ord_of(g: CurveFunction, P: CurvePoint, precision=16, max_precision=256) -> int:
    """ord_P of g by series, with automatic precision doubling."""
    from .errors import PrecisionExhausted

    prec = precision
    while True:
        try:
            chart = branch_expand(g.curve, P, prec)
            num, den = series_of_function(g, chart)
            return num.valuation() - den.valuation()
        except PrecisionExhausted:
            if prec >= max_precision:
                raise
            prec *= 2


def _minimal_polynomial(x0: FieldElement) -> Polynomial:
    """Monic minimal polynomial of x0 over Q (degree 1 or 2)."""
    if x0.is_rational:
        return Polynomial((-x0.a, FE_ONE))
    trace = 2 * x0.a
    norm = x0.norm()
    return Polynomial((FieldElement(norm), FieldElement(-trace), FE_ONE))


def solve_zeros(g: CurveFunction) -> FiberData:
    """All points with ord_P(g) > 0, plus symbolic unresolved factors.

    Candidates are the roots of the norm of g's numerator (a point where
    u + v*y vanishes shares its x with one), with O checked separately.
    For an unresolved irreducible factor f with multiplicity m in the norm
    and multiplicity k in the denominator w:

    * k = 0: the points above f carry total ramification m * deg(f);
    * m <= k: every such point has ord(num) <= m < ord(den), so nothing
      lands in this fiber;
    * 0 < k < m: the split cannot be decided without resolving -- the
      factor is flagged ambiguous with its maximum possible contribution.
    """
    curve = g.curve
    if g.is_constant:
        raise ConstantFunction("fibers of a constant function")
    data = FiberData()
    norm = _norm_polynomial(curve, g.u, g.v)
    if norm.is_zero:
        raise AssertionError("norm of a nonzero function vanished")
    roots, unresolved = factor_deg_le2(norm)

    def consider(P: CurvePoint):
        if P in data.points:
            return
        num_val = g.u.eval_fe(P.x) + g.v.eval_fe(P.x) * P.y
        den_val = g.w.eval_fe(P.x)
        if not num_val.is_zero and not den_val.is_zero:
            return  # ord 0, generic point
        if not num_val.is_zero and den_val.is_zero:
            return  # pole, not a zero
        e = _ord_of(g, P)
        if e > 0:
            data.points[P] = e

    seen_quadratic: set = set()
    for x0, mult in roots:
        if x0.is_rational:
            for P in curve.points_above_x(x0):
                consider(P)
            continue
        key = (x0.a, abs(x0.b), x0.field.d)
        if key in seen_quadratic:
            continue
        seen_quadratic.add(key)
        pts = curve.points_above_x(x0) + curve.points_above_x(x0.conjugate())
        if pts:
            for P in pts:
                consider(P)
        else:
            # x is quadratic but y needs degree 4: keep the minimal polynomial
            unresolved.append((_minimal_polynomial(x0), mult))

    for factor, mult in unresolved:
        k = _factor_multiplicity(g.w, factor.monic())
        if k == 0:
            data.unresolved.append(UnresolvedFactor(factor, mult, mult * factor.degree))
        elif mult <= k:
            continue  # wholly swallowed by the pole divisor
        else:
            # contribution is the maximum possible; flagged so callers
            # never silently trust it
            data.unresolved.append(
                UnresolvedFactor(factor, mult, (mult - k) * factor.degree, ambiguous=True)
            )

    e_inf = _ord_of(g, INFINITY)
    if e_inf > 0:
        data.points[INFINITY] = e_inf
    return data


def fibers(pair: BelyiPair) -> dict[str, FiberData]:
    """The three fibers with ramification indices: B over 0, W over 1, F over inf."""
    beta = pair.map
    return {
        "B": solve_zeros(beta),
        "W": solve_zeros(beta - FE_ONE),
        "F": solve_zeros(beta.inverse()),
    }


def function_degree(beta: CurveFunction) -> int:
    """Degree of the map to the value line: sum of e_P over the zero fiber,
    cross-checked against the pole fiber."""
    if beta.is_constant:
        raise ConstantFunction("degree of a constant function")
    zeros = solve_zeros(beta)
    poles = solve_zeros(beta.inverse())
    if zeros.has_ambiguity or poles.has_ambiguity:
        raise UnresolvedFiber(
            "degree bookkeeping ambiguous",
            [u.factor for u in zeros.unresolved + poles.unresolved if u.ambiguous],
        )
    if zeros.total != poles.total:
        raise AssertionError(
            f"zero fiber total {zeros.total} != pole fiber total {poles.total}"
        )
    return zeros.total


def critical_points(pair: BelyiPair):
    """Points with ramification index >= 2, plus unresolved Jacobian factors.

    Finite candidates solve the Jacobian determinant
    df/dx * dbeta/dy - df/dy * dbeta/dx = 0 together with the curve;
    clearing w^2 turns the determinant into a polynomial s(x) + t(x)*y.
    Candidates where beta has a pole come from the pole fiber instead, and
    O is always tested directly.  Every returned point is confirmed by
    ram_index >= 2; unresolved factors are reported, not resolved.
    """
    E, beta = pair.curve, pair.map
    u, v, w = beta.u, beta.v, beta.w
    rhs, ylin = E.rhs_polynomial(), E.y_coeff_polynomial()
    # f_x = a1*y - rhs'(x), f_y = 2*y + ylin(x);
    # w^2 * dbeta/dx = (u' + v'y)w - (u + vy)w', w^2 * dbeta/dy = v*w
    A = u.derivative() * w - u * w.derivative()
    B = v.derivative() * w - v * w.derivative()
    s = -rhs.derivative() * v * w - (ylin * A + 2 * B * rhs)
    t = E.a1 * v * w - (2 * A - ylin * B)
    if s.is_zero and t.is_zero:
        raise AssertionError("Jacobian vanishes identically for a nonconstant map")

    found: dict[CurvePoint, int] = {}
    unresolved_factors: list[Polynomial] = []

    def consider(P: CurvePoint):
        if P in found:
            return
        e = ram_index(beta, P)
        if e >= 2:
            found[P] = e

    norm = _norm_polynomial(E, s, t)
    if norm.is_zero:
        # s + t*y vanishes on the whole curve: impossible for nonconstant beta
        raise AssertionError("Jacobian numerator is zero on the curve")
    if norm.degree > 0:
        roots, unresolved = factor_deg_le2(norm)
        seen_quadratic: set = set()
        for x0, _ in roots:
            if x0.is_rational:
                for P in E.points_above_x(x0):
                    consider(P)
                continue
            key = (x0.a, abs(x0.b), x0.field.d)
            if key in seen_quadratic:
                continue
            seen_quadratic.add(key)
            pts = E.points_above_x(x0) + E.points_above_x(x0.conjugate())
            if pts:
                for P in pts:
                    consider(P)
            else:
                unresolved_factors.append(_minimal_polynomial(x0))
        unresolved_factors.extend(f for f, _ in unresolved)

    # poles with e >= 2 are critical but invisible to the w-cleared Jacobian
    pole_fiber = solve_zeros(beta.inverse())
    for P, e in pole_fiber.points.items():
        if e >= 2 and P not in found:
            found[P] = e
    unresolved_factors.extend(
        uf.factor for uf in pole_fiber.unresolved if uf.factor not in unresolved_factors
    )
    consider(INFINITY)
    points = sorted(found, key=lambda P: P.sort_key())
    return points, unresolved_factors


@dataclass(frozen=True)
class BelyiCheck:
    """Tri-state result: status True/False/None (None = unknown)."""

    status: bool | None
    offending: tuple = ()  # (point, value) pairs with value outside {0, 1, inf}
    unresolved: tuple = ()

    def __bool__(self):
        return self.status is True


def is_belyi(pair: BelyiPair) -> BelyiCheck:
    """True iff every resolved critical value lies in {0, 1, inf}.

    Unresolved critical factors force an unknown (None) verdict: never
    claim Belyi-ness on partial data.
    """
    points, unresolved = critical_points(pair)
    offending = []
    for P in points:
        value = pair.map.eval(P)
        if is_inf(value) or value == FE_ZERO or value == FE_ONE:
            continue
        offending.append((P, value))
    if offending:
        return BelyiCheck(False, tuple(offending), tuple(unresolved))
    if unresolved:
        return BelyiCheck(None, (), tuple(unresolved))
    return BelyiCheck(True)


def subgroup_closure(curve: EllipticCurve, points, size_bound: int = 64):
    """Smallest subgroup containing the points, or None past size_bound."""
    closure = {INFINITY}
    closure.update(points)
    closure.update(curve.neg(P) for P in points)
    while True:
        new = set()
        members = sorted(closure, key=lambda P: P.sort_key())
        for P in members:
            for Q in members:
                R = curve.add(P, Q)
                if R not in closure:
                    new.add(R)
                    if len(closure) + len(new) > size_bound:
                        return None
        if not new:
            return members
        closure.update(new)


def group_structure(curve: EllipticCurve, closure) -> tuple[int, int]:
    """(m, n) with the group isomorphic to Z_m x Z_n, n | m, m the exponent.

    Verified by counting: for every divisor d of m the number of elements
    killed by [d] must equal gcd(d, m) * gcd(d, n).
    """
    points = list(closure)
    size = len(points)
    if INFINITY not in points:
        raise NotAGroup("closure does not contain O")
    orders = {}
    for P in points:
        o = curve.point_order(P, bound=size)
        if o is None:
            raise NotAGroup(f"{P} has order exceeding the set size")
        orders[P] = o
    m = 1
    for o in orders.values():
        m = lcm(m, o)
    if size % m:
        raise NotAGroup("exponent does not divide the order")
    n = size // m
    if m % n:
        raise NotAGroup(f"invariant factors ({m}, {n}) incompatible")
    for d in range(1, m + 1):
        if m % d:
            continue
        killed = sum(1 for P in points if curve.mul(d, P).is_infinity)
        if killed != gcd(d, m) * gcd(d, n):
            raise NotAGroup(f"order census fails at d = {d}")
    return m, n


def group_name(structure: tuple[int, int] | None) -> str | None:
    """Render (m, n) as the familiar 'Zm' / 'Zn x Zm' with the small factor first."""
    if structure is None:
        return None
    m, n = structure
    if n == 1:
        return f"Z{m}"
    return f"Z{n} x Z{m}"


@dataclass
class QuasiCriticalReport:
    """Everything the pipeline knows about one analyzed pair."""

    label: str
    degree: int
    fibers: dict[str, FiberData]
    belyi: BelyiCheck
    all_torsion: bool = False
    closure: list | None = None
    structure: tuple[int, int] | None = None

    @property
    def quasi_critical_points(self):
        pts = []
        for tag in FIBER_TAGS:
            pts.extend(self.fibers[tag].sorted_points())
        return pts

    @property
    def ramification_multiset(self) -> list[int]:
        return sorted(
            e for tag in FIBER_TAGS for e in self.fibers[tag].points.values()
        )

    @property
    def fully_resolved(self) -> bool:
        return all(self.fibers[tag].fully_resolved for tag in FIBER_TAGS)

    @property
    def group(self) -> str | None:
        return group_name(self.structure)

    def degree_identity_holds(self) -> bool:
        """Prop-style bookkeeping: equal e-sums per fiber, and when fully
        resolved the point count must equal the degree (genus-1 term 0)."""
        totals = [self.fibers[tag].total for tag in FIBER_TAGS]
        if any(t != self.degree for t in totals):
            return False
        if self.fully_resolved:
            count = sum(len(self.fibers[tag].points) for tag in FIBER_TAGS)
            return count == self.degree
        return True


def torsion_classify(
    curve: EllipticCurve, fiber_data: dict[str, FiberData], bound: int = 24
) -> bool:
    """Attach point orders to every resolved fiber point.

    Returns the all-torsion verdict: every resolved point has finite order
    within the bound and no fiber has unresolved factors.
    """
    all_torsion = all(fiber_data[tag].fully_resolved for tag in FIBER_TAGS)
    for tag in FIBER_TAGS:
        data = fiber_data[tag]
        for P in data.points:
            order = curve.point_order(P, bound)
            data.orders[P] = order
            if order is None:
                all_torsion = False
    return all_torsion


def analyze(
    pair: BelyiPair,
    torsion_bound: int = 24,
    closure_bound: int = 64,
    checkpoint=None,
) -> QuasiCriticalReport:
    """Full pipeline for one pair: fibers, Belyi check, torsion, closure.

    ``checkpoint`` is called between stages; a batch driver may raise
    from it to enforce a per-entry time budget.
    """

    def tick():
        if checkpoint is not None:
            checkpoint()

    fiber_data = fibers(pair)
    totals = {tag: fiber_data[tag].total for tag in FIBER_TAGS}
    degree = totals["B"]
    tick()
    belyi_check = is_belyi(pair)
    tick()
    all_torsion = torsion_classify(pair.curve, fiber_data, torsion_bound)
    tick()
    closure = None
    structure = None
    resolved_points = [
        P for tag in FIBER_TAGS for P in fiber_data[tag].points
    ]
    closure = subgroup_closure(pair.curve, resolved_points, closure_bound)
    if closure is not None:
        try:
            structure = group_structure(pair.curve, closure)
        except NotAGroup:
            structure = None
    return QuasiCriticalReport(
        label=pair.label,
        degree=degree,
        fibers=fiber_data,
        belyi=belyi_check,
        all_torsion=all_torsion,
        closure=closure,
        structure=structure,
    )


def decompose_verify(pair: BelyiPair, gamma, phi: CurveFunction) -> bool:
    """Check an imprimitivity witness: gamma dynamical and gamma(phi) = beta."""
    if isinstance(gamma, str):
        gamma = parse_scalar_map(gamma)
    if not isinstance(gamma, ScalarMap):
        raise TypeError("gamma must be a scalar map or its expression string")
    if not gamma.is_dynamical():
        return False
    return gamma.compose_curve(phi) == pair.map


def report_to_dict(report: QuasiCriticalReport) -> dict:
    """JSON-ready dictionary, deterministically ordered."""

    def point_str(P):
        return str(P)

    fibers_json = {}
    for tag in FIBER_TAGS:
        data = report.fibers[tag]
        fibers_json[tag] = [
            {
                "point": point_str(P),
                "e": data.points[P],
                "order": data.orders.get(P),
            }
            for P in data.sorted_points()
        ]
    unresolved_json = [
        {
            "fiber": tag,
            "factor": _poly_to_expr(u.factor, "x"),
            "multiplicity": u.multiplicity,
            "contribution": u.contribution,
            "ambiguous": u.ambiguous,
        }
        for tag in FIBER_TAGS
        for u in report.fibers[tag].unresolved
    ]
    belyi_status = report.belyi.status
    return {
        "label": report.label,
        "degree": report.degree,
        "fibers": fibers_json,
        "unresolved": unresolved_json,
        "is_belyi": belyi_status,
        "all_torsion": report.all_torsion,
        "group": report.group,
        "closure_size": None if report.closure is None else len(report.closure),
    }
