"""Truncated Laurent series and local branch expansion at a curve point.

A :class:`PowerSeries` is exact in its coefficients but truncated in its
exponents: it represents its value modulo O(t^precision).  A
:class:`LocalChart` parametrizes the curve near a point by a uniformizer t,
giving x(t) and y(t) as series; orders of vanishing (ord_P) of rational
functions on the curve are then series valuations after composition.

Charts come in three kinds:

* ``x-shift``  -- df/dy != 0 at P: t = x - x0, y(t) solved by Newton lifting;
* ``y-shift``  -- df/dy = 0 but df/dx != 0: t = y - y0, x(t) solved likewise;
* ``at-infinity`` -- P = O: t = x/y, with 1/y solved iteratively from the
  curve equation, giving ord(x) = -2 and ord(y) = -3.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .curve import INFINITY, CurvePoint, EllipticCurve
from .errors import (
    DivisionByZeroSeries,
    NotOnCurve,
    PrecisionExhausted,
    SingularPoint,
)
from .numfield import FE_ONE, FE_ZERO, FieldElement, Polynomial

DEFAULT_PRECISION = 16
MAX_PRECISION = 256


class PowerSeries:
    """Laurent series sum c_i t^(val+i), trusted modulo O(t^prec).

    Invariant: the first stored coefficient is nonzero (the valuation is
    honest) and ``val + len(coeffs) <= prec``.  A series that is zero to
    its precision stores no coefficients and has ``val = prec``.
    """

    __slots__ = ("val", "coeffs", "prec")

    def __init__(self, val: int, coeffs, prec: int):
        cs = [FieldElement.of(c) for c in coeffs]
        # strip leading zeros (raising val) and trailing overflow
        while cs and cs[0].is_zero:
            cs.pop(0)
            val += 1
        if len(cs) > prec - val:
            cs = cs[: prec - val]
        while cs and cs[-1].is_zero:
            cs.pop()
        if not cs:
            val = prec
        object.__setattr__(self, "val", val)
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "prec", prec)

    def __setattr__(self, *args):
        raise AttributeError("PowerSeries is immutable")

    @staticmethod
    def zero(prec: int) -> PowerSeries:
        return PowerSeries(prec, (), prec)

    @staticmethod
    def constant(c, prec: int) -> PowerSeries:
        return PowerSeries(0, (FieldElement.of(c),), prec)

    @staticmethod
    def t_power(k: int, prec: int) -> PowerSeries:
        return PowerSeries(k, (FE_ONE,), prec)

    @property
    def is_zero_to_prec(self) -> bool:
        return not self.coeffs

    def valuation(self) -> int:
        """Exponent of the first nonzero term; raises if zero to precision."""
        if self.is_zero_to_prec:
            raise PrecisionExhausted(f"series vanishes modulo O(t^{self.prec})")
        return self.val

    def coeff(self, k: int) -> FieldElement:
        i = k - self.val
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else FE_ZERO

    def leading(self) -> FieldElement:
        return self.coeffs[0] if self.coeffs else FE_ZERO

    def truncate(self, prec: int) -> PowerSeries:
        if prec >= self.prec:
            return self
        return PowerSeries(self.val, self.coeffs, prec)

    # -- ring operations -------------------------------------------------

    def __add__(self, other: PowerSeries) -> PowerSeries:
        prec = min(self.prec, other.prec)
        lo = min(self.val, other.val)
        out = [self.coeff(k) + other.coeff(k) for k in range(lo, prec)]
        return PowerSeries(lo, out, prec)

    def __neg__(self):
        return PowerSeries(self.val, [-c for c in self.coeffs], self.prec)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (FieldElement, int)):
            fe = FieldElement.of(other)
            if fe.is_zero:
                return PowerSeries.zero(self.prec)
            return PowerSeries(self.val, [c * fe for c in self.coeffs], self.prec)
        # precision window of a product: each factor's uncertainty is shifted
        # by the other's valuation
        prec = min(self.prec + other.val, other.prec + self.val)
        if self.is_zero_to_prec or other.is_zero_to_prec:
            return PowerSeries.zero(prec)
        n = prec - (self.val + other.val)
        out = [FE_ZERO] * max(n, 0)
        for i, ci in enumerate(self.coeffs):
            if i >= n:
                break
            for j, cj in enumerate(other.coeffs):
                if i + j >= n:
                    break
                out[i + j] = out[i + j] + ci * cj
        return PowerSeries(self.val + other.val, out, prec)

    __rmul__ = __mul__

    def inverse(self) -> PowerSeries:
        if self.is_zero_to_prec:
            raise DivisionByZeroSeries("inverting a series that is zero to precision")
        # write self = c0 t^v (1 + u), invert the unit by iteration
        n = self.prec - self.val  # number of known unit coefficients
        c0 = self.coeffs[0]
        inv0 = c0.inverse()
        unit = [c * inv0 for c in self.coeffs]  # 1, u1, u2, ...
        out = [FE_ONE] + [FE_ZERO] * (n - 1)
        for k in range(1, n):
            acc = FE_ZERO
            for j in range(1, min(k, len(unit) - 1) + 1):
                acc = acc + unit[j] * out[k - j]
            out[k] = -acc
        return PowerSeries(-self.val, [c * inv0 for c in out], -self.val + n)

    def __truediv__(self, other: PowerSeries) -> PowerSeries:
        return self * other.inverse()

    def __pow__(self, n: int) -> PowerSeries:
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return PowerSeries.constant(FE_ONE, self.prec)
        result = self
        for _ in range(n - 1):
            result = result * self
        return result

    def __str__(self):
        if self.is_zero_to_prec:
            return f"O(t^{self.prec})"
        terms = [f"({c})*t^{self.val + i}" for i, c in enumerate(self.coeffs) if not c.is_zero]
        return " + ".join(terms) + f" + O(t^{self.prec})"

    def __repr__(self):
        return str(self)


def poly_on_series(p: Polynomial, s: PowerSeries) -> PowerSeries:
    """Evaluate a polynomial at a series by Horner's rule.

    Constants are exact but carried at the precision of s: the product
    rule then yields a (conservative) window of roughly
    s.prec + deg(p) * min(val(s), 0).
    """
    if p.is_zero:
        return PowerSeries.zero(s.prec)
    acc = PowerSeries.constant(p.coeffs[-1], s.prec)
    for c in reversed(p.coeffs[:-1]):
        acc = acc * s + PowerSeries.constant(c, s.prec)
    return acc


@dataclass(frozen=True)
class LocalChart:
    """Series parametrization (x(t), y(t)) of the curve near a point."""

    curve: EllipticCurve
    point: CurvePoint
    kind: str  # "x-shift" | "y-shift" | "at-infinity"
    x_series: PowerSeries
    y_series: PowerSeries

    def equation_residual(self) -> PowerSeries:
        """Curve equation composed with the chart; zero to precision when valid."""
        E = self.curve
        x, y = self.x_series, self.y_series
        ylin = poly_on_series(E.y_coeff_polynomial(), x)
        rhs = poly_on_series(E.rhs_polynomial(), x)
        return y * y + ylin * y - rhs


def _solve_series(curve, fixed_series, solve_for, start_value, prec):
    """Newton-lift the curve equation for one coordinate as a series.

    ``solve_for`` is "y" (x given) or "x" (y given).  Requires the relevant
    partial derivative to be a unit at the center, which the chart-kind
    dispatch guarantees.
    """

    def equation(xs, ys):
        ylin = poly_on_series(curve.y_coeff_polynomial(), xs)
        rhs = poly_on_series(curve.rhs_polynomial(), xs)
        return ys * ys + ylin * ys - rhs

    guess = PowerSeries.constant(start_value, prec)
    for _ in range(prec.bit_length() + 2):
        if solve_for == "y":
            f = equation(fixed_series, guess)
            ylin = poly_on_series(curve.y_coeff_polynomial(), fixed_series)
            df = 2 * guess + ylin
        else:
            f = equation(guess, fixed_series)
            rhs_d = poly_on_series(curve.rhs_polynomial().derivative(), guess)
            dylin = poly_on_series(curve.y_coeff_polynomial().derivative(), guess)
            df = dylin * fixed_series - rhs_d
        if f.is_zero_to_prec:
            break
        guess = guess - f / df
    return guess.truncate(prec)


@lru_cache(maxsize=4096)
def branch_expand(E: EllipticCurve, P: CurvePoint, precision: int = DEFAULT_PRECISION) -> LocalChart:
    """Local chart at P with the uniformizer having ord 1.

    precision is the exponent cutoff of the produced series (at least 4).
    Charts are immutable and cached: the chart at O in particular is
    reused by every function evaluated there.
    """
    if precision < 4:
        raise ValueError("precision must be >= 4")
    if not E.on_curve(P):
        raise NotOnCurve(f"{P} not on {E}")

    if P.is_infinity:
        return _expand_at_infinity(E, precision)

    # partials of f = y^2 + a1 x y + a3 y - rhs(x)
    df_dy = 2 * P.y + E.a1 * P.x + E.a3
    df_dx = E.a1 * P.y - E.rhs_polynomial().derivative().eval_fe(P.x)
    t = PowerSeries.t_power(1, precision)
    if not df_dy.is_zero:
        xs = PowerSeries.constant(P.x, precision) + t
        ys = _solve_series(E, xs, "y", P.y, precision)
        return LocalChart(E, P, "x-shift", xs, ys)
    if not df_dx.is_zero:
        ys = PowerSeries.constant(P.y, precision) + t
        xs = _solve_series(E, ys, "x", P.x, precision)
        return LocalChart(E, P, "y-shift", xs, ys)
    raise SingularPoint(f"both partials vanish at {P}")


def _expand_at_infinity(E: EllipticCurve, precision: int) -> LocalChart:
    """Chart at O with t = x/y.

    Writing s = 1/y, the curve equation becomes
    s = t^3 - a1 t s + a2 t^2 s - a3 s^2 + a4 t s^2 + a6 s^3,
    solved by iteration from s = t^3.  Then x = t/s has ord -2 and
    y = 1/s has ord -3.
    """
    # work at higher internal precision: the divisions below cost 6 exponents
    work = precision + 8
    t = PowerSeries.t_power(1, work)
    a1, a2, a3, a4, a6 = (PowerSeries.constant(c, work) for c in E.coefficients())
    s = t ** 3
    for _ in range(work):
        s_new = (
            t ** 3
            - a1 * t * s
            + a2 * (t * t) * s
            - a3 * (s * s)
            + a4 * t * (s * s)
            + a6 * (s * s * s)
        )
        s_new = s_new.truncate(work)
        if s_new.coeffs == s.coeffs and s_new.val == s.val:
            s = s_new
            break
        s = s_new
    xs = (t / s).truncate(precision)
    ys = s.inverse().truncate(precision)
    return LocalChart(E, INFINITY, "at-infinity", xs, ys)


def series_of_function(beta, chart: LocalChart) -> tuple[PowerSeries, PowerSeries]:
    """Numerator and denominator series of a curve function in a chart.

    ``beta`` is anything with the canonical (u, v, w) shape of a curve
    function: u(x) + v(x) y over w(x).
    """
    num = poly_on_series(beta.u, chart.x_series) + poly_on_series(beta.v, chart.x_series) * chart.y_series
    den = poly_on_series(beta.w, chart.x_series)
    return num, den


def ord_at(beta, chart: LocalChart) -> int:
    """ord of a curve function at the chart's point (negative at poles)."""
    num, den = series_of_function(beta, chart)
    return num.valuation() - den.valuation()


def ord_at_point(beta, P: CurvePoint, start_precision: int = DEFAULT_PRECISION) -> int:
    """ord_P(beta) with automatic precision doubling up to MAX_PRECISION."""
    prec = start_precision
    while True:
        try:
            return ord_at(beta, branch_expand(beta.curve, P, prec))
        except PrecisionExhausted:
            if prec >= MAX_PRECISION:
                raise
            prec *= 2


def ram_index(beta, P: CurvePoint, start_precision: int = DEFAULT_PRECISION) -> int:
    """Ramification index of beta at P: ord of beta - beta(P), pole order at poles."""
    prec = start_precision
    while True:
        try:
            chart = branch_expand(beta.curve, P, prec)
            num, den = series_of_function(beta, chart)
            o = num.valuation() - den.valuation()
            if o < 0:
                return -o
            if o > 0:
                return o
            # finite nonzero value: subtract it and take ord again
            value = num.leading() / den.leading()
            shifted = num - den * value
            return shifted.valuation() - den.valuation()
        except PrecisionExhausted:
            if prec >= MAX_PRECISION:
                raise
            prec *= 2
