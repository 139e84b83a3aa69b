"""Long-Weierstrass elliptic curves with the exact chord-tangent group law.

Curves are y^2 + a1*x*y + a3*y = x^3 + a2*x^2 + a4*x + a6 over Q (the
group law itself works over any quadratic extension).  Points are plain
immutable values; the curve object owns all operations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import FieldMismatch, NotOnCurve, SingularCurve
from .numfield import BiquadraticElement, FE_ONE, FE_ZERO, FieldElement, Polynomial


@dataclass(frozen=True)
class CurvePoint:
    """Affine point (x, y) or the point at infinity O."""

    x: FieldElement | None = None
    y: FieldElement | None = None

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def sort_key(self):
        if self.is_infinity:
            return (1, (), ())
        return (0, self.x.sort_key(), self.y.sort_key())

    def __str__(self):
        if self.is_infinity:
            return "O"
        return f"({self.x}, {self.y})"

    def __repr__(self):
        return str(self)


INFINITY = CurvePoint()


def affine(x, y) -> CurvePoint:
    return CurvePoint(FieldElement.of(x), FieldElement.of(y))


class EllipticCurve:
    """Nonsingular long-Weierstrass curve with exact coefficients."""

    __slots__ = ("a1", "a2", "a3", "a4", "a6", "label")

    def __init__(self, a1=0, a2=0, a3=0, a4=0, a6=0, label: str = ""):
        for name, v in zip(("a1", "a2", "a3", "a4", "a6"), (a1, a2, a3, a4, a6)):
            object.__setattr__(self, name, FieldElement.of(v))
        object.__setattr__(self, "label", label)
        if self.discriminant().is_zero:
            raise SingularCurve(f"discriminant vanishes for {self}")

    def __setattr__(self, *args):
        raise AttributeError("EllipticCurve is immutable")

    @staticmethod
    def from_coeff_list(coeffs, label: str = "") -> EllipticCurve:
        a1, a2, a3, a4, a6 = coeffs
        return EllipticCurve(a1, a2, a3, a4, a6, label=label)

    def coefficients(self):
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    def __eq__(self, other):
        return isinstance(other, EllipticCurve) and self.coefficients() == other.coefficients()

    def __hash__(self):
        return hash(self.coefficients())

    def __str__(self):
        def term(c, t):
            return "" if c.is_zero else f" + ({c})*{t}"

        lhs = "y^2" + term(self.a1, "x*y") + term(self.a3, "y")
        rhs = "x^3" + term(self.a2, "x^2") + term(self.a4, "x") + (
            f" + ({self.a6})" if not self.a6.is_zero else ""
        )
        return f"{lhs} = {rhs}"

    def __repr__(self):
        return f"EllipticCurve[{self}]"

    # -- invariants -----------------------------------------------------

    def discriminant(self) -> FieldElement:
        a1, a2, a3, a4, a6 = self.coefficients()
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    @property
    def is_short_form(self) -> bool:
        return self.a1.is_zero and self.a2.is_zero and self.a3.is_zero

    def rhs_polynomial(self) -> Polynomial:
        """x^3 + a2 x^2 + a4 x + a6."""
        return Polynomial((self.a6, self.a4, self.a2, FE_ONE))

    def y_coeff_polynomial(self) -> Polynomial:
        """a1 x + a3, the coefficient of y in the curve equation."""
        return Polynomial((self.a3, self.a1))

    def equation_at(self, x: FieldElement, y: FieldElement) -> FieldElement:
        """y^2 + a1 x y + a3 y - (x^3 + a2 x^2 + a4 x + a6), zero on the curve."""
        return y * y + self.y_coeff_polynomial().eval_fe(x) * y - self.rhs_polynomial().eval_fe(x)

    # -- points ----------------------------------------------------------

    def on_curve(self, P: CurvePoint) -> bool:
        if P.is_infinity:
            return True
        return self.equation_at(P.x, P.y).is_zero

    def _require(self, P: CurvePoint):
        if not self.on_curve(P):
            raise NotOnCurve(f"{P} is not on {self}")

    def points_above_x(self, x0: FieldElement) -> list[CurvePoint]:
        """Points of the curve with the given x, within degree <= 2 fields.

        May be empty when the y-coordinates need a degree-4 field; callers
        treat that as an unresolved fiber.
        """
        from .numfield import sqrt_in_some_field

        ylin = self.y_coeff_polynomial().eval_fe(x0)
        disc = ylin * ylin + 4 * self.rhs_polynomial().eval_fe(x0)
        s = sqrt_in_some_field(disc)
        if s is None:
            return []
        if s.is_zero:
            return [CurvePoint(x0, -ylin / 2)]
        return [CurvePoint(x0, (-ylin + s) / 2), CurvePoint(x0, (-ylin - s) / 2)]

    # -- group law ---------------------------------------------------------

    def neg(self, P: CurvePoint) -> CurvePoint:
        if P.is_infinity:
            return P
        return CurvePoint(P.x, -P.y - self.a1 * P.x - self.a3)

    def add(self, P: CurvePoint, Q: CurvePoint) -> CurvePoint:
        self._require(P)
        self._require(Q)
        if P.is_infinity:
            return Q
        if Q.is_infinity:
            return P
        try:
            return self._add_affine(P, Q)
        except FieldMismatch:
            # coordinates from two different quadratic fields: run the same
            # formulas in the biquadratic compositum and project back
            return self._add_biquadratic(P, Q)

    def _add_affine(self, P: CurvePoint, Q: CurvePoint) -> CurvePoint:
        if P.x == Q.x and Q.y == (-P.y - self.a1 * P.x - self.a3):
            return INFINITY
        if P.x == Q.x:
            # tangent line at P = Q
            den = 2 * P.y + self.a1 * P.x + self.a3
            lam = (3 * P.x * P.x + 2 * self.a2 * P.x + self.a4 - self.a1 * P.y) / den
            nu = (-(P.x ** 3) + self.a4 * P.x + 2 * self.a6 - self.a3 * P.y) / den
        else:
            lam = (Q.y - P.y) / (Q.x - P.x)
            nu = (P.y * Q.x - Q.y * P.x) / (Q.x - P.x)
        x3 = lam * lam + self.a1 * lam - self.a2 - P.x - Q.x
        y3 = -(lam + self.a1) * x3 - nu - self.a3
        return CurvePoint(x3, y3)

    def _add_biquadratic(self, P: CurvePoint, Q: CurvePoint) -> CurvePoint:
        fields = []
        for coord in (P.x, P.y, Q.x, Q.y):
            if not coord.field.is_rational and coord.field.d not in fields:
                fields.append(coord.field.d)
        if len(fields) != 2:
            raise FieldMismatch(f"cannot add {P} and {Q}: more than two radicals")
        d1, d2 = fields

        def lift(fe):
            return BiquadraticElement.lift(fe, d1, d2)

        x1, y1, x2, y2 = lift(P.x), lift(P.y), lift(Q.x), lift(Q.y)
        a1, a2c, a3, a4, a6 = (lift(c) for c in self.coefficients())
        # the mismatch guarantees P != +-Q, so the chord is honest
        lam = (y2 - y1) / (x2 - x1)
        nu = (y1 * x2 - y2 * x1) / (x2 - x1)
        x3 = lam * lam + a1 * lam - a2c - x1 - x2
        y3 = -(lam + a1) * x3 - nu - a3
        return CurvePoint(x3.project(), y3.project())

    def sub(self, P: CurvePoint, Q: CurvePoint) -> CurvePoint:
        return self.add(P, self.neg(Q))

    def mul(self, n: int, P: CurvePoint) -> CurvePoint:
        """[n]P by double-and-add; [0]P = O and [-n]P = -[n]P."""
        self._require(P)
        if n < 0:
            return self.mul(-n, self.neg(P))
        result, base = INFINITY, P
        while n:
            if n & 1:
                result = self.add(result, base)
            base = self.add(base, base)
            n >>= 1
        return result

    def point_order(self, P: CurvePoint, bound: int = 24) -> int | None:
        """Least n <= bound with [n]P = O, or None if the order exceeds bound."""
        self._require(P)
        if bound < 1:
            raise ValueError("bound must be >= 1")
        acc = P
        for n in range(1, bound + 1):
            if acc.is_infinity:
                return n
            acc = self.add(acc, P)
        return None


def curve_to_json(E: EllipticCurve) -> dict:
    out = {name: str(getattr(E, name).rational_value()) for name in ("a1", "a2", "a3", "a4", "a6")}
    out["label"] = E.label
    return out


def curve_from_json(data: dict) -> EllipticCurve:
    return EllipticCurve(
        *(Fraction(data[name]) for name in ("a1", "a2", "a3", "a4", "a6")),
        label=data.get("label", ""),
    )
