"""Rational functions on an elliptic curve, in canonical form.

Every function on E is written (u(x) + v(x)*y) / w(x) with w y-free:
a y in the denominator is cleared by multiplying through by the conjugate
s + t*ybar, where ybar = -y - a1*x - a3 is the other root of the curve
equation viewed as a quadratic in y.  The representation is then reduced
(gcd(u, v, w) = 1) and scalar-normalized, which makes it a true normal
form: two functions are equal iff their components are identical.

The module also provides :class:`ScalarMap` -- rational self-maps of the
value line, used for dynamical factors gamma -- and a small expression
grammar over x, y, z, integer literals, sqrt(n), and + - * / ^.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .curve import CurvePoint, EllipticCurve
from .errors import (
    ConstantFunction,
    CurveMismatch,
    NotOnCurve,
    ParseError,
    ZeroDenominator,
    ZeroDivision,
)
from .localseries import branch_expand, series_of_function
from .numfield import (
    FE_ONE,
    FE_ZERO,
    FieldElement,
    Polynomial,
    primitive_scale,
)


class _InfinityType:
    """The point at infinity of the value line."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "inf"


INF = _InfinityType()


def is_inf(value) -> bool:
    return value is INF


class CurveFunction:
    """(u(x) + v(x)*y) / w(x) on a fixed curve, in normal form."""

    __slots__ = ("curve", "u", "v", "w")

    def __init__(self, curve, u, v, w):
        object.__setattr__(self, "curve", curve)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "w", w)

    def __setattr__(self, *args):
        raise AttributeError("CurveFunction is immutable")

    @classmethod
    def make(cls, curve: EllipticCurve, u: Polynomial, v: Polynomial, w: Polynomial) -> CurveFunction:
        """Canonicalize: gcd-reduce, make w monic, then rescale so all
        coefficient numerators/denominators are integral with gcd 1."""
        if w.is_zero:
            raise ZeroDenominator("denominator is identically zero")
        g = Polynomial.gcd(Polynomial.gcd(u, v), w)
        if g.degree > 0:
            u, v, w = u // g, v // g, w // g
        inv = w.leading.inverse()
        u, v, w = u * inv, v * inv, w * inv
        fracs = [f for poly in (u, v, w) for c in poly.coeffs for f in (c.a, c.b)]
        r = primitive_scale(fracs)
        return cls(curve, u * r, v * r, w * r)

    # -- constructors -----------------------------------------------------

    @staticmethod
    def coordinate_x(curve) -> CurveFunction:
        return CurveFunction.make(curve, Polynomial.x(), Polynomial.zero(), Polynomial.one())

    @staticmethod
    def coordinate_y(curve) -> CurveFunction:
        return CurveFunction.make(curve, Polynomial.zero(), Polynomial.one(), Polynomial.one())

    @staticmethod
    def constant(curve, c) -> CurveFunction:
        return CurveFunction.make(curve, Polynomial.constant(c), Polynomial.zero(), Polynomial.one())

    # -- predicates ---------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.u.is_zero and self.v.is_zero

    @property
    def is_constant(self) -> bool:
        if not self.v.is_zero:
            return False
        if self.u.is_zero:
            return True
        return (self.u % self.w).is_zero and (self.u // self.w).degree == 0

    def constant_value(self) -> FieldElement:
        if not self.is_constant:
            raise ConstantFunction(f"{self} is not constant")
        if self.u.is_zero:
            return FE_ZERO
        return (self.u // self.w).coeff(0)

    def __eq__(self, other):
        if not isinstance(other, CurveFunction):
            return NotImplemented
        return (
            self.curve == other.curve
            and self.u == other.u
            and self.v == other.v
            and self.w == other.w
        )

    def __hash__(self):
        return hash((self.curve, self.u, self.v, self.w))

    # -- arithmetic -----------------------------------------------------------

    def _coerce(self, other) -> CurveFunction:
        if isinstance(other, CurveFunction):
            if other.curve != self.curve:
                raise CurveMismatch("functions live on different curves")
            return other
        return CurveFunction.constant(self.curve, other)

    def _mul_numerators(self, o: CurveFunction):
        """(u1 + v1 y)(u2 + v2 y) reduced by y^2 = rhs - (a1 x + a3) y."""
        rhs = self.curve.rhs_polynomial()
        ylin = self.curve.y_coeff_polynomial()
        u = self.u * o.u + self.v * o.v * rhs
        v = self.u * o.v + self.v * o.u - self.v * o.v * ylin
        return u, v

    def __add__(self, other):
        o = self._coerce(other)
        return CurveFunction.make(
            self.curve, self.u * o.w + o.u * self.w, self.v * o.w + o.v * self.w, self.w * o.w
        )

    __radd__ = __add__

    def __neg__(self):
        return CurveFunction(self.curve, -self.u, -self.v, self.w)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        u, v = self._mul_numerators(o)
        return CurveFunction.make(self.curve, u, v, self.w * o.w)

    __rmul__ = __mul__

    def inverse(self) -> CurveFunction:
        """w * conj(u + v y) / norm(u + v y); the new denominator is y-free."""
        if self.is_zero:
            raise ZeroDivision("inverting the zero function")
        rhs = self.curve.rhs_polynomial()
        ylin = self.curve.y_coeff_polynomial()
        norm = self.u * self.u - self.u * self.v * ylin - self.v * self.v * rhs
        conj_u = self.u - self.v * ylin
        conj_v = -self.v
        return CurveFunction.make(self.curve, self.w * conj_u, self.w * conj_v, norm)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = CurveFunction.constant(self.curve, FE_ONE)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- evaluation --------------------------------------------------------------

    def eval(self, P: CurvePoint):
        """Value at P on the extended value line (FieldElement or INF)."""
        if not self.curve.on_curve(P):
            raise NotOnCurve(f"{P} not on {self.curve}")
        if P.is_infinity:
            return self._eval_by_series(P)
        wx = self.w.eval_fe(P.x)
        num = self.u.eval_fe(P.x) + self.v.eval_fe(P.x) * P.y
        if not wx.is_zero:
            return num / wx
        if not num.is_zero:
            return INF
        return self._eval_by_series(P)

    def _eval_by_series(self, P: CurvePoint):
        """Resolve 0/0 (or the value at O) by comparing series valuations."""
        from .localseries import DEFAULT_PRECISION, MAX_PRECISION
        from .errors import PrecisionExhausted

        prec = DEFAULT_PRECISION
        while True:
            try:
                chart = branch_expand(self.curve, P, prec)
                num, den = series_of_function(self, chart)
                o = num.valuation() - den.valuation()
                if o > 0:
                    return FE_ZERO
                if o < 0:
                    return INF
                return num.leading() / den.leading()
            except PrecisionExhausted:
                if prec >= MAX_PRECISION:
                    raise
                prec *= 2

    def degree(self) -> int:
        """Degree of the map to the value line, via fiber sums over 0 and inf."""
        from .belyi import function_degree

        return function_degree(self)

    # -- display ------------------------------------------------------------------

    def to_expr(self) -> str:
        num_parts = []
        if not self.u.is_zero:
            num_parts.append(_poly_to_expr(self.u, "x"))
        if not self.v.is_zero:
            num_parts.append(f"({_poly_to_expr(self.v, 'x')})*y")
        num = " + ".join(num_parts) if num_parts else "0"
        if self.w == Polynomial.one():
            return num
        return f"({num})/({_poly_to_expr(self.w, 'x')})"

    def __str__(self):
        return self.to_expr()

    def __repr__(self):
        return f"CurveFunction[{self}]"


def equal_up_to_constant(f: CurveFunction, g: CurveFunction) -> FieldElement | None:
    """k with f = k*g, if one exists (both nonzero, same curve)."""
    if f.curve != g.curve:
        raise CurveMismatch("functions live on different curves")
    if f.is_zero or g.is_zero:
        raise ZeroDivision("constant-ratio test needs nonzero functions")
    pairs = [(f.u * g.w, g.u * f.w), (f.v * g.w, g.v * f.w)]
    k = None
    for a, b in pairs:
        if b.is_zero:
            if not a.is_zero:
                return None
            continue
        q, r = divmod(a, b)
        if not r.is_zero or q.degree != 0:
            return None
        ratio = q.coeff(0)
        if k is None:
            k = ratio
        elif k != ratio:
            return None
    return k


def poly_on_function(p: Polynomial, f: CurveFunction) -> CurveFunction:
    """p(f) by Horner in the function field of f's curve."""
    acc = CurveFunction.constant(f.curve, FE_ZERO)
    for c in reversed(p.coeffs):
        acc = acc * f + c
    return acc


# ---------------------------------------------------------------------------
# rational self-maps of the value line (dynamical factors)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ScalarMap:
    """num(z)/den(z) with gcd(num, den) = 1."""

    num: Polynomial
    den: Polynomial

    @staticmethod
    def make(num: Polynomial, den: Polynomial) -> ScalarMap:
        if den.is_zero:
            raise ZeroDenominator("scalar map with zero denominator")
        g = Polynomial.gcd(num, den)
        if g.degree > 0:
            num, den = num // g, den // g
        inv = den.leading.inverse()
        num, den = num * inv, den * inv
        fracs = [f for poly in (num, den) for c in poly.coeffs for f in (c.a, c.b)]
        r = primitive_scale(fracs)
        return ScalarMap(num * r, den * r)

    @property
    def is_constant(self) -> bool:
        return self.num.degree <= 0 and self.den.degree <= 0

    def eval(self, value):
        """Value at a point of the extended line."""
        if is_inf(value):
            dn, dd = self.num.degree, self.den.degree
            if dn > dd:
                return INF
            if dn < dd:
                return FE_ZERO
            return self.num.leading / self.den.leading
        value = FieldElement.of(value)
        nv, dv = self.num.eval_fe(value), self.den.eval_fe(value)
        if dv.is_zero:
            return INF  # num(value) != 0 since gcd(num, den) = 1
        return nv / dv

    def is_dynamical(self) -> bool:
        """gamma({0, 1, inf}) contained in {0, 1, inf}."""
        targets = (FE_ZERO, FE_ONE, INF)
        for q in targets:
            image = self.eval(q)
            if not any(image is t or image == t for t in targets):
                return False
        return True

    def compose_curve(self, f: CurveFunction) -> CurveFunction:
        """gamma(f) as a function on f's curve."""
        num = poly_on_function(self.num, f)
        den = poly_on_function(self.den, f)
        if den.is_zero:
            raise ZeroDivision("composition hit a zero denominator")
        return num / den

    def to_expr(self) -> str:
        num = _poly_to_expr(self.num, "z")
        if self.den == Polynomial.one():
            return num
        return f"({num})/({_poly_to_expr(self.den, 'z')})"

    def __str__(self):
        return self.to_expr()


# ---------------------------------------------------------------------------
# expression grammar: x, y, z, integers, sqrt(int), + - * / ^, parentheses
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_]+)|(?P<op>[-+*/^()]))")


def _tokenize(expr: str):
    tokens, pos = [], 0
    while pos < len(expr):
        m = _TOKEN.match(expr, pos)
        if not m or m.end() == pos:
            if expr[pos:].strip():
                raise ParseError(f"bad character {expr[pos]!r} in {expr!r}")
            break
        if m.group("num"):
            tokens.append(("num", int(m.group("num"))))
        elif m.group("name"):
            tokens.append(("name", m.group("name")))
        else:
            tokens.append(("op", m.group("op")))
        pos = m.end()
    return tokens


class _Parser:
    """Recursive descent over the shared grammar.

    env maps variable names to values of the target algebra; const wraps a
    FieldElement into that algebra.  Precedence: ^ over unary - over * /
    over + -; ^ is right-associative with literal nonnegative exponents.
    """

    def __init__(self, tokens, env, const):
        self.tokens = tokens
        self.pos = 0
        self.env = env
        self.const = const

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expect_op(self, op):
        kind, val = self.take()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r}, got {val!r}")

    def parse(self):
        value = self.expr()
        if self.pos != len(self.tokens):
            raise ParseError(f"trailing tokens at {self.tokens[self.pos:]}")
        return value

    def expr(self):
        value = self.term()
        while self.peek() == ("op", "+") or self.peek() == ("op", "-"):
            _, op = self.take()
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while self.peek() == ("op", "*") or self.peek() == ("op", "/"):
            _, op = self.take()
            rhs = self.unary()
            value = value * rhs if op == "*" else value / rhs
        return value

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            return -self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, val = self.take()
            if kind != "num":
                raise ParseError("exponent must be a nonnegative integer literal")
            return base ** val
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return self.const(FieldElement.of(val))
        if kind == "name":
            if val == "sqrt":
                self.expect_op("(")
                sign = 1
                if self.peek() == ("op", "-"):
                    self.take()
                    sign = -1
                nkind, nval = self.take()
                if nkind != "num":
                    raise ParseError("sqrt takes an integer literal")
                self.expect_op(")")
                return self.const(FieldElement.sqrt_of_int(sign * nval))
            if val in self.env:
                return self.env[val]
            raise ParseError(f"unknown name {val!r}")
        if (kind, val) == ("op", "("):
            inner = self.expr()
            self.expect_op(")")
            return inner
        raise ParseError(f"unexpected token {val!r}")


def parse_curve_function(expr: str, curve: EllipticCurve) -> CurveFunction:
    """Parse an expression in x, y into a canonical function on the curve."""
    env = {
        "x": CurveFunction.coordinate_x(curve),
        "y": CurveFunction.coordinate_y(curve),
    }
    parser = _Parser(_tokenize(expr), env, lambda c: CurveFunction.constant(curve, c))
    value = parser.parse()
    if not isinstance(value, CurveFunction):
        value = CurveFunction.constant(curve, value)
    return value


class _ZPoly:
    """Helper algebra for parsing scalar maps: a rational function in z."""

    __slots__ = ("num", "den")

    def __init__(self, num, den):
        self.num = num
        self.den = den

    def __add__(self, o):
        return _ZPoly(self.num * o.den + o.num * self.den, self.den * o.den)

    def __sub__(self, o):
        return _ZPoly(self.num * o.den - o.num * self.den, self.den * o.den)

    def __neg__(self):
        return _ZPoly(-self.num, self.den)

    def __mul__(self, o):
        return _ZPoly(self.num * o.num, self.den * o.den)

    def __truediv__(self, o):
        if o.num.is_zero:
            raise ZeroDivision("division by zero in scalar-map expression")
        return _ZPoly(self.num * o.den, self.den * o.num)

    def __pow__(self, n):
        return _ZPoly(self.num ** n, self.den ** n)


def parse_scalar_map(expr: str) -> ScalarMap:
    """Parse an expression in z into a rational self-map of the line."""
    env = {"z": _ZPoly(Polynomial.x(), Polynomial.one())}
    parser = _Parser(_tokenize(expr), env, lambda c: _ZPoly(Polynomial.constant(c), Polynomial.one()))
    value = parser.parse()
    return ScalarMap.make(value.num, value.den)


def _fe_to_expr(c: FieldElement) -> str:
    return str(c)


def _poly_to_expr(p: Polynomial, var: str) -> str:
    if p.is_zero:
        return "0"
    parts = []
    for i in range(p.degree, -1, -1):
        c = p.coeff(i)
        if c.is_zero:
            continue
        cs = f"({_fe_to_expr(c)})"
        if i == 0:
            parts.append(cs)
        elif i == 1:
            parts.append(f"{cs}*{var}")
        else:
            parts.append(f"{cs}*{var}^{i}")
    return " + ".join(parts)
