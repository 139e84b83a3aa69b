"""Exact arithmetic over the rationals and quadratic extensions Q(sqrt(d)).

Everything is built on :class:`fractions.Fraction`; there is no floating
point anywhere.  Number fields are restricted to degree <= 2: an element
is ``a + b*sqrt(d)`` with rational a, b and squarefree d.  Polynomials are
univariate with field-element coefficients, and :func:`factor_deg_le2`
resolves rational and quadratic roots exactly, handing back irreducible
factors of degree >= 3 unresolved.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt

import sympy

from .errors import DivisionByZero, FieldMismatch, ParseError, ZeroPolynomial

Rational = Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


@lru_cache(maxsize=None)
def squarefree_decompose(n: int) -> tuple[int, int]:
    """Write n = s^2 * d with d squarefree; returns (s, d).  n may be negative."""
    if n == 0:
        return 0, 0
    sign = -1 if n < 0 else 1
    s, d = 1, 1
    for p, e in sympy.factorint(abs(n)).items():
        s *= p ** (e // 2)
        if e % 2:
            d *= p
    return s, sign * d


def rational_sqrt(q: Fraction) -> Fraction | None:
    """Exact square root of a rational, or None if q is not a square."""
    if q < 0:
        return None
    rn, rd = isqrt(q.numerator), isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


@dataclass(frozen=True)
class QuadraticField:
    """Q itself (d = None) or the quadratic field Q(sqrt(d)), d squarefree."""

    d: int | None = None

    def __post_init__(self):
        if self.d is not None:
            if self.d in (0, 1):
                raise ValueError("d must not be 0 or 1")
            _, sf = squarefree_decompose(self.d)
            if sf != self.d:
                raise ValueError(f"d = {self.d} is not squarefree")

    @property
    def is_rational(self) -> bool:
        return self.d is None

    def __repr__(self):
        return "QQ" if self.d is None else f"QQ(sqrt({self.d}))"


QQ = QuadraticField()


def join_fields(f1: QuadraticField, f2: QuadraticField) -> QuadraticField:
    """Smallest common field of the two, or FieldMismatch for distinct d."""
    if f1.is_rational:
        return f2
    if f2.is_rational or f1.d == f2.d:
        return f1
    raise FieldMismatch(f"cannot mix {f1} and {f2}")


@dataclass(frozen=True)
class FieldElement:
    """a + b*sqrt(d), stored exactly.  Elements with b = 0 live in QQ."""

    a: Fraction
    b: Fraction = _ZERO
    field: QuadraticField = QQ

    def __post_init__(self):
        if self.b == 0 and not self.field.is_rational:
            object.__setattr__(self, "field", QQ)
        if self.b != 0 and self.field.is_rational:
            raise ValueError("nonzero sqrt part needs a quadratic field")

    # -- construction -------------------------------------------------

    @staticmethod
    def of(value) -> FieldElement:
        if isinstance(value, FieldElement):
            return value
        return FieldElement(Fraction(value))

    @staticmethod
    def sqrt_of_int(n: int) -> FieldElement:
        """sqrt(n) as an exact element: sqrt(8) -> 2*sqrt(2), sqrt(4) -> 2."""
        if n == 0:
            return FieldElement(_ZERO)
        s, d = squarefree_decompose(n)
        if d == 1:
            return FieldElement(Fraction(s))
        return FieldElement(_ZERO, Fraction(s), QuadraticField(d))

    # -- predicates ---------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def rational_value(self) -> Fraction:
        if self.b != 0:
            raise ValueError(f"{self} is not rational")
        return self.a

    # -- arithmetic ---------------------------------------------------

    _COERCIBLE = (int, Fraction)

    def _coerced(self, other) -> tuple[FieldElement, QuadraticField]:
        other = FieldElement.of(other)
        field = join_fields(self.field, other.field)
        return other, field

    def __add__(self, other):
        if not isinstance(other, (FieldElement, *self._COERCIBLE)):
            return NotImplemented
        o, field = self._coerced(other)
        return FieldElement(self.a + o.a, self.b + o.b, field)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(-self.a, -self.b, self.field)

    def __sub__(self, other):
        if not isinstance(other, (FieldElement, *self._COERCIBLE)):
            return NotImplemented
        return self + (-FieldElement.of(other))

    def __rsub__(self, other):
        if not isinstance(other, (FieldElement, *self._COERCIBLE)):
            return NotImplemented
        return FieldElement.of(other) - self

    def __mul__(self, other):
        if not isinstance(other, (FieldElement, *self._COERCIBLE)):
            return NotImplemented
        o, field = self._coerced(other)
        if field.is_rational:
            return FieldElement(self.a * o.a)
        d = field.d
        return FieldElement(self.a * o.a + self.b * o.b * d, self.a * o.b + self.b * o.a, field)

    __rmul__ = __mul__

    def inverse(self) -> FieldElement:
        """1/(a + b*sqrt(d)) = (a - b*sqrt(d)) / (a^2 - b^2 d)."""
        if self.is_zero:
            raise DivisionByZero("inverse of zero")
        if self.field.is_rational:
            return FieldElement(1 / self.a)
        norm = self.a * self.a - self.b * self.b * self.field.d
        return FieldElement(self.a / norm, -self.b / norm, self.field)

    def __truediv__(self, other):
        if not isinstance(other, (FieldElement, *self._COERCIBLE)):
            return NotImplemented
        return self * FieldElement.of(other).inverse()

    def __rtruediv__(self, other):
        if not isinstance(other, (FieldElement, *self._COERCIBLE)):
            return NotImplemented
        return FieldElement.of(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = FieldElement(_ONE)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> FieldElement:
        """The nontrivial embedding a + b*sqrt(d) -> a - b*sqrt(d); fixes QQ."""
        return FieldElement(self.a, -self.b, self.field)

    def norm(self) -> Fraction:
        """Product with the conjugate; rational."""
        if self.field.is_rational:
            return self.a * self.a
        return self.a * self.a - self.b * self.b * self.field.d

    def sort_key(self):
        return (self.a, self.b, self.field.d or 0)

    # -- display ------------------------------------------------------

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        root = f"sqrt({self.field.d})"
        if abs(self.b) != 1:
            root = f"{abs(self.b)}*{root}"
        sign = "-" if self.b < 0 else "+"
        if self.a == 0:
            return root if self.b > 0 else f"-{root}"
        return f"{self.a} {sign} {root}"

    def __repr__(self):
        return str(self)


FE_ZERO = FieldElement(_ZERO)
FE_ONE = FieldElement(_ONE)


def fe_sqrt(x: FieldElement) -> FieldElement | None:
    """Square root of x inside x's own field, or None.

    Sign is chosen deterministically: prefer a > 0, tie-break b > 0.
    """

    def pick_sign(r: FieldElement) -> FieldElement:
        if r.a > 0 or (r.a == 0 and r.b > 0):
            return r
        return -r

    if x.is_zero:
        return FE_ZERO
    if x.field.is_rational:
        r = rational_sqrt(x.a)
        return None if r is None else FieldElement(r)
    d = x.field.d
    if x.b == 0:
        # r rational with r^2 = a, or r = q*sqrt(d) with q^2 = a/d
        r = rational_sqrt(x.a)
        if r is not None:
            return FieldElement(r)
        q = rational_sqrt(x.a / d)
        if q is not None:
            return pick_sign(FieldElement(_ZERO, q, x.field))
        return None
    # (p + q*sqrt(d))^2 = x: p^2 + q^2 d = a and 2pq = b, so p^2 is a root of
    # 4t^2 - 4at + b^2 d = 0, i.e. p^2 = (a +- sqrt(a^2 - b^2 d)) / 2.
    root_norm = rational_sqrt(x.a * x.a - x.b * x.b * d)
    if root_norm is None:
        return None
    for sign in (1, -1):
        p_sq = (x.a + sign * root_norm) / 2
        p = rational_sqrt(p_sq)
        if p is not None and p != 0:
            q = x.b / (2 * p)
            cand = FieldElement(p, q, x.field)
            if cand * cand == x:
                return pick_sign(cand)
    return None


def sqrt_in_some_field(x: FieldElement) -> FieldElement | None:
    """Square root of x allowing a new quadratic field when x is rational.

    A rational nonsquare x gets resolved into Q(sqrt(d)) with d the
    squarefree part of x.  Quadratic x is only resolved within its own
    field (anything further would need degree 4).
    """
    r = fe_sqrt(x)
    if r is not None or not x.is_rational:
        return r
    # x = p/q: sqrt(x) = sqrt(p*q)/q
    n = x.a.numerator * x.a.denominator
    s, d = squarefree_decompose(n)
    if d == 1:
        return FieldElement(Fraction(s, x.a.denominator))
    return FieldElement(_ZERO, Fraction(s, x.a.denominator), QuadraticField(d))


class BiquadraticElement:
    """Scratch arithmetic in Q(sqrt(d1), sqrt(d2)), basis (1, s1, s2, s1*s2).

    Number fields in this package stay at degree <= 2, but adding two curve
    points whose coordinates live in *different* quadratic fields runs
    through the compositum.  This type exists only for that transit: curve
    addition lifts, computes, and projects straight back, refusing results
    that do not land in a quadratic subfield.
    """

    __slots__ = ("d1", "d2", "c")

    def __init__(self, d1: int, d2: int, c):
        self.d1 = d1
        self.d2 = d2
        self.c = tuple(Fraction(v) for v in c)

    @staticmethod
    def lift(x: FieldElement, d1: int, d2: int) -> BiquadraticElement:
        if x.field.is_rational:
            return BiquadraticElement(d1, d2, (x.a, 0, 0, 0))
        if x.field.d == d1:
            return BiquadraticElement(d1, d2, (x.a, x.b, 0, 0))
        if x.field.d == d2:
            return BiquadraticElement(d1, d2, (x.a, 0, x.b, 0))
        raise FieldMismatch(f"{x} lies in neither Q(sqrt({d1})) nor Q(sqrt({d2}))")

    def project(self) -> FieldElement:
        """Back to a FieldElement; FieldMismatch if genuinely degree 4."""
        a, b1, b2, b3 = self.c
        nonzero = [i for i, v in enumerate((b1, b2, b3)) if v != 0]
        if not nonzero:
            return FieldElement(a)
        if len(nonzero) > 1:
            raise FieldMismatch("element does not lie in a quadratic subfield")
        which = nonzero[0]
        # s1*s2 = sqrt(d1*d2) up to a square factor
        if which == 0:
            return FieldElement(a, b1, QuadraticField(self.d1))
        if which == 1:
            return FieldElement(a, b2, QuadraticField(self.d2))
        s, d = squarefree_decompose(self.d1 * self.d2)
        if d == 1:
            return FieldElement(a + b3 * s)
        return FieldElement(a, b3 * s, QuadraticField(d))

    def __add__(self, o):
        return BiquadraticElement(self.d1, self.d2, [x + y for x, y in zip(self.c, o.c)])

    def __sub__(self, o):
        return BiquadraticElement(self.d1, self.d2, [x - y for x, y in zip(self.c, o.c)])

    def __neg__(self):
        return BiquadraticElement(self.d1, self.d2, [-x for x in self.c])

    def __mul__(self, o):
        a0, a1, a2, a3 = self.c
        b0, b1, b2, b3 = o.c
        d1, d2 = self.d1, self.d2
        # s1^2 = d1, s2^2 = d2, (s1 s2)^2 = d1 d2, s1*(s1 s2) = d1 s2, ...
        c0 = a0 * b0 + a1 * b1 * d1 + a2 * b2 * d2 + a3 * b3 * d1 * d2
        c1 = a0 * b1 + a1 * b0 + (a2 * b3 + a3 * b2) * d2
        c2 = a0 * b2 + a2 * b0 + (a1 * b3 + a3 * b1) * d1
        c3 = a0 * b3 + a3 * b0 + a1 * b2 + a2 * b1
        return BiquadraticElement(d1, d2, (c0, c1, c2, c3))

    def conj2(self) -> BiquadraticElement:
        """Flip the sign of sqrt(d2); fixes Q(sqrt(d1))."""
        a0, a1, a2, a3 = self.c
        return BiquadraticElement(self.d1, self.d2, (a0, a1, -a2, -a3))

    def conj1(self) -> BiquadraticElement:
        a0, a1, a2, a3 = self.c
        return BiquadraticElement(self.d1, self.d2, (a0, -a1, a2, -a3))

    @property
    def is_zero(self) -> bool:
        return all(v == 0 for v in self.c)

    def inverse(self) -> BiquadraticElement:
        """Invert via the norm tower down to Q."""
        if self.is_zero:
            raise DivisionByZero("inverse of zero")
        n2 = self * self.conj2()  # lies in Q(sqrt(d1))
        n = n2 * n2.conj1()  # lies in Q
        scale = 1 / n.c[0]
        return self.conj2() * n2.conj1() * BiquadraticElement(self.d1, self.d2, (scale, 0, 0, 0))

    def __truediv__(self, o):
        return self * o.inverse()


# ---------------------------------------------------------------------------
# field-element string form: "a" or "a + b*sqrt(d)", exact round-trip
# ---------------------------------------------------------------------------

_FE_TOKEN = re.compile(
    r"\s*(?P<sign>[+-])?\s*"
    r"(?:(?P<coef>\d+(?:/\d+)?)\s*\*?\s*)?"
    r"(?:sqrt\(\s*(?P<rad>-?\d+)\s*\))?"
)


def fe_to_str(x: FieldElement) -> str:
    return str(x)


def fe_from_str(text: str) -> FieldElement:
    """Parse the serialization produced by str(FieldElement)."""
    pos, total = 0, FE_ZERO
    text = text.strip()
    if not text:
        raise ParseError("empty field element")
    while pos < len(text):
        m = _FE_TOKEN.match(text, pos)
        if not m or m.end() == pos or (m.group("coef") is None and m.group("rad") is None):
            raise ParseError(f"bad field element {text!r} at offset {pos}")
        coef = Fraction(m.group("coef")) if m.group("coef") else _ONE
        if m.group("sign") == "-":
            coef = -coef
        if m.group("rad") is not None:
            term = FieldElement.sqrt_of_int(int(m.group("rad"))) * coef
        else:
            term = FieldElement(coef)
        total = total + term
        pos = m.end()
    return total


# ---------------------------------------------------------------------------
# univariate polynomials with field-element coefficients
# ---------------------------------------------------------------------------


class Polynomial:
    """Immutable univariate polynomial, coefficients ascending by degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = [FieldElement.of(c) for c in coeffs]
        while cs and cs[-1].is_zero:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, *args):
        raise AttributeError("Polynomial is immutable")

    # -- constructors ---------------------------------------------------

    @staticmethod
    def zero() -> Polynomial:
        return Polynomial(())

    @staticmethod
    def one() -> Polynomial:
        return Polynomial((FE_ONE,))

    @staticmethod
    def x() -> Polynomial:
        return Polynomial((FE_ZERO, FE_ONE))

    @staticmethod
    def constant(c) -> Polynomial:
        return Polynomial((FieldElement.of(c),))

    @staticmethod
    def from_roots(roots) -> Polynomial:
        p = Polynomial.one()
        for r in roots:
            p = p * Polynomial((-FieldElement.of(r), FE_ONE))
        return p

    # -- basic queries ----------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree, with the zero polynomial by convention at -1."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> FieldElement:
        if self.is_zero:
            raise ZeroPolynomial("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coeff(self, i: int) -> FieldElement:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else FE_ZERO

    def coefficient_field(self) -> QuadraticField:
        field = QQ
        for c in self.coeffs:
            field = join_fields(field, c.field)
        return field

    def __eq__(self, other):
        return isinstance(other, Polynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial([self.coeff(i) + other.coeff(i) for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return Polynomial([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        if isinstance(other, (FieldElement, Fraction, int)):
            fe = FieldElement.of(other)
            return Polynomial([c * fe for c in self.coeffs])
        other = _as_poly(other)
        if self.is_zero or other.is_zero:
            return Polynomial.zero()
        out = [FE_ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, ci in enumerate(self.coeffs):
            for j, cj in enumerate(other.coeffs):
                out[i + j] = out[i + j] + ci * cj
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative polynomial power")
        result, base = Polynomial.one(), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other):
        other = _as_poly(other)
        if other.is_zero:
            raise ZeroPolynomial("polynomial division by zero")
        q, r = Polynomial.zero(), self
        inv_lead = other.leading.inverse()
        while not r.is_zero and r.degree >= other.degree:
            shift = r.degree - other.degree
            c = r.leading * inv_lead
            term = Polynomial([FE_ZERO] * shift + [c])
            q = q + term
            r = r - term * other
        return q, r

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def derivative(self) -> Polynomial:
        return Polynomial([c * i for i, c in enumerate(self.coeffs)][1:])

    def eval_fe(self, x: FieldElement) -> FieldElement:
        acc = FE_ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def monic(self) -> Polynomial:
        if self.is_zero:
            return self
        return self * self.leading.inverse()

    @staticmethod
    def gcd(p: Polynomial, q: Polynomial) -> Polynomial:
        """Monic gcd via the Euclidean algorithm."""
        while not q.is_zero:
            p, q = q, p % q
        return p.monic() if not p.is_zero else p

    def squarefree_part(self) -> Polynomial:
        if self.is_zero:
            raise ZeroPolynomial("squarefree part of zero")
        g = Polynomial.gcd(self, self.derivative())
        return (self // g).monic() if g.degree > 0 else self.monic()

    def __str__(self):
        if self.is_zero:
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeff(i)
            if c.is_zero:
                continue
            if i == 0:
                parts.append(f"({c})")
            elif i == 1:
                parts.append(f"({c})*x")
            else:
                parts.append(f"({c})*x^{i}")
        return " + ".join(parts)

    def __repr__(self):
        return f"Polynomial[{self}]"


def _as_poly(value) -> Polynomial:
    if isinstance(value, Polynomial):
        return value
    return Polynomial.constant(value)


def rational_coeff_list(p: Polynomial) -> list[Fraction]:
    """Coefficients as plain rationals; raises if any is irrational."""
    out = []
    for c in p.coeffs:
        if not c.is_rational:
            raise ValueError(f"polynomial has irrational coefficient {c}")
        out.append(c.a)
    return out


def primitive_scale(fracs) -> Fraction:
    """Positive rational r so that [r*f for f in fracs] is integral, gcd 1."""
    fracs = [f for f in fracs if f != 0]
    if not fracs:
        return _ONE
    den_lcm = 1
    for f in fracs:
        den_lcm = den_lcm * f.denominator // gcd(den_lcm, f.denominator)
    num_gcd = 0
    for f in fracs:
        num_gcd = gcd(num_gcd, abs(f.numerator * (den_lcm // f.denominator)))
    return Fraction(den_lcm, num_gcd)


# ---------------------------------------------------------------------------
# factoring into degree <= 2 pieces over Q
# ---------------------------------------------------------------------------

_X = sympy.Symbol("x")


def factor_deg_le2(p: Polynomial):
    """Resolve roots of a rational polynomial in fields of degree <= 2.

    Returns ``(roots, unresolved)`` where roots is a list of
    ``(FieldElement, multiplicity)`` covering every rational root and every
    root of an irreducible quadratic factor, and unresolved is a list of
    ``(Polynomial, multiplicity)`` for the irreducible factors of degree
    >= 3.  The product of all pieces times the leading coefficient
    reproduces p exactly.
    """
    if p.is_zero:
        raise ZeroPolynomial("cannot factor the zero polynomial")
    coeffs = rational_coeff_list(p)
    spoly = sympy.Poly(list(reversed(coeffs)), _X, domain="QQ")
    _, factors = spoly.factor_list()
    roots: list[tuple[FieldElement, int]] = []
    unresolved: list[tuple[Polynomial, int]] = []
    for fac, mult in factors:
        fc = [Fraction(c.p, c.q) for c in fac.all_coeffs()]  # descending
        if fac.degree() == 1:
            roots.append((FieldElement(-fc[1] / fc[0]), mult))
        elif fac.degree() == 2:
            a, b, c = fc
            disc = b * b - 4 * a * c
            s, d = squarefree_decompose(disc.numerator * disc.denominator)
            scale = Fraction(s, disc.denominator)  # sqrt(disc) = scale*sqrt(d)
            if d == 1:
                raise AssertionError("square discriminant in irreducible quadratic")
            fld = QuadraticField(d)
            for sign in (1, -1):
                root = FieldElement(-b / (2 * a), sign * scale / (2 * a), fld)
                roots.append((root, mult))
        else:
            mine = Polynomial([Fraction(coef) for coef in reversed(fc)])
            unresolved.append((mine, mult))
    roots.sort(key=lambda rm: rm[0].sort_key())
    unresolved.sort(key=lambda fm: tuple(c.a for c in fm[0].coeffs))
    return roots, unresolved


def rational_roots(p: Polynomial) -> list[tuple[Fraction, int]]:
    """Rational roots with multiplicity, by the rational root theorem.

    Independent of :func:`factor_deg_le2`; used as a cross-check oracle.
    """
    if p.is_zero:
        raise ZeroPolynomial("zero polynomial")
    coeffs = rational_coeff_list(p)
    scale = primitive_scale(coeffs)
    ints = [int(c * scale) for c in coeffs]
    # strip x^k
    k = 0
    while ints and ints[0] == 0:
        ints.pop(0)
        k += 1
    found: list[tuple[Fraction, int]] = []
    if k:
        found.append((_ZERO, k))
    if len(ints) <= 1:
        return found
    lead, const = ints[-1], ints[0]

    def divisors(n):
        n = abs(n)
        out = [i for i in range(1, isqrt(n) + 1) if n % i == 0]
        return sorted(set(out + [n // i for i in out]))

    candidates = {
        Fraction(sign * r, s)
        for r in divisors(const)
        for s in divisors(lead)
        for sign in (1, -1)
    }
    poly = Polynomial([Fraction(c) for c in ints])
    for cand in sorted(candidates):
        mult = 0
        while poly.eval_fe(FieldElement(cand)).is_zero:
            poly = poly // Polynomial((-cand, _ONE))
            mult += 1
        if mult:
            found.append((cand, mult))
    return sorted(found)
