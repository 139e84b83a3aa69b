"""Formal divisors on an elliptic curve.

A divisor is a finite integer combination of curve points.  Principality
reduces to the group law: D is principal iff deg D = 0 and the group-law
sum of [n_P]P is O.  Divisors of functions and pullbacks along maps to
the value line are produced by the fiber solver in :mod:`torbelyi.belyi`;
conjugate quadratic points are stored individually (never compressed into
Galois orbits) because the group-law sum needs every point.
"""

from __future__ import annotations

from dataclasses import dataclass

from .curve import INFINITY, CurvePoint, EllipticCurve
from .errors import CurveMismatch, UnresolvedFiber, ZeroDivision
from .funcfield import INF, CurveFunction, is_inf
from .numfield import FE_ONE, FE_ZERO, FieldElement


class Divisor:
    """Immutable formal sum of points with nonzero integer coefficients."""

    __slots__ = ("curve", "_support")

    def __init__(self, curve: EllipticCurve, support=None):
        object.__setattr__(self, "curve", curve)
        cleaned = {}
        for P, n in (support or {}).items():
            if n:
                cleaned[P] = cleaned.get(P, 0) + n
        cleaned = {P: n for P, n in cleaned.items() if n}
        object.__setattr__(self, "_support", cleaned)

    def __setattr__(self, *args):
        raise AttributeError("Divisor is immutable")

    @staticmethod
    def of_point(curve, P: CurvePoint, n: int = 1) -> Divisor:
        return Divisor(curve, {P: n})

    @property
    def support(self):
        return dict(self._support)

    def coefficient(self, P: CurvePoint) -> int:
        return self._support.get(P, 0)

    @property
    def degree(self) -> int:
        return sum(self._support.values())

    @property
    def is_zero(self) -> bool:
        return not self._support

    def items(self):
        return sorted(self._support.items(), key=lambda kv: kv[0].sort_key())

    def __eq__(self, other):
        return (
            isinstance(other, Divisor)
            and self.curve == other.curve
            and self._support == other._support
        )

    def __hash__(self):
        return hash((self.curve, tuple(self.items())))

    def _check(self, other):
        if self.curve != other.curve:
            raise CurveMismatch("divisors on different curves")

    def __add__(self, other: Divisor) -> Divisor:
        self._check(other)
        merged = dict(self._support)
        for P, n in other._support.items():
            merged[P] = merged.get(P, 0) + n
        return Divisor(self.curve, merged)

    def __neg__(self):
        return Divisor(self.curve, {P: -n for P, n in self._support.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k: int) -> Divisor:
        return Divisor(self.curve, {P: k * n for P, n in self._support.items()})

    __rmul__ = __mul__

    def __str__(self):
        if self.is_zero:
            return "0"
        parts = []
        for P, n in self.items():
            if n == 1:
                parts.append(f"({P})")
            else:
                parts.append(f"{n}({P})")
        return " + ".join(parts)

    def __repr__(self):
        return f"Divisor[{self}]"

    def to_json(self):
        return [{"point": str(P), "coefficient": n} for P, n in self.items()]


def combine(a: int, D1: Divisor, b: int, D2: Divisor) -> Divisor:
    """a*D1 + b*D2 coefficientwise, zeros pruned."""
    return D1 * a + D2 * b


def div_of_function(beta: CurveFunction) -> Divisor:
    """div(beta): zeros minus poles with ord coefficients; degree 0.

    Raises UnresolvedFiber when a zero or pole lives in a field of degree
    > 2, carrying the blocking factors.
    """
    from .belyi import solve_zeros

    if beta.is_zero:
        raise ZeroDivision("div of the zero function")
    if beta.is_constant:
        return Divisor(beta.curve, {})
    zeros = solve_zeros(beta)
    poles = solve_zeros(beta.inverse())
    blockers = [u.factor for part in (zeros, poles) for u in part.unresolved]
    if blockers:
        raise UnresolvedFiber("zeros or poles outside degree <= 2 fields", blockers)
    support = dict(zeros.points)
    for P, e in poles.points.items():
        support[P] = support.get(P, 0) - e
    return Divisor(beta.curve, support)


@dataclass(frozen=True)
class PrincipalityCertificate:
    """Outcome of the group-law principality test with its witness sum."""

    is_principal: bool
    degree: int
    witness: CurvePoint  # the computed group-law sum of [n_P]P

    def __bool__(self):
        return self.is_principal


def principal_check(D: Divisor) -> PrincipalityCertificate:
    """D principal iff deg D = 0 and the group-law sum of [n_P]P is O."""
    curve = D.curve
    total = INFINITY
    for P, n in D.items():
        total = curve.add(total, curve.mul(n, P))
    return PrincipalityCertificate(D.degree == 0 and total.is_infinity, D.degree, total)


def line_divisor(n0: int = 0, n1: int = 0, n_inf: int = 0) -> dict:
    """Divisor on the value line supported on {0, 1, inf}."""
    out = {}
    if n0:
        out[FE_ZERO] = n0
    if n1:
        out[FE_ONE] = n1
    if n_inf:
        out[INF] = n_inf
    return out


def pullback(phi: CurveFunction, D: dict) -> Divisor:
    """phi^*(D) for D supported on {0, 1, inf}: sum of e_phi(P) n_{phi(P)} (P)."""
    from .belyi import solve_zeros

    support: dict[CurvePoint, int] = {}
    for q, n in D.items():
        if not n:
            continue
        if is_inf(q):
            part = solve_zeros(phi.inverse())
        elif FieldElement.of(q) == FE_ZERO:
            part = solve_zeros(phi)
        elif FieldElement.of(q) == FE_ONE:
            part = solve_zeros(phi - FE_ONE)
        else:
            raise ValueError("pullback divisors must be supported on {0, 1, inf}")
        if not part.fully_resolved:
            raise UnresolvedFiber(
                f"fiber over {q} not resolved in degree <= 2 fields",
                [u.factor for u in part.unresolved],
            )
        for P, e in part.points.items():
            support[P] = support.get(P, 0) + e * n
    return Divisor(phi.curve, support)
