"""Exception hierarchy shared by all torbelyi modules."""


class TorBelyiError(Exception):
    """Base class for all package errors."""


class FieldMismatch(TorBelyiError):
    """Two elements live in distinct nontrivial quadratic fields."""


class DivisionByZero(TorBelyiError):
    """Exact division by the zero element."""


class ZeroPolynomial(TorBelyiError):
    """Operation undefined for the zero polynomial."""


class SingularCurve(TorBelyiError):
    """Weierstrass coefficients with vanishing discriminant."""


class NotOnCurve(TorBelyiError):
    """Affine point does not satisfy the curve equation."""


class CurveMismatch(TorBelyiError):
    """Operands are attached to different curves."""


class SingularPoint(TorBelyiError):
    """Both curve partials vanish; impossible on a nonsingular curve."""


class DivisionByZeroSeries(TorBelyiError):
    """Series division by something indistinguishable from zero."""


class PrecisionExhausted(TorBelyiError):
    """Series precision too low to separate a value from zero."""


class ParseError(TorBelyiError):
    """Malformed function expression."""


class ZeroDenominator(TorBelyiError):
    """Rational function with identically zero denominator."""


class ZeroDivision(TorBelyiError):
    """Division by the zero function."""


class ConstantFunction(TorBelyiError):
    """Degree or fibers requested for a constant map."""


class UnresolvedFiber(TorBelyiError):
    """A fiber needs a number field of degree > 2.

    Carries the irreducible factors that blocked resolution so callers
    can downgrade to partial verification instead of aborting.
    """

    def __init__(self, message, factors=()):
        super().__init__(message)
        self.factors = tuple(factors)


class NotAGroup(TorBelyiError):
    """A point set claimed to be a subgroup failed the closure check."""


class FiberSumMismatch(TorBelyiError):
    """The three fiber sums disagree; signals an arithmetic bug."""


class UnsupportedForm(TorBelyiError):
    """Operation requires a short Weierstrass model."""


class SchemaError(TorBelyiError):
    """Corpus entry failed validation; message names the entry."""
