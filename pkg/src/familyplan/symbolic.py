"""Exact rational-function algebra over the birth probability p.

Expected-boys for a rule (n, k) has the closed form

    B(n,k,p) = n/(n-1)! * p^n * (-1)^(n-1) * d^(n-1)/dp^(n-1)[ (1-p)^(n+k-1) / p ]
             + p (1-p)^k / (k-1)!          * d^k/dp^k      [ p^(n+k-1) / (1-p) ]

(first term dropped when n = 0, second when k = 0), so it is a rational
function of p with exact rational coefficients.  Building both sides of

    (1-p) B(n,k,p)  =  p B(k,n,1-p)

and canonicalizing turns the ratio-invariance claim into a structural
equality of polynomials: a proof for that (n, k), not an approximation.

Coefficients are fractions.Fraction throughout; canonical form is coprime
numerator/denominator with a monic denominator.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial, gcd, lcm
from typing import Iterable, Union

from .errors import DomainError, PoleError

# Coefficient sizes blow up factorially with the derivative order; the cap
# keeps certificate construction well inside interactive time.
EXACT_RULE_CAP = 12

Scalar = Union[int, Fraction]


class Polynomial:
    """Dense polynomial in p with exact rational coefficients.

    Coefficient i multiplies p^i.  Trailing zeros are stripped on
    construction, so equality is structural; the zero polynomial has an
    empty coefficient tuple and degree -1.
    """

    __slots__ = ("coefficients",)

    def __init__(self, coefficients: Iterable[Scalar] = ()) -> None:
        coeffs = [Fraction(c) for c in coefficients]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coefficients", tuple(coeffs))

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("Polynomial is immutable")

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def is_zero(self) -> bool:
        return not self.coefficients

    def leading_coefficient(self) -> Fraction:
        if self.is_zero():
            return Fraction(0)
        return self.coefficients[-1]

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Polynomial([other])
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.coefficients == other.coefficients

    def __hash__(self) -> int:
        return hash(self.coefficients)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __add__(self, other: "Polynomial | Scalar") -> "Polynomial":
        other = _as_poly(other)
        a, b = self.coefficients, other.coefficients
        if len(a) < len(b):
            a, b = b, a
        summed = list(a)
        for i, c in enumerate(b):
            summed[i] += c
        return Polynomial(summed)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial([-c for c in self.coefficients])

    def __sub__(self, other: "Polynomial | Scalar") -> "Polynomial":
        return self + (-_as_poly(other))

    def __rsub__(self, other: "Polynomial | Scalar") -> "Polynomial":
        return _as_poly(other) + (-self)

    def __mul__(self, other: "Polynomial | Scalar") -> "Polynomial":
        other = _as_poly(other)
        if self.is_zero() or other.is_zero():
            return Polynomial()
        out = [Fraction(0)] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            if a == 0:
                continue
            for j, b in enumerate(other.coefficients):
                out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Polynomial":
        if exponent < 0:
            raise DomainError("polynomial exponent must be >= 0")
        result = Polynomial([1])
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __divmod__(self, other: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        other = _as_poly(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        quotient = [Fraction(0)] * max(len(self.coefficients) - len(other.coefficients) + 1, 1)
        rest = list(self.coefficients)
        d = other.degree
        lead = other.leading_coefficient()
        while len(rest) - 1 >= d and any(c != 0 for c in rest):
            while rest and rest[-1] == 0:
                rest.pop()
            if len(rest) - 1 < d:
                break
            shift = len(rest) - 1 - d
            factor = rest[-1] / lead
            quotient[shift] = factor
            for i, c in enumerate(other.coefficients):
                rest[shift + i] -= factor * c
            rest.pop()
        return Polynomial(quotient), Polynomial(rest)

    def __floordiv__(self, other: "Polynomial") -> "Polynomial":
        return divmod(self, other)[0]

    def __mod__(self, other: "Polynomial") -> "Polynomial":
        return divmod(self, other)[1]

    def derivative(self) -> "Polynomial":
        return Polynomial(
            [i * c for i, c in enumerate(self.coefficients)][1:]
        )

    def compose(self, inner: "Polynomial") -> "Polynomial":
        """Substitute inner for the variable (Horner over polynomials)."""
        result = Polynomial()
        for c in reversed(self.coefficients):
            result = result * inner + Polynomial([c])
        return result

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        lead = self.leading_coefficient()
        return Polynomial([c / lead for c in self.coefficients])

    def evaluate(self, x: Fraction) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def __repr__(self) -> str:
        return f"Polynomial({list(self.coefficients)!r})"

    def __str__(self) -> str:
        return format_polynomial(self)


def _as_poly(value: "Polynomial | Scalar") -> Polynomial:
    if isinstance(value, Polynomial):
        return value
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return Polynomial([value])
    raise DomainError(f"cannot interpret {value!r} as a polynomial")


#: The variable itself, and the two building blocks used everywhere below.
P_VAR = Polynomial([0, 1])
ONE_MINUS_P = Polynomial([1, -1])


def polynomial_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic greatest common divisor via the Euclidean remainder sequence."""
    a, b = _as_poly(a), _as_poly(b)
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def format_polynomial(poly: Polynomial) -> str:
    """Ascending-power human form, e.g. ``1 - p + p^2``.

    Assumes integer coefficients (callers normalize first); falls back to
    fraction literals otherwise.
    """
    if poly.is_zero():
        return "0"
    pieces: list[str] = []
    for i, c in enumerate(poly.coefficients):
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = -c if c < 0 else c
        if i == 0:
            body = str(mag)
        else:
            var = "p" if i == 1 else f"p^{i}"
            body = var if mag == 1 else f"{mag}{var}"
        if not pieces:
            pieces.append(body if sign == "+" else f"-{body}")
        else:
            pieces.append(f"{sign} {body}")
    return " ".join(pieces)


class RationalFunction:
    """Quotient of two polynomials, kept in canonical form.

    Canonical means: numerator and denominator coprime, denominator monic.
    Equality of canonical forms is therefore equality of the functions.
    """

    __slots__ = ("numerator", "denominator")

    def __init__(
        self,
        numerator: Polynomial | Scalar,
        denominator: Polynomial | Scalar = 1,
    ) -> None:
        num = _as_poly(numerator)
        den = _as_poly(denominator)
        if den.is_zero():
            raise DomainError("denominator must not be the zero polynomial")
        if num.is_zero():
            num, den = Polynomial(), Polynomial([1])
        else:
            common = polynomial_gcd(num, den)
            if common.degree > 0:
                num = num // common
                den = den // common
            lead = den.leading_coefficient()
            if lead != 1:
                num = num * (1 / lead)
                den = den.monic()
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "denominator", den)

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("RationalFunction is immutable")

    def is_zero(self) -> bool:
        return self.numerator.is_zero()

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction, Polynomial)):
            other = RationalFunction(_as_poly(other))
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return (
            self.numerator == other.numerator
            and self.denominator == other.denominator
        )

    def __hash__(self) -> int:
        return hash((self.numerator, self.denominator))

    def __add__(self, other: "RationalFunction | Polynomial | Scalar") -> "RationalFunction":
        other = _as_rational(other)
        return RationalFunction(
            self.numerator * other.denominator + other.numerator * self.denominator,
            self.denominator * other.denominator,
        )

    __radd__ = __add__

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.numerator, self.denominator)

    def __sub__(self, other: "RationalFunction | Polynomial | Scalar") -> "RationalFunction":
        return self + (-_as_rational(other))

    def __rsub__(self, other: "RationalFunction | Polynomial | Scalar") -> "RationalFunction":
        return _as_rational(other) + (-self)

    def __mul__(self, other: "RationalFunction | Polynomial | Scalar") -> "RationalFunction":
        other = _as_rational(other)
        return RationalFunction(
            self.numerator * other.numerator,
            self.denominator * other.denominator,
        )

    __rmul__ = __mul__

    def __truediv__(self, other: "RationalFunction | Polynomial | Scalar") -> "RationalFunction":
        other = _as_rational(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(
            self.numerator * other.denominator,
            self.denominator * other.numerator,
        )

    def __rtruediv__(self, other: "RationalFunction | Polynomial | Scalar") -> "RationalFunction":
        return _as_rational(other) / self

    def derivative(self) -> "RationalFunction":
        return RationalFunction(
            self.numerator.derivative() * self.denominator
            - self.numerator * self.denominator.derivative(),
            self.denominator * self.denominator,
        )

    def compose(self, inner: Polynomial) -> "RationalFunction":
        return RationalFunction(
            self.numerator.compose(inner),
            self.denominator.compose(inner),
        )

    def evaluate(self, x: Fraction) -> Fraction:
        den = self.denominator.evaluate(x)
        if den == 0:
            raise PoleError(f"denominator vanishes at p = {x}")
        return self.numerator.evaluate(x) / den

    def integer_normalized(self) -> tuple[Polynomial, Polynomial]:
        """Scale to coprime integer coefficients for display.

        The sign is chosen so the denominator's lowest-order nonzero
        coefficient is positive, which reproduces the familiar forms
        like p/(1 - p) instead of -p/(p - 1).
        """
        coeffs = list(self.numerator.coefficients) + list(self.denominator.coefficients)
        scale = lcm(*(c.denominator for c in coeffs)) if coeffs else 1
        ints = [int(c * scale) for c in coeffs]
        shrink = gcd(*(abs(i) for i in ints if i)) if any(ints) else 1
        factor = Fraction(scale, shrink)
        num = self.numerator * factor
        den = self.denominator * factor
        lowest = next(c for c in den.coefficients if c != 0)
        if lowest < 0:
            num, den = -num, -den
        return num, den

    def __repr__(self) -> str:
        return f"RationalFunction({self.numerator!r}, {self.denominator!r})"

    def __str__(self) -> str:
        num, den = self.integer_normalized()
        return f"({format_polynomial(num)})/({format_polynomial(den)})"


def _as_rational(value: "RationalFunction | Polynomial | Scalar") -> RationalFunction:
    if isinstance(value, RationalFunction):
        return value
    return RationalFunction(_as_poly(value))


def differentiate(f: RationalFunction, order: int) -> RationalFunction:
    """Exact order-th derivative, canonicalized after every step."""
    if not isinstance(order, int) or isinstance(order, bool) or order < 0:
        raise DomainError(f"derivative order must be an integer >= 0, got {order!r}")
    for _ in range(order):
        f = f.derivative()
    return f


def mirror(f: RationalFunction) -> RationalFunction:
    """Substitute p -> 1-p."""
    return f.compose(ONE_MINUS_P)


def _check_rule_caps(n: int, k: int, cap: int) -> None:
    for name, value in (("n", n), ("k", k)):
        if not isinstance(value, int) or isinstance(value, bool) or value < 0:
            raise DomainError(f"{name} must be an integer >= 0, got {value!r}")
    if n + k < 1:
        raise DomainError("the (0,0) rule has no expected-boys function")
    if n > cap or k > cap:
        raise DomainError(
            f"rule ({n},{k}) exceeds the exact-arithmetic cap of {cap} per count"
        )


@lru_cache(maxsize=512)
def _expected_boys_exact_cached(n: int, k: int) -> RationalFunction:
    total = n + k - 1
    result = RationalFunction(Polynomial())
    if n >= 1:
        base = RationalFunction(ONE_MINUS_P**total, P_VAR)
        scale = Fraction(n * (-1) ** (n - 1), factorial(n - 1))
        result = result + differentiate(base, n - 1) * (P_VAR**n) * scale
    if k >= 1:
        base = RationalFunction(P_VAR**total, ONE_MINUS_P)
        scale = Fraction(1, factorial(k - 1))
        result = result + differentiate(base, k) * (P_VAR * ONE_MINUS_P**k) * scale
    return result


def expected_boys_exact(n: int, k: int, cap: int = EXACT_RULE_CAP) -> RationalFunction:
    """B(n,k,p) as an exact rational function on (0,1)."""
    _check_rule_caps(n, k, cap)
    return _expected_boys_exact_cached(n, k)


def expected_girls_exact(n: int, k: int, cap: int = EXACT_RULE_CAP) -> RationalFunction:
    """G(n,k,p) = B(k,n,1-p), exactly."""
    _check_rule_caps(n, k, cap)
    return mirror(_expected_boys_exact_cached(k, n))


@dataclass(frozen=True)
class RatioCertificate:
    """Audit record for one rule: both sides of (1-p)B(n,k,p) = p B(k,n,1-p)."""

    boys_required: int
    girls_required: int
    holds: bool
    lhs: RationalFunction
    rhs: RationalFunction


def verify_ratio_identity(n: int, k: int, cap: int = EXACT_RULE_CAP) -> RatioCertificate:
    """Certify (1-p) B(n,k,p) = p B(k,n,1-p) as an exact polynomial identity.

    Because both sides are canonical, holds=True is a proof that the rule's
    gender ratio equals the birth odds everywhere on (0,1).
    """
    _check_rule_caps(n, k, cap)
    lhs = expected_boys_exact(n, k, cap) * RationalFunction(ONE_MINUS_P)
    rhs = mirror(expected_boys_exact(k, n, cap)) * RationalFunction(P_VAR)
    return RatioCertificate(
        boys_required=n,
        girls_required=k,
        holds=(lhs - rhs).is_zero(),
        lhs=lhs,
        rhs=rhs,
    )


def evaluate_exact(f: RationalFunction, p: Fraction) -> Fraction:
    """Evaluate at an exact rational birth probability in (0,1)."""
    if isinstance(p, int) or isinstance(p, float) or not isinstance(p, Fraction):
        raise DomainError(
            f"p must be an exact Fraction, got {type(p).__name__} {p!r}"
        )
    if not Fraction(0) < p < Fraction(1):
        raise DomainError(f"p must lie strictly in (0, 1), got {p}")
    return f.evaluate(p)
