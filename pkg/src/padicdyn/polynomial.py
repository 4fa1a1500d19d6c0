"""Dense univariate polynomials over the rationals, with exact arithmetic.

Coefficients are ``fractions.Fraction`` stored ascending by degree.  The
operations that matter for dynamics are exact evaluation, composition and
iteration, Taylor expansion about a point (by repeated synthetic division,
never by differentiating and dividing by factorials), and the rational
fixed points of a map (rational root theorem plus exact verification).
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

from .primes import divisors
from .valuation import PreconditionError, RationalLike, as_fraction

DEFAULT_DEGREE_CAP = 10**6


class RationalPoly:
    """An exact polynomial with rational coefficients.

    ``coefficients`` are ascending: coefficients[i] multiplies X**i.
    Trailing zeros are trimmed; the zero polynomial has an empty tuple and
    degree None.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coefficients: Iterable[RationalLike] = ()) -> None:
        coeffs = [as_fraction(c) for c in coefficients]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "_coeffs", tuple(coeffs))

    # -- construction ---------------------------------------------------
    @classmethod
    def identity(cls) -> "RationalPoly":
        """The polynomial X."""
        return cls((0, 1))

    @classmethod
    def constant(cls, c: RationalLike) -> "RationalPoly":
        return cls((c,))

    @classmethod
    def monomial(cls, k: int, c: RationalLike = 1) -> "RationalPoly":
        """c * X**k."""
        if k < 0:
            raise PreconditionError("monomial exponent must be nonnegative")
        return cls([0] * k + [c])

    # -- structure ------------------------------------------------------
    @property
    def coefficients(self) -> tuple[Fraction, ...]:
        return self._coeffs

    def coefficient(self, i: int) -> Fraction:
        """The coefficient of X**i (zero beyond the degree)."""
        if 0 <= i < len(self._coeffs):
            return self._coeffs[i]
        return Fraction(0)

    @property
    def is_zero(self) -> bool:
        return not self._coeffs

    @property
    def degree(self) -> int:
        """Degree of a nonzero polynomial; raises on the zero polynomial."""
        if not self._coeffs:
            raise PreconditionError("the zero polynomial has no degree")
        return len(self._coeffs) - 1

    @property
    def leading_coefficient(self) -> Fraction:
        if not self._coeffs:
            raise PreconditionError("the zero polynomial has no leading coefficient")
        return self._coeffs[-1]

    # -- ring operations ------------------------------------------------
    def __call__(self, x: RationalLike) -> Fraction:
        """Exact evaluation by Horner's rule."""
        xf = as_fraction(x)
        acc = Fraction(0)
        for c in reversed(self._coeffs):
            acc = acc * xf + c
        return acc

    def __eq__(self, other: object) -> bool:
        if isinstance(other, RationalPoly):
            return self._coeffs == other._coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._coeffs)

    def __add__(self, other: "RationalPoly | RationalLike") -> "RationalPoly":
        other = self._coerce(other)
        n = max(len(self._coeffs), len(other._coeffs))
        return RationalPoly(
            self.coefficient(i) + other.coefficient(i) for i in range(n)
        )

    __radd__ = __add__

    def __neg__(self) -> "RationalPoly":
        return RationalPoly(-c for c in self._coeffs)

    def __sub__(self, other: "RationalPoly | RationalLike") -> "RationalPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other: "RationalPoly | RationalLike") -> "RationalPoly":
        return self._coerce(other) - self

    def __mul__(self, other: "RationalPoly | RationalLike") -> "RationalPoly":
        other = self._coerce(other)
        if self.is_zero or other.is_zero:
            return RationalPoly()
        out = [Fraction(0)] * (len(self._coeffs) + len(other._coeffs) - 1)
        for i, a in enumerate(self._coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other._coeffs):
                out[i + j] += a * b
        return RationalPoly(out)

    __rmul__ = __mul__

    @staticmethod
    def _coerce(other: "RationalPoly | RationalLike") -> "RationalPoly":
        if isinstance(other, RationalPoly):
            return other
        return RationalPoly.constant(other)

    def __repr__(self) -> str:
        return f"RationalPoly({format_polynomial(self)!r})"

    # -- calculus-free expansions ----------------------------------------
    def derivative(self) -> "RationalPoly":
        return RationalPoly(i * c for i, c in enumerate(self._coeffs) if i > 0)

    def taylor_coefficients(self, a: RationalLike) -> list[Fraction]:
        """Coefficients c_0..c_d with P(X) = sum c_n (X - a)**n.

        Computed by repeated synthetic division by (X - a): each round's
        remainder is the next Taylor coefficient.  Exact, and free of the
        factorial divisions of the derivative formula.
        """
        af = as_fraction(a)
        work = list(self._coeffs)
        if not work:
            return [Fraction(0)]
        out: list[Fraction] = []
        for _ in range(len(self._coeffs)):
            # One synthetic-division pass: quotient accumulates in place,
            # the final carry is the remainder, i.e. the next coefficient.
            quot: list[Fraction] = [Fraction(0)] * (len(work) - 1)
            carry = Fraction(0)
            for i in reversed(range(len(work))):
                carry = work[i] + af * carry
                if i > 0:
                    quot[i - 1] = carry
            out.append(carry)
            work = quot
        return out

    def compose(self, inner: "RationalPoly") -> "RationalPoly":
        """self(inner(X)), by Horner's rule in the polynomial ring."""
        acc = RationalPoly()
        for c in reversed(self._coeffs):
            acc = acc * inner + RationalPoly.constant(c)
        return acc

    def iterate(self, m: int, degree_cap: int = DEFAULT_DEGREE_CAP) -> "RationalPoly":
        """The m-fold composition of self with itself; m = 0 gives X.

        Refuses (before doing any work) iterates whose degree d**m would
        exceed ``degree_cap``.  For degree >= 2 the leading coefficient of
        the iterate is lc**((d**m - 1)/(d - 1)), which is asserted.
        """
        if m < 0:
            raise PreconditionError("iteration count must be nonnegative")
        if self.is_zero:
            raise PreconditionError("cannot iterate the zero polynomial")
        d = self.degree
        if d >= 2 and d**m > degree_cap:
            raise PreconditionError(
                f"iterate degree {d}**{m} exceeds the cap {degree_cap}"
            )
        result = RationalPoly.identity()
        for _ in range(m):
            result = self.compose(result)
        if d >= 2:
            expected_lc = self.leading_coefficient ** ((d**m - 1) // (d - 1))
            assert result.leading_coefficient == expected_lc
            assert result.degree == d**m
        return result

    def rational_fixed_points(self) -> list[Fraction]:
        """All rational solutions of self(x) = x, each verified exactly.

        Uses the rational root theorem on the denominator-cleared form of
        self(X) - X; every candidate is checked by exact evaluation.
        """
        psi = self - RationalPoly.identity()
        if psi.is_zero:
            raise PreconditionError("identity map: every rational point is fixed")
        roots: set[Fraction] = set()
        coeffs = list(psi.coefficients)
        low = 0
        while coeffs[low] == 0:
            low += 1
        if low > 0:
            roots.add(Fraction(0))
            coeffs = coeffs[low:]
        if len(coeffs) > 1:
            clear = lcm(*(c.denominator for c in coeffs))
            ints = [int(c * clear) for c in coeffs]
            content = gcd(*ints)
            ints = [c // content for c in ints]
            for r in divisors(abs(ints[0])):
                for s in divisors(abs(ints[-1])):
                    if gcd(r, s) != 1:
                        continue
                    for cand in (Fraction(r, s), Fraction(-r, s)):
                        if psi(cand) == 0:
                            roots.add(cand)
        elif len(coeffs) == 1:
            pass  # nonzero constant: no further roots
        return sorted(roots)


def format_polynomial(poly: RationalPoly) -> str:
    """Canonical text form: descending powers, e.g. 'X^5 + X^2 + X + 1/2'.

    Inverse of the expression parser on canonical forms: coefficients 1 and
    -1 on X-terms are elided, other coefficients print as 'c*X^n', and the
    constant term prints bare.
    """
    if poly.is_zero:
        return "0"
    parts: list[str] = []
    for i in range(poly.degree, -1, -1):
        c = poly.coefficient(i)
        if c == 0:
            continue
        mag = abs(c)
        if i == 0:
            body = str(mag)
        else:
            xpow = "X" if i == 1 else f"X^{i}"
            body = xpow if mag == 1 else f"{mag}*{xpow}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts)
