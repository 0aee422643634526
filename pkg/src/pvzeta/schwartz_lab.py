"""Gaussian-Hermite test functions with exact Fourier transforms.

A test function is xi_0(x) = p(x) * exp(-pi * r^2 * |x|^2), stored with the exact
polynomial ``p`` (coefficients in Q(i)[pi, 1/pi]) and the exact positive rational
``rate`` r. The default r = 1 is the self-dual Gaussian. The Fourier transform uses
the kernel exp(2 pi i a <y, x>) and maps the class to itself, so every transform
is exact; only the final numerical evaluation rounds.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .polynomials import MultiPoly, PiLaurent, as_fraction, monomials_up_to

HALF_DENSITY = "|dx|^(1/2)"


def _as_pi(c) -> PiLaurent:
    if isinstance(c, PiLaurent):
        return c
    return PiLaurent.rational(as_fraction(c))


@dataclass(frozen=True)
class PsiCharacter:
    """The additive character t -> exp(2 pi i a t)."""

    a: Fraction = Fraction(1)

    def __post_init__(self):
        a = as_fraction(self.a)
        if a == 0:
            raise ValueError("the additive character needs a nonzero parameter")
        object.__setattr__(self, "a", a)

    def negated(self) -> "PsiCharacter":
        return PsiCharacter(-self.a)

    def __str__(self):
        return f"psi_{self.a}"


PSI1 = PsiCharacter(Fraction(1))


def c_psi(psi: PsiCharacter) -> PiLaurent:
    """The constant with F(x_j xi) = c(psi) d_j F(xi); equals 1/(2 pi i a)."""
    return PiLaurent.monomial(0, Fraction(-1, 2) / psi.a, -1)


def a_psi(psi: PsiCharacter, n: int) -> Fraction:
    """Fourier inversion constant: F_(-psi) F_psi = A(psi) id, A(psi_a) = |a|^(-n)."""
    return abs(psi.a) ** (-n)


def self_dual_factor(psi: PsiCharacter, n: int) -> float:
    """A(psi)^(-1/2), the rescaling that makes the transform self-dual."""
    return float(abs(psi.a)) ** (n / 2)


@dataclass(frozen=True)
class TestFunction:
    """xi_0(x) = poly(x) * exp(-pi * rate^2 * |x|^2), carried with the tag |dx|^(1/2)."""

    __test__ = False

    poly: MultiPoly
    rate: Fraction = Fraction(1)
    density_tag: str = HALF_DENSITY

    def __post_init__(self):
        object.__setattr__(self, "poly", self.poly.map_coeffs(_as_pi))
        rate = as_fraction(self.rate)
        if rate <= 0:
            raise ValueError("the Gaussian rate must be positive")
        object.__setattr__(self, "rate", rate)

    @classmethod
    def gaussian(cls, n: int, rate=1) -> "TestFunction":
        return cls(MultiPoly.constant(n, Fraction(1)), rate)

    @classmethod
    def monomial(cls, exp, coeff=1, rate=1) -> "TestFunction":
        return cls(MultiPoly.monomial(tuple(exp), as_fraction(coeff) if not isinstance(coeff, PiLaurent) else coeff), rate)

    @property
    def n(self) -> int:
        return self.poly.nvars

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def __add__(self, other: "TestFunction") -> "TestFunction":
        if other.rate != self.rate:
            raise ValueError("sum of test functions with different Gaussian rates")
        return TestFunction(self.poly + other.poly, self.rate)

    def __sub__(self, other: "TestFunction") -> "TestFunction":
        return self + other.scale(-1)

    def scale(self, c) -> "TestFunction":
        return TestFunction(self.poly.scale(_as_pi(c)), self.rate)

    def mul_poly(self, q: MultiPoly) -> "TestFunction":
        return TestFunction(self.poly * q.map_coeffs(_as_pi), self.rate)

    def diff(self, j: int) -> "TestFunction":
        """d/dx_j of poly * exp(-pi r^2 |x|^2)."""
        xj = MultiPoly.var(self.n, j).map_coeffs(_as_pi)
        gauss = PiLaurent.monomial(-2 * self.rate ** 2, 0, 1)
        return TestFunction(self.poly.diff(j) + (self.poly * xj).scale(gauss), self.rate)

    def diff_multi(self, alpha) -> "TestFunction":
        out = self
        for j, k in enumerate(alpha):
            for _ in range(k):
                out = out.diff(j)
        return out

    def apply_operator(self, q: MultiPoly) -> "TestFunction":
        """Apply the constant-coefficient operator q(d)."""
        total = MultiPoly.zero(self.n)
        for alpha, c in q.terms.items():
            total = total + self.diff_multi(alpha).poly.scale(_as_pi(c))
        return TestFunction(total, self.rate)

    def dilate(self, a) -> "TestFunction":
        """x -> xi_0(a x) for a nonzero rational a."""
        a = as_fraction(a)
        return TestFunction(self.poly.dilate([a] * self.n), self.rate * abs(a))

    def poly_value(self, point):
        """Exact value of the polynomial factor at a rational point."""
        return self.poly.evaluate(tuple(as_fraction(x) for x in point))

    def evaluate_mp(self, point) -> mpmath.mpc:
        r2 = mpmath.mpf(self.rate.numerator) ** 2 / mpmath.mpf(self.rate.denominator) ** 2
        sq = sum(mpmath.mpmathify(x) ** 2 for x in point)
        return self.poly.evaluate_mp(point) * mpmath.exp(-mpmath.pi * r2 * sq)

    def evaluate(self, point) -> complex:
        return complex(self.evaluate_mp(point))

    def __call__(self, *point) -> complex:
        return self.evaluate(point)


def fourier(xi: TestFunction, psi: PsiCharacter = PSI1) -> TestFunction:
    """Exact transform y -> integral xi_0(x) psi(<y, x>) dx.

    Uses F(x^alpha G) = c^|alpha| d^alpha F(G) with F(exp(-pi r^2 |x|^2)) =
    r^(-n) exp(-pi |y|^2 / r^2) for the character psi_1, then substitutes
    y -> a y for psi_a.
    """
    n = xi.n
    c1 = c_psi(PSI1)
    op = MultiPoly(n, {alpha: coef * c1 ** sum(alpha) for alpha, coef in xi.poly.terms.items()})
    seed = TestFunction(MultiPoly.constant(n, xi.rate ** (-n)), 1 / xi.rate)
    out = seed.apply_operator(op)
    if psi.a != 1:
        out = out.dilate(psi.a)
    return out


def fourier_self_dual(xi: TestFunction, psi: PsiCharacter = PSI1) -> TestFunction:
    """A(psi)^(-1/2) * F_psi, available exactly when |a|^(n/2) is rational."""
    n = xi.n
    mag = abs(psi.a) ** n
    num, den = mag.numerator, mag.denominator
    rn, rd = _isqrt_exact(num), _isqrt_exact(den)
    if rn is None or rd is None:
        raise ValueError(f"|a|^(n/2) is irrational for a = {psi.a}, n = {n}")
    return fourier(xi, psi).scale(Fraction(rn, rd))


def _isqrt_exact(m: int):
    import math

    r = math.isqrt(m)
    return r if r * r == m else None


def basis(n: int, max_degree: int) -> list[TestFunction]:
    """Monomial-times-Gaussian family x^alpha exp(-pi |x|^2), |alpha| <= max_degree.

    Ordered by total degree, then by exponent vector in descending lexicographic order.
    """
    if max_degree < 0:
        raise ValueError("max_degree must be nonnegative")
    return [TestFunction.monomial(e) for e in monomials_up_to(n, max_degree)]


def select(n: int, degree: int, index: int) -> TestFunction:
    """The test function addressed on the command line by (n, degree, index)."""
    fam = [e for e in monomials_up_to(n, degree) if sum(e) == degree]
    if not 0 <= index < len(fam):
        raise IndexError(f"index {index} out of range for degree {degree} in {n} variables")
    return TestFunction.monomial(fam[index])
