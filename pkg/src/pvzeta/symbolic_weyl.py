"""Exact Weyl-algebra calculus on symbolic powers of a polynomial.

A ``SymbolicPower`` with base ``f`` denotes sum_k p_k(x; s) * f**(s - k), where each
``p_k`` is a polynomial in x whose coefficients are polynomials in the symbol s.
Derivatives follow the Leibniz rule with d(f**(s-k)) = (s-k) * df * f**(s-k-1),
so every identity is exact in rational arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .errors import IrrationalRoots, NotEigen, UnsupportedRank
from .polynomials import MultiPoly, UnivarPolyS, format_fraction

_ONE_S = UnivarPolyS.constant(1)


def _lift_to_s(p: MultiPoly) -> MultiPoly:
    """View a rational polynomial as one with s-polynomial coefficients."""
    return p.map_coeffs(lambda c: c if isinstance(c, UnivarPolyS) else UnivarPolyS.constant(c))


def _specialize_coeffs(p: MultiPoly, s_value) -> MultiPoly:
    return p.map_coeffs(lambda c: c(Fraction(s_value)) if isinstance(c, UnivarPolyS) else c)


class SymbolicPower:
    """Finite sum of polynomial multiples of f**(s - k), k an integer."""

    __slots__ = ("base", "parts")

    def __init__(self, base: MultiPoly, parts=None):
        self.base = base
        clean = {}
        for k, p in (parts or {}).items():
            if p:
                clean[int(k)] = p
        self.parts = clean

    @classmethod
    def power(cls, base: MultiPoly, offset: int = 0) -> "SymbolicPower":
        """The expression f**(s + offset)."""
        one = MultiPoly.constant(base.nvars, _ONE_S)
        return cls(base, {-offset: one})

    @property
    def nvars(self) -> int:
        return self.base.nvars

    def is_zero(self) -> bool:
        return not self.parts

    def __add__(self, other: "SymbolicPower") -> "SymbolicPower":
        if other.base != self.base:
            raise ValueError("symbolic powers of different bases")
        out = dict(self.parts)
        for k, p in other.parts.items():
            out[k] = out[k] + p if k in out else p
        return SymbolicPower(self.base, out)

    def __neg__(self):
        return SymbolicPower(self.base, {k: -p for k, p in self.parts.items()})

    def __sub__(self, other):
        return self + (-other)

    def mul_poly(self, q: MultiPoly) -> "SymbolicPower":
        q = _lift_to_s(q)
        return SymbolicPower(self.base, {k: p * q for k, p in self.parts.items()})

    def mul_scalar(self, c) -> "SymbolicPower":
        if not isinstance(c, UnivarPolyS):
            c = UnivarPolyS.constant(c)
        return SymbolicPower(self.base, {k: p.scale(c) for k, p in self.parts.items()})

    def mul_base_power(self, j: int) -> "SymbolicPower":
        """Multiply by f**j (j may be negative)."""
        return SymbolicPower(self.base, {k - j: p for k, p in self.parts.items()})

    def diff(self, j: int) -> "SymbolicPower":
        df = _lift_to_s(self.base.diff(j))
        out: dict[int, MultiPoly] = {}

        def put(k, p):
            if p:
                out[k] = out[k] + p if k in out else p

        for k, p in self.parts.items():
            put(k, p.diff(j))
            factor = UnivarPolyS([-k, 1])
            put(k + 1, (p * df).scale(factor))
        return SymbolicPower(self.base, out)

    def diff_multi(self, alpha) -> "SymbolicPower":
        out = self
        for j, k in enumerate(alpha):
            for _ in range(k):
                out = out.diff(j)
        return out

    def combined(self, top: int | None = None) -> tuple[int, MultiPoly]:
        """Return (K, P) with self == P * f**(s - K)."""
        if not self.parts:
            return (top or 0), MultiPoly.zero(self.nvars)
        K = max(self.parts)
        if top is not None:
            K = max(K, top)
        base_s = _lift_to_s(self.base)
        total = MultiPoly.zero(self.nvars)
        for k, p in self.parts.items():
            total = total + p * base_s ** (K - k)
        return K, total

    def scalar_multiple(self, target: int = 0) -> tuple[UnivarPolyS, "SymbolicPower"]:
        """Best c(s) with self = c(s) * f**(s - target) + remainder; remainder returned exactly."""
        K, P = self.combined(top=target)
        ref = _lift_to_s(self.base) ** (K - target)
        if not P:
            return UnivarPolyS(), SymbolicPower(self.base)
        lead_exp, lead_c = ref.leading_term()
        cand = P.terms.get(lead_exp, UnivarPolyS())
        lc = lead_c.leading() if isinstance(lead_c, UnivarPolyS) else Fraction(lead_c)
        c = UnivarPolyS([x / lc for x in cand.coeffs]) if cand else UnivarPolyS()
        rem = P - ref.scale(c)
        return c, SymbolicPower(self.base, {K: rem})

    def specialize(self, s_value: int) -> MultiPoly:
        """Substitute an integer for s and expand to an ordinary polynomial."""
        total = MultiPoly.zero(self.nvars)
        for k, p in self.parts.items():
            q = _specialize_coeffs(p, s_value)
            if not q:
                continue
            e = s_value - k
            if e < 0:
                raise ValueError(f"negative power f^{e} survives at s = {s_value}")
            total = total + q * self.base ** e
        return total

    def __repr__(self):
        body = ", ".join(f"f^(s-{k}): {p}" for k, p in sorted(self.parts.items()))
        return f"SymbolicPower({body})"


def apply_operator(q: MultiPoly, expr: SymbolicPower) -> SymbolicPower:
    """Apply the constant-coefficient operator q(d) to a symbolic power."""
    out = SymbolicPower(expr.base)
    for alpha, c in q.terms.items():
        out = out + expr.diff_multi(alpha).mul_scalar(c)
    return out


def bernstein_remainder(f: MultiPoly, fdual: MultiPoly, b: UnivarPolyS) -> SymbolicPower:
    """fdual(d) f**(s+1) - b(s) f**s as an exact symbolic power."""
    lhs = apply_operator(fdual, SymbolicPower.power(f, 1))
    rhs = SymbolicPower.power(f, 0).mul_scalar(b)
    K, P = (lhs - rhs).combined()
    return SymbolicPower(f, {K: P})


def b_function(f: MultiPoly, fdual: MultiPoly) -> UnivarPolyS:
    """The b(s) with fdual(d) f**(s+1) = b(s) f**s, certified with zero remainder."""
    lhs = apply_operator(fdual, SymbolicPower.power(f, 1))
    b, rem = lhs.scalar_multiple(0)
    if not rem.is_zero() or b.is_zero():
        raise NotEigen(f"{fdual}(d) applied to ({f})^(s+1) is not a multiple of ({f})^s")
    return b


def _rank_one(desc):
    if desc.rank != 1:
        raise UnsupportedRank(f"{desc.name} has rank {desc.rank}; only rank 1 is supported")
    return desc.basic_invariants[0], desc.dual_basic_invariants[0]


def orbit_sign_factor(desc, orbit) -> Fraction:
    """Constant c in fdual(d)|f|^(s+1) = c * b(s) |f|^s on the orbit.

    Obtained by recomputing the b-function of eps*f, where eps is the sign of f
    on the orbit, and comparing it with the b-function of f.
    """
    f, fd = _rank_one(desc)
    eps = Fraction(orbit.sign_vector[0])
    b = b_function(f, fd)
    b_eps = b_function(f.scale(eps), fd)
    return b_eps.leading() / b.leading()


def _capelli_expr(desc, M: int, twist: int = 0) -> SymbolicPower:
    f, fd = _rank_one(desc)
    mu = desc.capelli_mu
    expr = SymbolicPower.power(f, 0).mul_base_power(mu * twist)
    for _ in range(mu * M):
        expr = apply_operator(fd, expr)
    return expr.mul_base_power(mu * M).mul_base_power(-mu * twist)


def capelli_eigenvalue(desc, M: int) -> UnivarPolyS:
    """c(s) with h^M * hdual(d)^M |f|^s = c(s) |f|^s, where h = f^2 and hdual = fdual^2."""
    if M < 0:
        raise ValueError("M must be nonnegative")
    c, rem = _capelli_expr(desc, M).scalar_multiple(0)
    if not rem.is_zero():
        raise NotEigen(f"Capelli operator of order {M} is not diagonal on |f|^s")
    return c


def twisted_capelli_eigenvalue(desc, M: int, m: int) -> UnivarPolyS:
    """Eigenvalue of g^(-m) o D o g^m on |f|^s, computed directly (g = h = f^2)."""
    c, rem = _capelli_expr(desc, M, twist=m).scalar_multiple(0)
    if not rem.is_zero():
        raise NotEigen("twisted Capelli operator is not diagonal on |f|^s")
    return c


def twist_shift_check(desc, M: int, m: int) -> bool:
    """Exact check that twisting D by g^m shifts its eigenvalue to c(s + m*mu)."""
    lhs = twisted_capelli_eigenvalue(desc, M, m)
    rhs = capelli_eigenvalue(desc, M).shift(m * desc.capelli_mu)
    return lhs == rhs


def leading_coeff_at(desc, M: int) -> Fraction:
    """Top homogeneous part of c(s) evaluated at s = -mu."""
    if M < 1:
        raise ValueError("M must be positive")
    top = capelli_eigenvalue(desc, M).top_term()
    return top(Fraction(-desc.capelli_mu))


def exponent_of(desc, lam, twist=0):
    """Engine exponent t with integrand |f|^t * xi_0 * dx for the shared coordinate lam."""
    o = desc.lambda_orientation
    return o * (lam + twist + desc.lambda0[0]) - desc.measure_exponent[0]


@dataclass(frozen=True)
class GammaFactor:
    """The affine map alpha(lam) = slope * lam + intercept inside Gamma(alpha)^(-1)."""

    slope: Fraction
    intercept: Fraction
    b_root: Fraction

    def __call__(self, lam):
        return self.slope * lam + self.intercept

    def pole_lambda(self, m: int) -> Fraction:
        """Shared coordinate where alpha = -m."""
        return (-m - self.intercept) / self.slope

    def describe(self) -> str:
        sl = "lambda" if self.slope == 1 else ("-lambda" if self.slope == -1 else f"{format_fraction(self.slope)}*lambda")
        if self.intercept == 0:
            return f"Gamma({sl})"
        sign = "+" if self.intercept > 0 else "-"
        return f"Gamma({sl} {sign} {format_fraction(abs(self.intercept))})"


@dataclass(frozen=True)
class GammaProduct:
    """L(lam) = prod_j Gamma(alpha_j(lam))^(-1)."""

    factors: tuple
    leading: Fraction

    def __call__(self, lam):
        acc = mpmath.mpc(1)
        for g in self.factors:
            acc *= mpmath.rgamma(g(mpmath.mpmathify(lam)))
        return acc

    def nearest_pole(self, lam):
        """(distance, factor, m) of the closest pole candidate alpha_j(lam) = -m."""
        best = None
        for g in self.factors:
            a = complex(g(complex(lam)))
            m = max(0, round(-a.real))
            d = abs(a + m) / abs(float(g.slope))
            if best is None or d < best[0]:
                best = (d, g, m)
        return best

    def pole_candidates(self, count: int = 3) -> list[Fraction]:
        out = set()
        for g in self.factors:
            for m in range(count):
                out.add(g.pole_lambda(m))
        return sorted(out)


def denominator(desc) -> GammaProduct:
    """Gamma-product denominator built from the rational roots of b."""
    if desc.rank != 1:
        raise UnsupportedRank(f"{desc.name} has rank {desc.rank}")
    b = desc.bfun[0]
    lead, roots, rest = b.rational_roots()
    if rest.degree > 0:
        raise IrrationalRoots(f"b(s) = {b} has a factor without rational roots: {rest}")
    o = Fraction(desc.lambda_orientation)
    intercept0 = o * Fraction(desc.lambda0[0]) - Fraction(desc.measure_exponent[0])
    factors = tuple(GammaFactor(o, intercept0 - r, r) for r in roots)
    return GammaProduct(factors, lead)
