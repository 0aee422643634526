"""Exact polynomial arithmetic.

Three value types live here:

* ``UnivarPolyS`` - a polynomial in one symbol ``s`` with rational coefficients.
* ``PiLaurent`` - an exact number of the form sum_k q_k * pi**k with q_k in Q(i).
  It is the coefficient ring of Gaussian-Hermite test functions, which lets
  Fourier transforms be computed without rounding.
* ``MultiPoly`` - a sparse multivariate polynomial whose coefficients may be
  ``Fraction``, ``UnivarPolyS`` or ``PiLaurent``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import product

import mpmath


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(value)
    raise TypeError(f"cannot convert {value!r} to an exact rational")


def format_fraction(q: Fraction) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class UnivarPolyS:
    """Polynomial in the symbol ``s`` with exact rational coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def constant(cls, c) -> "UnivarPolyS":
        return cls([c])

    @classmethod
    def s(cls) -> "UnivarPolyS":
        return cls([0, 1])

    @classmethod
    def linear(cls, root) -> "UnivarPolyS":
        """The monic factor ``s - root``."""
        return cls([-as_fraction(root), 1])

    @classmethod
    def from_roots(cls, roots, leading=1) -> "UnivarPolyS":
        out = cls.constant(leading)
        for r in roots:
            out = out * cls.linear(r)
        return out

    @staticmethod
    def _lift(other):
        if isinstance(other, UnivarPolyS):
            return other
        if isinstance(other, (int, Fraction)):
            return UnivarPolyS([other])
        return None

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self):
        return hash(("UnivarPolyS", self.coeffs))

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        n = max(len(self.coeffs), len(o.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = o.coeffs + (Fraction(0),) * (n - len(o.coeffs))
        return UnivarPolyS([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return UnivarPolyS([-c for c in self.coeffs])

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if not self.coeffs or not o.coeffs:
            return UnivarPolyS()
        out = [Fraction(0)] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(o.coeffs):
                out[i + j] += a * b
        return UnivarPolyS(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        out = UnivarPolyS.constant(1)
        for _ in range(k):
            out = out * self
        return out

    def __call__(self, value):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * value + _coerce_rational(c, value)
        return acc

    def shift(self, c) -> "UnivarPolyS":
        """Return ``s -> p(s + c)``."""
        c = as_fraction(c)
        out = UnivarPolyS()
        sc = UnivarPolyS([c, 1])
        for coef in reversed(self.coeffs):
            out = out * sc + UnivarPolyS([coef])
        return out

    def top_term(self) -> "UnivarPolyS":
        if not self.coeffs:
            return UnivarPolyS()
        return UnivarPolyS([0] * self.degree + [self.leading()])

    def divmod_linear(self, root: Fraction):
        """Synthetic division by ``s - root``; returns (quotient, remainder)."""
        if not self.coeffs:
            return UnivarPolyS(), Fraction(0)
        acc = Fraction(0)
        quot = []
        for c in reversed(self.coeffs):
            acc = acc * root + c
            quot.append(acc)
        rem = quot.pop()
        return UnivarPolyS(list(reversed(quot))), rem

    def rational_roots(self):
        """Rational roots with multiplicity plus the leftover cofactor.

        Returns ``(leading, roots, rest)`` with ``self == leading * prod(s - r) * rest``
        where ``rest`` is monic with no rational root.
        """
        if not self.coeffs:
            raise ValueError("the zero polynomial has no factorization")
        lead = self.leading()
        rest = UnivarPolyS([c / lead for c in self.coeffs])
        roots: list[Fraction] = []
        changed = True
        while changed and rest.degree > 0:
            changed = False
            if rest.coeffs[0] == 0:
                roots.append(Fraction(0))
                rest = UnivarPolyS(rest.coeffs[1:])
                changed = True
                continue
            denom = math.lcm(*(c.denominator for c in rest.coeffs))
            ints = [int(c * denom) for c in rest.coeffs]
            for cand in _root_candidates(ints[0], ints[-1]):
                q, r = rest.divmod_linear(cand)
                if r == 0:
                    roots.append(cand)
                    rest = q
                    changed = True
                    break
        roots.sort()
        return lead, roots, rest

    def factor_strings(self) -> list[str]:
        """One string per factor: the leading constant, linear factors, leftover."""
        lead, roots, rest = self.rational_roots()
        parts = [format_fraction(lead)]
        for r in roots:
            if r == 0:
                parts.append("s")
            elif r < 0:
                parts.append(f"s + {format_fraction(-r)}")
            else:
                parts.append(f"s - {format_fraction(r)}")
        if rest.degree > 0:
            parts.append(str(rest))
        return parts

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mag = format_fraction(abs(c))
            if k == 0:
                body = mag
            else:
                mono = "s" if k == 1 else f"s^{k}"
                body = mono if abs(c) == 1 else f"{mag}*{mono}"
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        head_sign, head = terms[0]
        out = ("-" if head_sign == "-" else "") + head
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"UnivarPolyS({self})"


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _root_candidates(const: int, lead: int):
    seen = set()
    for p in _divisors(const):
        for q in _divisors(lead):
            for sign in (1, -1):
                cand = Fraction(sign * p, q)
                if cand not in seen:
                    seen.add(cand)
                    yield cand


def _coerce_rational(c: Fraction, like):
    ctx = getattr(like, "context", None)
    if ctx is not None and (hasattr(like, "_mpf_") or hasattr(like, "_mpc_")):
        return ctx.mpf(c.numerator) / c.denominator
    if isinstance(like, (float, complex)):
        return float(c)
    return c


class PiLaurent:
    """Exact element of Q(i)[pi, 1/pi], stored as {k: (re, im)}."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for k, (re, im) in (terms or {}).items():
            re, im = as_fraction(re), as_fraction(im)
            if re != 0 or im != 0:
                clean[int(k)] = (re, im)
        self.terms = clean

    @classmethod
    def rational(cls, q) -> "PiLaurent":
        return cls({0: (q, 0)})

    @classmethod
    def monomial(cls, re, im=0, pi_power: int = 0) -> "PiLaurent":
        return cls({pi_power: (re, im)})

    @staticmethod
    def _lift(other):
        if isinstance(other, PiLaurent):
            return other
        if isinstance(other, (int, Fraction)):
            return PiLaurent.rational(other)
        return None

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        out = dict(self.terms)
        for k, (re, im) in o.terms.items():
            r0, i0 = out.get(k, (Fraction(0), Fraction(0)))
            out[k] = (r0 + re, i0 + im)
        return PiLaurent(out)

    __radd__ = __add__

    def __neg__(self):
        return PiLaurent({k: (-re, -im) for k, (re, im) in self.terms.items()})

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        out: dict[int, tuple[Fraction, Fraction]] = {}
        for k1, (a, b) in self.terms.items():
            for k2, (c, d) in o.terms.items():
                r0, i0 = out.get(k1 + k2, (Fraction(0), Fraction(0)))
                out[k1 + k2] = (r0 + a * c - b * d, i0 + a * d + b * c)
        return PiLaurent(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = PiLaurent.rational(1)
        for _ in range(k):
            out = out * self
        return out

    def inverse(self) -> "PiLaurent":
        if len(self.terms) != 1:
            raise ZeroDivisionError("only monomials in pi are invertible exactly")
        (k, (a, b)), = self.terms.items()
        norm = a * a + b * b
        return PiLaurent({-k: (a / norm, -b / norm)})

    def conjugate(self) -> "PiLaurent":
        return PiLaurent({k: (re, -im) for k, (re, im) in self.terms.items()})

    def is_imaginary(self) -> bool:
        return all(re == 0 for re, _ in self.terms.values())

    def to_mpc(self) -> mpmath.mpc:
        acc = mpmath.mpc(0)
        for k, (re, im) in sorted(self.terms.items()):
            acc += mpmath.mpc(mpmath.mpf(re.numerator) / re.denominator,
                              mpmath.mpf(im.numerator) / im.denominator) * mpmath.pi ** k
        return acc

    def __complex__(self):
        return complex(self.to_mpc())

    def __repr__(self):
        if not self.terms:
            return "PiLaurent(0)"
        parts = []
        for k, (re, im) in sorted(self.terms.items()):
            parts.append(f"({format_fraction(re)}+{format_fraction(im)}i)*pi^{k}")
        return "PiLaurent(" + " + ".join(parts) + ")"


def coeff_to_mpc(c):
    if isinstance(c, PiLaurent):
        return c.to_mpc()
    if isinstance(c, Fraction):
        return mpmath.mpf(c.numerator) / c.denominator
    if isinstance(c, int):
        return mpmath.mpf(c)
    return mpmath.mpmathify(c)


class MultiPoly:
    """Sparse polynomial in ``nvars`` variables: {exponent tuple: coefficient}."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms=None):
        self.nvars = nvars
        clean = {}
        for exp, c in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != nvars:
                raise ValueError(f"exponent {exp} does not have length {nvars}")
            if isinstance(c, (int, float, str)):
                c = as_fraction(c)
            if c == 0:
                continue
            if exp in clean:
                c = clean[exp] + c
                if c == 0:
                    del clean[exp]
                    continue
            clean[exp] = c
        self.terms = clean

    @classmethod
    def zero(cls, nvars: int) -> "MultiPoly":
        return cls(nvars)

    @classmethod
    def constant(cls, nvars: int, c) -> "MultiPoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars: int, j: int) -> "MultiPoly":
        exp = [0] * nvars
        exp[j] = 1
        return cls(nvars, {tuple(exp): Fraction(1)})

    @classmethod
    def monomial(cls, exp, c=1) -> "MultiPoly":
        return cls(len(exp), {tuple(exp): c})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.constant(self.nvars, other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, tuple(sorted(self.terms.items()))))

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: (-sum(kv[0]), tuple(-e for e in kv[0])))

    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def _check(self, other: "MultiPoly"):
        if other.nvars != self.nvars:
            raise ValueError("polynomials live in different numbers of variables")

    def __add__(self, other):
        if not isinstance(other, MultiPoly):
            other = MultiPoly.constant(self.nvars, other)
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out[e] + c if e in out else c
        return MultiPoly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, MultiPoly):
            other = MultiPoly.constant(self.nvars, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            return self.scale(other)
        self._check(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = c1 * c2
                out[e] = out[e] + c if e in out else c
        return MultiPoly(self.nvars, out)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c) -> "MultiPoly":
        return MultiPoly(self.nvars, {e: c * v for e, v in self.terms.items()})

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        out = MultiPoly.constant(self.nvars, Fraction(1))
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def diff(self, j: int) -> "MultiPoly":
        out = {}
        for e, c in self.terms.items():
            if e[j] == 0:
                continue
            ne = list(e)
            ne[j] -= 1
            out[tuple(ne)] = e[j] * c
        return MultiPoly(self.nvars, out)

    def diff_multi(self, alpha) -> "MultiPoly":
        out = self
        for j, k in enumerate(alpha):
            for _ in range(k):
                out = out.diff(j)
        return out

    def map_coeffs(self, fn) -> "MultiPoly":
        return MultiPoly(self.nvars, {e: fn(c) for e, c in self.terms.items()})

    def dilate(self, factors) -> "MultiPoly":
        """Substitute x_j -> factors[j] * x_j (factors exact rationals)."""
        out = {}
        for e, c in self.terms.items():
            m = Fraction(1)
            for f, k in zip(factors, e):
                m *= Fraction(f) ** k
            out[e] = m * c
        return MultiPoly(self.nvars, out)

    def evaluate(self, point):
        acc = 0
        for e, c in self.terms.items():
            term = c
            for x, k in zip(point, e):
                if k:
                    term = term * x ** k
            acc = acc + term
        return acc

    def evaluate_mp(self, point):
        """Numeric value at ``point`` using mpmath arithmetic."""
        acc = mpmath.mpc(0)
        for e, c in self.terms.items():
            term = coeff_to_mpc(c)
            for x, k in zip(point, e):
                if k:
                    term *= mpmath.mpmathify(x) ** k
            acc += term
        return acc

    def leading_term(self):
        """Largest exponent in graded-lexicographic order and its coefficient."""
        e = max(self.terms, key=lambda ex: (sum(ex), ex))
        return e, self.terms[e]

    def apply_as_operator(self, target: "MultiPoly") -> "MultiPoly":
        """Ordinary action of the constant-coefficient operator self(d) on a polynomial."""
        out = MultiPoly.zero(target.nvars)
        for e, c in self.terms.items():
            out = out + target.diff_multi(e).scale(c)
        return out

    def to_triples(self):
        """Rational coefficients as (exponent list, numerator, denominator) triples."""
        rows = []
        for e, c in self.sorted_terms():
            c = as_fraction(c)
            rows.append([list(e), c.numerator, c.denominator])
        return rows

    @classmethod
    def from_triples(cls, nvars: int, rows) -> "MultiPoly":
        return cls(nvars, {tuple(e): Fraction(num, den) for e, num, den in rows})

    def __str__(self):
        if not self.terms:
            return "0"
        names = _var_names(self.nvars)
        pieces = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                names[j] if k == 1 else f"{names[j]}^{k}" for j, k in enumerate(e) if k
            )
            if isinstance(c, Fraction):
                if mono and abs(c) == 1:
                    body = mono
                else:
                    body = format_fraction(abs(c)) + ("*" + mono if mono else "")
                pieces.append(("-" if c < 0 else "+", body))
            else:
                pieces.append(("+", f"({c})" + ("*" + mono if mono else "")))
        sign, body = pieces[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"MultiPoly({self.nvars}, {self})"


def _var_names(n: int) -> list[str]:
    if n <= 3:
        return ["x", "y", "z"][:n]
    return [f"x{j + 1}" for j in range(n)]


def monomials_up_to(nvars: int, max_degree: int) -> list[tuple[int, ...]]:
    """All exponent vectors of total degree <= max_degree, graded then lexicographically descending."""
    out = []
    for d in range(max_degree + 1):
        level = [e for e in product(range(d + 1), repeat=nvars) if sum(e) == d]
        level.sort(reverse=True)
        out.extend(level)
    return out
