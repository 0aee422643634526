"""Data model for concrete prehomogeneous vector spaces and the built-in catalogue.

Every built-in has rank one: a single basic relative invariant ``f`` on X and a
dual invariant ``fdual`` on the dual space. Orbits are the real sign chambers of
``f``; each carries a rational sample point and a chart whose fiber coordinate
is the value |f|.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .errors import NotEigen, NotFound
from .polynomials import MultiPoly, UnivarPolyS, format_fraction
from .symbolic_weyl import b_function, bernstein_remainder

BUILTIN_NAMES = ("TATE", "QF_2_0", "QF_1_1", "QF_3_0", "QF_2_1")
DUAL_SUFFIX = "_DUAL"

HALF_LINE = "HALF_LINE"
SPHERE_SHELL = "SPHERE_SHELL"
HYPERBOLOID_SHELL = "HYPERBOLOID_SHELL"


@dataclass(frozen=True)
class OrbitChart:
    """One real open orbit: sign of f, a rational sample point, and a chart.

    Chart conventions (fiber value ``t = |f|``):

    * ``HALF_LINE``: x = sign * t.
    * ``SPHERE_SHELL``: x = sqrt(t) * u with u on the unit sphere of R^p.
    * ``HYPERBOLOID_SHELL``: x = sqrt(t) * (cosh(theta) u, sinh(theta) v) on the
      chamber Q > 0 and x = sqrt(t) * (sinh(theta) u, cosh(theta) v) on Q < 0, with
      u in S^(p-1), v in S^(q-1).
    """

    sign_vector: tuple
    sample_point: tuple
    kind: str
    p: int
    q: int
    truncation: float = math.inf

    def point(self, t, theta=0.0, u=None, v=None):
        """Chart map (fiber, hyperbolic angle, sphere directions) -> point of X."""
        if self.kind == HALF_LINE:
            return (self.sign_vector[0] * t,)
        root = math.sqrt(t)
        u = tuple(u) if u is not None else (1.0,) + (0.0,) * (self.p - 1)
        if self.kind == SPHERE_SHELL:
            return tuple(root * c for c in u)
        v = tuple(v) if v is not None else (1.0,) + (0.0,) * (self.q - 1)
        if self.sign_vector[0] > 0:
            a, b = math.cosh(theta), math.sinh(theta)
        else:
            a, b = math.sinh(theta), math.cosh(theta)
        return tuple(root * a * c for c in u) + tuple(root * b * c for c in v)

    def to_json(self):
        return {
            "sign_vector": list(self.sign_vector),
            "sample_point": [format_fraction(c) for c in self.sample_point],
            "kind": self.kind,
            "p": self.p,
            "q": self.q,
            "truncation": None if math.isinf(self.truncation) else self.truncation,
        }

    @classmethod
    def from_json(cls, d):
        trunc = d.get("truncation")
        return cls(
            sign_vector=tuple(d["sign_vector"]),
            sample_point=tuple(Fraction(c) for c in d["sample_point"]),
            kind=d["kind"],
            p=d["p"],
            q=d["q"],
            truncation=math.inf if trunc is None else float(trunc),
        )


@dataclass(frozen=True)
class PvsDescriptor:
    """An immutable description of a prehomogeneous space of rank r."""

    name: str
    dim: int
    rank: int
    basic_invariants: tuple
    dual_basic_invariants: tuple
    degrees: tuple
    orbits: tuple
    lambda0: tuple
    measure_exponent: tuple
    lambda_orientation: int
    bfun: tuple
    kappa: tuple
    d_coeffs: tuple
    signature: tuple = (1, 0)
    capelli_mu: int = 2
    kind: str = field(default="QF")

    @property
    def k(self) -> int:
        return len(self.orbits)

    def d_of(self, lam):
        """d(lambda) = sum_i lambda_i * deg fdual_i."""
        if not isinstance(lam, (tuple, list)):
            lam = (lam,)
        return sum(l * d for l, d in zip(lam, self.d_coeffs))

    def convergent(self, lam, twist=0) -> bool:
        """Whether the defining integral converges at the shared coordinate ``lam``."""
        re = complex(lam + twist).real
        return self.lambda_orientation * re > float(self.kappa[0])

    def exponent(self, lam, twist=0):
        """Exponent t of |f| against Lebesgue measure for the shared coordinate."""
        return self.lambda_orientation * (lam + twist + self.lambda0[0]) - self.measure_exponent[0]

    def orbit_index_of(self, point) -> int:
        """Index of the orbit containing ``point`` (by sign of f)."""
        val = self.basic_invariants[0].evaluate(point)
        if val == 0:
            raise ValueError(f"{point} lies on the singular set")
        sgn = 1 if val > 0 else -1
        matches = [i for i, o in enumerate(self.orbits) if o.sign_vector[0] == sgn]
        if len(matches) != 1:
            raise ValueError(f"sign {sgn} does not single out an orbit of {self.name}")
        return matches[0]

    def summary(self) -> dict:
        return {
            "name": self.name,
            "dim": self.dim,
            "rank": self.rank,
            "orbits": self.k,
            "bfun": format_factors(self.bfun[0]),
        }


def format_factors(b) -> str:
    """Factored form such as 4*(s + 1)*(s + 3/2), omitting a leading 1."""
    parts = b.factor_strings()
    lead, rest = parts[0], [f"({p})" if " " in p else p for p in parts[1:]]
    if lead == "1" and len(parts) == 2:
        return parts[1]
    if lead == "1" and rest:
        return "*".join(rest)
    return "*".join([lead] + rest)


def _quadratic_form(p: int, q: int) -> MultiPoly:
    n = p + q
    terms = {}
    for j in range(n):
        e = [0] * n
        e[j] = 2
        terms[tuple(e)] = Fraction(1 if j < p else -1)
    return MultiPoly(n, terms)


def _log_gradient(f: MultiPoly, point):
    """The identification x -> grad f(x) / f(x) between the open orbits."""
    val = f.evaluate(point)
    return tuple(f.diff(j).evaluate(point) / val for j in range(f.nvars))


def _tate() -> PvsDescriptor:
    f = MultiPoly(1, {(1,): Fraction(1)})
    orbits = (
        OrbitChart((1,), (Fraction(1),), HALF_LINE, 1, 0),
        OrbitChart((-1,), (Fraction(-1),), HALF_LINE, 1, 0),
    )
    return PvsDescriptor(
        name="TATE",
        dim=1,
        rank=1,
        basic_invariants=(f,),
        dual_basic_invariants=(f,),
        degrees=((1, 1),),
        orbits=orbits,
        lambda0=(Fraction(1, 2),),
        measure_exponent=(Fraction(1),),
        lambda_orientation=1,
        bfun=(b_function(f, f),),
        kappa=(Fraction(-1, 2),),
        d_coeffs=(1,),
        signature=(1, 0),
        capelli_mu=2,
        kind="TATE",
    )


def _qf(p: int, q: int) -> PvsDescriptor:
    n = p + q
    Q = _quadratic_form(p, q)
    orbits = []
    if q == 0:
        orbits.append(OrbitChart((1,), (Fraction(1),) + (Fraction(0),) * (n - 1), SPHERE_SHELL, p, 0))
    else:
        plus = (Fraction(1),) + (Fraction(0),) * (n - 1)
        minus = (Fraction(0),) * (n - 1) + (Fraction(1),)
        orbits.append(OrbitChart((1,), plus, HYPERBOLOID_SHELL, p, q))
        orbits.append(OrbitChart((-1,), minus, HYPERBOLOID_SHELL, p, q))
    b = b_function(Q, Q)
    lam0 = Fraction(n, 4)
    sigma = Fraction(n, 2)
    top_root = max(b.rational_roots()[1])
    return PvsDescriptor(
        name=f"QF_{p}_{q}",
        dim=n,
        rank=1,
        basic_invariants=(Q,),
        dual_basic_invariants=(Q,),
        degrees=((2, 2),),
        orbits=tuple(orbits),
        lambda0=(lam0,),
        measure_exponent=(sigma,),
        lambda_orientation=1,
        bfun=(b,),
        kappa=(top_root + sigma - lam0,),
        d_coeffs=(2,),
        signature=(p, q),
        capelli_mu=2,
        kind="QF",
    )


_CACHE: dict[str, PvsDescriptor] = {}


def builtin_space(name: str) -> PvsDescriptor:
    """Return a validated built-in descriptor (names in ``BUILTIN_NAMES``)."""
    if name in _CACHE:
        return _CACHE[name]
    if name == "TATE":
        desc = _tate()
    elif name.startswith("QF_") and name in BUILTIN_NAMES:
        _, p, q = name.split("_")
        desc = _qf(int(p), int(q))
    else:
        raise NotFound(f"unknown space {name!r}; known: {', '.join(BUILTIN_NAMES)}")
    report = validate(desc)
    if not report.ok:
        raise AssertionError(f"built-in {name} failed validation: {report.failures()}")
    _CACHE[name] = desc
    return desc


def resolve_space(name: str) -> PvsDescriptor:
    """Built-in by name; a trailing ``_DUAL`` selects the dual descriptor."""
    if name.endswith(DUAL_SUFFIX):
        return dual(builtin_space(name[: -len(DUAL_SUFFIX)]))
    return builtin_space(name)


def dual(desc: PvsDescriptor) -> PvsDescriptor:
    """Dual descriptor: swap f and fdual, negate the orientation and lambda0."""
    f = desc.basic_invariants[0]
    fd = desc.dual_basic_invariants[0]
    orbits = []
    for o in desc.orbits:
        y = _log_gradient(f, o.sample_point)
        val = fd.evaluate(y)
        orbits.append(replace(o, sample_point=y, sign_vector=(1 if val > 0 else -1,)))
    if desc.name.endswith(DUAL_SUFFIX):
        name = desc.name[: -len(DUAL_SUFFIX)]
    else:
        name = desc.name + DUAL_SUFFIX
    return replace(
        desc,
        name=name,
        basic_invariants=desc.dual_basic_invariants,
        dual_basic_invariants=desc.basic_invariants,
        degrees=tuple((b, a) for a, b in desc.degrees),
        orbits=tuple(orbits),
        lambda0=tuple(-x for x in desc.lambda0),
        lambda_orientation=-desc.lambda_orientation,
        bfun=(b_function(fd, f),),
        d_coeffs=tuple(a for a, _ in desc.degrees),
    )


@dataclass
class ValidationReport:
    name: str
    checks: list = field(default_factory=list)

    def add(self, invariant: str, passed: bool, witness: str = ""):
        self.checks.append((invariant, bool(passed), witness))

    @property
    def ok(self) -> bool:
        return all(p for _, p, _ in self.checks)

    def failures(self):
        return [(n, w) for n, p, w in self.checks if not p]

    def passed(self, invariant: str) -> bool:
        return all(p for n, p, _ in self.checks if n == invariant)


def _chart_probe_points(orbit: OrbitChart):
    for t in (0.25, 1.0, 3.5):
        if orbit.kind == HALF_LINE:
            yield t, orbit.point(t)
        elif orbit.kind == SPHERE_SHELL:
            u = [1.0] * orbit.p
            nu = math.sqrt(orbit.p)
            yield t, orbit.point(t, u=[c / nu for c in u])
        else:
            for theta in (0.0, 0.7, 2.0):
                u = [0.6, 0.8][: orbit.p] if orbit.p == 2 else [1.0]
                v = [0.6, 0.8][: orbit.q] if orbit.q == 2 else [1.0]
                yield t, orbit.point(t, theta, u, v)


def validate(desc: PvsDescriptor) -> ValidationReport:
    """Run every descriptor invariant; failures are reported with witnesses."""
    rep = ValidationReport(desc.name)
    rep.add("rank", desc.rank == len(desc.basic_invariants) == len(desc.dual_basic_invariants),
            f"rank={desc.rank}")
    for i, (f, fd) in enumerate(zip(desc.basic_invariants, desc.dual_basic_invariants)):
        rep.add("homogeneous", f.is_homogeneous() and fd.is_homogeneous(), f"index {i}")
        rep.add("degrees", (f.degree(), fd.degree()) == tuple(desc.degrees[i]),
                f"({f.degree()}, {fd.degree()}) vs {desc.degrees[i]}")
        rep.add("d_coeffs", desc.d_coeffs[i] == fd.degree(), f"{desc.d_coeffs[i]} vs {fd.degree()}")
    rep.add("orientation", desc.lambda_orientation in (1, -1), str(desc.lambda_orientation))
    f = desc.basic_invariants[0]
    fd = desc.dual_basic_invariants[0]
    for i, o in enumerate(desc.orbits):
        val = f.evaluate(o.sample_point)
        sgn = 0 if val == 0 else (1 if val > 0 else -1)
        rep.add("sign_vector", sgn == o.sign_vector[0],
                f"orbit {i}: f({', '.join(map(format_fraction, o.sample_point))}) = {format_fraction(val)}")
        worst = 0.0
        for t, x in _chart_probe_points(o):
            worst = max(worst, abs(abs(float(f.evaluate(x))) - t) / t)
        rep.add("chart_fiber", worst < 1e-12, f"orbit {i}: max relative deviation {worst:.2e}")
        y = _log_gradient(f, o.sample_point)
        pairing = f.evaluate(o.sample_point) * fd.evaluate(y)
        rep.add("opposite_eigencharacters", pairing != 0,
                f"orbit {i}: f(x) * fdual(grad log f(x)) = {format_fraction(pairing)}")
    probes = [tuple(Fraction(a + 2 * j, 3 + j) for j in range(desc.dim)) for a in (1, 2, 5)]
    constants = set()
    for x in probes:
        if f.evaluate(x) != 0:
            y = _log_gradient(f, x)
            constants.add(f.evaluate(x) * fd.evaluate(y))
    rep.add("opposite_eigencharacters", len(constants) == 1,
            "f * (fdual o identification) takes values " + ", ".join(sorted(map(format_fraction, constants))))
    b = desc.bfun[0]
    try:
        rem = bernstein_remainder(f, fd, b)
        rep.add("bfun_certified", rem.is_zero(), "remainder " + ("0" if rem.is_zero() else repr(rem)))
    except NotEigen as exc:
        rep.add("bfun_certified", False, str(exc))
    rep.add("bfun_degree", b.degree == fd.degree(), f"deg b = {b.degree}, deg fdual = {fd.degree()}")
    lam0 = Fraction(desc.lambda0[0])
    rep.add("lambda0_lattice", (4 * lam0).denominator == 1, f"4*lambda0 = {format_fraction(4 * lam0)}")
    _, roots, rest = b.rational_roots()
    if roots and rest.degree == 0:
        expected = max(roots) + Fraction(desc.measure_exponent[0]) - abs(lam0)
        rep.add("kappa", Fraction(desc.kappa[0]) == expected,
                f"stored {format_fraction(Fraction(desc.kappa[0]))}, derived {format_fraction(expected)}")
    return rep


def descriptor_to_json(desc: PvsDescriptor) -> dict:
    return {
        "name": desc.name,
        "dim": desc.dim,
        "rank": desc.rank,
        "basic_invariants": [p.to_triples() for p in desc.basic_invariants],
        "dual_basic_invariants": [p.to_triples() for p in desc.dual_basic_invariants],
        "degrees": [list(d) for d in desc.degrees],
        "orbits": [o.to_json() for o in desc.orbits],
        "lambda0": [format_fraction(x) for x in desc.lambda0],
        "measure_exponent": [format_fraction(x) for x in desc.measure_exponent],
        "lambda_orientation": desc.lambda_orientation,
        "bfun": [[format_fraction(c) for c in b.coeffs] for b in desc.bfun],
        "kappa": [format_fraction(Fraction(x)) for x in desc.kappa],
        "d_coeffs": list(desc.d_coeffs),
        "signature": list(desc.signature),
        "capelli_mu": desc.capelli_mu,
        "kind": desc.kind,
    }


def descriptor_from_json(d: dict) -> PvsDescriptor:
    n = d["dim"]
    return PvsDescriptor(
        name=d["name"],
        dim=n,
        rank=d["rank"],
        basic_invariants=tuple(MultiPoly.from_triples(n, rows) for rows in d["basic_invariants"]),
        dual_basic_invariants=tuple(MultiPoly.from_triples(n, rows) for rows in d["dual_basic_invariants"]),
        degrees=tuple(tuple(x) for x in d["degrees"]),
        orbits=tuple(OrbitChart.from_json(o) for o in d["orbits"]),
        lambda0=tuple(Fraction(x) for x in d["lambda0"]),
        measure_exponent=tuple(Fraction(x) for x in d["measure_exponent"]),
        lambda_orientation=d["lambda_orientation"],
        bfun=tuple(UnivarPolyS([Fraction(c) for c in cs]) for cs in d["bfun"]),
        kappa=tuple(Fraction(x) for x in d["kappa"]),
        d_coeffs=tuple(d["d_coeffs"]),
        signature=tuple(d["signature"]),
        capelli_mu=d["capelli_mu"],
        kind=d["kind"],
    )


def dumps(desc: PvsDescriptor) -> str:
    return json.dumps(descriptor_to_json(desc), indent=2, sort_keys=True)


def loads(text: str) -> PvsDescriptor:
    return descriptor_from_json(json.loads(text))
