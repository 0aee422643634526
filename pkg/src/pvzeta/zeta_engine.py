"""Local zeta integrals per orbit, their continuation, poles and residues.

For the shared coordinate ``lam`` the engine integrates |f|^t * xi_0 against
Lebesgue measure, where t = orientation * (lam + lambda0) - sigma_mu is the
exponent returned by ``PvsDescriptor.exponent``.

Integration follows the orbit charts. The fiber integral over t = |f| of
t^B exp(-pi t c) is a Gamma function and is done in closed form. On hyperboloid
chambers the remaining hyperbolic angle theta is compactified by w = tanh(theta)^2,
which turns the angular integral into

    K = int_0^1 (1 - w)^t (1 + w)^(-B) w^((b - 1)/2) dw,

an integral with algebraic endpoint singularities. The leading Taylor terms at
each endpoint are integrated exactly and double-exponential (tanh-sinh)
quadrature handles the smooth remainder to working precision.

Below the convergence range the engine uses the orbitwise Bernstein identity
fdual(d)|f|^(t+1) = eps * b(t) |f|^t and integrates by parts M times:

    Z_i(t; xi) = ((-1)^deg(fdual) * eps_i)^M / prod_{j<M} b(t + j) * Z_i(t + M; fdual(d)^M xi).
"""

from __future__ import annotations

import cmath
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath

from .errors import Inconsistent, NearPole, OutOfRange, QuadratureFailure
from .polynomials import PiLaurent
from .pvs_registry import HALF_LINE, HYPERBOLOID_SHELL, SPHERE_SHELL, PvsDescriptor
from .schwartz_lab import TestFunction
from .symbolic_weyl import denominator, orbit_sign_factor

POLE_TOLERANCE = 1e-6
_WIDEN_STEPS = 8

_ctx = mpmath.MPContext()
_ctx.dps = 30


@dataclass(frozen=True)
class QuadConfig:
    """Numerical controls.

    ``max_subdivisions`` is the deepest tanh-sinh refinement level. Infinite cutoffs
    mean the exact/compactified treatment; a finite ``theta_cutoff`` is a starting
    value that is widened until the dropped tail is below ``rel_tol``.
    """

    rel_tol: float = 1e-9
    max_subdivisions: int = 6
    radial_cutoff: float = float("inf")
    theta_cutoff: float = float("inf")
    workers: int = 1
    dps: int = 30

    def __post_init__(self):
        if self.rel_tol <= 0 or self.workers <= 0 or self.dps < 15:
            raise ValueError("quadrature settings must be positive")
        if self.max_subdivisions < 2:
            raise ValueError("error estimates need at least two refinement levels")
        if self.radial_cutoff <= 0 or self.theta_cutoff <= 0:
            raise ValueError("cutoffs must be positive")

    def tail_bound(self) -> float:
        """Bound on the Gaussian tail dropped by a finite radial cutoff."""
        if self.radial_cutoff == float("inf"):
            return 0.0
        return float(mpmath.exp(-mpmath.pi * self.radial_cutoff ** 2) * 2 * self.radial_cutoff)


DEFAULT_CONFIG = QuadConfig()


def default_workers() -> int:
    raw = os.environ.get("PVZETA_THREADS", "").strip()
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


@dataclass(frozen=True)
class EtaVector:
    """Coefficients of eta in the orbit-indicator basis."""

    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(complex(c) for c in self.coeffs))

    @classmethod
    def unit(cls, k: int, i: int) -> "EtaVector":
        return cls(tuple(1 if j == i else 0 for j in range(k)))

    @classmethod
    def ones(cls, k: int) -> "EtaVector":
        return cls((1,) * k)

    def check(self, desc: PvsDescriptor):
        if len(self.coeffs) != desc.k:
            raise ValueError(f"{desc.name} has {desc.k} orbits but eta has {len(self.coeffs)} coefficients")


@dataclass(frozen=True)
class ZetaValue:
    value: complex
    abs_error_estimate: float
    lam: complex
    orbit_breakdown: tuple
    steps: int = 0
    flags: tuple = field(default_factory=tuple)


def _mp(x):
    if isinstance(x, Fraction):
        return _ctx.mpf(x.numerator) / x.denominator
    if isinstance(x, complex):
        return _ctx.mpc(x.real, x.imag)
    return _ctx.mpmathify(x)


def _coeff(c) -> mpmath.mpc:
    if isinstance(c, PiLaurent):
        acc = _ctx.mpc(0)
        for k, (re, im) in sorted(c.terms.items()):
            acc += _ctx.mpc(_mp(re), _mp(im)) * _ctx.pi ** k
        return acc
    return _ctx.mpc(_mp(c))


def _sphere_moment(alpha) -> mpmath.mpf:
    """Integral of u^alpha over the unit sphere of R^len(alpha) (0 for odd exponents)."""
    if any(a % 2 for a in alpha):
        return _ctx.mpf(0)
    num = _ctx.mpf(2)
    for a in alpha:
        num *= _ctx.gamma(_ctx.mpf(a + 1) / 2)
    return num / _ctx.gamma(_ctx.mpf(sum(alpha) + len(alpha)) / 2)


def _fiber_integral(B):
    """(1/2) pi^(-B) Gamma(B): the exact integral of r^(2B-1) exp(-pi r^2) over r > 0."""
    return _ctx.gamma(B) * _ctx.power(_ctx.pi, -B) / 2


def _binomial_series(e, sign, J):
    """Taylor coefficients of (1 + sign * x)^e up to x^(J-1)."""
    out = [_ctx.mpf(1)]
    for j in range(1, J):
        out.append(out[-1] * (e - j + 1) / j * sign)
    return out


def _series_product(a, b):
    J = len(a)
    return [sum(a[i] * b[j - i] for i in range(j + 1)) for j in range(J)]


def _endpoint_integral(e, g, taylor, c, maxdegree):
    """int_0^c x^e g(x) dx with the first Taylor terms of g integrated exactly.

    Subtracting sum_j g_j x^j leaves an integrand vanishing like x^(e + J) at the
    origin, so the remainder is benign even when Re(e) is close to -1.
    """
    exact = _ctx.mpc(0)
    for j, gj in enumerate(taylor):
        exact += gj * _ctx.power(c, e + j + 1) / (e + j + 1)

    def rem(x):
        poly = _ctx.mpf(0)
        for gj in reversed(taylor):
            poly = poly * x + gj
        return _ctx.power(x, e) * (g(x) - poly)

    v, err = _ctx.quad(rem, [0, c], error=True, maxdegree=maxdegree)
    return exact + v, err


@lru_cache(maxsize=200000)
def _angular_integral(tau, a: int, b: int, theta_cut: float, maxdegree: int, dps: int, rel_tol: float = 1e-9,
                      J: int = 4):
    """K(tau; a, b) with its quadrature error estimate (tau an mpc).

    K = int_0^1 (1 - w)^tau (1 + w)^(-B) w^beta dw, split at w = 1/2; each half has
    one algebraic endpoint singularity, treated by ``_endpoint_integral``.
    """
    with _ctx.workdps(dps):
        B = tau + _ctx.mpf(a + b + 2) / 2
        beta = _ctx.mpf(b - 1) / 2
        half = _ctx.mpf(1) / 2

        def g_left(w):
            return _ctx.power(1 - w, tau) * _ctx.power(1 + w, -B)

        def g_right(v):
            return _ctx.power(2 - v, -B) * _ctx.power(1 - v, beta)

        t_left = _series_product(_binomial_series(tau, -1, J), _binomial_series(-B, 1, J))
        two_b = _ctx.power(2, -B)
        t_right = _series_product([two_b * c for c in _binomial_series(-B, -half, J)],
                                  _binomial_series(beta, -1, J))
        v1, e1 = _endpoint_integral(beta, g_left, t_left, half, maxdegree)
        v2, e2 = _endpoint_integral(tau, g_right, t_right, half, maxdegree)
        tail = _ctx.mpf(0)
        if theta_cut != float("inf"):
            # A finite cutoff drops theta > Theta; Theta doubles until the dropped part is below rel_tol.
            theta = _ctx.mpf(theta_cut)
            for _ in range(_WIDEN_STEPS):
                v_lo = 1 / _ctx.cosh(theta) ** 2
                cut, ecut = _ctx.quad(lambda v: _ctx.power(v, tau) * g_right(v), [0, v_lo],
                                      error=True, maxdegree=maxdegree)
                if abs(cut) <= rel_tol * abs(v1 + v2):
                    break
                theta *= 2
            v2 -= cut
            tail = abs(cut) + ecut
        return v1 + v2, e1 + e2 + tail


def _orbit_moment(desc: PvsDescriptor, orbit_index: int, tau, alpha, cfg: QuadConfig):
    """Integral over the orbit of |f|^tau x^alpha exp(-pi |x|^2) dx, with error estimate."""
    orbit = desc.orbits[orbit_index]
    n = desc.dim
    total_deg = sum(alpha)
    if orbit.kind == HALF_LINE:
        B = (tau + total_deg + 1) / 2
        sign = orbit.sign_vector[0] ** total_deg
        return sign * _fiber_integral(B), _ctx.mpf(0)
    if any(a % 2 for a in alpha):
        return _ctx.mpf(0), _ctx.mpf(0)
    B = tau + _ctx.mpf(total_deg + n) / 2
    if orbit.kind == SPHERE_SHELL:
        return _sphere_moment(alpha) * _fiber_integral(B), _ctx.mpf(0)
    if orbit.kind != HYPERBOLOID_SHELL:
        raise ValueError(f"unknown chart kind {orbit.kind}")
    p, q = desc.signature
    plus, minus = alpha[:p], alpha[p:]
    if orbit.sign_vector[0] > 0:
        a, b = sum(plus) + p - 1, sum(minus) + q - 1
    else:
        a, b = sum(minus) + q - 1, sum(plus) + p - 1
    K, err = _angular_integral(tau, a, b, cfg.theta_cutoff, cfg.max_subdivisions, cfg.dps, cfg.rel_tol)
    pref = _sphere_moment(plus) * _sphere_moment(minus) * _fiber_integral(B) / 2
    return pref * K, abs(pref) * err


def _orbit_values(desc: PvsDescriptor, xi: TestFunction, tau, cfg: QuadConfig):
    """Per-orbit integrals of |f|^tau xi_0 for a convergent exponent tau."""
    n = desc.dim
    deg_f = desc.degrees[0][0]
    r = _mp(xi.rate)
    log_r = _ctx.log(r)
    out = []
    for i in range(desc.k):
        acc = _ctx.mpc(0)
        err = _ctx.mpf(0)
        for alpha, c in xi.poly.sorted_terms():
            m, e = _orbit_moment(desc, i, tau, alpha, cfg)
            if m == 0 and e == 0:
                continue
            scale = _ctx.exp(-(deg_f * tau + sum(alpha) + n) * log_r) if xi.rate != 1 else 1
            cc = _coeff(c) * scale
            acc += cc * m
            err += abs(cc) * e
        out.append((acc, err))
    return out


def _tau_mp(desc: PvsDescriptor, lam, twist=0):
    lam = _mp(complex(lam)) if not isinstance(lam, Fraction) else _mp(lam)
    tw = _mp(twist) if isinstance(twist, Fraction) else _mp(complex(twist))
    o = desc.lambda_orientation
    return o * (lam + tw + _mp(Fraction(desc.lambda0[0]))) - _mp(Fraction(desc.measure_exponent[0]))


def _tau_min(desc: PvsDescriptor):
    return float(max(desc.bfun[0].rational_roots()[1]))


def _check_tol(values, cfg: QuadConfig, lam):
    for v, e in values:
        if e > cfg.rel_tol * abs(v) and e > 1e-25:
            raise QuadratureFailure(
                f"error estimate {float(e):.3e} exceeds tolerance for |value| {float(abs(v)):.3e} at lambda={lam}"
            )


def _assemble(eta: EtaVector, values, lam, steps=0, flags=()):
    parts = tuple(complex(v) for v, _ in values)
    total = sum((c * p for c, p in zip(eta.coeffs, parts)), 0j)
    err = float(sum(abs(c) * float(e) for c, (_, e) in zip(eta.coeffs, values)))
    return ZetaValue(total, err, complex(lam), parts, steps, tuple(flags))


def z_convergent(desc: PvsDescriptor, eta: EtaVector, xi: TestFunction, lam,
                 cfg: QuadConfig = DEFAULT_CONFIG, twist=0) -> ZetaValue:
    """Evaluate Z_lam(eta, xi) by direct integration; lam must be in the convergence range."""
    eta.check(desc)
    if not desc.convergent(complex(lam), complex(twist)):
        raise OutOfRange(f"lambda={lam} is outside the convergence range of {desc.name}")
    if xi.is_zero():
        return ZetaValue(0j, 0.0, complex(lam), (0j,) * desc.k)
    with _ctx.workdps(cfg.dps):
        tau = _tau_mp(desc, lam, twist)
        values = _orbit_values(desc, xi, tau, cfg)
    _check_tol(values, cfg, lam)
    return _assemble(eta, values, lam)


@lru_cache(maxsize=64)
def _signs(desc: PvsDescriptor):
    return tuple(orbit_sign_factor(desc, o) for o in desc.orbits)


def _derived(xi: TestFunction, desc: PvsDescriptor, M: int) -> TestFunction:
    fd = desc.dual_basic_invariants[0]
    out = xi
    for _ in range(M):
        out = out.apply_operator(fd)
    return out


def steps_needed(desc: PvsDescriptor, lam, twist=0) -> int:
    """Least M >= 0 such that the exponent shifted by M is in the convergence range."""
    tau = desc.exponent(complex(lam), complex(twist))
    tmin = _tau_min(desc)
    M = 0
    while tau.real + M <= tmin:
        M += 1
    return M


def near_pole(desc: PvsDescriptor, lam, twist=0):
    """(distance, factor description, m) of the closest pole candidate."""
    d, g, m = denominator(desc).nearest_pole(complex(lam) + complex(twist))
    return d, g.describe(), m


def z_continued(desc: PvsDescriptor, eta: EtaVector, xi: TestFunction, lam,
                cfg: QuadConfig = DEFAULT_CONFIG, force_M: int | None = None, twist=0) -> ZetaValue:
    """Meromorphic continuation through the orbitwise Bernstein recursion."""
    eta.check(desc)
    dist, factor, m = near_pole(desc, lam, twist)
    if dist < POLE_TOLERANCE:
        raise NearPole(f"lambda={lam} is within {dist:.1e} of a pole of {factor} (argument = {-m})",
                       factor=factor, distance=dist)
    M_min = steps_needed(desc, lam, twist)
    M = M_min if force_M is None else force_M
    if M < M_min:
        raise OutOfRange(f"{M} integration-by-parts steps do not reach convergence (need {M_min})")
    if xi.is_zero():
        return ZetaValue(0j, 0.0, complex(lam), (0j,) * desc.k, M)
    b = desc.bfun[0]
    sgn_deg = (-1) ** desc.degrees[0][1]
    eps = _signs(desc)
    xi_M = _derived(xi, desc, M)
    with _ctx.workdps(cfg.dps):
        tau = _tau_mp(desc, lam, twist)
        base = _orbit_values(desc, xi_M, tau + M, cfg)
        denom = _ctx.mpc(1)
        for j in range(M):
            denom *= b(tau + j)
        values = []
        for (v, e), ep in zip(base, eps):
            fac = _ctx.mpf(sgn_deg * int(ep)) ** M / denom
            values.append((v * fac, e * abs(fac)))
    _check_tol(values, cfg, lam)
    flags = ("continued",) if M else ()
    return _assemble(eta, values, lam, M, flags)


def zeta(desc, eta, xi, lam, cfg: QuadConfig = DEFAULT_CONFIG, twist=0) -> ZetaValue:
    """Z_lam(eta, xi) anywhere off the poles: direct when convergent, else continued."""
    if desc.convergent(complex(lam), complex(twist)):
        return z_convergent(desc, eta, xi, lam, cfg, twist)
    return z_continued(desc, eta, xi, lam, cfg, twist=twist)


def lz(desc: PvsDescriptor, eta: EtaVector, xi: TestFunction, lam,
       cfg: QuadConfig = DEFAULT_CONFIG, twist=0) -> complex:
    """L(lam) * Z_lam(eta, xi), entire in lam.

    The Gamma product L cancels the recursion denominators exactly:
    L(lam) / prod_{j<M} b(t + j) = lead(b)^(-M) * prod_roots 1 / Gamma(alpha + M),
    so the product is evaluated with reciprocal Gamma functions and never divides by zero.
    """
    eta.check(desc)
    gp = denominator(desc)
    M = steps_needed(desc, lam, twist)
    if xi.is_zero():
        return 0j
    sgn_deg = (-1) ** desc.degrees[0][1]
    eps = _signs(desc)
    xi_M = _derived(xi, desc, M)
    with _ctx.workdps(cfg.dps):
        tau = _tau_mp(desc, lam, twist)
        base = _orbit_values(desc, xi_M, tau + M, cfg)
        _check_tol(base, cfg, lam)
        lam_mp = tau  # alpha_j = tau - root_j
        gam = _ctx.mpc(1)
        for g in gp.factors:
            gam *= _ctx.rgamma(lam_mp - _mp(g.b_root) + M)
        lead = _mp(gp.leading) ** M
        total = _ctx.mpc(0)
        for c, (v, _), ep in zip(eta.coeffs, base, eps):
            total += _ctx.mpc(c) * v * _ctx.mpf(sgn_deg * int(ep)) ** M
        return complex(total * gam / lead)


def residue_estimate(desc: PvsDescriptor, eta: EtaVector, xi: TestFunction, pole_lam,
                     cfg: QuadConfig = DEFAULT_CONFIG, radii=(1e-2, 5e-3), points: int = 8) -> complex:
    """Residue at a simple pole candidate from circular contours at two radii."""
    dist, factor, _ = near_pole(desc, pole_lam)
    if dist > 1e-9:
        raise ValueError(f"{pole_lam} is not a pole candidate of {desc.name}")
    estimates = []
    scale = 0.0
    for rho in radii:
        acc = 0j
        for k in range(points):
            w = rho * cmath.exp(2j * math.pi * k / points)
            val = zeta(desc, eta, xi, complex(pole_lam) + w, cfg).value
            scale = max(scale, abs(val) * rho)
            acc += val * w
        estimates.append(acc / points)
    r1, r2 = estimates[0], estimates[-1]
    if abs(r1 - r2) > 1e-3 * max(abs(r1), abs(r2)) + 1e-10 * max(scale, 1.0):
        raise Inconsistent(f"contour residues disagree: {r1} at radius {radii[0]} vs {r2} at {radii[-1]}")
    ratio = (radii[0] / radii[-1]) ** points
    return (ratio * r2 - r1) / (ratio - 1)


def _grid_task(args):
    desc, eta, xi, lam, cfg, mode = args
    try:
        if mode == "lz":
            return lz(desc, eta, xi, lam, cfg), None
        return zeta(desc, eta, xi, lam, cfg), None
    except NearPole as exc:
        return None, ("near_pole", exc.factor)
    except QuadratureFailure as exc:
        return None, ("quadrature_failure", str(exc))


def parallel_map(fn, tasks, workers: int = 1):
    """Map ``fn`` over ``tasks`` in worker processes; output order follows task order."""
    tasks = list(tasks)
    if workers <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks))


def evaluate_grid(desc, eta, xi, lambdas, cfg: QuadConfig = DEFAULT_CONFIG, mode: str = "zeta"):
    """Evaluate on many points; results keep the grid order regardless of worker count."""
    tasks = [(desc, eta, xi, lam, cfg, mode) for lam in lambdas]
    return parallel_map(_grid_task, tasks, cfg.workers)
