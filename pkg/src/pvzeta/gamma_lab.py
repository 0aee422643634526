"""Gamma matrices from the local functional equation and the identity suite.

In the orbit-indicator bases the functional equation reads

    Zdual_lam(etadual_j, F_psi xi) = sum_i gamma_ji * Z_lam(eta_i, xi)

for every test function xi. Sampling it on a redundant family of test
functions gives an overdetermined linear system for gamma, solved by least
squares with the residual and condition number kept as diagnostics.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import IllConditioned
from .polynomials import format_fraction
from .pvs_registry import PvsDescriptor, dual
from .schwartz_lab import PSI1, PsiCharacter, TestFunction, a_psi, basis, c_psi, fourier, self_dual_factor
from .symbolic_weyl import capelli_eigenvalue
from .zeta_engine import DEFAULT_CONFIG, EtaVector, QuadConfig, parallel_map, z_continued, zeta

CONDITION_LIMIT = 1e6


def default_tolerance(desc: PvsDescriptor) -> float:
    return 1e-6 if desc.dim == 1 else 1e-4


@dataclass
class GammaMatrix:
    entries: np.ndarray
    lam: complex
    psi: PsiCharacter
    lsq_residual: float
    condition_number: float
    basis_size: int
    dim: int
    flags: tuple = ()

    @property
    def self_dual(self) -> np.ndarray:
        """A(psi)^(-1/2) * gamma."""
        return self.entries * self_dual_factor(self.psi, self.dim)

    def conventions(self) -> dict:
        return {
            "fourier_kernel": "exp(+2 pi i a <y, x>)",
            "c_psi": f"1/(2 pi i a), a = {format_fraction(self.psi.a)}",
            "A_psi": format_fraction(a_psi(self.psi, self.dim)),
            "self_dual_rescale": self_dual_factor(self.psi, self.dim),
            "equation": "Zdual_lam(etadual_j, F_psi xi) = sum_i gamma[j][i] Z_lam(eta_i, xi)",
            "basis": "orbit indicators, in descriptor orbit order",
        }

    def to_json(self) -> dict:
        return {
            "lambda": [self.lam.real, self.lam.imag],
            "psi": format_fraction(self.psi.a),
            "entries": [[[z.real, z.imag] for z in row] for row in self.entries],
            "self_dual_entries": [[[z.real, z.imag] for z in row] for row in self.self_dual],
            "residual": self.lsq_residual,
            "cond": self.condition_number,
            "basis_size": self.basis_size,
            "flags": list(self.flags),
            "conventions": self.conventions(),
        }


def reflection_symmetries(desc: PvsDescriptor) -> tuple:
    """Coordinates j with f(..., -x_j, ...) = f(x) and the same for the dual invariant."""
    out = []
    for j in range(desc.dim):
        flip = [Fraction(-1) if i == j else Fraction(1) for i in range(desc.dim)]
        if all(p.dilate(flip) == p for p in desc.basic_invariants + desc.dual_basic_invariants):
            out.append(j)
    return tuple(out)


def sample_functions(desc: PvsDescriptor, basis_size: int) -> list[TestFunction]:
    """First ``basis_size`` basis functions not annihilated by a reflection symmetry.

    A monomial odd in a coordinate that f and its dual both ignore the sign of
    integrates to zero on every orbit, on both sides, so it carries no information.
    """
    sym = reflection_symmetries(desc)
    degree = 0
    while True:
        keep = [xi for xi in basis(desc.dim, degree)
                if not any(e % 2 for j, e in enumerate(next(iter(xi.poly.terms))) if j in sym)]
        if len(keep) >= basis_size:
            return keep[:basis_size]
        degree += 1


def _orbit_row(args):
    desc, xi, lam, cfg, twist, force_M = args
    if force_M is not None:
        return z_continued(desc, EtaVector.ones(desc.k), xi, lam, cfg, force_M, twist).orbit_breakdown
    return zeta(desc, EtaVector.ones(desc.k), xi, lam, cfg, twist).orbit_breakdown


def extract_gamma(desc: PvsDescriptor, lam, psi: PsiCharacter = PSI1, basis_size: int | None = None,
                  cfg: QuadConfig = DEFAULT_CONFIG, twist=0, strict: bool = False,
                  force_M: int | None = None) -> GammaMatrix:
    """Least-squares gamma matrix at ``lam`` for the character ``psi``.

    ``force_M`` routes both sides through that many integration-by-parts steps.
    """
    k = desc.k
    if basis_size is None:
        basis_size = max(2 * k, 4)
    if basis_size < 2 * k:
        raise ValueError(f"basis_size must be at least {2 * k}")
    ddesc = dual(desc)
    funcs = sample_functions(desc, basis_size)
    tasks = [(desc, xi, lam, cfg, twist, force_M) for xi in funcs]
    tasks += [(ddesc, fourier(xi, psi), lam, cfg, twist, force_M) for xi in funcs]
    rows = parallel_map(_orbit_row, tasks, cfg.workers)
    Z = np.array(rows[:basis_size], dtype=complex)
    Zd = np.array(rows[basis_size:], dtype=complex)
    sol, *_ = np.linalg.lstsq(Z, Zd, rcond=None)
    gamma = sol.T
    resid = np.linalg.norm(Z @ sol - Zd) / max(np.linalg.norm(Zd), 1e-300)
    cond = float(np.linalg.cond(Z))
    flags = ()
    if not np.isfinite(cond) or cond >= CONDITION_LIMIT:
        if strict:
            raise IllConditioned(f"condition number {cond:.3e} for {desc.name} at lambda={lam}")
        flags = ("ill_conditioned",)
    return GammaMatrix(gamma, complex(lam), psi, float(resid), cond, basis_size, desc.dim, flags)


def parity_diagonal(gamma: np.ndarray) -> np.ndarray:
    """Change to the (even, odd) character basis eta_+ +/- eta_- for two orbits."""
    P = np.array([[1, 1], [1, -1]], dtype=complex)
    return P @ gamma @ np.linalg.inv(P)


def orbit_permutation(desc: PvsDescriptor, a) -> np.ndarray:
    """Matrix of m_a on dual orbit indicators: row j has a 1 at the orbit of a * sample_j."""
    ddesc = dual(desc)
    a = Fraction(a)
    k = ddesc.k
    P = np.zeros((k, k))
    for j, o in enumerate(ddesc.orbits):
        image = tuple(a * c for c in o.sample_point)
        P[j, ddesc.orbit_index_of(image)] = 1
    return P


@dataclass
class CheckReport:
    name: str
    passed: bool
    deviation: float
    tolerance: float
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        self.passed = bool(self.passed)
        self.deviation = float(self.deviation)
        self.tolerance = float(self.tolerance)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: deviation {self.deviation:.3e} (tolerance {self.tolerance:.0e})"

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "deviation": self.deviation,
            "tolerance": self.tolerance,
            "details": self.details,
        }


def _rel_dev(a: np.ndarray, b: np.ndarray) -> float:
    scale = max(float(np.max(np.abs(b))), 1e-300)
    return float(np.max(np.abs(a - b))) / scale


def check_inversion(desc: PvsDescriptor, lam, psi: PsiCharacter = PSI1, cfg: QuadConfig = DEFAULT_CONFIG,
                    tol: float | None = None, basis_size: int | None = None) -> CheckReport:
    """gamma_dual(lam; psi_-1) * gamma(lam; psi) = A(psi) * id."""
    tol = default_tolerance(desc) if tol is None else tol
    g = extract_gamma(desc, lam, psi, basis_size, cfg)
    gd = extract_gamma(dual(desc), lam, psi.negated(), basis_size, cfg)
    A = float(a_psi(psi, desc.dim))
    prod = gd.entries @ g.entries
    dev = float(np.max(np.abs(prod - A * np.eye(desc.k))))
    return CheckReport(f"inversion[{desc.name},lambda={lam},{psi}]", dev < tol, dev, tol,
                       {"A": A, "residuals": [g.lsq_residual, gd.lsq_residual],
                        "cond": [g.condition_number, gd.condition_number]})


def scaling_exponent(desc: PvsDescriptor, lam) -> complex:
    """-d(lam_dual) - n/2, with lam_dual the coordinate of lam on the dual side."""
    lam_dual = dual(desc).lambda_orientation * complex(lam)
    return -desc.d_of(lam_dual) - desc.dim / 2


def check_scaling(desc: PvsDescriptor, lam, a, cfg: QuadConfig = DEFAULT_CONFIG, tol: float | None = None,
                  self_dual: bool = False, basis_size: int | None = None) -> CheckReport:
    """gamma(lam; psi_a) = |a|^(-d - n/2) gamma(lam; psi) o m_a (self-dual: |a|^(-d))."""
    tol = default_tolerance(desc) if tol is None else tol
    psi_a = PsiCharacter(a)
    g1 = extract_gamma(desc, lam, PSI1, basis_size, cfg)
    ga = extract_gamma(desc, lam, psi_a, basis_size, cfg)
    P = orbit_permutation(desc, a)
    if self_dual:
        lhs = ga.self_dual
        predicted = (P @ g1.self_dual) * abs(float(a)) ** (scaling_exponent(desc, lam) + desc.dim / 2)
        label = "self_dual_scaling"
    else:
        lhs = ga.entries
        predicted = (P @ g1.entries) * abs(float(a)) ** scaling_exponent(desc, lam)
        label = "scaling"
    dev = _rel_dev(lhs, predicted)
    return CheckReport(f"{label}[{desc.name},lambda={lam},a={a}]", dev < tol, dev, tol,
                       {"permutation": P.astype(int).tolist()})


def check_translation(desc: PvsDescriptor, lam, mu, cfg: QuadConfig = DEFAULT_CONFIG,
                      tol: float | None = None, basis_size: int | None = None) -> CheckReport:
    """gamma at lam + mu equals gamma at mu of the family twisted by |f|^lam."""
    tol = default_tolerance(desc) if tol is None else tol
    direct = extract_gamma(desc, complex(lam) + complex(mu), PSI1, basis_size, cfg)
    shifted = extract_gamma(desc, mu, PSI1, basis_size, cfg, twist=lam)
    dev = _rel_dev(shifted.entries, direct.entries)
    return CheckReport(f"translation[{desc.name},lambda={lam},mu={mu}]", dev < tol, dev, tol)


def h_shift(desc: PvsDescriptor, M: int) -> int:
    """Shift of the shared coordinate produced by multiplying with h^M, h = f^mu."""
    return desc.lambda_orientation * desc.capelli_mu * M


def check_hM_shift(desc: PvsDescriptor, lam, M: int, psi: PsiCharacter = PSI1, cfg: QuadConfig = DEFAULT_CONFIG,
                   tol: float | None = None, max_degree: int = 1) -> CheckReport:
    """Both h^M identities, orbit by orbit.

    (a) Zdual_lam(etadual_j, F(h^M xi)) = (-c(psi))^(M deg h) * c_twist(lam) * Zdual_(lam+shift)(etadual_j, F xi)
    (b) Z_lam(gamma etadual_j, h^M xi) = Z_(lam+shift)(gamma etadual_j, xi)
    where h = f^2, c_twist is the Capelli eigenvalue of the dual space at the dual
    exponent, and shift = 2M in the shared coordinate.
    """
    tol = default_tolerance(desc) if tol is None else tol
    ddesc = dual(desc)
    f = desc.basic_invariants[0]
    h = f ** desc.capelli_mu
    hM = h ** M
    deg_h = h.degree()
    shift = h_shift(desc, M)
    lam = complex(lam)
    c_tw_poly = capelli_eigenvalue(ddesc, M)
    c_tw = complex(c_tw_poly(ddesc.exponent(lam)))
    pref = complex(-complex(c_psi(psi))) ** (M * deg_h)
    gamma = extract_gamma(desc, lam, psi, None, cfg).entries
    worst_a = 0.0
    worst_b = 0.0
    for xi in basis(desc.dim, max_degree):
        lhs_a = zeta(ddesc, EtaVector.ones(ddesc.k), fourier(xi.mul_poly(hM), psi), lam, cfg).orbit_breakdown
        base_a = zeta(ddesc, EtaVector.ones(ddesc.k), fourier(xi, psi), lam + shift, cfg).orbit_breakdown
        rhs_a = [pref * c_tw * v for v in base_a]
        scale = max(max(abs(v) for v in rhs_a), 1e-300)
        worst_a = max(worst_a, max(abs(x - y) for x, y in zip(lhs_a, rhs_a)) / scale)
        for j in range(ddesc.k):
            eta = EtaVector(tuple(gamma[j]))
            lhs_b = zeta(desc, eta, xi.mul_poly(hM), lam, cfg).value
            rhs_b = zeta(desc, eta, xi, lam + shift, cfg).value
            sc = max(abs(rhs_b), abs(lhs_b), 1e-300)
            if sc > 1e-250:
                worst_b = max(worst_b, abs(lhs_b - rhs_b) / sc)
    dev = max(worst_a, worst_b)
    return CheckReport(f"hM_shift[{desc.name},lambda={lam.real:g},M={M}]", dev < tol, dev, tol,
                       {"fourier_side": worst_a, "primal_side": worst_b, "c_twist": str(c_tw_poly),
                        "shift": shift})
