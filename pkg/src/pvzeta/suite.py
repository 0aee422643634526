"""The verification suite: named numerical and symbolic checks per space.

Each check returns a ``CheckReport``; ``run_suite`` collects the ones that apply
to a given space. Check ids are stable and shared by the CLI report and the tests.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath
import numpy as np

from .errors import NearPole
from .gamma_lab import (CheckReport, check_hM_shift, check_inversion, check_scaling, check_translation,
                        extract_gamma, parity_diagonal)
from .pvs_registry import PvsDescriptor, dual
from .schwartz_lab import PsiCharacter, TestFunction, basis
from .symbolic_weyl import bernstein_remainder, denominator, leading_coeff_at, twist_shift_check
from .tables import dumps_json, zeta_grid_csv
from .zeta_engine import DEFAULT_CONFIG, EtaVector, QuadConfig, lz, residue_estimate, z_continued, z_convergent, zeta


def gamma_r(s):
    """pi^(-s/2) Gamma(s/2)."""
    s = mpmath.mpmathify(s)
    return mpmath.pi ** (-s / 2) * mpmath.gamma(s / 2)


def is_tate(desc: PvsDescriptor) -> bool:
    return desc.kind == "TATE" and desc.lambda_orientation == 1


def convergent_grid(desc: PvsDescriptor) -> list[complex]:
    """Five points inside the convergence range, spread over a vertical band."""
    kap = float(desc.kappa[0])
    o = desc.lambda_orientation
    return [o * (kap + 0.2 + 0.35 * j) + 0.25j * (j - 2) for j in range(5)]


def check_bfun_certified(desc: PvsDescriptor) -> CheckReport:
    """Exact Bernstein identity, symbolically and at s = 0..3 by plain differentiation."""
    f, fd = desc.basic_invariants[0], desc.dual_basic_invariants[0]
    b = desc.bfun[0]
    failures = []
    if not bernstein_remainder(f, fd, b).is_zero():
        failures.append("symbolic")
    for s in range(4):
        lhs = fd.apply_as_operator(f ** (s + 1))
        rhs = (f ** s).scale(b(Fraction(s)))
        if lhs != rhs:
            failures.append(f"s={s}")
    return CheckReport(f"bfun_certified[{desc.name}]", not failures, float(len(failures)), 0.0,
                       {"bfun": str(b), "failures": failures})


def check_tate_closed_form(desc: PvsDescriptor, cfg: QuadConfig = DEFAULT_CONFIG) -> CheckReport:
    """Z at lambda = 1/2, 3/2 with the Gaussian against Gamma_R(lambda + 1/2)."""
    g = TestFunction.gaussian(1)
    dev = 0.0
    vals = {}
    for lam in (Fraction(1, 2), Fraction(3, 2)):
        v = zeta(desc, EtaVector.ones(2), g, lam, cfg).value
        ref = complex(gamma_r(float(lam) + 0.5))
        vals[str(lam)] = [v.real, v.imag]
        dev = max(dev, abs(v - ref) / abs(ref))
    return CheckReport(f"tate_closed_form[{desc.name}]", dev < 1e-8, dev, 1e-8, {"values": vals})


def check_continuation(desc: PvsDescriptor, cfg: QuadConfig = DEFAULT_CONFIG, forced=(1, 2, 3)) -> CheckReport:
    """Forced integration-by-parts continuation against direct integration, orbit by orbit."""
    worst = 0.0
    count = 0
    ones = EtaVector.ones(desc.k)
    for lam in convergent_grid(desc):
        for xi in basis(desc.dim, 2):
            ref = z_convergent(desc, ones, xi, lam, cfg).orbit_breakdown
            for M in forced:
                got = z_continued(desc, ones, xi, lam, cfg, force_M=M).orbit_breakdown
                for a, b in zip(ref, got):
                    count += 1
                    scale = max(abs(a), abs(b))
                    if scale > 1e-250:
                        worst = max(worst, abs(a - b) / scale)
    return CheckReport(f"continuation[{desc.name}]", worst <= 1e-6, worst, 1e-6, {"comparisons": count})


def _lz_disk(desc, eta, xi, center, cfg, radius=1e-2, points=8):
    vals = [lz(desc, eta, xi, center, cfg)]
    for rho in (radius, radius / 2):
        for j in range(points):
            vals.append(lz(desc, eta, xi, complex(center) + rho * complex(mpmath.expjpi(2 * j / points)), cfg))
    return vals


def check_pole_residue(desc: PvsDescriptor, cfg: QuadConfig = DEFAULT_CONFIG) -> CheckReport:
    """First pole: contour residue (Tate: 2 xi_0(0)) and boundedness of L * Z on a disk around it.

    Boundedness is tested through the maximum principle: for a function holomorphic
    on the disk, the inner circle and the center never exceed the outer maximum.
    """
    pole = denominator(desc).pole_candidates(1)
    pole = max(pole) if desc.lambda_orientation == 1 else min(pole)
    g = TestFunction.gaussian(desc.dim)
    eta = EtaVector.ones(desc.k)
    details = {"pole_lambda": str(pole)}
    dev = 0.0
    ok = True
    if is_tate(desc):
        try:
            zeta(desc, eta, g, pole, cfg)
            ok = False
        except NearPole as exc:
            details["near_pole"] = exc.factor
        res = residue_estimate(desc, eta, g, pole, cfg)
        res_odd = residue_estimate(desc, eta, TestFunction.monomial((1,)), pole, cfg)
        dev = max(abs(res - 2) / 2, abs(res_odd))
        details["residue"] = [res.real, res.imag]
        details["residue_odd"] = [res_odd.real, res_odd.imag]
    vals = _lz_disk(desc, eta, g, pole, cfg)
    finite = all(np.isfinite(v.real) and np.isfinite(v.imag) for v in vals)
    outer = max(abs(v) for v in vals[1:9])
    inner = max(abs(v) for v in vals[9:] + vals[:1])
    details["lz_center"] = [vals[0].real, vals[0].imag]
    details["lz_max_outer"] = outer
    details["lz_max_inner"] = inner
    ok = ok and finite and inner <= outer * (1 + 1e-9) + 1e-300
    return CheckReport(f"pole_residue[{desc.name}]", ok and dev < 1e-4, dev, 1e-4, details)


def check_tate_fe(desc: PvsDescriptor, cfg: QuadConfig = DEFAULT_CONFIG) -> CheckReport:
    """gamma_even = Gamma_R(1-s)/Gamma_R(s), gamma_odd = i Gamma_R(2-s)/Gamma_R(1+s) on s in (0, 1)."""
    dd = dual(desc)
    dev = 0.0
    leak = 0.0
    for j in range(1, 10):
        s = j / 10
        lam = s - 0.5
        if not (desc.convergent(lam) and dd.convergent(lam)):
            raise AssertionError(f"lambda={lam} is outside the common strip")
        D = parity_diagonal(extract_gamma(desc, lam, cfg=cfg).entries)
        ge = complex(gamma_r(1 - s) / gamma_r(s))
        go = complex(1j * gamma_r(2 - s) / gamma_r(1 + s))
        dev = max(dev, abs(D[0, 0] - ge) / abs(ge), abs(D[1, 1] - go) / abs(go))
        leak = max(leak, abs(D[0, 1]), abs(D[1, 0]))
    D = parity_diagonal(extract_gamma(desc, 0, cfg=cfg).entries)
    centre = max(abs(D[0, 0] - 1), abs(abs(D[1, 1]) - 1))
    dev = max(dev, centre)
    return CheckReport(f"tate_functional_equation[{desc.name}]", dev < 1e-6 and leak < 1e-8, dev, 1e-6,
                       {"parity_leakage": leak, "gamma_half": [[D[0, 0].real, D[0, 0].imag],
                                                               [D[1, 1].real, D[1, 1].imag]]})


def check_capelli(desc: PvsDescriptor) -> CheckReport:
    """Twist-shift law for M in {1,2}, m in -2..2, and c_top(-mu) != 0."""
    bad = []
    leading = {}
    for M in (1, 2):
        for m in range(-2, 3):
            if not twist_shift_check(desc, M, m):
                bad.append(f"M={M},m={m}")
        lc = leading_coeff_at(desc, M)
        leading[M] = str(lc)
        if lc == 0:
            bad.append(f"leading M={M}")
    return CheckReport(f"capelli[{desc.name}]", not bad, float(len(bad)), 0.0,
                       {"failures": bad, "leading_coeff_at": leading})


def vertical_line(desc: PvsDescriptor, count: int = 41, height: float = 20.0) -> list[complex]:
    """Re s = 1/4 with s = lambda + 1/2, i.e. Re lambda = -1/4, |Im| <= height."""
    return [complex(-0.25, -height + 2 * height * j / (count - 1)) for j in range(count)]


def check_vertical_strip(desc: PvsDescriptor, cfg: QuadConfig = DEFAULT_CONFIG) -> CheckReport:
    """L * Z along a vertical line: finite everywhere, no pole flags."""
    g = TestFunction.gaussian(desc.dim)
    eta = EtaVector.ones(desc.k)
    bad = 0
    mags = []
    for lam in vertical_line(desc):
        try:
            v = lz(desc, eta, g, lam, cfg)
        except NearPole:
            bad += 1
            continue
        if not (np.isfinite(v.real) and np.isfinite(v.imag)):
            bad += 1
        else:
            mags.append(abs(v))
    return CheckReport(f"vertical_strip[{desc.name}]", bad == 0, float(bad), 0.0,
                       {"max_abs": max(mags) if mags else None, "min_abs": min(mags) if mags else None})


def check_determinism(desc: PvsDescriptor, cfg: QuadConfig = DEFAULT_CONFIG) -> CheckReport:
    """Two runs of a grid scan and a gamma extraction serialize to identical bytes."""
    lams = convergent_grid(desc)
    g = TestFunction.gaussian(desc.dim)
    eta = EtaVector.ones(desc.k)
    lam = 0.1 * desc.lambda_orientation
    runs = []
    for _ in range(2):
        text = zeta_grid_csv(desc, eta, g, lams, cfg)
        text += dumps_json(extract_gamma(desc, lam, cfg=cfg).to_json())
        runs.append(text.encode())
    same = runs[0] == runs[1]
    return CheckReport(f"determinism[{desc.name}]", same, 0.0 if same else 1.0, 0.0, {"bytes": len(runs[0])})


def identity_checks(desc: PvsDescriptor, cfg: QuadConfig = DEFAULT_CONFIG) -> list[tuple[str, CheckReport]]:
    lam = Fraction(1, 10) if desc.dim == 1 else Fraction(1, 5)
    lam = float(lam) * desc.lambda_orientation
    psis = [PsiCharacter(1), PsiCharacter(2)] if desc.dim == 1 else [PsiCharacter(1)]
    out = []
    for psi in psis:
        out.append(("C6.inversion", check_inversion(desc, lam, psi, cfg)))
    for a in (2, -1):
        out.append(("C6.scaling", check_scaling(desc, 0.1 * desc.lambda_orientation, a, cfg)))
    out.append(("C6.self_dual_scaling", check_scaling(desc, 0, -1, cfg, self_dual=True)))
    mu = 0.05 if desc.dim == 1 else 0.1
    out.append(("C7.translation", check_translation(desc, 0.1, mu, cfg)))
    hl = 0.1 if desc.dim == 1 else 0.3
    out.append(("C7.hM_shift", check_hM_shift(desc, hl * desc.lambda_orientation, 1, cfg=cfg)))
    return out


def run_suite(desc: PvsDescriptor, cfg: QuadConfig = DEFAULT_CONFIG) -> list[tuple[str, CheckReport]]:
    """All checks that apply to ``desc``, as (criterion id, report) pairs in a fixed order."""
    out = [("C1.bfun_certified", check_bfun_certified(desc))]
    if is_tate(desc):
        out.append(("C2.tate_closed_form", check_tate_closed_form(desc, cfg)))
    out.append(("C3.continuation", check_continuation(desc, cfg)))
    out.append(("C4.pole_residue", check_pole_residue(desc, cfg)))
    if is_tate(desc):
        out.append(("C5.tate_functional_equation", check_tate_fe(desc, cfg)))
    out += identity_checks(desc, cfg)
    out.append(("C8.capelli", check_capelli(desc)))
    out.append(("C9.vertical_strip", check_vertical_strip(desc, cfg)))
    out.append(("C10.determinism", check_determinism(desc, cfg)))
    return out
