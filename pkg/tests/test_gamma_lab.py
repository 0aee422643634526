import json

import numpy as np
import pytest
from oracles import gamma_r

from pvzeta import gamma_lab
from pvzeta.errors import IllConditioned
from pvzeta.gamma_lab import (CheckReport, check_hM_shift, check_inversion, check_scaling, check_translation,
                              extract_gamma, h_shift, orbit_permutation, parity_diagonal, reflection_symmetries,
                              sample_functions, scaling_exponent)
from pvzeta.pvs_registry import BUILTIN_NAMES, builtin_space, dual
from pvzeta.schwartz_lab import PsiCharacter
from pvzeta.symbolic_weyl import denominator

TATE = builtin_space("TATE")


@pytest.mark.parametrize("s", [0.2, 0.5, 0.85])
def test_tate_gamma_against_gamma_r_quotients(s):
    D = parity_diagonal(extract_gamma(TATE, s - 0.5).entries)
    assert abs(D[0, 0] - gamma_r(1 - s) / gamma_r(s)) < 1e-8
    assert abs(D[1, 1] - 1j * gamma_r(2 - s) / gamma_r(1 + s)) < 1e-8
    assert abs(D[0, 1]) < 1e-8 and abs(D[1, 0]) < 1e-8


def test_tate_center_values():
    D = parity_diagonal(extract_gamma(TATE, 0).entries)
    assert abs(D[0, 0] - 1) < 1e-10
    assert abs(D[1, 1] - 1j) < 1e-10


def test_tate_gamma_beyond_strip():
    # continuation on both sides; the quotients are meromorphic in s
    s = -0.7 + 0.4j
    D = parity_diagonal(extract_gamma(TATE, s - 0.5).entries)
    ge = complex(gamma_r(1 - s) / gamma_r(s))
    assert abs(D[0, 0] - ge) < 1e-8 * abs(ge)


def test_qf_1_1_residual_and_shape():
    g = extract_gamma(builtin_space("QF_1_1"), 0.1)
    assert g.entries.shape == (2, 2)
    assert g.lsq_residual < 1e-4
    assert g.condition_number < gamma_lab.CONDITION_LIMIT
    assert g.flags == ()


@pytest.mark.parametrize("name", ["TATE", "QF_1_1", "QF_2_1"])
def test_doubling_basis_is_stable(name):
    d = builtin_space(name)
    lam = 0.1
    a = extract_gamma(d, lam, basis_size=4).entries
    b = extract_gamma(d, lam, basis_size=8).entries
    assert np.max(np.abs(a - b)) < 1e-6


def test_strip_and_continued_extraction_agree():
    lam = 0.2
    a = extract_gamma(TATE, lam).entries
    b = extract_gamma(TATE, lam, force_M=1).entries
    assert np.max(np.abs(a - b)) < 1e-6


def test_denominator_clears_poles():
    # gamma has a pole at s = 1; the dual Gamma-denominator cancels it
    gp = denominator(dual(TATE))
    centre = 0.5

    def cleared(r, k):
        lam = centre + r * np.exp(2j * np.pi * (k + 0.5) / 8)
        return np.max(np.abs(complex(gp(lam)) * extract_gamma(TATE, lam).entries))

    outer = max(cleared(1e-2, k) for k in range(8))
    inner = max(cleared(5e-3, k) for k in range(8))
    assert np.isfinite(outer) and inner <= outer * (1 + 1e-9)
    # the even entry Gamma_R(1 - s) / (Gamma_R(s) Gamma(1 - s)) tends to 2 at s = 1; take it as a circle mean
    ring = [centre + 1e-2 * np.exp(2j * np.pi * (k + 0.5) / 8) for k in range(8)]
    even = np.mean([parity_diagonal(complex(gp(z)) * extract_gamma(TATE, z).entries)[0, 0] for z in ring])
    assert abs(even - 2) < 1e-8


def test_basis_size_lower_bound():
    with pytest.raises(ValueError):
        extract_gamma(builtin_space("QF_1_1"), 0.1, basis_size=3)


def test_ill_conditioned_flag(monkeypatch):
    monkeypatch.setattr(gamma_lab, "CONDITION_LIMIT", 1.0)
    g = extract_gamma(TATE, 0.1)
    assert g.flags == ("ill_conditioned",)
    assert g.to_json()["flags"] == ["ill_conditioned"]
    with pytest.raises(IllConditioned):
        extract_gamma(TATE, 0.1, strict=True)


def test_json_block():
    g = extract_gamma(TATE, 0.1, PsiCharacter(2))
    doc = json.loads(json.dumps(g.to_json()))
    assert set(doc) == {"lambda", "psi", "entries", "self_dual_entries", "residual", "cond", "basis_size", "flags",
                        "conventions"}
    assert doc["psi"] == "2"
    assert doc["conventions"]["A_psi"] == "1/2"
    sd = np.array([[complex(*z) for z in row] for row in doc["self_dual_entries"]])
    assert np.allclose(sd, g.entries * 2 ** 0.5)


def test_sample_functions_skip_dead_monomials():
    d = builtin_space("QF_2_1")
    assert reflection_symmetries(d) == (0, 1, 2)
    for xi in sample_functions(d, 8):
        assert all(e % 2 == 0 for e in next(iter(xi.poly.terms)))
    assert reflection_symmetries(TATE) == ()
    assert len(sample_functions(TATE, 4)) == 4


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_orbit_permutation(name):
    d = builtin_space(name)
    assert np.array_equal(orbit_permutation(d, 2), np.eye(d.k))
    P = orbit_permutation(d, -1)
    assert np.array_equal(P @ P, np.eye(d.k))
    if name == "TATE":
        assert np.array_equal(P, [[0, 1], [1, 0]])
    if d.dim % 2 == 0:
        assert np.array_equal(P, np.eye(d.k))


def test_scaling_exponent_tate():
    # d is read on the dual side, where the coordinate of lambda is -lambda
    assert abs(scaling_exponent(TATE, 0.1) - (0.1 - 0.5)) < 1e-15


def test_h_shift():
    assert h_shift(TATE, 1) == 2
    assert h_shift(builtin_space("QF_2_0"), 2) == 4
    assert h_shift(dual(TATE), 1) == -2


@pytest.mark.parametrize("psi", [PsiCharacter(1), PsiCharacter(2), PsiCharacter(-3)])
def test_tate_inversion(psi):
    rep = check_inversion(TATE, 0.1, psi)
    assert rep.passed, rep.line()


@pytest.mark.parametrize("a", [2, -1, 3])
def test_tate_scaling(a):
    rep = check_scaling(TATE, 0.1, a)
    assert rep.passed, rep.line()


def test_self_dual_scaling_at_centre():
    rep = check_scaling(TATE, 0, -1, self_dual=True)
    assert rep.passed, rep.line()


def test_scaling_detects_wrong_permutation(monkeypatch):
    monkeypatch.setattr(gamma_lab, "orbit_permutation", lambda desc, a: np.eye(desc.k))
    assert not check_scaling(TATE, 0.1, -1).passed


def test_translation_trivial_and_nontrivial():
    assert check_translation(TATE, 0, 0.05).deviation < 1e-14
    assert check_translation(TATE, 0.1, 0.05).passed
    assert check_translation(builtin_space("QF_1_1"), 0.1, 0.1).passed


def test_hM_shift():
    assert check_hM_shift(TATE, 0.1, 0).deviation < 1e-14
    rep = check_hM_shift(TATE, 0.1, 1)
    assert rep.passed, rep.line()
    rep = check_hM_shift(builtin_space("QF_2_0"), 0.3, 1)
    assert rep.passed, rep.line()


def test_hM_shift_detects_wrong_constant(monkeypatch):
    monkeypatch.setattr(gamma_lab, "h_shift", lambda desc, M: -desc.capelli_mu * M)
    assert not check_hM_shift(TATE, 0.1, 1).passed


def test_report_format():
    r = CheckReport("x", np.bool_(True), np.float64(1e-9), 1e-6)
    assert r.line() == "PASS x: deviation 1.000e-09 (tolerance 1e-06)"
    assert type(r.passed) is bool
    assert json.dumps(r.to_json())
