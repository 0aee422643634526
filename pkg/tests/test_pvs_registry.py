import json
import math
from dataclasses import replace
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pvzeta.errors import NotFound
from pvzeta.polynomials import MultiPoly
from pvzeta.pvs_registry import (BUILTIN_NAMES, builtin_space, descriptor_from_json, descriptor_to_json, dual, dumps,
                                 loads, resolve_space, validate)

EXPECTED = {
    # name: (dim, orbit count, lambda0, kappa)
    "TATE": (1, 2, Fraction(1, 2), Fraction(-1, 2)),
    "QF_2_0": (2, 1, Fraction(1, 2), Fraction(-1, 2)),
    "QF_1_1": (2, 2, Fraction(1, 2), Fraction(-1, 2)),
    "QF_3_0": (3, 1, Fraction(3, 4), Fraction(-1, 4)),
    "QF_2_1": (3, 2, Fraction(3, 4), Fraction(-1, 4)),
}


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_builtin_shape(name):
    d = builtin_space(name)
    dim, k, lam0, kappa = EXPECTED[name]
    assert (d.dim, d.k, d.lambda0[0], d.kappa[0]) == (dim, k, lam0, kappa)
    assert d.rank == 1 and d.lambda_orientation == 1


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_builtins_validate(name):
    rep = validate(builtin_space(name))
    assert rep.ok, rep.failures()
    for inv in ("bfun_certified", "homogeneous", "chart_fiber", "kappa", "lambda0_lattice"):
        assert rep.passed(inv)


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_sample_points_in_their_orbits(name):
    d = builtin_space(name)
    for i, o in enumerate(d.orbits):
        assert d.orbit_index_of(o.sample_point) == i


@pytest.mark.parametrize("name", BUILTIN_NAMES)
@given(t=st.floats(0.01, 5), theta=st.floats(-2, 2))
@settings(max_examples=25)
def test_chart_fiber_is_abs_f(name, t, theta):
    d = builtin_space(name)
    f = d.basic_invariants[0]
    for o in d.orbits:
        x = o.point(t, theta)
        val = float(f.evaluate_mp(x).real)
        assert math.isclose(val, o.sign_vector[0] * t, rel_tol=1e-9, abs_tol=1e-12)


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_dual_involution(name):
    d = builtin_space(name)
    dd = dual(d)
    assert dd.lambda_orientation == -1
    assert dd.lambda0 == tuple(-x for x in d.lambda0)
    assert dd.kappa == d.kappa
    assert dual(dd) == d
    assert resolve_space(name + "_DUAL") == dd


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_dual_orbits_pair_through_log_gradient(name):
    # f(x) * fdual(grad f(x) / f(x)) is a nonzero constant on every orbit
    d = builtin_space(name)
    f, fd = d.basic_invariants[0], d.dual_basic_invariants[0]
    values = set()
    for o, od in zip(d.orbits, dual(d).orbits):
        x = o.sample_point
        y = od.sample_point
        values.add(f.evaluate(x) * fd.evaluate(y))
    assert len(values) == 1 and 0 not in values


def test_qf_2_1_has_two_orbits():
    d = builtin_space("QF_2_1")
    assert sorted(o.sign_vector[0] for o in d.orbits) == [-1, 1]


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_json_round_trip(name):
    d = builtin_space(name)
    text = dumps(d)
    assert loads(text) == d
    assert descriptor_from_json(json.loads(text)) == d
    assert dumps(loads(text)) == text
    assert set(descriptor_to_json(d)) >= {"name", "dim", "basic_invariants", "orbits", "bfun", "lambda0"}


def test_validation_flags_wrong_bfunction():
    d = builtin_space("QF_2_0")
    bad = replace(d, bfun=(d.bfun[0] * 2,))
    rep = validate(bad)
    assert not rep.ok
    assert not rep.passed("bfun_certified")


def test_validation_flags_inhomogeneous():
    d = builtin_space("QF_2_0")
    x = MultiPoly.var(2, 0)
    bad = replace(d, basic_invariants=(d.basic_invariants[0] + x,))
    assert not validate(bad).passed("homogeneous")


def test_unknown_space():
    with pytest.raises(NotFound):
        builtin_space("QF_4_0")
    with pytest.raises(KeyError):
        resolve_space("nope")


def test_orbit_index_rejects_singular_points():
    with pytest.raises(ValueError):
        builtin_space("QF_1_1").orbit_index_of((Fraction(1), Fraction(1)))


def test_summary():
    s = builtin_space("QF_3_0").summary()
    assert s == {"name": "QF_3_0", "dim": 3, "rank": 1, "orbits": 1, "bfun": "4*(s + 3/2)*(s + 1)"}
