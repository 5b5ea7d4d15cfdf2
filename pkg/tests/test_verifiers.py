#!/usr/bin/env python3

import math

import numpy as np
import pytest
from hypothesis import given, seed
from hypothesis import strategies as st

from cylhardy.base import DomainError, HypothesisViolation
from cylhardy.corpus import CutoffSpec, build_corpus, log_power_profile, radial_function, zero_function
from cylhardy.geometry import EuclideanCylinder, HomogeneousGroup
from cylhardy.jets import BumpProfile, ProductProfile, PowerProfile
from cylhardy.verifiers import (
    CpArguments,
    ExponentTuple,
    Verdict,
    cp_array,
    cp_functional,
    higher_order_constant,
    polar_spot_check,
    pure_log_power_ratio,
    sharpness_sweep,
    stratified_spot_check,
    verify_ckn,
    verify_higher_order_identity,
    verify_identity,
    verify_inequality,
    verify_uncertainty,
)

SEED = 20240611
PAIRS = 100_000
IDENTITY_RESIDUAL = 1e-7
HIGHER_RESIDUAL = 1e-6
SLACK = -1e-9
# keeps |u|^p away from subnormal numbers
COMPONENT = st.floats(min_value=-1.0, max_value=1.0).filter(lambda v: v == 0.0 or abs(v) > 1e-6)


def _pairs(rng):
    u = rng.uniform(-1.0, 1.0, PAIRS) + 1j * rng.uniform(-1.0, 1.0, PAIRS)
    v = rng.uniform(-1.0, 1.0, PAIRS) + 1j * rng.uniform(-1.0, 1.0, PAIRS)
    return u, v


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0, 4.0])
def test_cp_is_nonnegative(p):
    u, v = _pairs(np.random.default_rng(SEED))
    assert np.min(cp_array(u, v, p)) >= -1e-12


def test_cp_two_is_the_square():
    u, v = _pairs(np.random.default_rng(SEED + 1))
    assert np.allclose(cp_array(u, v, 2.0), np.abs(v) ** 2, rtol=1e-12, atol=1e-14)


@seed(7)
@given(
    p=st.sampled_from([1.5, 2.0, 3.0, 4.0]),
    lam=st.floats(min_value=0.1, max_value=10.0),
    ur=COMPONENT,
    ui=COMPONENT,
    vr=COMPONENT,
    vi=COMPONENT,
)
def test_cp_is_homogeneous(p, lam, ur, ui, vr, vi):
    u, v = complex(ur, ui), complex(vr, vi)
    scale = abs(u) ** p + abs(u - v) ** p + p * abs(u - v) ** (p - 1) * abs(v)
    lhs = cp_functional(CpArguments(lam * u, lam * v, p))
    rhs = lam**p * cp_functional(CpArguments(u, v, p))
    assert abs(lhs - rhs) <= 1e-12 * lam**p * max(scale, 1e-300)


def test_cp_edge_values():
    assert cp_functional(CpArguments(1.0 + 1.0j, 1.0 + 1.0j, 3.0)) == pytest.approx(2.0**1.5)
    assert cp_functional(CpArguments(0.5, 0.0, 1.5)) == 0.0
    with pytest.raises(DomainError):
        CpArguments(1.0, 1.0, 1.0)


def test_exponent_tuples():
    e = ExponentTuple.solve(2.0, 2.0, 3.0, 0.5, 1.0)
    assert e.r == pytest.approx(2.4)
    assert e.c == pytest.approx(-0.5 + 0.5)
    assert not e.holder_equality
    assert ExponentTuple.solve(2.0, 2.0, 2.0, 0.5, -1.0).holder_equality
    with pytest.raises(HypothesisViolation):
        ExponentTuple.solve(2.0, 2.0, 2.0, 0.5, 0.0, r=3.0)
    with pytest.raises(HypothesisViolation):
        ExponentTuple.solve(2.0, 2.0, 2.0, 1.5, 0.0)
    with pytest.raises(HypothesisViolation):
        ExponentTuple(2.0, 2.0, 2.0, 0.5, 0.0, 0.3, 2.0)


def test_higher_order_constant():
    assert higher_order_constant(1) == 2.0
    assert higher_order_constant(2) == pytest.approx(4.0 / 3.0)


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
def test_identity_on_the_plane(small_corpus, plane, spec, p):
    for f in small_corpus:
        record = verify_identity(f, p, plane, spec)
        assert record.verdict is Verdict.IDENTITY_PASS, str(record)
        assert record.residual <= IDENTITY_RESIDUAL
        assert record.remainder >= -1e-9


@pytest.mark.slow
@pytest.mark.parametrize("N", [1, 2, 3])
@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
def test_identity_full_corpus(spec, N, p):
    setting = EuclideanCylinder(N, N)
    for f in build_corpus(SEED, 20, setting):
        record = verify_identity(f, p, setting, spec)
        assert record.passed, str(record)
        assert record.residual <= IDENTITY_RESIDUAL


def test_identity_with_transverse_block(cylinder, spec):
    for f in build_corpus(SEED, 3, cylinder, nonseparable=True):
        record = verify_identity(f, 2.0, cylinder, spec)
        assert record.passed, str(record)


def test_p2_triangle(small_corpus, plane, spec):
    for f in small_corpus:
        diag = verify_identity(f, 2.0, plane, spec).diagnostics
        assert diag["triangle_residual"] <= 1e-8


def test_identity_of_zero(plane, spec):
    record = verify_identity(zero_function(plane), 2.0, plane, spec)
    assert record.passed
    assert record.lhs == 0.0 and record.residual == 0.0


def test_identity_hypotheses(plane, spec):
    f = radial_function(BumpProfile(2.0, 0.5))
    with pytest.raises(HypothesisViolation):
        verify_identity(f, 1.0, plane, spec)
    unbounded = radial_function(log_power_profile(-1.0, CutoffSpec(0.1)))
    with pytest.raises(HypothesisViolation):
        verify_identity(unbounded, 2.0, plane, spec)
    with pytest.raises(HypothesisViolation):
        verify_identity(f, 2.0, EuclideanCylinder(3, 2), spec)


@pytest.mark.parametrize("p", [2.0, 3.0])
def test_identity_on_groups(heisenberg, anisotropic, spec, p):
    for setting in (heisenberg, anisotropic):
        for f in build_corpus(SEED, 3, setting):
            record = verify_identity(f, p, setting, spec, statement="group")
            assert record.passed, str(record)
            assert record.residual <= IDENTITY_RESIDUAL


def test_isotropic_group_reproduces_the_plane(plane, spec):
    f = radial_function(ProductProfile([BumpProfile(1.0, 0.5), PowerProfile(0.3j)]), phase=1j)
    euclidean = verify_identity(f, 2.0, plane, spec)
    group = verify_identity(f, 2.0, HomogeneousGroup((1, 1)), spec)
    assert group.lhs == pytest.approx(euclidean.lhs, rel=1e-8)
    assert group.rhs == pytest.approx(euclidean.rhs, rel=1e-8)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_higher_order_identity(small_corpus, plane, spec, k):
    for f in small_corpus:
        record = verify_higher_order_identity(f, k, plane, spec)
        assert record.verdict is Verdict.IDENTITY_PASS, str(record)
        assert record.residual <= HIGHER_RESIDUAL
        assert min(record.diagnostics["remainder_terms"]) >= 0.0


def test_higher_order_identity_rejects_k(plane, spec, small_corpus):
    with pytest.raises(DomainError):
        verify_higher_order_identity(small_corpus[0], 0, plane, spec)


@pytest.mark.parametrize("statement,p", [("sob", 1.5), ("sob", 3.0), ("badiale", 2.0), ("stability", 2.0)])
def test_inequalities_on_the_plane(small_corpus, plane, spec, statement, p):
    for f in small_corpus:
        record = verify_inequality(f, statement, plane, {"p": p}, spec)
        assert record.verdict is Verdict.INEQUALITY_PASS, str(record)
        assert record.slack >= SLACK


def test_hardy_with_transverse_block(cylinder, spec):
    for f in build_corpus(SEED, 3, cylinder):
        record = verify_inequality(f, "hardy", cylinder, {"p": 2.0}, spec)
        assert record.passed, str(record)
        assert record.diagnostics["path"] == "radial"


@pytest.mark.slow
def test_badiale_tensor_path(plane, spec):
    f = build_corpus(SEED, 2, plane, nonseparable=True)[1]
    record = verify_inequality(f, "badiale", plane, {"p": 2.0}, spec)
    assert record.diagnostics["path"] == "tensor"
    assert record.passed, str(record)


@pytest.mark.parametrize("k", [1, 2])
def test_higher_order_inequality(small_corpus, plane, spec, k):
    for f in small_corpus:
        record = verify_inequality(f, "higher", plane, {"k": k}, spec)
        assert record.passed, str(record)


def test_badiale_needs_p_equal_N(small_corpus, plane, spec):
    with pytest.raises(HypothesisViolation):
        verify_inequality(small_corpus[0], "badiale", plane, {"p": 3.0}, spec)


def test_ckn_delta_zero_is_exact(small_corpus, plane, spec):
    e = ExponentTuple.solve(2.0, 2.0, 2.0, 0.0, 0.5)
    for f in small_corpus:
        record = verify_ckn(f, e, plane, spec)
        assert record.verdict is Verdict.IDENTITY_PASS
        assert record.residual <= 1e-12


@pytest.mark.parametrize("b,delta", [(0.0, 1.0), (-1.0, 0.5)])
def test_ckn_equality_cases(small_corpus, plane, spec, b, delta):
    e = ExponentTuple.solve(2.0, 2.0, 2.0, delta, b)
    for f in small_corpus:
        record = verify_ckn(f, e, plane, spec)
        assert record.diagnostics["equality_case"]
        assert record.residual <= IDENTITY_RESIDUAL, str(record)


@pytest.mark.parametrize(
    "p,q,delta,b", [(2.0, 3.0, 0.5, 1.0), (3.0, 1.5, 0.5, -0.5), (2.0, 2.0, 0.5, 0.5)]
)
def test_ckn_inequality(small_corpus, plane, spec, p, q, delta, b):
    e = ExponentTuple.solve(2.0, p, q, delta, b)
    for f in small_corpus:
        record = verify_ckn(f, e, plane, spec)
        assert record.passed, str(record)
        assert record.slack >= SLACK


def test_higher_order_ckn(small_corpus, plane, spec):
    e = ExponentTuple.solve(2.0, 2.0, 3.0, 0.5, 1.0)
    for f in small_corpus:
        record = verify_ckn(f, e, plane, spec, k=2, statement="ckn-higher")
        assert record.passed, str(record)


def test_uncertainty_principles(small_corpus, plane, spec):
    for f in small_corpus:
        for statement in ("critical", "hpw", "hpw-schwarz"):
            record = verify_uncertainty(f, statement, plane, spec)
            assert record.passed, str(record)
        assert verify_uncertainty(f, "higher", plane, spec, {"k": 1}).passed


def test_nash_and_higher_uncertainty(spec):
    setting = EuclideanCylinder(4, 4)
    for f in build_corpus(SEED, 3, setting):
        assert verify_uncertainty(f, "nash", setting, spec, {"n": 4}).passed
        assert verify_uncertainty(f, "higher", setting, spec, {"k": 2}).passed


def test_uncertainty_needs_two_dimensions(spec):
    line = EuclideanCylinder(1, 1)
    f = build_corpus(SEED, 1, line)[0]
    with pytest.raises(HypothesisViolation):
        verify_uncertainty(f, "critical", line, spec)


def test_sharpness_sweep(spec):
    sweep = sharpness_sweep("sob", [1e-1, 1e-2, 1e-3, 1e-4], 0.1, p=2.0, spec=spec)
    assert sweep.monotone
    assert sweep.lower_bound_ok
    assert sweep.ratios[-1] <= 1.01
    assert sweep.passed
    assert sweep.as_dict()["evidence"] == "asymptotic evidence only"


@pytest.mark.slow
def test_higher_order_sweep(spec):
    sweep = sharpness_sweep("higher", [1e-1, 1e-2, 1e-3, 1e-4, 1e-5], 0.1, k=2, spec=spec)
    assert sweep.passed, str(sweep)
    assert sweep.ratios[-1] <= 1.02


def test_sweep_rejects_bad_epsilons(spec):
    with pytest.raises(DomainError):
        sharpness_sweep("sob", [0.5], 0.1, spec=spec)
    with pytest.raises(DomainError):
        sharpness_sweep("higher", [0.1], 0.1, k=None, spec=spec)


def test_pure_log_power_quotient(spec):
    ratio, exact = pure_log_power_ratio(2.0, -1.0, 2.0, spec)
    assert exact == 4.0
    assert ratio == pytest.approx(exact, rel=1e-9)


def test_spot_checks(heisenberg, spec):
    member = build_corpus(SEED, 2, heisenberg)[1]
    check = stratified_spot_check(member, 2.0, spec)
    assert check.passed, str(check)
    planar = polar_spot_check(radial_function(BumpProfile(2.0, 0.5)), 2.0, spec)
    assert planar.passed, str(planar)


def test_record_serialisation(small_corpus, plane, spec):
    data = verify_identity(small_corpus[0], 2.0, plane, spec).as_dict()
    for key in ("statement", "setting", "params", "lhs", "rhs", "remainder", "residual", "tolerance", "verdict",
                "quad_diagnostics"):
        assert key in data
    assert data["verdict"] == "identity-pass"
    assert math.isfinite(data["lhs"])
