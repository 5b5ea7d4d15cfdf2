#!/usr/bin/env python3

import math

import numpy as np
import pytest
from hypothesis import given, seed
from hypothesis import strategies as st

from cylhardy.base import CapabilityError, ConfigError, DomainError, ReductionNotApplicable
from cylhardy.corpus import radial_function
from cylhardy.geometry import (
    CartesianFunction,
    EuclideanCylinder,
    GradientIntegrand,
    HomogeneousGroup,
    HorizontalFrame,
    StratifiedH1,
    Weight,
    euler_apply,
    parse_setting,
    quasi_norm,
    radial_reduce,
    sphere_measure,
)
from cylhardy.jets import BumpProfile

SAMPLES = 1000
# |x_i|^4 must stay out of the subnormal range
COORDINATE = st.floats(min_value=-3.0, max_value=3.0).filter(lambda v: v == 0.0 or abs(v) > 1e-6)


def test_sphere_measures():
    assert sphere_measure(1) == pytest.approx(2.0)
    assert sphere_measure(2) == pytest.approx(2.0 * math.pi)
    assert sphere_measure(3) == pytest.approx(4.0 * math.pi)


def test_horizontal_euler_collapses_to_planar_euler():
    rng = np.random.default_rng(11)
    points = rng.uniform(-1.0, 1.0, size=(SAMPLES, 3))
    grad = rng.uniform(-1.0, 1.0, size=(SAMPLES, 3))
    x, y = points[:, 0], points[:, 1]
    via_frame = HorizontalFrame().euler(grad, points)
    planar = x * grad[:, 0] + y * grad[:, 1]
    scale = np.abs(x * grad[:, 0]) + np.abs(y * grad[:, 1]) + np.abs(x * y * grad[:, 2])
    assert np.all(np.abs(via_frame - planar) <= 1e-14 * np.maximum(scale, 1.0))


def test_heisenberg_parameters(heisenberg):
    assert (heisenberg.n, heisenberg.D, heisenberg.Q) == (3, 2, 4)
    assert heisenberg.transverse_dim == 1
    assert heisenberg.radial_power == 1


def test_default_quasi_norm(anisotropic):
    assert anisotropic.Q == 3.0
    assert anisotropic.exponent == 4.0
    x = np.array([0.3, -0.7])
    assert anisotropic.quasi_norm(x) == pytest.approx((0.3**4 + 0.7**2) ** 0.25, rel=1e-15)
    assert quasi_norm(anisotropic, x) == anisotropic.quasi_norm(x)
    assert not anisotropic.isotropic
    assert anisotropic.sphere_measure is None


@seed(5)
@given(
    x1=COORDINATE,
    x2=COORDINATE,
    lam=st.floats(min_value=0.01, max_value=100.0),
)
def test_quasi_norm_homogeneity(x1, x2, lam):
    group = HomogeneousGroup((1, 2))
    x = np.array([x1, x2])
    norm = group.quasi_norm(x)
    assert group.quasi_norm(group.dilate(lam, x)) == pytest.approx(lam * norm, rel=1e-12, abs=1e-300)


def test_ray_lands_on_unit_quasi_sphere(anisotropic):
    x = np.array([[1.0, 2.0], [-0.2, 0.05]])
    assert np.allclose(anisotropic.quasi_norm(anisotropic.ray(x)), 1.0)
    with pytest.raises(DomainError):
        anisotropic.ray(np.zeros(2))


def test_isotropic_group_is_euclidean():
    group = HomogeneousGroup((1, 1))
    assert group.isotropic
    assert group.sphere_measure == pytest.approx(2.0 * math.pi)
    x = np.array([3.0, 4.0])
    assert group.quasi_norm(x) == pytest.approx(5.0)


def test_homogeneous_euler_matches_cartesian(anisotropic):
    f = radial_function(BumpProfile(1.0, 0.5))
    rng = np.random.default_rng(2)
    for _ in range(20):
        point = rng.uniform(-1.0, 1.0, size=2)
        r = anisotropic.quasi_norm(point)
        if not 0.55 < r < 1.45:
            continue
        radial = euler_apply(anisotropic, f, point)
        cartesian = anisotropic.euler_from_gradient(f.gradient(anisotropic, point), point)
        assert radial == pytest.approx(cartesian, rel=1e-10, abs=1e-14)


@pytest.mark.parametrize(
    "text",
    ["euclidean:n=3,N=2", "euclidean:n=1,N=1", "heisenberg1", "homogeneous:nu=1,2", "homogeneous:nu=1,1,e=3"],
)
def test_setting_strings_round_trip(text):
    setting = parse_setting(text)
    assert setting.spec_string() == text
    assert parse_setting(str(setting)) == setting


@pytest.mark.parametrize("text", ["sphere:n=2", "euclidean:n=2", "euclidean:n=x,N=1", "euclidean:3"])
def test_bad_setting_strings(text):
    with pytest.raises(ConfigError):
        parse_setting(text)


def test_cylinder_validation():
    with pytest.raises(DomainError):
        EuclideanCylinder(2, 3)
    with pytest.raises(DomainError):
        HomogeneousGroup((1, -1))


def test_split_and_radius(cylinder):
    points = np.array([[3.0, 4.0, 9.0]])
    xp, xpp = cylinder.split(points)
    assert xp.tolist() == [[3.0, 4.0]]
    assert xpp.tolist() == [[9.0]]
    assert cylinder.radius(points)[0] == pytest.approx(5.0)


def test_weights(cylinder):
    assert Weight.critical(cylinder, 2.0).power == -1.0
    weight = Weight.log_euler(cylinder, 2.0, 3)
    assert (weight.log_power, weight.euler_order) == (3, 3)
    assert "log^3" in weight.tag


def test_capability_errors(plane):
    with pytest.raises(CapabilityError):
        quasi_norm(plane, np.ones(2))
    with pytest.raises(ReductionNotApplicable):
        radial_reduce(plane, GradientIntegrand(None, 2.0))


def test_setting_equality():
    assert EuclideanCylinder(2, 2) == parse_setting("euclidean:n=2,N=2")
    assert EuclideanCylinder(2, 2) != StratifiedH1()
    assert len({EuclideanCylinder(2, 2), parse_setting("euclidean:n=2,N=2")}) == 1


def test_euler_apply_on_cartesian_function(plane):
    f = CartesianFunction(
        lambda x: x[..., 0] ** 2 + x[..., 1],
        lambda x: np.stack([2.0 * x[..., 0], np.ones_like(x[..., 1])], axis=-1),
    )
    point = np.array([0.6, -1.2])
    assert euler_apply(plane, f, point) == pytest.approx(2.0 * 0.6**2 - 1.2)
