#!/usr/bin/env python3

"""Euclidean cylinders, the Heisenberg group H1 and homogeneous groups

Every setting knows its dimension parameter D (N or Q), the power r^(D-1) of
its polar measure, how coordinates split into the radial block and the
transverse block, and its Euler-type derivative.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import gamma

from .base import DBG, CapabilityError, ConfigError, DomainError, ReductionNotApplicable


def sphere_measure(N):
    """Surface measure of the unit sphere S^(N-1) in R^N (2 for N = 1)."""
    return 2.0 * math.pi ** (N / 2.0) / gamma(N / 2.0)


class HorizontalFrame:
    """X = d/dx - (y/2) d/dt and Y = d/dy + (x/2) d/dt on R^3 = {(x, y, t)}."""

    def coefficients(self, points):
        points = np.asarray(points, dtype=float)
        x, y = points[..., 0], points[..., 1]
        coeff = np.zeros(points.shape[:-1] + (2, 3))
        coeff[..., 0, 0] = 1.0
        coeff[..., 0, 2] = -y / 2.0
        coeff[..., 1, 1] = 1.0
        coeff[..., 1, 2] = x / 2.0
        return coeff

    def apply(self, gradient, points):
        """(Xf, Yf) from the Cartesian gradient (f_x, f_y, f_t)."""
        gradient = np.asarray(gradient)
        coeff = self.coefficients(points)
        return np.einsum("...ij,...j->...i", coeff, gradient)

    def euler(self, gradient, points):
        """x Xf + y Yf."""
        points = np.asarray(points, dtype=float)
        xf = self.apply(gradient, points)
        return points[..., 0] * xf[..., 0] + points[..., 1] * xf[..., 1]


class Setting:
    """Common interface of the three geometric settings."""

    kind = "abstract"

    def __init__(self, n, D):
        self.n = n
        self.D = D

    @property
    def radial_power(self):
        """Exponent of r in the polar measure r^(D-1) dr d(sigma)."""
        return self.D - 1

    @property
    def transverse_dim(self):
        return 0

    def split(self, points):
        """Split Cartesian points into the radial block and the transverse block."""
        points = np.asarray(points, dtype=float)
        N = self.n - self.transverse_dim
        return points[..., :N], points[..., N:]

    def radius(self, points):
        xp, _ = self.split(points)
        return np.linalg.norm(xp, axis=-1)

    def euler_from_gradient(self, gradient, points):
        xp, _ = self.split(points)
        gp = np.asarray(gradient)[..., : xp.shape[-1]]
        return np.sum(xp * gp, axis=-1)

    def spec_string(self):
        raise NotImplementedError

    def __str__(self):
        return self.spec_string()

    def __eq__(self, other):
        return isinstance(other, Setting) and self.spec_string() == other.spec_string()

    def __hash__(self):
        return hash(self.spec_string())


class EuclideanCylinder(Setting):
    kind = "euclidean"

    def __init__(self, n, N):
        if not (isinstance(n, int) and isinstance(N, int)) or not 1 <= N <= n:
            raise DomainError("Euclidean cylinder needs 1 <= N <= n", {"n": n, "N": N})
        Setting.__init__(self, n, N)
        self.N = N

    @property
    def transverse_dim(self):
        return self.n - self.N

    def spec_string(self):
        return f"euclidean:n={self.n},N={self.N}"


class StratifiedH1(Setting):
    """Heisenberg group H1: first stratum (x, y), N = 2, homogeneous dimension Q = 4."""

    kind = "heisenberg1"

    def __init__(self):
        Setting.__init__(self, 3, 2)
        self.N = 2
        self.Q = 4
        self.frame = HorizontalFrame()

    @property
    def transverse_dim(self):
        return 1

    def euler_from_gradient(self, gradient, points):
        return self.frame.euler(gradient, points)

    def horizontal_gradient(self, gradient, points):
        return self.frame.apply(gradient, points)

    def spec_string(self):
        return "heisenberg1"


def _default_exponent(weights):
    # smallest even exponent making every |x_i|^(e/nu_i) a polynomial for integer weights
    if all(w.is_integer() for w in weights):
        return 2.0 * math.lcm(*[int(w) for w in weights])
    return 2.0 * max(weights)


class HomogeneousGroup(Setting):
    """R^n with dilations (lambda^nu_1 x_1, ...) and quasi-norm (sum |x_i|^(e/nu_i))^(1/e)."""

    kind = "homogeneous"

    def __init__(self, weights, exponent=None):
        weights = tuple(float(w) for w in weights)
        if not weights or any(w <= 0.0 for w in weights):
            raise DomainError("dilation weights must be positive", {"weights": weights})
        if exponent is None:
            exponent = _default_exponent(weights)
        if exponent <= 0.0:
            raise DomainError("quasi-norm exponent must be positive", {"e": exponent})
        self.weights = weights
        self.exponent = float(exponent)
        self.Q = sum(weights)
        Setting.__init__(self, len(weights), self.Q)

    @property
    def isotropic(self):
        return all(w == 1.0 for w in self.weights) and self.exponent == 2.0

    @property
    def sphere_measure(self):
        """Measure of the unit quasi-sphere; only known in the isotropic case."""
        return sphere_measure(self.n) if self.isotropic else None

    def quasi_norm(self, x):
        x = np.asarray(x, dtype=float)
        nu = np.asarray(self.weights)
        return np.sum(np.abs(x) ** (self.exponent / nu), axis=-1) ** (1.0 / self.exponent)

    def dilate(self, lam, x):
        x = np.asarray(x, dtype=float)
        lam = np.asarray(lam, dtype=float)[..., None]
        return lam ** np.asarray(self.weights) * x

    def ray(self, x):
        """Point of the unit quasi-sphere on the dilation orbit of x."""
        r = self.quasi_norm(x)
        if np.any(r <= 0.0):
            raise DomainError("the origin has no ray")
        return self.dilate(1.0 / r, x)

    def split(self, points):
        points = np.asarray(points, dtype=float)
        return points, points[..., :0]

    def radius(self, points):
        return self.quasi_norm(points)

    def euler_from_gradient(self, gradient, points):
        # generator of the dilations: sum nu_i x_i d/dx_i
        points = np.asarray(points, dtype=float)
        return np.sum(np.asarray(self.weights) * points * np.asarray(gradient), axis=-1)

    def spec_string(self):
        nu = ",".join(f"{w:g}" for w in self.weights)
        text = f"homogeneous:nu={nu}"
        if self.exponent != _default_exponent(self.weights):
            text = f"{text},e={self.exponent:g}"
        return text


def quasi_norm(setting, x):
    if not isinstance(setting, HomogeneousGroup):
        raise CapabilityError("quasi_norm needs a homogeneous group", {"setting": str(setting)})
    return setting.quasi_norm(x)


def parse_setting(text):
    """Build a setting from its CLI/config name."""
    text = text.strip()
    kind, _, rest = text.partition(":")
    fields = {}
    if rest:
        for item in rest.split(","):
            if "=" in item:
                key, _, value = item.partition("=")
                fields[key.strip()] = [value.strip()]
            elif fields:
                # continuation of a comma separated list value (nu=1,2)
                fields[list(fields)[-1]].append(item.strip())
            else:
                raise ConfigError(f"Cannot understand setting field {item!r}", {"setting": text})
    try:
        if kind == "euclidean":
            return EuclideanCylinder(int(fields["n"][0]), int(fields["N"][0]))
        if kind == "heisenberg1":
            return StratifiedH1()
        if kind == "homogeneous":
            exponent = float(fields["e"][0]) if "e" in fields else None
            return HomogeneousGroup([float(v) for v in fields["nu"]], exponent)
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"Malformed setting {text!r}", {"reason": exc}) from exc
    raise ConfigError(f"Unknown setting kind {kind!r}", {"setting": text})


@dataclass(frozen=True)
class Weight:
    """Symbolic weight |x'|^power (log|x'|)^log_power applied to (Euler)^euler_order f."""

    power: float
    log_power: int = 0
    euler_order: int = 0

    @classmethod
    def critical(cls, setting, p):
        return cls(-setting.D / p)

    @classmethod
    def log_euler(cls, setting, p, k=1):
        return cls(-setting.D / p, k, k)

    @property
    def tag(self):
        text = f"|x'|^{self.power:g}"
        if self.log_power:
            text += f" log^{self.log_power}"
        if self.euler_order:
            text += f" E^{self.euler_order}"
        return text

    def radial(self, f, r):
        """Radial part of the weighted function at r (angular and transverse factors left out)."""
        r = np.asarray(r, dtype=float)
        value = f.euler_radial(r, self.euler_order)
        if self.log_power:
            value = value * np.log(r) ** self.log_power
        return r**self.power * value


@dataclass(frozen=True)
class AngularToken:
    """Common factor int |phi|^p d(sigma) * int |h|^p dx'' left out of a reduced integral.

    ``value`` is None where the quasi-sphere measure is unknown; ``coefficient``
    then carries the part that is known (|phi|^p for constant-modulus phi).
    """

    exponent: float
    value: Optional[float]
    label: str
    coefficient: float = 1.0

    @property
    def numeric(self):
        return self.value is not None

    def factor(self):
        return self.value if self.numeric else self.coefficient

    def as_dict(self):
        return {"exponent": self.exponent, "value": self.value, "label": self.label, "coefficient": self.coefficient}


@dataclass(frozen=True)
class SeparableIntegrand:
    """Integrand of the form density(r) * |angular factor|^p * |transverse factor|^p."""

    function: object
    density: object
    p: float
    label: str = "integrand"


@dataclass(frozen=True)
class GradientIntegrand:
    """Integrand built from a full or horizontal gradient modulus; never separable."""

    function: object
    p: float
    label: str = "gradient"


class ReducedIntegral:
    def __init__(self, radial, bounds, token, dimension):
        self.radial = radial
        self.bounds = bounds
        self.token = token
        self.dimension = dimension

    def __str__(self):
        return f"ReducedIntegral(bounds={self.bounds}, token={self.token.label})"


def radial_reduce(setting, integrand):
    """Collapse a separable integrand to a 1-D radial integrand and its angular token."""
    if not isinstance(integrand, SeparableIntegrand):
        raise ReductionNotApplicable("integrand is not separable", {"integrand": getattr(integrand, "label", "?")})
    f = integrand.function
    token = f.angular_token(setting, integrand.p)
    density = integrand.density
    power = setting.radial_power

    def radial(r):
        return density(r) * r**power

    DBG(f"reduce {integrand.label} on {setting}: token {token.label}^{token.exponent:g}")
    return ReducedIntegral(radial, f.support, token, setting.D)


def euler_apply(setting, f, point):
    """Euler-type derivative of f at a point.

    x'.grad_N f on a Euclidean cylinder, x Xf + y Yf on H1 and |x| R f on a
    homogeneous group (the latter through the radial jet of f).
    """
    point = np.asarray(point, dtype=float)
    if isinstance(setting, HomogeneousGroup) and hasattr(f, "radial"):
        return f.homogeneous_euler(setting, point)
    if not hasattr(f, "gradient"):
        raise CapabilityError("function provides no partial derivatives", {"setting": str(setting)})
    return setting.euler_from_gradient(f.gradient(setting, point), point)


class CartesianFunction:
    """Ad-hoc function given by value and gradient callables on Cartesian points."""

    def __init__(self, value, gradient, label="cartesian"):
        self._value = value
        self._gradient = gradient
        self.label = label

    def evaluate(self, setting, points):
        return self._value(np.asarray(points, dtype=float))

    def gradient(self, setting, points):
        return self._gradient(np.asarray(points, dtype=float))
