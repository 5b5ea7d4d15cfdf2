#!/usr/bin/env python3

"""Test functions f = phase * g(r) * Y(omega) * h(x'') and the log-power extremal family"""

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .base import DBG, DomainError, ReductionNotApplicable
from .geometry import AngularToken, HomogeneousGroup, sphere_measure
from .jets import (
    TAYLOR_ORDER_CAP,
    BumpProfile,
    LogPolynomialProfile,
    PowerProfile,
    ProductProfile,
    RadialProfile,
    Taylor,
    euler_power,
    log_euler_tower,
    smoothstep,
)
from .quadrature import QuadratureSpec, RadialDomain, SphereAxis, integrate

CUTOFF_ORDER = 8
# sample density used to record the cutoff derivative constants
_CUTOFF_SAMPLES = 4001
_SPHERE_LEVEL = 4
_TRUNCATION_START = 5.0
_TRUNCATION_END = 6.0


@lru_cache(maxsize=None)
def _step_bounds(K):
    t = np.linspace(0.0, 1.0, _CUTOFF_SAMPLES)
    derivs = smoothstep(t, 1.0, K).derivatives()
    return tuple(float(np.max(np.abs(d))) for d in derivs)


class CutoffSpec:
    """psi_delta(r): 0 on (0, 1+delta], smooth monotone rise, 1 on [1+2*delta, inf)."""

    def __init__(self, delta):
        if not delta > 0.0:
            raise DomainError("cutoff width must be positive", {"delta": delta})
        self.delta = float(delta)
        self.start = 1.0 + self.delta
        self.end = 1.0 + 2.0 * self.delta

    def series(self, r, K):
        r = np.asarray(r, dtype=float)
        return smoothstep((r - self.start) / self.delta, 1.0 / self.delta, K)

    def __call__(self, r):
        return self.series(r, 0).c[0].real

    @staticmethod
    def constants(K=CUTOFF_ORDER):
        """C_k with |psi^(k)| <= C_k / delta^k, from a dense sample of the unit step (5% margin)."""
        return tuple(1.05 * b for b in _step_bounds(K))

    def derivative_bound(self, k):
        return self.constants(max(k, 1))[k] / self.delta**k

    def __str__(self):
        return f"cutoff(delta={self.delta:g})"


class LogPowerProfile(RadialProfile):
    """psi_delta(r) (log r)^A, optionally switched off smoothly on [R_max, 2 R_max]."""

    kind = "log-power"
    max_jet_order = TAYLOR_ORDER_CAP

    def __init__(self, A, cutoff, truncation=None, label=None):
        if truncation is not None and truncation <= cutoff.end:
            raise DomainError("truncation must lie beyond the cutoff band", {"R_max": truncation})
        hi = math.inf if truncation is None else 2.0 * truncation
        RadialProfile.__init__(self, (cutoff.start, hi), label or f"logpower(A={A:g},delta={cutoff.delta:g})")
        self.A = float(A)
        self.cutoff = cutoff
        self.truncation = truncation

    def _series(self, r, K):
        live = r > self.cutoff.start
        if self.truncation is not None:
            live = live & (r < 2.0 * self.truncation)
        safe = np.where(live, r, math.e)
        s = Taylor.variable(safe, K).log().power(self.A) * self.cutoff.series(safe, K)
        if self.truncation is not None:
            R = self.truncation
            s = s * (1.0 - smoothstep((safe - R) / R, 1.0 / R, K))
        return s.masked(live)


def log_power_profile(A, cutoff, truncation=None):
    return LogPowerProfile(A, cutoff, truncation)


def bump_profile(center, half_width):
    return BumpProfile(center, half_width)


@lru_cache(maxsize=256)
def _sphere_integral(coeffs, s, N):
    c0, linear, mixed = coeffs
    if N > 3:
        if any(linear) or mixed:
            raise ReductionNotApplicable("angular factors on S^(N-1) need N <= 3", {"N": N})
        return abs(c0) ** s * sphere_measure(N)
    omega, weights = SphereAxis(N).rule(_SPHERE_LEVEL)
    values = AngularFactor(c0, linear, mixed).values(omega)
    return float(np.sum(np.abs(values) ** s * weights))


@dataclass(frozen=True)
class AngularFactor:
    """Y(omega) = c0 + a . omega + m omega_1 omega_2, a polynomial of degree <= 2 on the sphere."""

    c0: complex
    linear: tuple = ()
    mixed: float = 0.0

    @classmethod
    def constant(cls, c0):
        return cls(complex(c0))

    @property
    def constant_modulus(self):
        return not any(self.linear) and not self.mixed

    def _linear(self, N):
        a = np.zeros(N)
        a[: len(self.linear)] = self.linear[:N]
        return a

    def values(self, omega):
        omega = np.asarray(omega, dtype=float)
        N = omega.shape[-1]
        out = self.c0 + omega @ self._linear(N)
        if self.mixed and N >= 2:
            out = out + self.mixed * omega[..., 0] * omega[..., 1]
        return out

    def tangential_gradient(self, omega):
        """(I - omega omega^T) grad Y, the gradient along the sphere."""
        omega = np.asarray(omega, dtype=float)
        N = omega.shape[-1]
        grad = np.broadcast_to(self._linear(N), omega.shape).astype(complex)
        if self.mixed and N >= 2:
            grad = grad.copy()
            grad[..., 0] += self.mixed * omega[..., 1]
            grad[..., 1] += self.mixed * omega[..., 0]
        radial = np.sum(grad * omega, axis=-1)
        return grad - radial[..., None] * omega

    def sphere_integral(self, s, N):
        """int_{S^(N-1)} |Y|^s d(sigma)."""
        return _sphere_integral((self.c0, tuple(self.linear), self.mixed), float(s), N)


@lru_cache(maxsize=256)
def _transverse_integral(sigma, dim, q):
    factor = TransverseFactor(sigma, dim)

    def density(rho):
        return np.abs(factor.profile(rho)) ** q

    result = integrate(density, RadialDomain(0.0, factor.extent, dim), QuadratureSpec(split_points=(5.0 * sigma,)))
    return result.value * sphere_measure(dim)


@dataclass(frozen=True)
class TransverseFactor:
    """Gaussian exp(-|x''|^2 / (2 sigma^2)) switched off smoothly between 5 sigma and 6 sigma."""

    sigma: float
    dim: int

    def __post_init__(self):
        if self.sigma <= 0.0 or self.dim < 1:
            raise DomainError("transverse factor needs sigma > 0 and dim >= 1", {"sigma": self.sigma})

    @property
    def extent(self):
        return _TRUNCATION_END * self.sigma

    def _series(self, rho, K):
        rho = np.asarray(rho, dtype=float)
        t = (rho - _TRUNCATION_START * self.sigma) / self.sigma
        gauss = (Taylor.variable(rho, K) * Taylor.variable(rho, K) * (-0.5 / self.sigma**2)).exp()
        return gauss * (1.0 - smoothstep(t, 1.0 / self.sigma, K))

    def profile(self, rho):
        return self._series(rho, 0).c[0].real

    def profile_derivative(self, rho):
        return self._series(rho, 1).derivatives()[1].real

    def values(self, xpp):
        xpp = np.asarray(xpp, dtype=float)
        return self.profile(np.linalg.norm(xpp, axis=-1))

    def gradient(self, xpp):
        xpp = np.asarray(xpp, dtype=float)
        rho = np.linalg.norm(xpp, axis=-1)
        safe = np.where(rho > 0.0, rho, 1.0)
        scale = np.where(rho > 0.0, self.profile_derivative(rho) / safe, 0.0)
        return scale[..., None] * xpp

    def lp_integral(self, q):
        """int |h|^q dx'' over R^dim by adaptive quadrature."""
        return _transverse_integral(self.sigma, self.dim, float(q))

    def closed_form(self, q):
        """Untruncated Gaussian value (2 pi sigma^2 / q)^(dim/2)."""
        return (2.0 * math.pi * self.sigma**2 / q) ** (self.dim / 2.0)


@dataclass(frozen=True)
class TestFunction:
    """phase * g(r) * Y(omega) * h(x''), with r = |x'| (|x| on homogeneous groups)."""

    __test__ = False

    radial: RadialProfile
    angular: AngularFactor = None
    transverse: TransverseFactor = None
    phase: complex = 1.0
    label: str = field(default="f", compare=False)

    @property
    def support(self):
        return self.radial.support

    @property
    def separable(self):
        return self.angular is None or self.angular.constant_modulus

    @property
    def admissible(self):
        return self.radial.compact

    def transverse_extent(self):
        return self.transverse.extent if self.transverse else 0.0

    def radial_value(self, r):
        return self.phase * self.radial(np.asarray(r, dtype=float))

    def euler_radial(self, r, k=0):
        """phase * (r d/dr)^k g at r."""
        r = np.asarray(r, dtype=float)
        if k == 0:
            return self.radial_value(r)
        return self.phase * euler_power(self.radial, k, r)

    def tower(self, r, k):
        """[phase (log r)^l (r d/dr)^l g] for l = 0..k."""
        return [self.phase * t for t in log_euler_tower(self.radial, k, np.asarray(r, dtype=float))]

    def angular_token(self, setting, p):
        """Angular and transverse factor common to every radial integrand of exponent p."""
        if isinstance(setting, HomogeneousGroup):
            if not self.separable:
                raise ReductionNotApplicable("angular factor on a quasi-sphere must have constant modulus")
            modulus = abs(self.angular.c0) ** p if self.angular else 1.0
            if setting.isotropic:
                return AngularToken(p, modulus * setting.sphere_measure, "sphere")
            return AngularToken(p, None, "sigma", modulus)
        N = setting.n - setting.transverse_dim
        if self.angular is not None:
            value = self.angular.sphere_integral(p, N)
        else:
            value = sphere_measure(N)
        if setting.transverse_dim:
            if self.transverse is None:
                raise DomainError("cylinder with a transverse block needs a transverse factor")
            value *= self.transverse.lp_integral(p)
        return AngularToken(p, float(value), "sphere*transverse")

    def _parts(self, setting, points):
        points = np.asarray(points, dtype=float)
        if isinstance(setting, HomogeneousGroup):
            return setting.quasi_norm(points), None, None
        xp, xpp = setting.split(points)
        r = np.linalg.norm(xp, axis=-1)
        omega = xp / np.where(r > 0.0, r, 1.0)[..., None]
        return r, omega, xpp

    def _factors(self, omega, xpp):
        ang = self.angular.values(omega) if self.angular is not None and omega is not None else None
        if ang is None and self.angular is not None:
            ang = self.angular.c0
        trans = self.transverse.values(xpp) if self.transverse is not None and xpp is not None else 1.0
        return (1.0 if ang is None else ang), trans

    def evaluate(self, setting, points):
        r, omega, xpp = self._parts(setting, points)
        live = r > 0.0
        g = np.where(live, self.radial_value(np.where(live, r, 1.0)), 0.0)
        ang, trans = self._factors(omega, xpp)
        return g * ang * trans

    def gradient(self, setting, points):
        """Cartesian gradient (complex) of f at the points."""
        points = np.asarray(points, dtype=float)
        r, omega, xpp = self._parts(setting, points)
        safe = np.where(r > 0.0, r, 1.0)
        jet = self.radial.derivatives(safe, 1) * self.phase
        g, dg = jet[0], jet[1]
        ang, trans = self._factors(omega, xpp)
        if isinstance(setting, HomogeneousGroup):
            nu = np.asarray(setting.weights)
            e = setting.exponent
            dnorm = safe[..., None] ** (1.0 - e) * np.abs(points) ** (e / nu - 1.0) * np.sign(points) / nu
            return (dg * ang)[..., None] * dnorm
        grad_xp = (dg * ang * trans)[..., None] * omega
        if self.angular is not None:
            grad_xp = grad_xp + (g * trans / safe)[..., None] * self.angular.tangential_gradient(omega)
        if xpp.shape[-1] == 0:
            return grad_xp
        if self.transverse is not None:
            grad_xpp = (g * ang)[..., None] * self.transverse.gradient(xpp)
        else:
            grad_xpp = np.zeros(xpp.shape, dtype=complex)
        return np.concatenate([grad_xp, grad_xpp], axis=-1)

    def homogeneous_euler(self, setting, point):
        """|x| R f = (r g'(r)) at r = |x|, times the constant angular value."""
        r = setting.quasi_norm(point)
        ang = self.angular.c0 if self.angular is not None else 1.0
        return self.euler_radial(r, 1) * ang

    def __str__(self):
        return self.label


def radial_function(profile, setting=None, sigma=1.0, phase=1.0, label=None):
    """Wrap a profile as a test function, adding a transverse Gaussian where the setting has one."""
    transverse = None
    if setting is not None and setting.transverse_dim:
        transverse = TransverseFactor(sigma, setting.transverse_dim)
    return TestFunction(profile, None, transverse, complex(phase), label or profile.label)


def zero_function(setting=None):
    profile = ProductProfile([BumpProfile(2.0, 0.5), PowerProfile(0.0, scale=0.0)], label="zero")
    return radial_function(profile, setting, label="zero")


def build_corpus(seed, count, setting, complex_phase=True, nonseparable=False):
    """Seeded corpus of admissible test functions for ``setting``.

    Every fourth member straddles r = 1, even members carry a complex phase
    when ``complex_phase`` is set and odd members an angular factor when
    ``nonseparable`` is set (N <= 3, not on homogeneous groups). The random
    stream does not depend on the flags.
    """
    if count < 1:
        raise DomainError("corpus needs count >= 1", {"count": count})
    rng = np.random.default_rng(seed)
    N = setting.n - setting.transverse_dim
    angular_ok = nonseparable and not isinstance(setting, HomogeneousGroup) and N <= 3
    corpus = []
    for i in range(count):
        straddle_center = rng.uniform(0.7, 1.3)
        straddle_width = rng.uniform(abs(1.0 - straddle_center) + 0.05, 0.6)
        center = rng.uniform(0.3, 4.0)
        width = center * rng.uniform(0.1, 0.8)
        alpha = rng.uniform(-1.0, 1.0)
        logc = rng.uniform(-0.5, 0.5, size=2)
        omega = rng.uniform(-2.0, 2.0)
        theta = rng.uniform(0.0, 2.0 * math.pi)
        sigma = rng.uniform(0.5, 2.0)
        c0 = rng.uniform(1.5, 2.0)
        lin = rng.uniform(-0.3, 0.3, size=3)
        mixed = rng.uniform(-0.3, 0.3)

        if i % 4 == 0:
            bump = BumpProfile(straddle_center, straddle_width)
        else:
            bump = BumpProfile(center, width)
        factors = [bump]
        if i % 3 == 1:
            factors.append(PowerProfile(alpha))
        elif i % 3 == 2:
            factors.append(LogPolynomialProfile([1.0, logc[0], logc[1]]))
        phase = 1.0
        if complex_phase and i % 2 == 0:
            factors.append(PowerProfile(1j * omega))
            phase = np.exp(1j * theta)
        profile = factors[0] if len(factors) == 1 else ProductProfile(factors)

        transverse = TransverseFactor(sigma, setting.transverse_dim) if setting.transverse_dim else None
        angular = None
        if angular_ok and i % 2 == 1:
            angular = AngularFactor(c0, tuple(lin[:N]), mixed if N >= 2 else 0.0)
        label = f"f{i:02d}:{profile.label}"
        corpus.append(TestFunction(profile, angular, transverse, complex(phase), label))
    DBG(f"corpus seed={seed} count={count} on {setting}: {sum(f.angular is not None for f in corpus)} angular")
    return corpus
