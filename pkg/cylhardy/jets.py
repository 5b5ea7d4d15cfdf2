#!/usr/bin/env python3

"""Radial derivative jets and the operator algebra of r d/dr and log r

A jet is the tower (g, g', ..., g^(K)) of a radial profile at a radius.
Profiles produce their jets from closed-form recurrences: truncated Taylor
arithmetic for everything built from log, powers, exp and quotients, and a
precomputed exp-of-rational recurrence for the compact bump. Nothing here
differentiates numerically.
"""

import enum
import math

import numpy as np
from numpy.polynomial import Polynomial

from .base import DBG, CapabilityError, DomainError, OrderExhaustedError
from .combinatorics import stirling2

TAYLOR_ORDER_CAP = 16
BUMP_ORDER = 10
# beyond this the exponential factor is below 1e-260 and the jet is reported as zero
_EXP_FLOOR = -600.0
# |1/t - 1/(1-t)| above this leaves the step within 1e-87 of 0 or 1
_STEP_FLAT = 200.0


def _factorials(K):
    return np.array([math.factorial(j) for j in range(K + 1)], dtype=float)


def _expand(vec, ndim):
    return vec.reshape(vec.shape + (1,) * ndim)


class Taylor:
    """Truncated power series sum_j c_j h^j about a base point.

    Coefficients are stored with shape (K+1,) + point_shape so one series
    object carries many base points at once.
    """

    def __init__(self, coeffs):
        self.c = np.asarray(coeffs, dtype=complex)

    @classmethod
    def variable(cls, x0, K, scale=1.0):
        x0 = np.asarray(x0, dtype=complex)
        c = np.zeros((K + 1,) + x0.shape, dtype=complex)
        c[0] = x0
        if K >= 1:
            c[1] = scale
        return cls(c)

    @classmethod
    def constant(cls, value, K, shape=()):
        c = np.zeros((K + 1,) + tuple(shape), dtype=complex)
        c[0] = value
        return cls(c)

    @classmethod
    def from_derivatives(cls, derivs):
        derivs = np.asarray(derivs, dtype=complex)
        K = derivs.shape[0] - 1
        return cls(derivs / _expand(_factorials(K), derivs.ndim - 1))

    @property
    def order(self):
        return self.c.shape[0] - 1

    def derivatives(self):
        return self.c * _expand(_factorials(self.order), self.c.ndim - 1)

    def _coerce(self, other):
        if isinstance(other, Taylor):
            return other
        return Taylor.constant(other, self.order, self.c.shape[1:])

    def __add__(self, other):
        return Taylor(self.c + self._coerce(other).c)

    __radd__ = __add__

    def __neg__(self):
        return Taylor(-self.c)

    def __sub__(self, other):
        return Taylor(self.c - self._coerce(other).c)

    def __rsub__(self, other):
        return Taylor(self._coerce(other).c - self.c)

    def __mul__(self, other):
        if not isinstance(other, Taylor):
            return Taylor(self.c * other)
        a, b = self.c, other.c
        out = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=complex)
        for n in range(self.order + 1):
            out[n] = sum(a[k] * b[n - k] for k in range(n + 1))
        return Taylor(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Taylor):
            return Taylor(self.c / other)
        a, b = self.c, other.c
        z = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=complex)
        for n in range(self.order + 1):
            acc = a[n] - sum(b[k] * z[n - k] for k in range(1, n + 1))
            z[n] = acc / b[0]
        return Taylor(z)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def exp(self):
        x = self.c
        y = np.zeros_like(x)
        y[0] = np.exp(x[0])
        for n in range(1, self.order + 1):
            y[n] = sum(k * x[k] * y[n - k] for k in range(1, n + 1)) / n
        return Taylor(y)

    def log(self):
        x = self.c
        y = np.zeros_like(x)
        y[0] = np.log(x[0])
        for n in range(1, self.order + 1):
            acc = x[n] - sum(k * y[k] * x[n - k] for k in range(1, n)) / n
            y[n] = acc / x[0]
        return Taylor(y)

    def power(self, alpha):
        """Principal branch x**alpha; the base value must not vanish."""
        x = self.c
        y = np.zeros_like(x)
        y[0] = np.power(x[0], alpha)
        for n in range(1, self.order + 1):
            acc = sum((alpha * k - (n - k)) * x[k] * y[n - k] for k in range(1, n + 1))
            y[n] = acc / (n * x[0])
        return Taylor(y)

    def masked(self, keep, fill=0.0):
        """Zero the series (and set the value to ``fill``) where ``keep`` is False."""
        keep = np.broadcast_to(keep, self.c.shape[1:])
        c = np.where(keep, self.c, 0.0)
        c[0] = np.where(keep, self.c[0], fill)
        return Taylor(c)


def smoothstep(t0, dt, K):
    """Series of the C-infinity step S(t) = 1/(1 + exp(1/t - 1/(1-t))) at t = t0 + dt*h.

    S is 0 for t <= 0, 1 for t >= 1 and strictly increasing in between.
    """
    t0 = np.asarray(t0, dtype=float)
    inside = (t0 > 0.0) & (t0 < 1.0)
    safe = np.where(inside, t0, 0.5)
    with np.errstate(all="ignore"):
        z0 = 1.0 / safe - 1.0 / (1.0 - safe)
    flat = inside & (np.abs(z0) > _STEP_FLAT)
    live = inside & ~flat
    safe = np.where(live, safe, 0.5)
    t = Taylor.variable(safe, K, dt)
    z = 1.0 / t - 1.0 / (1.0 - t)
    # exponentiate -|z| only: E <= 1 at the base point on both branches
    rising = z0 > 0.0
    e = (z * np.where(rising, -1.0, 1.0)).exp()
    low = e / (1.0 + e)
    high = 1.0 / (1.0 + e)
    step = Taylor(np.where(rising, low.c, high.c)).masked(live)
    # saturated part: exactly 1 beyond the band (or numerically 1 inside it)
    ones = (t0 >= 1.0) | (flat & (z0 < 0.0))
    c = step.c.copy()
    c[0] = np.where(ones, 1.0, c[0])
    return Taylor(c)


class RadialJet:
    """Derivative tower (g, g', ..., g^(K)) of a radial profile at r."""

    def __init__(self, r, derivs):
        self.r = np.asarray(r, dtype=float)
        self.derivs = np.asarray(derivs, dtype=complex)
        if np.any(self.r <= 0.0):
            raise DomainError("jet radius must be positive", {"r": r})

    @property
    def order(self):
        return self.derivs.shape[0] - 1

    @property
    def value(self):
        return self.derivs[0]

    def __str__(self):
        return f"RadialJet(r={self.r}, order={self.order})"


class Step(enum.Enum):
    EULER = "euler"
    LOG_MULT = "log-mult"


def log_derivatives(r, K):
    """Derivatives (log r, 1/r, -1/r^2, 2/r^3, ...) up to order K."""
    r = np.asarray(r, dtype=float)
    out = np.zeros((K + 1,) + r.shape, dtype=complex)
    out[0] = np.log(r)
    for i in range(1, K + 1):
        out[i] = (-1) ** (i - 1) * math.factorial(i - 1) / r**i
    return out


def apply_step(jet, step):
    """Apply one generator to a jet: r d/dr lowers the order by one, log r keeps it."""
    d = jet.derivs
    K = jet.order
    if step is Step.EULER:
        if K < 1:
            raise OrderExhaustedError("Euler step on an order-0 jet", {"r": jet.r})
        j = _expand(np.arange(K, dtype=float), d.ndim - 1)
        return RadialJet(jet.r, j * d[:-1] + jet.r * d[1:])
    if step is Step.LOG_MULT:
        logs = log_derivatives(jet.r, K)
        out = np.zeros_like(d)
        for j in range(K + 1):
            out[j] = sum(math.comb(j, i) * logs[i] * d[j - i] for i in range(j + 1))
        return RadialJet(jet.r, out)
    raise CapabilityError(f"Unknown operator step {step!r}")


class RadialProfile:
    """Base class of the radial parts g(r) of test functions.

    Subclasses implement ``_series`` (Taylor-based) or ``_derivatives``.
    """

    kind = "abstract"
    max_jet_order = TAYLOR_ORDER_CAP

    def __init__(self, support=(0.0, math.inf), label=None):
        self.support = (float(support[0]), float(support[1]))
        self.label = label or self.kind

    @property
    def compact(self):
        return self.support[0] > 0.0 and math.isfinite(self.support[1])

    def evaluable(self, r):
        """True where jets can be evaluated; compact profiles are total on (0, inf)."""
        r = np.asarray(r, dtype=float)
        return r > 0.0

    def _series(self, r, K):
        return Taylor.from_derivatives(self._derivatives(r, K))

    def _derivatives(self, r, K):
        return self._series(r, K).derivatives()

    def series(self, r, K):
        return self._series(np.asarray(r, dtype=float), K)

    def derivatives(self, r, K):
        return self._derivatives(np.asarray(r, dtype=float), K)

    def __call__(self, r):
        return self.derivatives(r, 0)[0]

    def __str__(self):
        return self.label


def jet_of(profile, r, K):
    """Exact jet of ``profile`` at r (scalar or array) up to order K."""
    if K < 0 or K > profile.max_jet_order:
        raise CapabilityError(
            f"jet order {K} not available", {"profile": profile.label, "max": profile.max_jet_order}
        )
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0.0):
        raise DomainError("radius must be positive", {"r": r})
    if not np.all(profile.evaluable(r)):
        raise DomainError("radius outside the evaluable domain", {"profile": profile.label})
    return RadialJet(r, profile.derivatives(r, K))


def _bump_numerators(order):
    # B^(n) = B * N_n(u) / q^(2n) with q = 1 - u^2; N_{n+1} = N_n' q^2 + 4n u q N_n - 2u N_n
    u = Polynomial([0.0, 1.0])
    q = 1.0 - u**2
    nums = [Polynomial([1.0])]
    for n in range(order):
        N = nums[-1]
        nums.append(N.deriv() * q**2 + 4 * n * u * q * N - 2 * u * N)
    return nums


_BUMP_NUMERATORS = _bump_numerators(BUMP_ORDER)


class BumpProfile(RadialProfile):
    """exp(1 - 1/(1-u^2)) with u = (r - center)/half_width; peak value 1."""

    kind = "bump"
    max_jet_order = BUMP_ORDER

    def __init__(self, center, half_width, label=None):
        if half_width <= 0.0 or center - half_width <= 0.0:
            raise DomainError("bump support must stay away from 0", {"center": center, "half_width": half_width})
        RadialProfile.__init__(
            self, (center - half_width, center + half_width), label or f"bump({center:.6g},{half_width:.6g})"
        )
        self.center = float(center)
        self.half_width = float(half_width)

    def _derivatives(self, r, K):
        u = (r - self.center) / self.half_width
        inside = np.abs(u) < 1.0
        q = np.where(inside, 1.0 - u * u, 1.0)
        expo = 1.0 - 1.0 / q
        live = inside & (expo > _EXP_FLOOR)
        base = np.where(live, np.exp(np.where(live, expo, 0.0)), 0.0)
        out = np.zeros((K + 1,) + r.shape, dtype=complex)
        for n in range(K + 1):
            ratio = _BUMP_NUMERATORS[n](u) / q ** (2 * n) / self.half_width**n
            out[n] = np.where(live, base * ratio, 0.0)
        return out

    def taylor_reference(self, r, K):
        """Same jet through generic Taylor arithmetic; used to cross-check the recurrence."""
        r = np.asarray(r, dtype=float)
        u0 = (r - self.center) / self.half_width
        inside = np.abs(u0) < 1.0
        expo = 1.0 - 1.0 / np.where(inside, 1.0 - u0 * u0, 1.0)
        live = inside & (expo > _EXP_FLOOR)
        u = Taylor.variable(np.where(live, u0, 0.0), K, 1.0 / self.half_width)
        series = (1.0 - 1.0 / (1.0 - u * u)).exp()
        return series.masked(live).derivatives()


class LogPolynomialProfile(RadialProfile):
    """sum_i c_i (log r)^i on (0, inf); constants are the degree-0 case."""

    kind = "log-polynomial"

    def __init__(self, coeffs, label=None):
        self.coeffs = tuple(complex(c) for c in coeffs)
        RadialProfile.__init__(self, (0.0, math.inf), label or f"logpoly{tuple(self.coeffs)}")

    @property
    def compact(self):
        return False

    def _series(self, r, K):
        log = Taylor.variable(r, K).log()
        acc = Taylor.constant(0.0, K, r.shape)
        for c in reversed(self.coeffs):
            acc = acc * log + c
        return acc


class PowerProfile(RadialProfile):
    """scale * r**alpha with real or complex alpha; r**(i w) is the phase exp(i w log r)."""

    kind = "power"

    def __init__(self, alpha, scale=1.0, label=None):
        self.alpha = complex(alpha) if np.iscomplexobj(alpha) else float(alpha)
        self.scale = complex(scale)
        RadialProfile.__init__(self, (0.0, math.inf), label or f"power({alpha})")

    def _series(self, r, K):
        return Taylor.variable(r, K).power(self.alpha) * self.scale


class ProductProfile(RadialProfile):
    """Pointwise product of profiles (Leibniz rule through series multiplication)."""

    kind = "product"

    def __init__(self, factors, label=None):
        self.factors = tuple(factors)
        if not self.factors:
            raise DomainError("product needs at least one factor")
        lo = max(f.support[0] for f in self.factors)
        hi = min(f.support[1] for f in self.factors)
        RadialProfile.__init__(self, (lo, hi), label or "*".join(f.label for f in self.factors))
        self.max_jet_order = min(f.max_jet_order for f in self.factors)

    def evaluable(self, r):
        ok = np.asarray(r, dtype=float) > 0.0
        for f in self.factors:
            ok = ok & f.evaluable(r)
        return ok

    def _series(self, r, K):
        acc = self.factors[0].series(r, K)
        for f in self.factors[1:]:
            acc = acc * f.series(r, K)
        return acc


def log_euler_tower(profile, k, r):
    """[(log r)^l (r d/dr)^l g](r) for l = 0..k from one jet of order k."""
    jet = jet_of(profile, r, k)
    logr = np.log(jet.r)
    tower = [jet.value]
    for level in range(1, k + 1):
        jet = apply_step(jet, Step.EULER)
        tower.append(logr**level * jet.value)
    return tower


def euler_power(profile, k, r):
    """(r d/dr)^k g by direct iteration of Euler steps."""
    jet = jet_of(profile, r, k)
    for _ in range(k):
        jet = apply_step(jet, Step.EULER)
    return jet.value


def iterate_logeuler(profile, k, r):
    """(log r)^k (r d/dr)^k g, the k-fold weighted Euler image."""
    if k < 1:
        raise DomainError("k must be positive", {"k": k})
    return log_euler_tower(profile, k, r)[k]


def euler_power_stirling(profile, k, r):
    """(r d/dr)^k g through the Stirling expansion sum_i S(k,i) r^i g^(i)."""
    if k < 1:
        raise DomainError("k must be positive", {"k": k})
    jet = jet_of(profile, r, k)
    return sum(stirling2(k, i) * jet.r**i * jet.derivs[i] for i in range(1, k + 1))


class OperatorReport:
    """Worst residuals of the Stirling expansion and the commutation identity."""

    def __init__(self, profile, k_max):
        self.profile = profile.label
        self.k_max = k_max
        self.scherk_residual = 0.0
        self.scherk_location = None
        self.commutation_residual = 0.0
        self.commutation_location = None

    def record(self, which, residual, location):
        if which == "scherk" and residual > self.scherk_residual:
            self.scherk_residual = float(residual)
            self.scherk_location = location
        if which == "commutation" and residual > self.commutation_residual:
            self.commutation_residual = float(residual)
            self.commutation_location = location

    @property
    def worst(self):
        return max(self.scherk_residual, self.commutation_residual)

    def __str__(self):
        return (
            f"{self.profile}: scherk {self.scherk_residual:.3e} at {self.scherk_location}, "
            f"commutation {self.commutation_residual:.3e} at {self.commutation_location}"
        )


def _relative(diff, scale):
    diff = np.abs(diff)
    return np.where(scale > 0.0, diff / np.where(scale > 0.0, scale, 1.0), diff)


def check_operator_identities(profile, k_max, sample_radii):
    """Cross-validate the Stirling expansion and the log/Euler commutation rule.

    Both checks run at every sample radius and every order up to ``k_max``;
    the report keeps the worst relative residual and where it happened.
    """
    radii = np.asarray(sample_radii, dtype=float)
    K = k_max + 1
    if profile.max_jet_order < K:
        raise CapabilityError("profile jets too short for the operator checks", {"needed": K})
    report = OperatorReport(profile, k_max)
    base = jet_of(profile, radii, K)
    logr = np.log(radii)

    # (r d/dr)^k by iteration, against sum_i S(k,i) r^i g^(i)
    direct = base
    euler_powers = [base.value]
    for k in range(1, K + 1):
        direct = apply_step(direct, Step.EULER)
        euler_powers.append(direct.value)
        if k > k_max:
            continue
        terms = [stirling2(k, i) * radii**i * base.derivs[i] for i in range(1, k + 1)]
        expansion = sum(terms)
        scale = sum(np.abs(t) for t in terms) + np.abs(direct.value)
        res = _relative(direct.value - expansion, scale)
        worst = int(np.argmax(res))
        report.record("scherk", res.flat[worst], (k, float(radii.flat[worst])))

    # (log r)^κ E^κ [log r E g] = κ (log r)^κ E^κ g + (log r)^(κ+1) E^(κ+1) g
    inner = apply_step(apply_step(base, Step.EULER), Step.LOG_MULT)
    for kappa in range(0, k_max + 1):
        lhs = logr**kappa * inner.value
        first = kappa * logr**kappa * euler_powers[kappa]
        second = logr ** (kappa + 1) * euler_powers[kappa + 1]
        scale = np.abs(lhs) + np.abs(first) + np.abs(second)
        res = _relative(lhs - first - second, scale)
        worst = int(np.argmax(res))
        report.record("commutation", res.flat[worst], (kappa, float(radii.flat[worst])))
        if kappa < k_max:
            inner = apply_step(inner, Step.EULER)
    DBG(str(report))
    return report
