#!/usr/bin/env python3

"""Adaptive radial quadrature, tensor rules and closed-form log-power tails"""

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.integrate import quad_vec

from .base import DBG, CapabilityError, DivergenceError, DomainError, QuadratureError, ReductionNotApplicable
from .geometry import HomogeneousGroup, SeparableIntegrand, StratifiedH1, radial_reduce, sphere_measure

MAX_TENSOR_DIMS = 5


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    max_subdivisions: int = 500
    split_points: tuple = (1.0,)
    # tensor rules refine by doubling panels; their error estimate is the last change
    tensor_rel_tol: float = 1e-8
    max_level: int = 7
    max_points: int = 4_000_000

    def __post_init__(self):
        if self.rel_tol <= 0.0 or self.abs_tol <= 0.0:
            raise DomainError("tolerances must be positive", {"rel_tol": self.rel_tol, "abs_tol": self.abs_tol})
        if self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be positive", {"max_subdivisions": self.max_subdivisions})

    def as_dict(self):
        return {
            "rel_tol": self.rel_tol,
            "abs_tol": self.abs_tol,
            "max_subdivisions": self.max_subdivisions,
            "split_points": list(self.split_points),
            "tensor_rel_tol": self.tensor_rel_tol,
            "max_level": self.max_level,
            "max_points": self.max_points,
        }


DEFAULT_SPEC = QuadratureSpec()


class IntegralResult:
    def __init__(self, value, error_estimate, panels_used, converged):
        self.value = value
        self.error_estimate = float(error_estimate)
        self.panels_used = int(panels_used)
        self.converged = bool(converged)

    def as_dict(self):
        value = self.value
        if isinstance(value, np.ndarray):
            value = value.tolist()
        elif isinstance(value, complex):
            value = [value.real, value.imag]
        return {
            "value": value,
            "error": self.error_estimate,
            "panels": self.panels_used,
            "converged": self.converged,
        }

    def __str__(self):
        flag = "" if self.converged else " (not converged)"
        return f"{self.value} +- {self.error_estimate:.2e} in {self.panels_used} panels{flag}"


class RadialDomain:
    """[r_lo, r_hi] with the weight r^(d-1)."""

    def __init__(self, r_lo, r_hi, dimension=1):
        if r_lo < 0.0 or r_hi < r_lo:
            raise DomainError("radial interval must satisfy 0 <= r_lo <= r_hi", {"r_lo": r_lo, "r_hi": r_hi})
        self.r_lo = float(r_lo)
        self.r_hi = float(r_hi)
        self.dimension = dimension


class IntervalAxis:
    """Composite Gauss-Legendre on [a, b]; level L puts 2^L panels in every segment between split points."""

    refinable = True

    def __init__(self, a, b, splits=(), order=10, base_level=1, weight_power=0, weight_scale=1.0):
        self.a = float(a)
        self.b = float(b)
        self.splits = tuple(sorted(s for s in splits if self.a < s < self.b))
        self.order = order
        self.base_level = base_level
        self.weight_power = weight_power
        self.weight_scale = weight_scale

    def rule(self, level):
        x, w = leggauss(self.order)
        edges = (self.a,) + self.splits + (self.b,)
        nodes, weights = [], []
        for lo, hi in zip(edges[:-1], edges[1:]):
            cuts = np.linspace(lo, hi, 2**level + 1)
            half = 0.5 * (cuts[1:] - cuts[:-1])
            mid = 0.5 * (cuts[1:] + cuts[:-1])
            nodes.append((mid[:, None] + half[:, None] * x).ravel())
            weights.append((half[:, None] * w).ravel())
        nodes = np.concatenate(nodes)
        weights = np.concatenate(weights) * self.weight_scale * nodes**self.weight_power
        return nodes, weights

    def panels(self, level):
        return (len(self.splits) + 1) * 2**level


class SphereAxis:
    """Quadrature on S^(N-1) in R^N for N <= 3; nodes are unit vectors."""

    def __init__(self, N, base_level=0):
        if N > 3 or N < 1:
            raise CapabilityError("sphere rules are provided for N <= 3", {"N": N})
        self.N = N
        self.base_level = base_level
        self.refinable = N > 1

    def rule(self, level):
        if self.N == 1:
            return np.array([[1.0], [-1.0]]), np.array([1.0, 1.0])
        m = 16 * 2**level
        phi = 2.0 * math.pi * np.arange(m) / m
        if self.N == 2:
            return np.stack([np.cos(phi), np.sin(phi)], axis=-1), np.full(m, 2.0 * math.pi / m)
        z, wz = leggauss(8 * 2**level)
        s = np.sqrt(1.0 - z**2)
        vec = np.stack(
            [
                (s[:, None] * np.cos(phi)[None, :]).ravel(),
                (s[:, None] * np.sin(phi)[None, :]).ravel(),
                np.repeat(z, m),
            ],
            axis=-1,
        )
        return vec, np.repeat(wz, m) * (2.0 * math.pi / m)

    def panels(self, level):
        return 2 if self.N == 1 else len(self.rule(level)[1])

    @property
    def dims(self):
        return self.N - 1


class TensorGrid:
    """Nodes of a product rule, each reshaped to broadcast along its own axis."""

    def __init__(self, nodes):
        self.nodes = nodes
        self.shape = tuple(len(n) for n in nodes)

    def axis(self, i):
        node = self.nodes[i]
        shape = [1] * len(self.shape)
        shape[i] = self.shape[i]
        if node.ndim == 2:
            return node.reshape(tuple(shape) + (node.shape[1],))
        return node.reshape(shape)


class TensorDomain:
    def __init__(self, axes):
        self.axes = list(axes)
        dims = sum(getattr(a, "dims", 1) for a in self.axes)
        if dims > MAX_TENSOR_DIMS:
            raise CapabilityError("tensor quadrature is capped at 5 dimensions", {"dims": dims})


def Box(bounds, splits=()):
    """Tensor domain over a box; ``splits`` are panel boundaries honoured on every axis."""
    return TensorDomain([IntervalAxis(a, b, splits) for a, b in bounds])


def _radial_integrate(integrand, domain, spec):
    a, b = domain.r_lo, domain.r_hi
    power = domain.dimension - 1
    if b <= a:
        return IntegralResult(0.0, 0.0, 0, True)
    sample_at = 0.5 * (a + b) if math.isfinite(b) else a + 1.0
    sample = np.asarray(integrand(sample_at))
    cplx = np.iscomplexobj(sample)

    def weighted(r):
        value = np.asarray(integrand(r)) * r**power
        if cplx:
            return np.concatenate([np.atleast_1d(value.real), np.atleast_1d(value.imag)])
        return value

    points = [s for s in spec.split_points if a < s < b] or None
    value, err, info = quad_vec(
        weighted,
        a,
        b,
        epsabs=spec.abs_tol,
        epsrel=spec.rel_tol,
        norm="max",
        limit=spec.max_subdivisions,
        points=points,
        full_output=True,
    )
    if cplx:
        value = np.asarray(value)
        half = value.shape[0] // 2
        value = value[:half] + 1j * value[half:]
        if sample.ndim == 0:
            value = complex(value[0])
    elif sample.ndim == 0:
        value = float(value)
    panels = len(info.intervals)
    result = IntegralResult(value, err, panels, info.success)
    if not result.converged:
        DBG(f"radial quadrature on [{a}, {b}] did not converge: {result}")
    return result


def _tensor_sum(integrand, domain, levels):
    rules = [axis.rule(level) for axis, level in zip(domain.axes, levels)]
    grid = TensorGrid([r[0] for r in rules])
    values = np.asarray(integrand(grid))
    weight = np.ones(grid.shape)
    for i, (_, w) in enumerate(rules):
        shape = [1] * len(grid.shape)
        shape[i] = len(w)
        weight = weight * w.reshape(shape)
    axes = tuple(range(values.ndim - len(grid.shape), values.ndim))
    values = np.broadcast_to(values, values.shape[: values.ndim - len(grid.shape)] + grid.shape)
    total = np.sum(values * weight, axis=axes)
    return total, int(np.prod(grid.shape))


def _tensor_integrate(integrand, domain, spec):
    levels = [axis.base_level for axis in domain.axes]
    value, size = _tensor_sum(integrand, domain, levels)
    errors = [0.0] * len(domain.axes)
    done = [not axis.refinable for axis in domain.axes]
    for i, axis in enumerate(domain.axes):
        if done[i]:
            continue
        while levels[i] < spec.max_level:
            trial = list(levels)
            trial[i] += 1
            estimate = size * axis.panels(trial[i]) // max(axis.panels(levels[i]), 1)
            if estimate > spec.max_points:
                break
            new, size = _tensor_sum(integrand, domain, trial)
            errors[i] = float(np.max(np.abs(new - value)))
            value, levels = new, trial
            if errors[i] <= max(spec.abs_tol, spec.tensor_rel_tol * float(np.max(np.abs(value)))):
                done[i] = True
                break
    error = sum(errors)
    panels = int(np.prod([axis.panels(level) for axis, level in zip(domain.axes, levels)]))
    if np.ndim(value) == 0:
        value = complex(value) if np.iscomplexobj(value) else float(value)
    result = IntegralResult(value, error, panels, all(done))
    if not result.converged:
        DBG(f"tensor quadrature stopped at levels {levels}: {result}")
    return result


def integrate(integrand, domain, spec=DEFAULT_SPEC):
    """Integrate over a radial interval (weight r^(d-1)) or a tensor domain.

    Radial integrands take a scalar radius and may return a scalar or a
    vector of several integrands sharing one adaptive subdivision. Tensor
    integrands take a TensorGrid. Non-convergence is reported through
    ``converged``, never raised.
    """
    if isinstance(domain, RadialDomain):
        return _radial_integrate(integrand, domain, spec)
    if isinstance(domain, TensorDomain):
        return _tensor_integrate(integrand, domain, spec)
    raise CapabilityError(f"Unknown integration domain {domain!r}")


def log_tail_integral(pA, r0):
    """int_r0^inf (log r)^pA dr/r = (log r0)^(pA+1) / (-pA-1)."""
    if pA >= -1.0:
        raise DivergenceError("log-power tail diverges for pA >= -1", {"pA": pA})
    if r0 <= 1.0:
        raise DomainError("tail must start beyond r = 1", {"r0": r0})
    return math.log(r0) ** (pA + 1.0) / (-pA - 1.0)


def weighted_integral(f, weight, p, setting, spec=DEFAULT_SPEC):
    """int |weight * f|^p reduced to one dimension, with its angular token."""

    def density(r):
        return np.abs(weight.radial(f, r)) ** p

    reduced = radial_reduce(setting, SeparableIntegrand(f, density, p, weight.tag))
    result = integrate(reduced.radial, RadialDomain(*reduced.bounds), spec)
    return result, reduced.token


def cylinder_tensor_integral(setting, f, density, spec=DEFAULT_SPEC):
    """Integrate density(points) over the support of f in polar coordinates on x'.

    x' = r*omega with the sphere rule on omega; the transverse block is a
    line for H1 (t matters through the frame) and a radial axis along e_1
    for Euclidean cylinders, where the integrands only see |x''|.
    """
    if isinstance(setting, HomogeneousGroup):
        raise CapabilityError("tensor quadrature needs a known sphere measure", {"setting": str(setting)})
    N = setting.n - setting.transverse_dim
    d2 = setting.transverse_dim
    r_lo, r_hi = f.support
    axes = [IntervalAxis(r_lo, r_hi, spec.split_points, base_level=2, weight_power=N - 1), SphereAxis(N)]
    extent = f.transverse_extent()
    if d2 and isinstance(setting, StratifiedH1):
        axes.append(IntervalAxis(-extent, extent, (0.0,)))
    elif d2:
        axes.append(IntervalAxis(0.0, extent, weight_power=d2 - 1, weight_scale=sphere_measure(d2)))

    def integrand(grid):
        r = grid.axis(0)
        omega = grid.axis(1)
        xp = r[..., None] * omega
        parts = [xp]
        if d2:
            s = grid.axis(2)
            tail = np.zeros(s.shape + (d2,))
            tail[..., 0] = s
            parts.append(tail)
        shape = np.broadcast_shapes(*[q.shape[:-1] for q in parts])
        points = np.concatenate([np.broadcast_to(q, shape + (q.shape[-1],)) for q in parts], axis=-1)
        return density(points)

    return integrate(integrand, TensorDomain(axes), spec)


def weighted_Lp(f, weight, p, setting, spec=DEFAULT_SPEC, method="auto"):
    """L^p norm of weight * f over the setting.

    Separable inputs go through the radial reduction; ``method="tensor"`` (or a
    function the reduction rejects) uses polar tensor quadrature instead. On
    an anisotropic homogeneous group the norm is per unit quasi-sphere measure.
    """
    if p <= 0.0:
        raise DomainError("p must be positive", {"p": p})
    if method not in ("auto", "tensor"):
        raise DomainError("unknown integration method", {"method": method})
    if method == "auto":
        try:
            result, token = weighted_integral(f, weight, p, setting, spec)
            total = result.value * token.factor()
        except ReductionNotApplicable:
            method = "tensor"
    if method == "tensor":
        if weight.euler_order > 1:
            raise CapabilityError("tensor path supports at most one Euler step", {"weight": weight.tag})

        def density(points):
            r = setting.radius(points)
            if weight.euler_order:
                values = setting.euler_from_gradient(f.gradient(setting, points), points)
            else:
                values = f.evaluate(setting, points)
            return np.abs(r**weight.power * np.log(r) ** weight.log_power * values) ** p

        result = cylinder_tensor_integral(setting, f, density, spec)
        total = result.value
    if not result.converged:
        raise QuadratureError("weighted norm did not converge", {"weight": weight.tag, "p": p})
    return float(total) ** (1.0 / p)
