#!/usr/bin/env python3

"""Theorem-by-theorem verification engines

Every check reduces to a handful of radial integrals evaluated in one
adaptive pass, multiplied by the angular/transverse factor of their
exponent. Statements whose integrands see a full or horizontal gradient of
a non-radial function fall back to polar tensor quadrature.
"""

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .base import DBG, CapabilityError, DomainError, HypothesisViolation, ReductionNotApplicable
from .combinatorics import CombinatoricsTable, a_coeff, odd_double_factorial
from .corpus import CutoffSpec, LogPowerProfile
from .geometry import EuclideanCylinder, HomogeneousGroup, SeparableIntegrand, StratifiedH1, radial_reduce
from .jets import log_euler_tower
from .quadrature import (
    DEFAULT_SPEC,
    Box,
    RadialDomain,
    cylinder_tensor_integral,
    integrate,
    log_tail_integral,
)

INEQUALITY_TOLERANCE = 1e-9
MAX_HIGHER_ORDER = 4
EPS = np.finfo(float).eps
# radii per record at which C_p / |v|^p is sampled
_CP_SAMPLES = 257


class Verdict(enum.Enum):
    IDENTITY_PASS = "identity-pass"
    INEQUALITY_PASS = "inequality-pass"
    FAIL = "fail"


@dataclass(frozen=True)
class CpArguments:
    u: complex
    v: complex
    p: float

    def __post_init__(self):
        if not self.p > 1.0:
            raise DomainError("C_p needs p > 1", {"p": self.p})


def cp_array(u, v, p):
    """|u|^p - |u-v|^p - p |u-v|^(p-2) Re((u-v) conj v), with 0^(p-2) * 0 = 0."""
    u = np.asarray(u)
    v = np.asarray(v)
    d = u - v
    ad = np.abs(d)
    live = ad > 0.0
    safe = np.where(live, ad, 1.0)
    mid = np.where(live, safe ** (p - 2.0) * np.real(d * np.conj(v)), 0.0)
    return np.abs(u) ** p - ad**p - p * mid


def cp_functional(args):
    return float(cp_array(args.u, args.v, args.p))


@dataclass(frozen=True)
class ExponentTuple:
    """(p, q, r, delta, b, c) for a logarithmic CKN inequality in dimension parameter D."""

    p: float
    q: float
    r: float
    delta: float
    b: float
    c: float
    D: float
    tol: float = 1e-14

    def __post_init__(self):
        p, q, r, delta = self.p, self.q, self.r, self.delta
        details = self.as_dict()
        # q = 1 is admitted for the Nash form
        if not (p > 1.0 and q >= 1.0 and r > 0.0):
            raise HypothesisViolation("need p > 1, q >= 1 and r > 0", details)
        if not 0.0 <= delta <= 1.0:
            raise HypothesisViolation("delta must lie in [0, 1]", details)
        if abs(delta * r / p + (1.0 - delta) * r / q - 1.0) > self.tol:
            raise HypothesisViolation("delta r/p + (1-delta) r/q must equal 1", details)
        expected = -(self.D / p) * delta + self.b * (1.0 - delta)
        if abs(self.c - expected) > self.tol * max(1.0, abs(expected)):
            raise HypothesisViolation("c must equal -(D/p) delta + b (1-delta)", details)
        if delta < (r - q) / r - self.tol or delta > p / r + self.tol:
            raise HypothesisViolation("delta outside [(r-q)/r, p/r]", details)
        if p + q < r - self.tol:
            raise HypothesisViolation("need p + q >= r", details)

    @classmethod
    def solve(cls, D, p, q, delta, b, r=None, c=None):
        """Fill in r and c from the balance conditions when they are not given."""
        if r is None:
            denom = delta / p + (1.0 - delta) / q
            if denom <= 0.0:
                raise HypothesisViolation("cannot solve for r", {"p": p, "q": q, "delta": delta})
            r = 1.0 / denom
        if c is None:
            c = -(D / p) * delta + b * (1.0 - delta)
        return cls(float(p), float(q), float(r), float(delta), float(b), float(c), float(D))

    @property
    def holder_equality(self):
        """q = p and b = -D/p: the Holder step is an equality for every function."""
        return abs(self.q - self.p) < 1e-14 and abs(self.b + self.D / self.p) < 1e-14

    def as_dict(self):
        return {"p": self.p, "q": self.q, "r": self.r, "delta": self.delta, "b": self.b, "c": self.c, "D": self.D}


@dataclass
class VerificationRecord:
    statement: str
    setting: str
    function: str
    params: dict
    lhs: float
    rhs: float
    remainder: float
    residual: float
    tolerance: float
    verdict: Verdict
    diagnostics: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.verdict is not Verdict.FAIL

    @property
    def slack(self):
        return self.rhs - self.lhs

    def sort_key(self):
        params = ",".join(f"{k}={self.params[k]}" for k in sorted(self.params))
        return (self.statement, self.setting, params, self.function)

    def as_dict(self):
        return {
            "statement": self.statement,
            "setting": self.setting,
            "function": self.function,
            "params": dict(self.params),
            "lhs": self.lhs,
            "rhs": self.rhs,
            "remainder": self.remainder,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "verdict": self.verdict.value,
            "quad_diagnostics": dict(self.diagnostics),
        }

    def __str__(self):
        return (
            f"{self.statement} [{self.setting}] {self.function} {self.params}: "
            f"lhs={self.lhs:.10g} rhs={self.rhs:.10g} residual={self.residual:.3e} {self.verdict.value}"
        )


def _check_admissible(f, setting):
    if not f.admissible:
        raise HypothesisViolation(
            "test function must be compactly supported away from the singular set", {"f": f.label}
        )
    if setting.transverse_dim and f.transverse is None:
        raise HypothesisViolation("test function lacks a transverse factor", {"f": f.label, "setting": str(setting)})


def _radial_terms(f, setting, terms, exponents, spec, label):
    """Integrate stacked radial densities in one pass; scale each by the factor of its exponent.

    Returns (values, error, result, tokens); ``values`` are absolute integrals except
    on anisotropic homogeneous groups, where the unknown quasi-sphere measure
    is left out.
    """
    p0 = exponents[0]

    def stacked(r):
        return np.array(terms(r), dtype=float)

    reduced = radial_reduce(setting, SeparableIntegrand(f, stacked, p0, label))
    result = integrate(reduced.radial, RadialDomain(*reduced.bounds), spec)
    tokens = [f.angular_token(setting, e) for e in exponents]
    factors = np.array([t.factor() for t in tokens])
    values = np.atleast_1d(result.value) * factors
    error = result.error_estimate * float(np.max(factors))
    return values, error, result, tokens


def _diagnostics(result, tokens, **extra):
    diag = {
        "converged": result.converged,
        "error_estimate": result.error_estimate,
        "panels": result.panels_used,
        "tokens": [t.as_dict() for t in tokens],
    }
    diag.update(extra)
    return diag


def _identity_tolerance(error_sum, main, remainder, scale):
    if scale <= 0.0:
        return 0.0
    return 100.0 * error_sum / scale + 1000.0 * EPS * (abs(main) + abs(remainder)) / scale


def _cp_min_ratio(f, setting, p):
    """Empirical minimum of C_p(u, v) / |v|^p over sample radii (reported, never asserted)."""
    lo, hi = f.support
    r = np.linspace(lo, hi, _CP_SAMPLES)[1:-1]
    w = r ** (-setting.D / p)
    T0, T1 = f.tower(r, 1)
    u = p * T1 * w
    v = u + T0 * w
    av = np.abs(v) ** p
    live = av > 1e-30 * max(float(np.max(av)), 1e-300)
    if not np.any(live):
        return None
    return float(np.min(cp_array(u[live], v[live], p) / av[live]))


def verify_identity(f, p, setting, spec=DEFAULT_SPEC, statement="id-3.2"):
    """Sharp remainder identity ||f/w||_p^p = p^p ||log * Euler f / w||_p^p - int C_p(u, v).

    u = p log|x'| (Euler f) / w and v = u + f/w, the expanded form of the
    second argument, valid on both sides of |x'| = 1.
    """
    if not p > 1.0:
        raise HypothesisViolation("identity needs p > 1", {"p": p})
    _check_admissible(f, setting)
    D = setting.D
    triangle = p == 2.0

    def terms(r):
        T0, T1 = f.tower(r, 1)
        w = r ** (-D / p)
        fw = T0 * w
        u = p * T1 * w
        v = u + fw
        out = [abs(fw) ** p, abs(u) ** p, cp_array(u, v, p)]
        if triangle:
            out.append(abs(v) ** 2)
        return out

    n_terms = 4 if triangle else 3
    values, error, result, tokens = _radial_terms(f, setting, terms, [p] * n_terms, spec, f"identity p={p:g}")
    lhs, main, rem = (float(x) for x in values[:3])
    rhs = main - rem
    scale = max(abs(lhs), abs(rhs))
    residual = abs(lhs - rhs) / scale if scale > 0.0 else 0.0
    tolerance = _identity_tolerance(3 * error, main, rem, scale)
    extra = {"main": main}
    ok = result.converged and residual <= tolerance and rem >= -INEQUALITY_TOLERANCE * max(scale, 1.0)
    if triangle:
        direct = float(values[3])
        gap = abs(rem - direct) / max(abs(direct), abs(rem)) if max(abs(direct), abs(rem)) > 0.0 else 0.0
        extra.update({"perfect_square": direct, "triangle_residual": gap})
        ok = ok and gap <= max(1e-8, tolerance)
    if p >= 2.0:
        extra["cp_min_ratio"] = _cp_min_ratio(f, setting, p)
    verdict = Verdict.IDENTITY_PASS if ok else Verdict.FAIL
    record = VerificationRecord(
        statement, str(setting), f.label, {"p": p}, lhs, rhs, rem, residual, tolerance, verdict,
        _diagnostics(result, tokens, **extra),
    )
    DBG(str(record))
    return record


def verify_higher_order_identity(f, k, setting, spec=DEFAULT_SPEC, statement="higher-4.1"):
    """(4^k/a_k) ||T_k||^2 = ||T_0||^2 + sum_m (O(k,m)/a_k) ||sum_l S(m-1,l) T_l + 2 sum_kappa S(m,kappa) T_kappa||^2.

    T_l = (log r)^l (Euler)^l f / w with w = r^(D/2); every coefficient is exact.
    """
    if not isinstance(k, int) or k < 1:
        raise DomainError("k must be a positive integer", {"k": k})
    if k > MAX_HIGHER_ORDER:
        raise CapabilityError("higher-order identity is checked up to k = 4", {"k": k})
    if f.radial.max_jet_order < k:
        raise CapabilityError("jet order insufficient", {"k": k, "f": f.label})
    _check_admissible(f, setting)
    table = CombinatoricsTable(k)
    D = setting.D
    combos = []
    for m in range(1, k + 1):
        coeffs = [0.0] * (k + 1)
        for ell in range(m):
            coeffs[ell] += table.S_mk(m - 1, ell)
        for kappa in range(1, m + 1):
            coeffs[kappa] += 2 * table.S_mk(m, kappa)
        combos.append(np.array(coeffs, dtype=float))

    def terms(r):
        w = r ** (-D / 2.0)
        tower = np.array(f.tower(r, k)) * w
        out = [abs(tower[k]) ** 2, abs(tower[0]) ** 2]
        out.extend(abs(np.dot(c, tower)) ** 2 for c in combos)
        return out

    values, error, result, tokens = _radial_terms(f, setting, terms, [2.0] * (k + 2), spec, f"higher k={k}")
    a_k = table.a_k(k)
    lhs = 4**k / a_k * float(values[0])
    weighted = [table.O_km(k, m) / a_k * float(values[m + 1]) for m in range(1, k + 1)]
    rem = sum(weighted)
    rhs = float(values[1]) + rem
    scale = max(abs(lhs), abs(rhs))
    residual = abs(lhs - rhs) / scale if scale > 0.0 else 0.0
    tolerance = _identity_tolerance((k + 2) * error * 4**k, lhs, rhs, scale)
    ok = result.converged and residual <= tolerance and min(weighted) >= -INEQUALITY_TOLERANCE * max(scale, 1.0)
    verdict = Verdict.IDENTITY_PASS if ok else Verdict.FAIL
    record = VerificationRecord(
        statement, str(setting), f.label, {"k": k}, lhs, rhs, rem, residual, tolerance, verdict,
        _diagnostics(result, tokens, remainder_terms=weighted),
    )
    DBG(str(record))
    return record


def _gradient_modulus(setting, f, points, full):
    grad = f.gradient(setting, points)
    if isinstance(setting, StratifiedH1):
        grad = setting.horizontal_gradient(grad, points)
    elif not full:
        grad = grad[..., : setting.n - setting.transverse_dim]
    return np.sqrt(np.sum(np.abs(grad) ** 2, axis=-1))


def _gradient_integral(f, setting, p, full, spec):
    """int |log|x'| |x'| |grad f| / w|^p dx, by reduction where the gradient is radial."""
    D = setting.D
    radial_gradient = f.angular is None and not isinstance(setting, StratifiedH1)
    if radial_gradient and (not full or f.transverse is None):

        def terms(r):
            T0, T1 = f.tower(r, 1)
            return [abs(T1 * r ** (-D / p)) ** p]

        values, error, result, _ = _radial_terms(f, setting, terms, [p], spec, "gradient")
        return float(values[0]), error, result.converged, "radial"

    def density(points):
        r = setting.radius(points)
        safe = np.where(r > 0.0, r, 1.0)
        mod = _gradient_modulus(setting, f, points, full)
        return np.where(r > 0.0, np.abs(np.log(safe) * safe ** (1.0 - D / p) * mod) ** p, 0.0)

    result = cylinder_tensor_integral(setting, f, density, spec)
    return float(result.value), result.error_estimate, result.converged, "tensor"


def verify_inequality(f, statement, setting, params, spec=DEFAULT_SPEC, statement_id=None):
    """One inequality of the critical Sobolev family; the verdict asks for slack >= -1e-9.

    ``statement`` is one of sob, hardy, badiale, stability or higher.
    """
    _check_admissible(f, setting)
    D = setting.D
    p = float(params.get("p", 2.0))
    sid = statement_id or statement
    if statement == "higher":
        return _verify_higher_inequality(f, int(params["k"]), setting, spec, sid)
    if not p > 1.0:
        raise HypothesisViolation("inequality needs p > 1", {"p": p})
    if statement in ("hardy", "badiale", "stability") and isinstance(setting, HomogeneousGroup):
        raise HypothesisViolation(f"{statement} needs a cylinder or H1", {"setting": str(setting)})
    if statement in ("badiale", "stability") and (p != D or D < 2):
        raise HypothesisViolation("Badiale-type statements need p = N >= 2", {"p": p, "N": D})

    def terms(r):
        T0, T1 = f.tower(r, 1)
        w = r ** (-D / p)
        u = p * T1 * w
        fw = T0 * w
        return [abs(fw) ** p, abs(T1 * w) ** p, cp_array(u, u + fw, p)]

    values, error, result, tokens = _radial_terms(f, setting, terms, [p, p, p], spec, statement)
    lhs_p, main, rem = (float(x) for x in values)
    converged = result.converged
    diag = {}
    remainder = 0.0
    if statement == "sob":
        lhs = lhs_p ** (1.0 / p)
        rhs = p * main ** (1.0 / p)
        remainder = rem
        diag["identity_gap"] = abs(lhs_p + rem - p**p * main) / max(p**p * main, 1e-300)
    elif statement in ("hardy", "badiale"):
        grad, grad_err, grad_ok, path = _gradient_integral(f, setting, p, statement == "badiale", spec)
        converged = converged and grad_ok
        lhs = lhs_p ** (1.0 / p)
        rhs = p * grad ** (1.0 / p)
        diag.update({"path": path, "euler_rhs": p * main ** (1.0 / p), "gradient_error": grad_err})
        if path == "radial":
            # Schwarz step is an equality, so the slack comes from the remainder alone
            diag["remainder_slack"] = p**p * grad - lhs_p
        remainder = rem
    elif statement == "stability":
        grad, grad_err, grad_ok, path = _gradient_integral(f, setting, p, True, spec)
        converged = converged and grad_ok
        lhs = lhs_p + rem
        rhs = p**p * grad
        remainder = rem
        diag.update({"path": path, "gradient_error": grad_err})
    else:
        raise CapabilityError(f"Unknown inequality {statement!r}")
    return _inequality_record(sid, setting, f, {"p": p}, lhs, rhs, remainder, converged, result, tokens, diag)


def _inequality_record(sid, setting, f, params, lhs, rhs, remainder, converged, result, tokens, diag, extra_ok=True):
    slack = rhs - lhs
    scale = max(abs(lhs), abs(rhs))
    residual = max(0.0, -slack) / scale if scale > 0.0 else 0.0
    ok = converged and extra_ok and slack >= -INEQUALITY_TOLERANCE
    ok = ok and remainder >= -INEQUALITY_TOLERANCE * max(scale, 1.0)
    diag["slack"] = slack
    diag["converged"] = converged
    verdict = Verdict.INEQUALITY_PASS if ok else Verdict.FAIL
    record = VerificationRecord(
        sid, str(setting), f.label, params, lhs, rhs, remainder, residual, INEQUALITY_TOLERANCE, verdict,
        _diagnostics(result, tokens, **diag),
    )
    DBG(str(record))
    return record


def higher_order_constant(k):
    """2^k / (2k-1)!!, the sharp constant of the k-th order inequality."""
    return 2.0**k / odd_double_factorial(k)


def _verify_higher_inequality(f, k, setting, spec, sid):
    if k > MAX_HIGHER_ORDER:
        raise CapabilityError("higher-order inequality is checked up to k = 4", {"k": k})
    D = setting.D

    def terms(r):
        w = r ** (-D / 2.0)
        tower = f.tower(r, k)
        return [abs(tower[0] * w) ** 2, abs(tower[k] * w) ** 2]

    values, error, result, tokens = _radial_terms(f, setting, terms, [2.0, 2.0], spec, f"higher-ineq k={k}")
    lhs = math.sqrt(float(values[0]))
    rhs = higher_order_constant(k) * math.sqrt(float(values[1]))
    return _inequality_record(sid, setting, f, {"k": k}, lhs, rhs, 0.0, result.converged, result, tokens, {})


def _ckn_parts(f, e, setting, spec, k=None):
    """Radial integrals behind a CKN bound: r-norm, p-terms (or the k-tower) and q-norm."""
    D = setting.D
    p = e.p

    def terms(r):
        if k is None:
            T0, T1 = f.tower(r, 1)
            w = r ** (-D / p)
            u = p * T1 * w
            fw = T0 * w
            parts = [abs(fw) ** p, abs(T1 * w) ** p, cp_array(u, u + fw, p)]
        else:
            tower = f.tower(r, k)
            T0 = tower[0]
            parts = [abs(T0 * r ** (-D / 2.0)) ** 2, abs(tower[k] * r ** (-D / 2.0)) ** 2, 0.0]
        return [abs(r**e.c * T0) ** e.r] + parts + [abs(r**e.b * T0) ** e.q]

    exponents = [e.r, p, p, p, e.q]
    values, error, result, tokens = _radial_terms(f, setting, terms, exponents, spec, "ckn")
    if not all(t.numeric for t in tokens):
        balance = 1.0 / e.r - e.delta / p - (1.0 - e.delta) / e.q
        if abs(balance) > 1e-12:
            raise ReductionNotApplicable("quasi-sphere measure does not cancel", {"balance": balance})
    return [float(v) for v in values], error, result, tokens


def verify_ckn(f, e, setting, spec=DEFAULT_SPEC, k=None, statement="ckn-5.1"):
    """||r^c f||_r <= p^delta (main - rem/p^p)^(delta/p) ||r^b f||_q^(1-delta).

    With ``k`` the k-th order form with constant (2^k/(2k-1)!!)^delta is
    checked instead (p = 2, no remainder). delta = 0 is the trivial estimate
    and delta = 1 the identity, both checked as equalities.
    """
    _check_admissible(f, setting)
    if k is not None and e.p != 2.0:
        raise HypothesisViolation("higher-order CKN needs p = 2", e.as_dict())
    if abs(e.D - setting.D) > 1e-14:
        raise HypothesisViolation("exponent tuple built for another dimension", {"D": e.D, "setting": str(setting)})
    (I_r, lhs_p, main, rem, I_q), error, result, tokens = _ckn_parts(f, e, setting, spec, k)
    p, delta = e.p, e.delta
    lhs = I_r ** (1.0 / e.r)
    q_norm = I_q ** (1.0 / e.q)
    if k is None:
        bracket = max(main - rem / p**p, 0.0)
        rhs = p**delta * bracket ** (delta / p) * q_norm ** (1.0 - delta)
        plain = p**delta * main ** (delta / p) * q_norm ** (1.0 - delta)
    else:
        rhs = higher_order_constant(k) ** delta * main ** (delta / 2.0) * q_norm ** (1.0 - delta)
        plain = rhs
    holder = lhs_p ** (delta / p) * q_norm ** (1.0 - delta)
    diag = {"holder_bound": holder, "plain_bound": plain, "remainder_gap": plain - rhs}
    params = dict(e.as_dict())
    if k is not None:
        params["k"] = k
    scale = max(abs(lhs), abs(rhs))
    equality = k is None and (delta in (0.0, 1.0) or e.holder_equality)
    if equality:
        residual = abs(lhs - rhs) / scale if scale > 0.0 else 0.0
        tolerance = 1e-12 if delta == 0.0 else max(1e-7, _identity_tolerance(5 * error, main, rem, max(scale, 1e-300)))
        diag["equality_case"] = True
        diag["slack"] = rhs - lhs
        ok = result.converged and residual <= tolerance and rem >= -INEQUALITY_TOLERANCE * max(scale, 1.0)
        verdict = Verdict.IDENTITY_PASS if ok else Verdict.FAIL
        record = VerificationRecord(
            statement, str(setting), f.label, params, lhs, rhs, rem, residual, tolerance, verdict,
            _diagnostics(result, tokens, **diag),
        )
        DBG(str(record))
        return record
    return _inequality_record(
        statement, setting, f, params, lhs, rhs, rem if k is None else 0.0, result.converged, result,
        tokens, diag,
    )


def verify_uncertainty(f, statement, setting, spec=DEFAULT_SPEC, params=None, statement_id=None):
    """Uncertainty-type principles wired as fixed CKN specialisations.

    critical: int |f|^2 <= N ||log (Euler f)/r||_N ||r f||_q with 1/N + 1/q = 1;
    hpw/hpw-hom: the N = q = 2 square form; hpw-schwarz: |grad f| in place of
    the radial derivative; nash: q = 1, r = 2, N = p = 2n/(n-2); higher:
    N = 2k, b = k, c = 0, r = q = 2, delta = 1/2.
    """
    params = dict(params or {})
    sid = statement_id or f"uncert-{statement}"
    _check_admissible(f, setting)
    D = setting.D
    if statement == "nash":
        n = int(params.get("n", setting.n))
        if n <= 2 or abs(D - 2.0 * n / (n - 2)) > 1e-12:
            raise HypothesisViolation("Nash form needs N = p = 2n/(n-2)", {"n": n, "N": D})
        p = 2.0 * n / (n - 2)
        e = ExponentTuple.solve(D, p, 1.0, n / (n + 2.0), -1.0, r=2.0)
        (I_r, _, main, _, I_q), error, result, tokens = _ckn_parts(f, e, setting, spec)
        lhs = math.sqrt(I_r) ** (1.0 + 2.0 / n)
        rhs = p * I_q ** (2.0 / n) * main ** (1.0 / p)
        params.update({"n": n})
        return _inequality_record(sid, setting, f, params, lhs, rhs, 0.0, result.converged, result, tokens, {})
    if statement == "higher":
        k = int(params["k"])
        if abs(D - 2 * k) > 1e-12:
            raise HypothesisViolation("higher-order uncertainty needs N = 2k", {"k": k, "N": D})
        e = ExponentTuple.solve(D, 2.0, 2.0, 0.5, float(k), r=2.0)
        (I_r, _, main, _, I_q), error, result, tokens = _ckn_parts(f, e, setting, spec, k=k)
        lhs = I_r
        rhs = higher_order_constant(k) * math.sqrt(main) * math.sqrt(I_q)
        return _inequality_record(sid, setting, f, params, lhs, rhs, 0.0, result.converged, result, tokens, {})
    if D < 2:
        # Open question: the critical uncertainty principle needs a finite conjugate q = N/(N-1)
        raise HypothesisViolation("uncertainty principles need N >= 2", {"N": D})
    q = D / (D - 1.0)
    if statement in ("hpw", "hpw-schwarz", "hpw-hom") and D != 2:
        raise HypothesisViolation("HPW form needs N = q = 2", {"N": D})
    e = ExponentTuple.solve(D, D, q, 0.5, 1.0, r=2.0)
    (I_r, _, main, _, I_q), error, result, tokens = _ckn_parts(f, e, setting, spec)
    if statement == "critical":
        lhs = I_r
        rhs = D * main ** (1.0 / D) * I_q ** (1.0 / q)
        return _inequality_record(sid, setting, f, params, lhs, rhs, 0.0, result.converged, result, tokens, {})
    lhs = I_r**2
    rhs = 4.0 * main * I_q
    if statement in ("hpw", "hpw-hom"):
        return _inequality_record(sid, setting, f, params, lhs, rhs, 0.0, result.converged, result, tokens, {})
    if statement == "hpw-schwarz":
        grad, _, grad_ok, path = _gradient_integral(f, setting, 2.0, True, spec)
        schwarz = 4.0 * grad * I_q
        diag = {"path": path, "hpw_rhs": rhs, "schwarz_gap": schwarz - rhs}
        looser = schwarz >= rhs - INEQUALITY_TOLERANCE * max(abs(rhs), 1.0)
        return _inequality_record(
            sid, setting, f, params, lhs, schwarz, 0.0, result.converged and grad_ok, result, tokens, diag, looser
        )
    raise CapabilityError(f"Unknown uncertainty statement {statement!r}")


class SweepReport:
    """Ratios R(eps) along a decreasing eps list for a log-power extremal family."""

    evidence = "asymptotic evidence only"

    def __init__(self, statement, params, rows, bound):
        self.statement = statement
        self.params = params
        self.rows = rows
        self.bound = bound

    @property
    def ratios(self):
        return [row[1] for row in self.rows]

    @property
    def monotone(self):
        return all(a > b for a, b in zip(self.ratios, self.ratios[1:]))

    @property
    def lower_bound_ok(self):
        return all(R >= 1.0 - INEQUALITY_TOLERANCE for R in self.ratios)

    @property
    def final_within_bound(self):
        return bool(self.rows) and self.ratios[-1] <= 1.0 + self.bound

    @property
    def passed(self):
        return self.monotone and self.lower_bound_ok and self.final_within_bound

    def as_dict(self):
        return {
            "statement": self.statement,
            "params": dict(self.params),
            "rows": [{"epsilon": e, "ratio": R, "model_prediction": m} for e, R, m in self.rows],
            "monotone": self.monotone,
            "lower_bound_ok": self.lower_bound_ok,
            "final_within_bound": self.final_within_bound,
            "bound": self.bound,
            "evidence": self.evidence,
        }

    def __str__(self):
        return f"sweep {self.statement} {self.params}: {len(self.rows)} rows, passed={self.passed}"


def sharpness_sweep(statement, epsilons, delta=0.1, p=2.0, k=None, spec=DEFAULT_SPEC, bound=None):
    """Ratios (constant)^p ||operator image||^p / ||f/w||^p for psi_delta (log r)^A.

    A = -1/p - eps (or -1/2 - eps at order k). The cutoff band is integrated
    numerically; beyond 1 + 2 delta the profile is the pure log power and
    both integrals are closed-form tails, so the ratio is exact in eps.
    The reduced measure is dr/r in every setting.
    """
    epsilons = [float(eps) for eps in epsilons]
    if any(not 0.0 < eps <= 0.2 for eps in epsilons):
        raise DomainError("sweep epsilons must lie in (0, 0.2]", {"epsilons": epsilons})
    cutoff = CutoffSpec(delta)
    if statement == "higher":
        if k is None or k < 1 or k > MAX_HIGHER_ORDER:
            raise DomainError("higher-order sweep needs 1 <= k <= 4", {"k": k})
        p = 2.0
        constant = 4.0**k / a_coeff(k)
        params = {"k": k, "delta": delta}
        bound = 0.02 if bound is None else bound
    elif statement == "sob":
        if not p > 1.0:
            raise DomainError("sweep needs p > 1", {"p": p})
        constant = p**p
        params = {"p": p, "delta": delta}
        bound = 0.01 if bound is None else bound
    else:
        raise CapabilityError(f"No sweep for statement {statement!r}")
    order = 1 if k is None else k
    rows = []
    for eps in epsilons:
        A = -1.0 / p - eps
        profile = LogPowerProfile(A, cutoff)

        def band(r, profile=profile):
            tower = log_euler_tower(profile, order, r)
            return np.array([abs(tower[order]) ** p, abs(tower[0]) ** p]) / r

        result = integrate(band, RadialDomain(cutoff.start, cutoff.end), spec)
        num_band, den_band = (float(x) for x in result.value)
        tail = log_tail_integral(p * A, cutoff.end)
        if k is None:
            model = (p * abs(A)) ** p
        else:
            model = constant * math.prod((A - j) ** 2 for j in range(k))
        ratio = (constant * num_band + model * tail) / (den_band + tail)
        rows.append((eps, ratio, model))
        DBG(f"sweep eps={eps:g}: R={ratio:.12g} model={model:.12g} converged={result.converged}")
    return SweepReport("sharp-sweep", params, rows, bound)


def pure_log_power_ratio(p, A, r0, spec=DEFAULT_SPEC):
    """p^p int |log r * r g'|^p / int |g|^p over [r0, inf) for g = (log r)^A, next to (p|A|)^p."""
    if r0 <= 1.0:
        raise DomainError("pure log power needs r0 > 1", {"r0": r0})
    if p * A >= -1.0:
        raise DomainError("pure log power quotient diverges for pA >= -1", {"pA": p * A})

    def terms(s):
        # s = log r turns dr/r into ds
        return np.array([abs(A * s**A) ** p, abs(s**A) ** p])

    result = integrate(terms, RadialDomain(math.log(r0), math.inf), replace(spec, split_points=()))
    num, den = (float(x) for x in result.value)
    return p**p * num / den, (p * abs(A)) ** p


class SpotCheck:
    def __init__(self, name, reduced, tensor, tolerance=1e-6):
        self.name = name
        self.reduced = float(reduced)
        self.tensor = float(tensor)
        scale = max(abs(self.reduced), abs(self.tensor))
        self.difference = abs(self.reduced - self.tensor) / scale if scale > 0.0 else 0.0
        self.tolerance = tolerance
        self.passed = self.difference <= tolerance

    def as_dict(self):
        return {
            "name": self.name,
            "reduced": self.reduced,
            "tensor": self.tensor,
            "difference": self.difference,
            "passed": self.passed,
        }

    def __str__(self):
        return f"{self.name}: reduced {self.reduced:.12g} tensor {self.tensor:.12g} diff {self.difference:.2e}"


def stratified_spot_check(f, p=2.0, spec=DEFAULT_SPEC):
    """Main term on H1 twice: reduced radially, and by 3-D tensor quadrature with X, Y from Cartesian partials."""
    setting = StratifiedH1()
    _check_admissible(f, setting)

    def terms(r):
        T0, T1 = f.tower(r, 1)
        return [abs(T1 * r ** (-2.0 / p)) ** p]

    values, _, _, _ = _radial_terms(f, setting, terms, [p], spec, "spot")

    def density(points):
        r = setting.radius(points)
        safe = np.where(r > 0.0, r, 1.0)
        euler = setting.euler_from_gradient(f.gradient(setting, points), points)
        return np.where(r > 0.0, np.abs(np.log(safe) * euler * safe ** (-2.0 / p)) ** p, 0.0)

    tensor = cylinder_tensor_integral(setting, f, density, spec)
    check = SpotCheck("stratified", values[0], tensor.value)
    DBG(str(check))
    return check


def polar_spot_check(f, p=2.0, spec=DEFAULT_SPEC):
    """||f/|x|^(2/p)||_p^p on the plane: Cartesian box quadrature against the reduced radial integral."""
    setting = EuclideanCylinder(2, 2)
    _check_admissible(f, setting)

    def terms(r):
        return [abs(f.radial_value(r) * r ** (-2.0 / p)) ** p]

    values, _, _, _ = _radial_terms(f, setting, terms, [p], spec, "spot")
    R = f.support[1]
    lo = f.support[0]

    def integrand(grid):
        x = grid.axis(0)
        y = grid.axis(1)
        x, y = np.broadcast_arrays(x, y)
        points = np.stack([x, y], axis=-1)
        r = np.hypot(x, y)
        inside = (r > lo) & (r < R)
        safe = np.where(inside, r, 1.0)
        return np.where(inside, np.abs(f.evaluate(setting, points) * safe ** (-2.0 / p)) ** p, 0.0)

    box = integrate(integrand, Box([(-R, R), (-R, R)], (0.0,)), spec)
    check = SpotCheck("polar", values[0], box.value)
    DBG(str(check))
    return check

