#!/usr/bin/env python3

"""Registry of statement identifiers exposed to the command line"""

from dataclasses import dataclass

from .base import ConfigError, HypothesisViolation
from .geometry import parse_setting
from .verifiers import (
    ExponentTuple,
    verify_ckn,
    verify_higher_order_identity,
    verify_identity,
    verify_inequality,
    verify_uncertainty,
)

ALL_KINDS = ("euclidean", "heisenberg1", "homogeneous")
CYLINDERS = ("euclidean", "heisenberg1")

DEFAULT_EXPONENTS = (
    "p=2,q=2,delta=0,b=0.5",
    "p=2,q=2,delta=1,b=0",
    "p=2,q=2,delta=0.5,b=crit",
    "p=2,q=3,delta=0.5,b=1",
    "p=3,q=1.5,delta=0.5,b=-0.5",
)


def parse_exponents(text):
    """Parse ``p=2,q=3,delta=0.5,b=1[,r=..][,c=..]``; ``b=crit`` stands for b = -D/p."""
    fields = {}
    for item in text.split(","):
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or key not in ("p", "q", "r", "delta", "b", "c"):
            raise ConfigError(f"Cannot understand exponent field {item!r}", {"exponents": text})
        value = value.strip()
        if key == "b" and value == "crit":
            fields[key] = value
            continue
        try:
            fields[key] = float(value)
        except ValueError as exc:
            raise ConfigError(f"Exponent {key} is not a number", {"exponents": text}) from exc
    for key in ("p", "q", "delta", "b"):
        if key not in fields:
            raise ConfigError(f"Exponent tuple misses {key}", {"exponents": text})
    return fields


def resolve_exponents(text, D):
    """Exponent tuple for dimension parameter D; raises HypothesisViolation when the balance fails."""
    fields = parse_exponents(text)
    b = -D / fields["p"] if fields["b"] == "crit" else fields["b"]
    return ExponentTuple.solve(D, fields["p"], fields["q"], fields["delta"], b, fields.get("r"), fields.get("c"))


@dataclass(frozen=True)
class Statement:
    sid: str
    description: str
    category: str
    kinds: tuple = ALL_KINDS
    pinned: tuple = ()
    min_dimension: float = 1.0

    def accepts(self, setting):
        if self.pinned:
            return setting.spec_string() in self.pinned
        return setting.kind in self.kinds and setting.D >= self.min_dimension

    def settings(self, configured):
        """Settings this statement runs on: its pinned ones, else the accepted configured ones."""
        if self.pinned:
            return [parse_setting(s) for s in self.pinned]
        return [s for s in configured if self.accepts(s)]

    def grid(self, config, setting):
        """Parameter dictionaries for one setting."""
        if self.category == "sweep":
            return []
        kind = _GRIDS[self.sid]
        return kind(config, setting)

    def run(self, f, setting, params, spec):
        return _RUNNERS[self.sid](f, setting, params, spec)


def _p_grid(config, setting):
    return [{"p": float(p)} for p in config.p]


def _critical_p_grid(config, setting):
    return [{"p": float(setting.D)}]


def _k_grid(config, setting):
    return [{"k": int(k)} for k in config.k]


def _exponent_grid(config, setting):
    return [{"exponents": text} for text in config.exponents]


def _higher_exponent_grid(config, setting):
    grid = []
    for text in config.exponents:
        if parse_exponents(text)["p"] == 2.0:
            grid.extend({"exponents": text, "k": int(k)} for k in config.k)
    return grid


def _empty_grid(config, setting):
    return [{}]


def _nash_grid(config, setting):
    return [{"n": setting.n}]


def _uncert_higher_grid(config, setting):
    return [{"k": setting.D // 2}]


_GRIDS = {
    "sob-3.1": _p_grid,
    "id-3.2": _p_grid,
    "hardy-3.6": _p_grid,
    "badiale-3.8": _critical_p_grid,
    "stability-3.9": _critical_p_grid,
    "strat-id-3.5": _p_grid,
    "hom-id-3.8": _p_grid,
    "higher-4.1": _k_grid,
    "higher-ineq-4.5": _k_grid,
    "ckn-5.1": _exponent_grid,
    "ckn-strat-5.6": _exponent_grid,
    "ckn-hom-5.9": _exponent_grid,
    "ckn-higher": _higher_exponent_grid,
    "uncert-5.4": _empty_grid,
    "uncert-strat-5.12": _empty_grid,
    "uncert-hom-5.17": _empty_grid,
    "hpw-5.5": _empty_grid,
    "hpw-schwarz": _empty_grid,
    "hpw-hom": _empty_grid,
    "nash-5.7": _nash_grid,
    "uncert-higher": _uncert_higher_grid,
}


def _ckn_runner(sid):
    def run(f, setting, params, spec):
        e = resolve_exponents(params["exponents"], setting.D)
        k = params.get("k")
        return verify_ckn(f, e, setting, spec, k=k, statement=sid)

    return run


def _uncertainty_runner(sid, statement):
    def run(f, setting, params, spec):
        return verify_uncertainty(f, statement, setting, spec, params, statement_id=sid)

    return run


def _inequality_runner(sid, statement):
    def run(f, setting, params, spec):
        return verify_inequality(f, statement, setting, params, spec, statement_id=sid)

    return run


def _identity_runner(sid):
    def run(f, setting, params, spec):
        return verify_identity(f, params["p"], setting, spec, statement=sid)

    return run


def _higher_identity_runner(f, setting, params, spec):
    return verify_higher_order_identity(f, params["k"], setting, spec)


_RUNNERS = {
    "sob-3.1": _inequality_runner("sob-3.1", "sob"),
    "id-3.2": _identity_runner("id-3.2"),
    "hardy-3.6": _inequality_runner("hardy-3.6", "hardy"),
    "badiale-3.8": _inequality_runner("badiale-3.8", "badiale"),
    "stability-3.9": _inequality_runner("stability-3.9", "stability"),
    "strat-id-3.5": _identity_runner("strat-id-3.5"),
    "hom-id-3.8": _identity_runner("hom-id-3.8"),
    "higher-4.1": _higher_identity_runner,
    "higher-ineq-4.5": _inequality_runner("higher-ineq-4.5", "higher"),
    "ckn-5.1": _ckn_runner("ckn-5.1"),
    "ckn-strat-5.6": _ckn_runner("ckn-strat-5.6"),
    "ckn-hom-5.9": _ckn_runner("ckn-hom-5.9"),
    "ckn-higher": _ckn_runner("ckn-higher"),
    "uncert-5.4": _uncertainty_runner("uncert-5.4", "critical"),
    "uncert-strat-5.12": _uncertainty_runner("uncert-strat-5.12", "critical"),
    "uncert-hom-5.17": _uncertainty_runner("uncert-hom-5.17", "critical"),
    "hpw-5.5": _uncertainty_runner("hpw-5.5", "hpw"),
    "hpw-schwarz": _uncertainty_runner("hpw-schwarz", "hpw-schwarz"),
    "hpw-hom": _uncertainty_runner("hpw-hom", "hpw-hom"),
    "nash-5.7": _uncertainty_runner("nash-5.7", "nash"),
    "uncert-higher": _uncertainty_runner("uncert-higher", "higher"),
}

STATEMENTS = {
    s.sid: s
    for s in (
        Statement("sob-3.1", "critical Sobolev inequality with sharp constant p", "inequality"),
        Statement("id-3.2", "sharp remainder identity with the C_p functional", "identity"),
        Statement("hardy-3.6", "critical Hardy inequality with |x'| |grad_N f|", "inequality", CYLINDERS),
        Statement("badiale-3.8", "critical Badiale-Tarantello inequality, p = N", "inequality", CYLINDERS, (), 2),
        Statement(
            "stability-3.9", "stability form of the Badiale-Tarantello inequality", "inequality", CYLINDERS, (), 2
        ),
        Statement("strat-id-3.5", "remainder identity on the Heisenberg group", "identity", pinned=("heisenberg1",)),
        Statement(
            "hom-id-3.8", "remainder identity on a homogeneous group", "identity", pinned=("homogeneous:nu=1,2",)
        ),
        Statement("higher-4.1", "higher-order identity with O(k,m), S(m,kappa) and a_k", "identity"),
        Statement("higher-ineq-4.5", "higher-order inequality with constant 2^k/(2k-1)!!", "inequality"),
        Statement("ckn-5.1", "CKN inequality with a logarithmic weight and remainder", "inequality", ("euclidean",)),
        Statement("ckn-strat-5.6", "CKN inequality on the Heisenberg group", "inequality", pinned=("heisenberg1",)),
        Statement("ckn-hom-5.9", "CKN inequality on a homogeneous group", "inequality", pinned=("homogeneous:nu=1,2",)),
        Statement("ckn-higher", "higher-order CKN inequality", "inequality"),
        Statement("uncert-5.4", "critical uncertainty principle, 1/N + 1/q = 1", "inequality", ("euclidean",), (), 2),
        Statement("uncert-strat-5.12", "uncertainty principle on the Heisenberg group", "inequality",
                  pinned=("heisenberg1",)),
        Statement("uncert-hom-5.17", "uncertainty principle on a homogeneous group", "inequality",
                  pinned=("homogeneous:nu=1,2",)),
        Statement("hpw-5.5", "critical Heisenberg-Pauli-Weyl principle on the plane", "inequality",
                  pinned=("euclidean:n=2,N=2",)),
        Statement("hpw-schwarz", "HPW principle with the full gradient", "inequality", pinned=("euclidean:n=2,N=2",)),
        Statement("hpw-hom", "HPW principle for Q = 2 with the radial derivative", "inequality",
                  pinned=("homogeneous:nu=1,1",)),
        Statement("nash-5.7", "Nash-type inequality, q = 1, N = p = 2n/(n-2)", "inequality",
                  pinned=("euclidean:n=4,N=4", "euclidean:n=6,N=3")),
        Statement("uncert-higher", "higher-order uncertainty principle, N = 2k", "inequality",
                  pinned=("euclidean:n=2,N=2", "euclidean:n=4,N=4")),
        Statement("sharp-sweep", "sharpness sweep along the log-power family", "sweep"),
    )
}


def get_statement(sid):
    try:
        return STATEMENTS[sid]
    except KeyError:
        raise ConfigError(f"Unknown statement id {sid!r}", {"known": ", ".join(sorted(STATEMENTS))}) from None


def check_exponents(texts, settings):
    """Reject exponent tuples that fail their constraints before anything is computed."""
    for text in texts:
        for setting in settings:
            D = setting.D
            try:
                resolve_exponents(text, D)
            except HypothesisViolation as exc:
                exc.details["exponents"] = text
                raise
