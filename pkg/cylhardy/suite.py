#!/usr/bin/env python3

"""Suite configuration, execution and report files"""

import csv
import datetime
import hashlib
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, fields, replace

import numpy as np

from . import __version__
from .base import DBG, LOGGER, CylHardyException, ConfigError
from .combinatorics import verify_recurrences
from .corpus import bump_profile, build_corpus, radial_function
from .geometry import StratifiedH1, parse_setting
from .jets import LogPolynomialProfile, ProductProfile, PowerProfile, check_operator_identities
from .quadrature import QuadratureSpec
from .statements import DEFAULT_EXPONENTS, check_exponents, get_statement, parse_exponents
from .verifiers import (
    Verdict,
    VerificationRecord,
    polar_spot_check,
    pure_log_power_ratio,
    sharpness_sweep,
    stratified_spot_check,
)

SCHEMA = 1
THREADS_ENV = "CYLHARDY_THREADS"
OPERATOR_TOLERANCE = 1e-9

IDENTITY_IDS = ("id-3.2", "strat-id-3.5", "hom-id-3.8", "higher-4.1")
INEQUALITY_IDS = (
    "sob-3.1",
    "hardy-3.6",
    "badiale-3.8",
    "stability-3.9",
    "higher-ineq-4.5",
    "uncert-5.4",
    "uncert-strat-5.12",
    "uncert-hom-5.17",
    "hpw-5.5",
    "hpw-schwarz",
    "hpw-hom",
    "nash-5.7",
    "uncert-higher",
)
CKN_IDS = ("ckn-5.1", "ckn-strat-5.6", "ckn-hom-5.9", "ckn-higher")
CYLINDER_SETTINGS = (
    "euclidean:n=1,N=1",
    "euclidean:n=2,N=2",
    "euclidean:n=3,N=3",
    "euclidean:n=3,N=2",
    "heisenberg1",
    "homogeneous:nu=1,2",
)

# scalar keys and their parsers; list keys split on commas; "exponents" repeats
_SCALARS = {
    "suite": str,
    "seed": int,
    "count": int,
    "complex": "bool",
    "nonseparable": "bool",
    "auxiliary": "bool",
    "rel_tol": float,
    "abs_tol": float,
    "max_subdivisions": int,
    "delta": float,
    "threads": int,
}
_LISTS = {
    "statements": str,
    "settings": str,
    "p": float,
    "k": int,
    "sweep_p": float,
    "sweep_k": int,
    "epsilons": float,
    "higher_epsilons": float,
}
_RENAMED = {"complex": "complex_phase"}
# fields that never change a result
_UNHASHED = ("threads", "out", "formats")


def _parse_bool(text):
    value = text.strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


@dataclass(frozen=True)
class SuiteConfig:
    suite: str = "default"
    statements: tuple = IDENTITY_IDS
    settings: tuple = CYLINDER_SETTINGS
    p: tuple = (1.5, 2.0, 3.0)
    k: tuple = (1, 2, 3)
    exponents: tuple = DEFAULT_EXPONENTS
    seed: int = 7
    count: int = 20
    complex_phase: bool = True
    nonseparable: bool = False
    auxiliary: bool = True
    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    max_subdivisions: int = 500
    delta: float = 0.1
    sweep_p: tuple = (2.0,)
    sweep_k: tuple = (2,)
    epsilons: tuple = (1e-1, 1e-2, 1e-3, 1e-4)
    higher_epsilons: tuple = (1e-1, 1e-2, 1e-3, 1e-4, 1e-5)
    threads: int = None
    out: str = None
    formats: tuple = ("json", "csv")

    @property
    def quadrature(self):
        return QuadratureSpec(rel_tol=self.rel_tol, abs_tol=self.abs_tol, max_subdivisions=self.max_subdivisions)

    def updated(self, values):
        """Copy with ``values`` (already typed) applied; None values are ignored."""
        known = {f.name for f in fields(self)}
        changes = {}
        for key, value in values.items():
            key = _RENAMED.get(key, key)
            if key not in known:
                raise ConfigError(f"Unknown configuration key {key!r}")
            if value is not None:
                changes[key] = tuple(value) if isinstance(value, list) else value
        return replace(self, **changes)

    def hashable(self):
        data = asdict(self)
        for key in _UNHASHED:
            data.pop(key)
        return data

    def config_hash(self):
        text = json.dumps(self.hashable(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode("utf-8")).hexdigest()


SUITES = {
    "default": SuiteConfig(),
    "identities": SuiteConfig(suite="identities", nonseparable=True, auxiliary=False),
    "inequalities": SuiteConfig(
        suite="inequalities",
        statements=INEQUALITY_IDS,
        settings=("euclidean:n=2,N=2", "euclidean:n=3,N=2", "euclidean:n=3,N=3", "heisenberg1", "homogeneous:nu=1,2"),
        k=(1, 2),
        count=6,
        nonseparable=True,
        auxiliary=False,
    ),
    "ckn": SuiteConfig(
        suite="ckn",
        statements=CKN_IDS,
        settings=("euclidean:n=2,N=2", "euclidean:n=3,N=2"),
        k=(1, 2),
        count=6,
        auxiliary=False,
    ),
    "sweeps": SuiteConfig(suite="sweeps", statements=("sharp-sweep",), auxiliary=False),
    "operators": SuiteConfig(suite="operators", statements=(), auxiliary=True),
    "quick": SuiteConfig(
        suite="quick",
        statements=("id-3.2", "sob-3.1", "higher-4.1"),
        settings=("euclidean:n=2,N=2",),
        p=(2.0,),
        k=(1,),
        count=3,
        auxiliary=False,
    ),
}


def suite_defaults(name):
    try:
        return SUITES[name]
    except KeyError:
        raise ConfigError(f"Unknown suite {name!r}", {"known": ", ".join(sorted(SUITES))}) from None


def _convert(key, text):
    if key == "exponents":
        parse_exponents(text)
        return text.strip()
    if key in _SCALARS:
        kind = _SCALARS[key]
        return _parse_bool(text) if kind == "bool" else kind(text.strip())
    if key in _LISTS:
        kind = _LISTS[key]
        if key == "settings":
            # setting strings contain commas themselves; they are separated by ';'
            return [item.strip() for item in text.split(";") if item.strip()]
        return [kind(item.strip()) for item in text.split(",") if item.strip()]
    raise ConfigError(f"Unknown configuration key {key!r}")


def parse_config_text(text, source="<config>"):
    """Parse ``key = value`` lines into typed values; repeated ``exponents`` lines accumulate."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep or not key:
            raise ConfigError("Expected 'key = value'", {"file": source, "line": lineno})
        try:
            converted = _convert(key, value)
        except ValueError as exc:
            raise ConfigError(f"Bad value for {key}", {"file": source, "line": lineno, "reason": exc}) from exc
        if key == "exponents":
            values.setdefault("exponents", []).append(converted)
        else:
            values[key] = converted
    return values


def load_config(path=None, suite=None, overrides=None):
    """Suite defaults < config file < command line overrides."""
    file_values = {}
    if path is not None:
        try:
            with open(path, encoding="utf-8") as handle:
                file_values = parse_config_text(handle.read(), str(path))
        except OSError as exc:
            raise ConfigError(f"Cannot read config {path}", {"reason": exc.strerror}) from exc
    name = suite or file_values.get("suite") or "default"
    config = suite_defaults(name).updated(file_values).updated({"suite": name})
    return config.updated(overrides or {})


def thread_count(config):
    wanted = config.threads or os.cpu_count() or 1
    cap = os.getenv(THREADS_ENV)
    if cap:
        try:
            wanted = min(wanted, max(1, int(cap)))
        except ValueError as exc:
            raise ConfigError(f"{THREADS_ENV} must be an integer", {"value": cap}) from exc
    return max(1, wanted)


class Report:
    def __init__(self, config, records, sweeps=(), auxiliary=(), notes=()):
        self.version = __version__
        self.config = config
        self.config_hash = config.config_hash()
        self.records = sorted(records, key=VerificationRecord.sort_key)
        self.sweeps = list(sweeps)
        self.auxiliary = list(auxiliary)
        self.notes = list(notes)
        self.timestamp = datetime.datetime.now(datetime.timezone.utc).isoformat()

    @property
    def failures(self):
        bad = [r for r in self.records if not r.passed]
        bad += [s for s in self.sweeps if not s.passed]
        bad += [a for a in self.auxiliary if not a["passed"]]
        return bad

    @property
    def passed(self):
        return not self.failures

    def sweep_tables(self):
        """File names of the per-sweep CSV tables, in sweep order."""
        names = []
        for sweep in self.sweeps:
            tag = "_".join(f"{k}{v}" for k, v in sorted(sweep.params.items()) if v is not None)
            names.append(f"sweep_{tag}.csv")
        return names

    def summary(self):
        counts = {v.value: 0 for v in Verdict}
        worst = {}
        for record in self.records:
            counts[record.verdict.value] += 1
            # headline is the worst residual, never an average
            worst[record.statement] = max(worst.get(record.statement, 0.0), record.residual)
        return {
            "records": len(self.records),
            "verdicts": counts,
            "worst_residual": worst,
            "sweeps": len(self.sweeps),
            "sweeps_passed": sum(s.passed for s in self.sweeps),
            "auxiliary_failed": sum(not a["passed"] for a in self.auxiliary),
            "passed": self.passed,
        }

    def as_dict(self):
        return {
            "schema": SCHEMA,
            "tool": "cylhardy",
            "version": self.version,
            "config_hash": self.config_hash,
            "config": self.config.hashable(),
            "summary": self.summary(),
            "records": [r.as_dict() for r in self.records],
            "sweeps": [dict(s.as_dict(), table=name) for s, name in zip(self.sweeps, self.sweep_tables())],
            "auxiliary": self.auxiliary,
            "notes": self.notes,
            "generated": {"timestamp": self.timestamp},
        }

    def to_json(self, with_timestamp=True):
        data = self.as_dict()
        if not with_timestamp:
            data.pop("generated")
        return json.dumps(data, sort_keys=True, indent=2, default=_json_default)


def _json_default(value):
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f"Cannot serialise {type(value).__name__}")


def _failed_record(statement, setting, f, params, exc):
    return VerificationRecord(
        statement, str(setting), f.label, params, 0.0, 0.0, 0.0, 0.0, 0.0, Verdict.FAIL, {"error": str(exc)}
    )


def _run_job(job):
    statement, setting, f, params, spec = job
    try:
        record = statement.run(f, setting, params, spec)
    except CylHardyException as exc:
        record = _failed_record(statement.sid, setting, f, params, exc)
    if not record.passed:
        LOGGER.warning(f"FAIL {record}")
    return record


def _auxiliary_checks(config, settings, spec):
    checks = []
    report = verify_recurrences(12)
    checks.append({"name": "recurrences", "passed": report.passed, "detail": str(report)})
    radii = np.linspace(0.3, 4.0, 50)
    profiles = [
        bump_profile(2.0, 1.5),
        LogPolynomialProfile([0.5, -1.0, 0.25, 0.1]),
        ProductProfile([PowerProfile(0.7), PowerProfile(1.5j)]),
    ]
    for profile in profiles:
        inside = radii[(radii > profile.support[0]) & (radii < profile.support[1])]
        ops = check_operator_identities(profile, 6, inside)
        checks.append(
            {"name": f"operators {profile.label}", "passed": ops.worst <= OPERATOR_TOLERANCE, "detail": str(ops)}
        )
    polar = polar_spot_check(radial_function(bump_profile(2.0, 0.5)), 2.0, spec)
    checks.append({"name": "polar spot check", "passed": polar.passed, "detail": polar.as_dict()})
    if any(isinstance(s, StratifiedH1) for s in settings):
        member = build_corpus(config.seed, 2, StratifiedH1(), config.complex_phase, False)[1]
        spot = stratified_spot_check(member, 2.0, spec)
        checks.append({"name": "stratified spot check", "passed": spot.passed, "detail": spot.as_dict()})
    return checks


def _sweeps(config, spec):
    sweeps = [sharpness_sweep("sob", config.epsilons, config.delta, p=p, spec=spec) for p in config.sweep_p]
    sweeps += [sharpness_sweep("higher", config.higher_epsilons, config.delta, k=k, spec=spec) for k in config.sweep_k]
    ratio, exact = pure_log_power_ratio(2.0, -1.0, 2.0, spec)
    check = {
        "name": "pure log-power quotient",
        "passed": abs(ratio - exact) <= 1e-9 * exact,
        "detail": {"ratio": ratio, "closed_form": exact},
    }
    return sweeps, [check]


def run_suite(config):
    """Run every statement of the suite over its settings, parameters and corpus.

    Unknown ids, settings and invalid exponent tuples are rejected before any
    computation. Records come back in canonical order whatever the thread
    scheduling was.
    """
    statements = [get_statement(sid) for sid in config.statements]
    settings = [parse_setting(text) for text in config.settings]
    exponent_settings = []
    for statement in statements:
        if statement.sid.startswith("ckn"):
            exponent_settings.extend(statement.settings(settings))
    check_exponents(config.exponents, exponent_settings)
    spec = config.quadrature

    notes = []
    corpora = {}
    jobs = []
    for statement in statements:
        if statement.category == "sweep":
            continue
        for setting in statement.settings(settings):
            key = setting.spec_string()
            if key not in corpora:
                corpora[key] = build_corpus(
                    config.seed, config.count, setting, config.complex_phase, config.nonseparable
                )
            for params in statement.grid(config, setting):
                jobs.extend((statement, setting, f, params, spec) for f in corpora[key])
    if any(s.sid.startswith("uncert") for s in statements):
        notes.append("uncertainty principles are checked for N >= 2 only (q = N/(N-1) must be finite)")

    threads = thread_count(config)
    DBG(f"suite {config.suite}: {len(jobs)} records on {threads} threads")
    if threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(_run_job, jobs))
    else:
        records = [_run_job(job) for job in jobs]

    sweeps, auxiliary = [], []
    if any(s.category == "sweep" for s in statements):
        sweeps, auxiliary = _sweeps(config, spec)
        notes.append("sweeps are asymptotic evidence only; no extremiser is claimed")
    if config.auxiliary:
        auxiliary += _auxiliary_checks(config, settings, spec)
    return Report(config, records, sweeps, auxiliary, notes)


def _open(path):
    try:
        return open(path, "w", encoding="utf-8", newline="")
    except OSError as exc:
        raise ConfigError(f"Cannot write {path}", {"reason": exc.strerror}) from exc


RECORD_COLUMNS = ("statement", "setting", "function", "params", "lhs", "rhs", "remainder", "residual", "tolerance",
                  "verdict")


def write_sweep_csv(sweep, path):
    with _open(path) as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(("epsilon", "ratio", "model_prediction"))
        for eps, ratio, model in sweep.rows:
            writer.writerow((repr(eps), repr(ratio), repr(model)))
    return path


def emit_outputs(report, out_dir, formats=("json", "csv")):
    """Write report.json, records.csv and one CSV per sweep; returns the paths written."""
    try:
        os.makedirs(out_dir, exist_ok=True)
    except OSError as exc:
        raise ConfigError(f"Cannot create output directory {out_dir}", {"reason": exc.strerror}) from exc
    written = []
    if "json" in formats:
        path = os.path.join(out_dir, "report.json")
        with _open(path) as handle:
            handle.write(report.to_json())
            handle.write("\n")
        written.append(path)
    if "csv" in formats:
        path = os.path.join(out_dir, "records.csv")
        with _open(path) as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(RECORD_COLUMNS)
            for record in report.records:
                row = record.as_dict()
                row["params"] = ";".join(f"{k}={v}" for k, v in sorted(record.params.items()))
                writer.writerow([row[c] if c in ("statement", "setting", "function", "params", "verdict")
                                 else repr(row[c]) for c in RECORD_COLUMNS])
        written.append(path)
        for sweep, name in zip(report.sweeps, report.sweep_tables()):
            written.append(write_sweep_csv(sweep, os.path.join(out_dir, name)))
    DBG(f"wrote {', '.join(written)}")
    return written


def write_combinatorics_table(table, path, fmt="csv"):
    """CSV rows k,m,O_km,a_k or the full table as JSON with exact integers."""
    with _open(path) as handle:
        if fmt == "json":
            json.dump(table.as_dict(), handle, indent=2)
            handle.write("\n")
        else:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(("k", "m", "O_km", "a_k"))
            for row in table.rows():
                writer.writerow(row)
    return path

