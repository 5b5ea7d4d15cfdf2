#!/usr/bin/env python3

import csv
import json
import os

import pytest

from cylhardy import suite as suite_module
from cylhardy.base import ConfigError, HypothesisViolation
from cylhardy.combinatorics import CombinatoricsTable
from cylhardy.suite import (
    SUITES,
    Report,
    SuiteConfig,
    emit_outputs,
    load_config,
    parse_config_text,
    run_suite,
    thread_count,
    write_combinatorics_table,
)
from cylhardy.verifiers import SweepReport, Verdict

CONFIG_TEXT = """
# small run
suite = quick
seed = 3
count = 2          # per setting
complex = no
settings = euclidean:n=2,N=2; heisenberg1
p = 1.5, 2
exponents = p=2,q=2,delta=0,b=0.5
exponents = p=2,q=3,delta=0.5,b=1
"""


def _tiny(**changes):
    base = SuiteConfig(
        suite="tiny",
        statements=("id-3.2", "higher-4.1"),
        settings=("euclidean:n=2,N=2",),
        p=(2.0,),
        k=(1,),
        count=2,
        auxiliary=False,
        threads=1,
    )
    return base.updated(changes)


def test_parse_config_text():
    values = parse_config_text(CONFIG_TEXT)
    assert values["suite"] == "quick"
    assert values["seed"] == 3
    assert values["complex"] is False
    assert values["settings"] == ["euclidean:n=2,N=2", "heisenberg1"]
    assert values["p"] == [1.5, 2.0]
    assert values["exponents"] == ["p=2,q=2,delta=0,b=0.5", "p=2,q=3,delta=0.5,b=1"]


@pytest.mark.parametrize("text", ["seed", "color = red", "count = many", "complex = maybe", "= 3"])
def test_bad_config_lines(text):
    with pytest.raises(ConfigError):
        parse_config_text(text)


def test_precedence(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text(CONFIG_TEXT)
    config = load_config(str(path), overrides={"count": 5, "seed": None})
    assert config.suite == "quick"
    assert config.statements == SUITES["quick"].statements
    assert config.count == 5
    assert config.seed == 3
    assert config.complex_phase is False
    assert config.settings == ("euclidean:n=2,N=2", "heisenberg1")
    chosen = load_config(str(path), suite="ckn")
    assert chosen.statements == SUITES["ckn"].statements
    assert chosen.count == 2


def test_missing_config_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(str(tmp_path / "absent.cfg"))
    with pytest.raises(ConfigError):
        load_config(suite="nonsense")


def test_config_hash():
    config = _tiny()
    assert config.config_hash() == _tiny(out="elsewhere", threads=4).config_hash()
    assert config.config_hash() != _tiny(seed=99).config_hash()
    assert len(config.config_hash()) == 64


def test_thread_cap(monkeypatch):
    monkeypatch.setenv("CYLHARDY_THREADS", "2")
    assert thread_count(_tiny(threads=8)) == 2
    monkeypatch.setenv("CYLHARDY_THREADS", "lots")
    with pytest.raises(ConfigError):
        thread_count(_tiny())


def test_empty_suite():
    report = run_suite(_tiny(statements=()))
    assert report.records == []
    assert report.passed
    assert report.summary()["records"] == 0


def test_record_count_and_verdicts():
    report = run_suite(_tiny())
    # statements x parameters x corpus size
    assert len(report.records) == 2 * 1 * 2
    assert report.passed
    summary = report.summary()
    assert summary["verdicts"]["identity-pass"] == 4
    assert set(summary["worst_residual"]) == {"id-3.2", "higher-4.1"}
    keys = [r.sort_key() for r in report.records]
    assert keys == sorted(keys)


def test_runs_are_reproducible():
    first = run_suite(_tiny()).to_json(with_timestamp=False)
    second = run_suite(_tiny(threads=2)).to_json(with_timestamp=False)
    assert first == second
    assert '"schema": 1' in first


def test_validation_happens_first(monkeypatch):
    def explode(*args, **kwargs):
        raise AssertionError("corpus built before validation")

    monkeypatch.setattr(suite_module, "build_corpus", explode)
    with pytest.raises(HypothesisViolation):
        run_suite(_tiny(statements=("ckn-5.1",), exponents=("p=2,q=2,delta=0.5,b=0,r=3",)))
    with pytest.raises(ConfigError):
        run_suite(_tiny(statements=("id-9.9",)))
    with pytest.raises(ConfigError):
        run_suite(_tiny(settings=("torus:n=2",)))


def _sweep_report():
    sweep = SweepReport("sharp-sweep", {"p": 2.0, "delta": 0.1}, [(0.1, 1.44, 1.44), (0.01, 1.0404, 1.0404)], 0.01)
    return Report(_tiny(statements=()), [], [sweep])


def test_emit_outputs(tmp_path):
    report = run_suite(_tiny())
    written = emit_outputs(report, str(tmp_path / "out"), ("json", "csv"))
    assert sorted(os.path.basename(p) for p in written) == ["records.csv", "report.json"]
    with open(tmp_path / "out" / "report.json") as handle:
        data = json.load(handle)
    assert data["schema"] == 1
    assert data["config_hash"] == report.config_hash
    assert "timestamp" in data["generated"]
    for parsed, record in zip(data["records"], report.records):
        assert parsed["lhs"] == record.lhs
        assert parsed["rhs"] == record.rhs
        assert parsed["residual"] == record.residual
    with open(tmp_path / "out" / "records.csv", newline="") as handle:
        rows = list(csv.reader(handle))
    assert rows[0][:4] == ["statement", "setting", "function", "params"]
    assert len(rows) == 1 + len(report.records)
    assert float(rows[1][4]) == report.records[0].lhs


def test_sweep_tables(tmp_path):
    report = _sweep_report()
    assert report.sweep_tables() == ["sweep_delta0.1_p2.0.csv"]
    emit_outputs(report, str(tmp_path), ("csv",))
    lines = (tmp_path / "sweep_delta0.1_p2.0.csv").read_text().splitlines()
    assert lines[0] == "epsilon,ratio,model_prediction"
    assert lines[1] == "0.1,1.44,1.44"
    assert report.as_dict()["sweeps"][0]["table"] == "sweep_delta0.1_p2.0.csv"


def test_unwritable_output(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(ConfigError):
        emit_outputs(_sweep_report(), str(blocker / "sub"), ("json",))


def test_combinatorics_csv(tmp_path):
    path = tmp_path / "table.csv"
    write_combinatorics_table(CombinatoricsTable(3), str(path))
    lines = path.read_text().splitlines()
    assert lines[0] == "k,m,O_km,a_k"
    assert "3,2,132,225" in lines
    write_combinatorics_table(CombinatoricsTable(3), str(tmp_path / "table.json"), "json")
    assert json.loads((tmp_path / "table.json").read_text())["O"][2] == [225, 132, 16]


def test_failures_are_reported():
    report = run_suite(_tiny())
    report.records[0].verdict = Verdict.FAIL
    assert not report.passed
    assert len(report.failures) == 1


@pytest.mark.slow
def test_default_suite_passes():
    report = run_suite(SUITES["default"])
    assert report.passed, [str(r) for r in report.failures]
