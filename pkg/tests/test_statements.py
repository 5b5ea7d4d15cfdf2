#!/usr/bin/env python3

import pytest

from cylhardy.base import ConfigError, HypothesisViolation
from cylhardy.geometry import EuclideanCylinder, StratifiedH1, parse_setting
from cylhardy.statements import (
    DEFAULT_EXPONENTS,
    STATEMENTS,
    check_exponents,
    get_statement,
    parse_exponents,
    resolve_exponents,
)
from cylhardy.suite import SuiteConfig, run_suite

IDS = [
    "sob-3.1", "id-3.2", "hardy-3.6", "badiale-3.8", "stability-3.9", "strat-id-3.5", "hom-id-3.8",
    "higher-4.1", "higher-ineq-4.5", "ckn-5.1", "ckn-strat-5.6", "ckn-hom-5.9", "ckn-higher", "uncert-5.4",
    "uncert-strat-5.12", "uncert-hom-5.17", "hpw-5.5", "hpw-schwarz", "hpw-hom", "nash-5.7", "uncert-higher",
    "sharp-sweep",
]
GROUP_SETTINGS = ("heisenberg1", "homogeneous:nu=1,2")
GROUP_IDS = [
    "sob-3.1", "hardy-3.6", "badiale-3.8", "stability-3.9", "strat-id-3.5", "hom-id-3.8", "higher-4.1",
    "higher-ineq-4.5", "ckn-strat-5.6", "ckn-hom-5.9", "ckn-higher", "uncert-strat-5.12", "uncert-hom-5.17", "hpw-hom",
]


def test_registry_is_complete():
    assert sorted(STATEMENTS) == sorted(IDS)


def test_unknown_statement():
    with pytest.raises(ConfigError) as info:
        get_statement("id-9.9")
    assert "id-9.9" in str(info.value)


def test_parse_exponents():
    fields = parse_exponents("p=2, q=3, delta=0.5, b=crit")
    assert fields == {"p": 2.0, "q": 3.0, "delta": 0.5, "b": "crit"}
    e = resolve_exponents("p=2,q=2,delta=0.5,b=crit", 2.0)
    assert e.b == -1.0
    assert e.holder_equality


@pytest.mark.parametrize("text", ["p=2,q=2,delta=0.5", "p=2,q=two,delta=0.5,b=0", "p=2,x=1,delta=0,b=0", "p2"])
def test_bad_exponent_strings(text):
    with pytest.raises(ConfigError):
        parse_exponents(text)


def test_check_exponents():
    settings = [EuclideanCylinder(2, 2), StratifiedH1()]
    check_exponents(DEFAULT_EXPONENTS, settings)
    with pytest.raises(HypothesisViolation) as info:
        check_exponents(["p=2,q=2,delta=0.5,b=0,r=3"], settings)
    assert info.value.details["exponents"] == "p=2,q=2,delta=0.5,b=0,r=3"


def test_pinned_settings():
    assert get_statement("strat-id-3.5").settings([]) == [StratifiedH1()]
    nash = get_statement("nash-5.7").settings([EuclideanCylinder(2, 2)])
    assert [s.spec_string() for s in nash] == ["euclidean:n=4,N=4", "euclidean:n=6,N=3"]


def test_accepts():
    line = parse_setting("euclidean:n=1,N=1")
    plane = parse_setting("euclidean:n=2,N=2")
    group = parse_setting("homogeneous:nu=1,2")
    assert not get_statement("badiale-3.8").accepts(line)
    assert get_statement("badiale-3.8").accepts(plane)
    assert not get_statement("hardy-3.6").accepts(group)
    assert get_statement("id-3.2").accepts(group)
    assert get_statement("ckn-5.1").settings([line, plane, group]) == [line, plane]


def test_grids():
    config = SuiteConfig(p=(1.5, 3.0), k=(1, 2))
    plane = EuclideanCylinder(2, 2)
    assert get_statement("id-3.2").grid(config, plane) == [{"p": 1.5}, {"p": 3.0}]
    assert get_statement("badiale-3.8").grid(config, plane) == [{"p": 2.0}]
    assert get_statement("higher-4.1").grid(config, plane) == [{"k": 1}, {"k": 2}]
    assert get_statement("uncert-higher").grid(config, EuclideanCylinder(4, 4)) == [{"k": 2}]
    assert get_statement("sharp-sweep").grid(config, plane) == []
    higher = get_statement("ckn-higher").grid(config, plane)
    assert all(parse_exponents(g["exponents"])["p"] == 2.0 for g in higher)
    assert len(higher) == 2 * 4


def test_run_dispatch(plane, spec, small_corpus):
    record = get_statement("sob-3.1").run(small_corpus[0], plane, {"p": 2.0}, spec)
    assert record.statement == "sob-3.1"
    assert record.passed


@pytest.mark.parametrize("sid", GROUP_IDS)
def test_group_statements_hold_on_a_small_corpus(sid):
    config = SuiteConfig(statements=(sid,), settings=GROUP_SETTINGS, count=2, threads=1, auxiliary=False)
    report = run_suite(config)
    assert report.records
    for record in report.records:
        assert record.setting.startswith(("heisenberg", "homogeneous")), record.setting
        assert record.passed, record.as_dict()
