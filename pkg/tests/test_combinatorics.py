#!/usr/bin/env python3

import pytest
from hypothesis import given, seed
from hypothesis import strategies as st

from cylhardy.base import DomainError
from cylhardy.combinatorics import (
    CombinatoricsTable,
    a_coeff,
    bell_number,
    coeff_O,
    odd_double_factorial,
    oblong,
    stirling2,
    stirling2_table,
    verify_recurrences,
)

K_MAX = 12
M_MAX = 20


def test_small_values():
    assert [odd_double_factorial(k) for k in range(1, 6)] == [1, 3, 15, 105, 945]
    assert [a_coeff(k) for k in range(1, 4)] == [1, 9, 225]
    assert oblong(3) == 12
    assert coeff_O(3, 2) == 132


def test_O_boundary_columns():
    for k in range(1, K_MAX + 1):
        assert coeff_O(k, 1) == a_coeff(k)
        assert coeff_O(k, k) == 4 ** (k - 1)


def test_recurrences_hold_exactly():
    report = verify_recurrences(K_MAX + 1)
    assert report.passed, [str(c) for c in report.failures]
    assert len(report.checks) > 0


@seed(1)
@given(k=st.integers(min_value=2, max_value=K_MAX), data=st.data())
def test_O_recurrence_sampled(k, data):
    m = data.draw(st.integers(min_value=2, max_value=k))
    assert 4 * k * (k + 1) * coeff_O(k, m) + 4 * coeff_O(k, m - 1) == coeff_O(k + 1, m)


def test_a_recurrence():
    for k in range(1, K_MAX + 1):
        assert a_coeff(k + 1) == (4 * k * (k + 1) + 1) * a_coeff(k)


def test_stirling_sum_matches_table():
    table = stirling2_table(M_MAX)
    for m in range(M_MAX + 1):
        for kappa in range(m + 1):
            assert stirling2(m, kappa) == table[m][kappa]
    assert stirling2(0, 0) == 1
    assert stirling2(3, 5) == 0


def test_stirling_rows_count_partitions():
    table = stirling2_table(8)
    for m in range(9):
        assert sum(table[m]) == bell_number(m)
    assert bell_number(5) == 52


def test_table_rows():
    table = CombinatoricsTable(4)
    rows = list(table.rows())
    assert (3, 2, 132, 225) in rows
    assert len(rows) == 10
    assert table.S_mk(4, 2) == 7
    assert table.S_mk(2, 4) == 0
    data = table.as_dict()
    assert data["a"] == [1, 9, 225, 11025]
    assert data["oblong"] == [2, 6, 12, 20]


@pytest.mark.parametrize(
    "call",
    [
        lambda: odd_double_factorial(0),
        lambda: coeff_O(2, 3),
        lambda: coeff_O(0, 1),
        lambda: stirling2(-1, 0),
        lambda: verify_recurrences(1),
        lambda: CombinatoricsTable(3).O_km(4, 1),
    ],
)
def test_domain_errors(call):
    with pytest.raises(DomainError):
        call()
