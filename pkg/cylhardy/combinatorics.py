#!/usr/bin/env python3

"""Exact coefficient systems of the higher-order log-Euler identity

All values are Python integers, so nothing here ever rounds.
"""

import itertools
import math
from functools import lru_cache

from .base import DBG, DomainError


def _check_positive(name, value):
    if not isinstance(value, int) or isinstance(value, bool) or value < 1:
        raise DomainError(f"{name} must be a positive integer", {name: value})


def odd_double_factorial(k):
    """Return (2k-1)!! = 1*3*5*...*(2k-1)."""
    _check_positive("k", k)
    return math.prod(range(1, 2 * k, 2))


def a_coeff(k):
    """Return a_k, the square of the odd double factorial."""
    return odd_double_factorial(k) ** 2


def oblong(i):
    """Return the oblong number o_i = i(i+1)."""
    _check_positive("i", i)
    return i * (i + 1)


def stirling2(m, kappa):
    """Stirling number of the second kind from the explicit alternating sum.

    Args:
        m: size of the set, m >= 0
        kappa: number of blocks, kappa >= 0

    Returns:
        S(m, kappa) as an exact integer; 0 when kappa > m.
    """
    if m < 0 or kappa < 0:
        raise DomainError("stirling2 needs nonnegative arguments", {"m": m, "kappa": kappa})
    if kappa > m:
        return 0
    # 0**0 == 1 in Python, which gives S(0,0) = 1
    total = sum((-1) ** i * math.comb(kappa, i) * (kappa - i) ** m for i in range(kappa + 1))
    value, rest = divmod(total, math.factorial(kappa))
    if rest:
        raise DomainError("alternating sum not divisible by kappa!", {"m": m, "kappa": kappa})
    return value


def stirling2_table(m_max):
    """Triangle S[m][kappa] for 0 <= kappa <= m <= m_max built by the recurrence."""
    if m_max < 0:
        raise DomainError("m_max must be nonnegative", {"m_max": m_max})
    table = [[1]]
    for m in range(m_max):
        prev = table[m]
        row = [0] * (m + 2)
        for kappa in range(1, m + 2):
            left = prev[kappa] if kappa <= m else 0
            row[kappa] = kappa * left + prev[kappa - 1]
        table.append(row)
    return table


def bell_number(m):
    """Count set partitions of {1..m} by enumerating restricted growth strings."""
    if m < 0:
        raise DomainError("m must be nonnegative", {"m": m})

    # a restricted growth string never jumps more than one above its running max
    def grow(length, top):
        if length == m:
            return 1
        return sum(grow(length + 1, max(top, value)) for value in range(top + 2))

    return 1 if m == 0 else grow(1, 0)


@lru_cache(maxsize=None)
def coeff_O(k, m):
    """Coefficient O(k, m) of the higher-order identity.

    For 1 < m < k the double sum over increasing index tuples is enumerated
    explicitly; O(k, 1) = a_k and O(k, k) = 4^(k-1).
    """
    _check_positive("k", k)
    _check_positive("m", m)
    if m > k:
        raise DomainError("coeff_O needs m <= k", {"k": k, "m": m})
    if m == 1:
        return a_coeff(k)
    if m == k:
        return 4 ** (k - 1)
    total = 0
    for t in range(1, k - m + 1):
        r = k - m - t + 1
        inner = 0
        for idx in itertools.combinations(range(t + 1, k), r):
            inner += math.prod(oblong(i) for i in idx)
        total += 4 ** (k - t) * a_coeff(t) * inner
    return total + 4 ** (m - 1) * a_coeff(k - m + 1)


class RecurrenceCheck:
    """One recurrence instance: name, index tuple, both sides and the outcome."""

    def __init__(self, name, index, lhs, rhs):
        self.name = name
        self.index = index
        self.lhs = lhs
        self.rhs = rhs
        self.passed = lhs == rhs

    def __str__(self):
        verdict = "pass" if self.passed else "FAIL"
        return f"{self.name}{self.index}: {self.lhs} vs {self.rhs} {verdict}"


class RecurrenceReport:
    def __init__(self, k_max, checks):
        self.k_max = k_max
        self.checks = checks

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    @property
    def failures(self):
        return [c for c in self.checks if not c.passed]

    def __str__(self):
        return f"recurrences up to k={self.k_max}: {len(self.checks)} checks, {len(self.failures)} failures"


def verify_recurrences(k_max):
    """Check the O(k,m), Stirling and a_k recurrences exactly up to k_max."""
    if not isinstance(k_max, int) or k_max < 2:
        raise DomainError("verify_recurrences needs k_max >= 2", {"k_max": k_max})
    checks = []
    for k in range(2, k_max):
        for m in range(2, k + 1):
            lhs = 4 * k * (k + 1) * coeff_O(k, m) + 4 * coeff_O(k, m - 1)
            checks.append(RecurrenceCheck("O", (k, m), lhs, coeff_O(k + 1, m)))
    for m in range(k_max):
        for kappa in range(1, m + 2):
            lhs = stirling2(m + 1, kappa)
            rhs = kappa * stirling2(m, kappa) + stirling2(m, kappa - 1)
            checks.append(RecurrenceCheck("S", (m, kappa), lhs, rhs))
    for k in range(1, k_max):
        checks.append(RecurrenceCheck("a", (k,), (4 * k * (k + 1) + 1) * a_coeff(k), a_coeff(k + 1)))
    report = RecurrenceReport(k_max, checks)
    DBG(str(report))
    return report


class CombinatoricsTable:
    """Immutable table of a_k, O(k,m), S(m,kappa) and o_i up to k_max."""

    def __init__(self, k_max, m_max=None):
        _check_positive("k_max", k_max)
        self.k_max = k_max
        self.m_max = k_max if m_max is None else m_max
        self.a = tuple(a_coeff(k) for k in range(1, k_max + 1))
        self.O = tuple(tuple(coeff_O(k, m) for m in range(1, k + 1)) for k in range(1, k_max + 1))
        self.S = tuple(tuple(row) for row in stirling2_table(self.m_max))
        self.oblong = tuple(oblong(i) for i in range(1, k_max + 1))

    def a_k(self, k):
        return self.a[k - 1]

    def O_km(self, k, m):
        if not 1 <= m <= k <= self.k_max:
            raise DomainError("index outside table", {"k": k, "m": m, "k_max": self.k_max})
        return self.O[k - 1][m - 1]

    def S_mk(self, m, kappa):
        if kappa > m:
            return 0
        return self.S[m][kappa]

    def rows(self):
        """Yield (k, m, O_km, a_k) in row-major order."""
        for k in range(1, self.k_max + 1):
            for m in range(1, k + 1):
                yield k, m, self.O_km(k, m), self.a_k(k)

    def as_dict(self):
        return {
            "k_max": self.k_max,
            "a": list(self.a),
            "O": [list(row) for row in self.O],
            "S": [list(row) for row in self.S],
            "oblong": list(self.oblong),
        }

    def __str__(self):
        return f"CombinatoricsTable(k_max={self.k_max})"
