#!/usr/bin/env python3

import pytest

from cylhardy.corpus import build_corpus
from cylhardy.geometry import EuclideanCylinder, HomogeneousGroup, StratifiedH1
from cylhardy.quadrature import QuadratureSpec

SEED = 20240611


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: full-corpus runs (deselect with -m 'not slow')")


@pytest.fixture(scope="session")
def spec():
    return QuadratureSpec()


@pytest.fixture(scope="session")
def plane():
    return EuclideanCylinder(2, 2)


@pytest.fixture(scope="session")
def cylinder():
    return EuclideanCylinder(3, 2)


@pytest.fixture(scope="session")
def heisenberg():
    return StratifiedH1()


@pytest.fixture(scope="session")
def anisotropic():
    return HomogeneousGroup((1, 2))


@pytest.fixture(scope="session")
def small_corpus(plane):
    return build_corpus(SEED, 4, plane)
