import random

import pytest

from pairing_miller.curve import AffinePoint, on_curve
from pairing_miller.pairing import context


@pytest.fixture(scope="session")
def toy11():
    return context("toy-11")


@pytest.fixture(scope="session")
def toy19():
    return context("toy-19")


@pytest.fixture(scope="session")
def bn():
    return context("bn254")


@pytest.fixture
def rng():
    return random.Random(20240601)


def enumerate_points(C, elements):
    """Every finite point of C with coordinates from ``elements``."""
    return [AffinePoint(x, y) for x in elements for y in elements if on_curve(C, AffinePoint(x, y))]


@pytest.fixture(scope="session")
def toy11_points(toy11):
    return enumerate_points(toy11.curve, [toy11.Fp(i) for i in range(11)])


@pytest.fixture(scope="session")
def toy11_ext_points(toy11):
    els = [toy11.Fq([a, b]) for a in range(11) for b in range(11)]
    return enumerate_points(toy11.ext_curve, els)
