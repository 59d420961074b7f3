"""Shared fixtures: catalog systems and the candidate measures used across suites."""

import numpy as np
import pytest

import ifsframes as F


@pytest.fixture(scope="session")
def cantor4():
    return F.get_system("cantor4")


@pytest.fixture(scope="session")
def cantor4c():
    return F.get_system("cantor4c")


@pytest.fixture(scope="session")
def cantor3():
    return F.get_system("cantor3")


@pytest.fixture(scope="session")
def lebesgue_sys():
    return F.get_system("lebesgue")


@pytest.fixture(scope="session")
def dual_weights_by_lambda(cantor4c):
    """Weighted-lattice candidate measures for the quarter-Cantor system."""
    cache = {}

    def get(lam: int):
        if lam not in cache:
            freqs = np.arange(-lam, lam + 1, dtype=float)
            cache[lam] = F.dual_weights(cantor4c, freqs)
        return cache[lam]

    return get


@pytest.fixture(scope="session")
def canonical_split(cantor4, cantor4c):
    return F.make_split_system(cantor4, cantor4c)
