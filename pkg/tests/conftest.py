import pytest
from fractions import Fraction

from periodpoly import (GAMMA0, build_coset_space, build_W, eps_split,
                        common_eigen_polynomial, NewformData, eta_product)


@pytest.fixture(scope="session")
def space5():
    return build_coset_space(GAMMA0, 5, 4)


@pytest.fixture(scope="session")
def w5(space5):
    return build_W(space5, 2)


@pytest.fixture(scope="session")
def w5_split(w5):
    return eps_split(w5)


@pytest.fixture(scope="session")
def level5_eigenpolys(w5_split):
    plus, minus = w5_split
    Pp = common_eigen_polynomial(plus, [(2, Fraction(-4))], parity="+")
    Pm = common_eigen_polynomial(minus, [], parity="-")
    return Pp, Pm


@pytest.fixture(scope="session")
def level5_form():
    return NewformData(5, 4, eta_product([(1, 4), (5, 4)], 250), 1)


@pytest.fixture(scope="session")
def level2_form():
    return NewformData(2, 8, eta_product([(1, 8), (2, 8)], 250), 1)
