import math

import pytest

from slsys import AnalyticFunction, SchrodingerLSystem, WeylFunction, sqrt_cut


@pytest.fixture(scope="session")
def free_weyl():
    return WeylFunction.free()


@pytest.fixture(scope="session")
def example1_system(free_weyl):
    """h = 0.5+0.5i, mu = 1: Stieltjes system sitting exactly at mu0."""
    return SchrodingerLSystem(0.5 + 0.5j, 1.0, free_weyl)


@pytest.fixture(scope="session")
def example2_system(free_weyl):
    """h = 1+i, mu = 0: inverse-Stieltjes system at mu = -m(-0)."""
    return SchrodingerLSystem(1.0 + 1.0j, 0.0, free_weyl)


@pytest.fixture(scope="session")
def mu_inf_system(free_weyl):
    """h = 1+i, mu = +inf: the exact-angle Stieltjes system."""
    return SchrodingerLSystem(1.0 + 1.0j, math.inf, free_weyl)


@pytest.fixture(scope="session")
def example1_closed():
    return AnalyticFunction(lambda z: 1.0 + 1j / sqrt_cut(z), "1 + i/sqrt(z)")


@pytest.fixture(scope="session")
def example2_closed():
    def f(z):
        s = sqrt_cut(z)
        return -s / (s + 2j)

    return AnalyticFunction(f, "-sqrt(z)/(sqrt(z) + 2i)")


@pytest.fixture(scope="session")
def mu_inf_closed():
    return AnalyticFunction(lambda z: 1.0 / (1.0 - 1j * sqrt_cut(z)), "1/(1 - i sqrt(z))")
