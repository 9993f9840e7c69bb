import numpy as np
import pytest

from rkhs_surface.herglotz import RealMeasure
from rkhs_surface.kernels import KernelConfig
from rkhs_surface.lphi import LPhiSpace
from rkhs_surface.surface import build_genus0, build_genus1


@pytest.fixture(scope="session")
def torus():
    return build_genus1(1.0)


@pytest.fixture(scope="session")
def sphere():
    return build_genus0()


@pytest.fixture(scope="session")
def torus_cfg(torus):
    return KernelConfig(torus)


@pytest.fixture(scope="session")
def sphere_cfg(sphere):
    return KernelConfig(sphere)


@pytest.fixture(scope="session")
def torus_measure(torus):
    # balanced across the two ovals, so phi is single-valued
    return RealMeasure(
        torus, atoms=[(0, 0.15, 0.6), (0, 0.65, 0.6), (1, 0.4, 1.2)], constant=0.1
    )


@pytest.fixture(scope="session")
def torus_space(torus_cfg, torus_measure):
    return LPhiSpace(torus_cfg, torus_measure)


@pytest.fixture(scope="session")
def sphere_measure(sphere):
    return RealMeasure(
        sphere, atoms=[(0, -1.0, 0.5), (0, 0.3, 1.1), (0, 1.7, 0.8)], constant=0.4
    )


@pytest.fixture(scope="session")
def sphere_space(sphere_cfg, sphere_measure):
    return LPhiSpace(sphere_cfg, sphere_measure)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
