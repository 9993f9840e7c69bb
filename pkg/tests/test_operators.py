import numpy as np
import pytest

from rkhs_surface.kernels import MeromorphicFunction, level_set, real_elliptic
from rkhs_surface.operators import OperatorPair, resolvent_eigen_residual

ALPHA, BETA = 0.37 + 0.51j, -0.22 + 0.304j


@pytest.fixture(scope="module")
def torus_y(torus):
    return real_elliptic(torus, 0.4, 0.7, 0.3 + 0.2j)


@pytest.fixture(scope="module")
def sphere_y(sphere):
    return MeromorphicFunction(sphere, constant=0.3, poles=[0.9], residues=[0.5])


def test_selfadjoint(torus_space, torus_y, rng):
    pair = OperatorPair(torus_space, torus_y)
    f = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    g = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    assert pair.selfadjoint_residual(f, g) < 1e-13


def test_selfadjoint_negative_control(torus_space, rng):
    bad = MeromorphicFunction(
        torus_space.cfg.surface,
        constant=0.1,
        poles=[0.3 + 0.2j, 0.31 - 0.2j],
        residues=[0.8, -0.8],
    )
    pair = OperatorPair(torus_space, bad, allow_nonreal=True)
    f = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    g = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    assert pair.selfadjoint_residual(f, g) > 1e-3


def test_reality_rejection(torus_space):
    bad = MeromorphicFunction(
        torus_space.cfg.surface,
        constant=0.1,
        poles=[0.3 + 0.2j, 0.31 - 0.2j],
        residues=[0.8, -0.8],
    )
    with pytest.raises(ValueError, match="not real on the ovals"):
        OperatorPair(torus_space, bad)


def test_structure_identity(torus_space, sphere_space, torus_y, sphere_y, rng):
    for space, y in ((torus_space, torus_y), (sphere_space, sphere_y)):
        pair = OperatorPair(space, y)
        f = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        g = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        assert pair.structure_identity_residual(f, g, ALPHA, BETA) < 1e-13


def test_commutation(torus_space, torus_y, rng):
    pair = OperatorPair(torus_space, torus_y)
    f = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    assert pair.commutation_residual(f, ALPHA) < 5e-15


def test_representation_torus(torus_space, torus_y, rng):
    pair = OperatorPair(torus_space, torus_y)
    f = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    samples = torus_space.cfg.surface.random_interior(rng, 5)
    assert pair.representation_residual(f, samples) < 1e-10


def test_representation_genus0_linear(sphere_space, rng):
    # y = z exercises the linear part; the model feeds on sum_i mu_i f_i
    y = MeromorphicFunction(sphere_space.cfg.surface, linear=1.0)
    pair = OperatorPair(sphere_space, y)
    f = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    samples = rng.standard_normal(4) + 1j * rng.uniform(0.4, 1.8, 4)
    assert pair.representation_residual(f, samples) < 1e-12


def test_resolvent_eigenvector(torus_cfg, torus_y):
    pre = level_set(torus_y, ALPHA)
    res = resolvent_eigen_residual(
        torus_cfg, torus_y, ALPHA, 0.44 + 0.27j, 0.71 + 0.13j, preimages=pre
    )
    assert res < 1e-10


def test_pole_on_atom_rejected(torus_space):
    y = MeromorphicFunction(
        torus_space.cfg.surface, constant=0.1, poles=[0.15, 0.65], residues=[0.5, -0.5]
    )
    with pytest.raises(ValueError, match="pole sits on a measure atom"):
        OperatorPair(torus_space, y)


def test_resolvent_rejects_boundary_value(torus_space, torus_y, rng):
    pair = OperatorPair(torus_space, torus_y)
    f = rng.standard_normal(3)
    with pytest.raises(ZeroDivisionError):
        pair.resolvent(f, pair.yx[1])


def test_surface_mismatch(torus_space, sphere_y):
    with pytest.raises(ValueError, match="share a surface"):
        OperatorPair(torus_space, sphere_y)
