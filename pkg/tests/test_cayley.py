import numpy as np
import pytest

from rkhs_surface.cayley import (
    ConjugatedMultiplier,
    SchurFunction,
    balance_weights,
    cayley,
    hs_factorization_residual,
    lambda_gram_residual,
    lambda_map,
    lambda_star,
    phi_boundary_zeros,
)
from rkhs_surface.herglotz import CaratheodoryFunction, RealMeasure
from rkhs_surface.kernels import MeromorphicFunction
from rkhs_surface.lphi import LPhiSpace

P1, Q1 = 0.31 + 0.22j, 0.67 + 0.34j


@pytest.fixture(scope="module")
def torus_s(torus_space):
    return cayley(torus_space.phi)


@pytest.fixture(scope="module")
def torus_cm(torus_space):
    # poles at the gap midpoints of the oval-0 atoms, real residues summing to zero
    y = MeromorphicFunction(
        torus_space.cfg.surface, constant=0.1, poles=[0.4, 0.9], residues=[0.45, -0.45]
    )
    return ConjugatedMultiplier(torus_space, y)


def test_round_trip(torus_space, torus_s):
    for p in (P1, Q1, 0.12 + 0.4j):
        assert abs(torus_s.inverse_value(p) - torus_space.phi(p)) < 1e-13


def test_unimodular_on_ovals(torus_s):
    assert torus_s.unimodular_residual() < 1e-12


def test_multivalued_rejection_and_balancing(torus, torus_cfg):
    m = RealMeasure(torus, atoms=[(0, 0.2, 1.0), (1, 0.6, 0.4)], constant=0.0)
    phi = CaratheodoryFunction(m)
    with pytest.raises(ValueError, match="multivalued"):
        SchurFunction(phi)
    fixed = balance_weights(m)
    np.testing.assert_allclose(fixed.oval_totals(), [0.7, 0.7])
    assert CaratheodoryFunction(fixed).is_single_valued()
    SchurFunction(CaratheodoryFunction(fixed))  # no raise


def test_balance_requires_mass(torus):
    m = RealMeasure(torus, atoms=[(0, 0.2, 1.0)])
    with pytest.raises(ValueError, match="positive mass"):
        balance_weights(m)


def test_hs_factorization(torus_space, torus_s):
    assert hs_factorization_residual(torus_space, torus_s, P1, Q1) < 1e-12


def test_lambda_gram(torus_space, torus_s, rng):
    pts = torus_space.cfg.surface.random_interior(rng, 5)
    assert lambda_gram_residual(torus_space, torus_s, pts) < 1e-12


def test_lambda_adjoint(torus_space, rng):
    f = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    for q in (P1, Q1):
        lhs = torus_space.inner(lambda_map(torus_space, [(1.0, q)]), f)
        rhs = np.conj(lambda_star(torus_space, f)(q))
        assert abs(lhs - rhs) < 1e-13


def test_conjugated_two_path(torus_space, torus_cm, rng):
    f = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    samples = torus_space.cfg.surface.random_interior(rng, 5)
    assert torus_cm.pointwise_residual(f, samples) < 1e-12


def test_conjugated_two_path_genus0(sphere_space, rng):
    y = MeromorphicFunction(
        sphere_space.cfg.surface, constant=0.3, poles=[-0.35, 1.0], residues=[0.6, -0.25]
    )
    cm = ConjugatedMultiplier(sphere_space, y)
    f = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    samples = rng.standard_normal(4) + 1j * rng.uniform(0.4, 1.8, 4)
    assert cm.pointwise_residual(f, samples) < 1e-12


def test_sigma_form_matches_closed_form(torus_cm, rng):
    # real boundary poles: the sigma_y form and the jardin form coincide
    f = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    np.testing.assert_allclose(
        torus_cm.multiply_sigma_form(f), torus_cm.multiply(f), atol=1e-13
    )


def test_real_part_is_symmetrization(torus_space, torus_cm, rng):
    n = len(torus_space)
    a = np.zeros((n, n), dtype=complex)
    for k in range(n):
        e = np.zeros(n)
        e[k] = 1.0
        a[:, k] = torus_cm.multiply(e)
    mu = torus_space.quad.mu
    adj = (a.conj().T * mu[None, :]) / mu[:, None]
    f = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    sym = 0.5 * (a + adj) @ f
    np.testing.assert_allclose(torus_cm.real_part_multiply(f), sym, atol=1e-12)


def test_boundary_zeros_are_phi_zeros(torus_space):
    surf = torus_space.cfg.surface
    zeros = phi_boundary_zeros(torus_space.phi, 0)
    assert len(zeros) == 2
    for s in zeros:
        assert abs(torus_space.phi(surf.oval_point(0, s).z)) < 1e-11


def test_real_part_at_zero_poles_is_diagonal(torus_space, rng):
    surf = torus_space.cfg.surface
    zeros = phi_boundary_zeros(torus_space.phi, 0)
    poles = [surf.oval_point(0, s).z for s in zeros[:2]]
    y = MeromorphicFunction(surf, constant=0.1, poles=poles, residues=[0.45, -0.45])
    cm = ConjugatedMultiplier(torus_space, y)
    f = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    np.testing.assert_allclose(cm.real_part_multiply(f), cm.yx * f, atol=1e-9)


def test_conjugated_validation(torus, torus_cfg, sphere_space):
    y_lin = MeromorphicFunction(sphere_space.cfg.surface, linear=1.0)
    with pytest.raises(ValueError, match="finite-pole"):
        ConjugatedMultiplier(sphere_space, y_lin)
    unbal = RealMeasure(torus, atoms=[(0, 0.2, 1.0), (1, 0.6, 0.4)])
    space = LPhiSpace(torus_cfg, unbal)
    y = MeromorphicFunction(torus, constant=0.1, poles=[0.45, 0.9], residues=[0.3, -0.3])
    with pytest.raises(ValueError, match="single-valued"):
        ConjugatedMultiplier(space, y)
