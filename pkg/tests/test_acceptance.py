"""End-to-end acceptance checks, one test per guaranteed property block."""

import csv
import io

import numpy as np
from click.testing import CliRunner

from rkhs_surface import theta as th
from rkhs_surface.cayley import (
    ConjugatedMultiplier,
    cayley,
    lambda_gram_residual,
    phi_boundary_zeros,
)
from rkhs_surface.cli import G2_LATTICE, main, quasi_periodicity_residual
from rkhs_surface.herglotz import (
    CaratheodoryFunction,
    RealMeasure,
    genus0_dictionary,
    harmonic_mass,
)
from rkhs_surface.kernels import (
    MeromorphicFunction,
    cauchy_kernel,
    level_set,
    real_elliptic,
)
from rkhs_surface.lphi import (
    LPhiSpace,
    addition_identity_residual,
    kernel_identity_residual,
)
from rkhs_surface.operators import OperatorPair, resolvent_eigen_residual
from rkhs_surface.prime_form import dlog_prime_form_x, prime_form

POLICY = th.TruncationPolicy(1e-14)


def test_line_kernel_identity_and_dimension(sphere, sphere_cfg):
    # eight-atom measure on the line; the product identity has no corrections
    xs = [-2.1, -1.3, -0.4, 0.2, 0.8, 1.5, 2.3, 3.0]
    ws = [0.5, 0.9, 1.2, 0.7, 1.0, 0.6, 0.8, 1.1]
    meas = RealMeasure(sphere, atoms=[(0, x, w) for x, w in zip(xs, ws)], constant=0.3)
    space = LPhiSpace(sphere_cfg, meas)
    rng = np.random.default_rng(5)
    for _ in range(100):
        re2 = rng.standard_normal(2)
        im2 = rng.uniform(0.3, 2.0, 2) * rng.choice([-1.0, 1.0], 2)
        z, w = re2 + 1j * im2
        assert kernel_identity_residual(space, z, w) < 1e-12

    y = MeromorphicFunction(sphere, constant=0.2, poles=[-3.0, 4.1], residues=[0.7, -0.3])
    pair = OperatorPair(space, y)
    f = rng.standard_normal(8) + 1j * rng.standard_normal(8)
    g = rng.standard_normal(8) + 1j * rng.standard_normal(8)
    assert pair.structure_identity_residual(f, g, 0.37 + 0.51j, -0.2 + 0.3j) < 1e-12

    for n in (1, 4, 8, 10):
        m = RealMeasure(sphere, atoms=[(0, xi, wi) for xi, wi in zip(
            np.linspace(-2.0, 2.5, n), 0.4 + 0.1 * np.arange(n))])
        assert LPhiSpace(sphere_cfg, m).dimension() == n


def test_theta_transformation_and_fast_path():
    rng = np.random.default_rng(17)
    om1 = th.RiemannMatrix([[1j]])
    om2 = th.RiemannMatrix(G2_LATTICE)
    assert quasi_periodicity_residual(om1, POLICY, rng, 10000) < 1e-11
    assert quasi_periodicity_residual(om2, POLICY, rng, 10000) < 1e-11

    assert th.HAVE_FAST_PATH
    c = th.Characteristic([0.5], [0.0])
    zs = 0.4 * rng.standard_normal((200, 1)) + 0.3j * rng.standard_normal((200, 1))
    ref = th.theta_char_batch(c, zs, om1, POLICY)
    fast = th.theta_fast_batch(c, zs, om1, POLICY)
    assert np.max(np.abs(ref - fast) / np.abs(ref)) < 1e-12

    c0 = th.Characteristic([0.0], [0.0])
    v = th.theta_char(c0, np.zeros(1), om1, POLICY)
    v_wide = th.theta_char(c0, np.zeros(1), om1, th.TruncationPolicy(1e-28))
    assert abs(v - v_wide) < 1e-12
    assert abs(v - 1.0864348112133082) < 1e-12

    om = th.RiemannMatrix([[0.8j]])
    zero = np.zeros(1)
    t2 = th.theta_char(th.Characteristic([0.5], [0.0]), zero, om, POLICY)
    t3 = th.theta_char(c0, zero, om, POLICY)
    t4 = th.theta_char(th.Characteristic([0.0], [0.5]), zero, om, POLICY)
    assert abs(t3 ** 4 - t2 ** 4 - t4 ** 4) / abs(t3 ** 4) < 1e-11


def test_prime_form_relations(torus, torus_cfg):
    ctx = torus_cfg.prime
    rng = np.random.default_rng(23)
    for _ in range(50):
        u, v = torus.random_interior(rng, 2)
        e_uv, e_vu = prime_form(ctx, u, v), prime_form(ctx, v, u)
        assert abs(e_uv + e_vu) < 1e-12
        assert abs(np.conj(prime_form(ctx, np.conj(u), np.conj(v))) - e_uv) < 1e-10

    for u in (0.21 + 0.18j, 0.73 + 0.34j):
        h = 1e-6
        assert abs(prime_form(ctx, u, u + h) / h - 1.0) < 1e-8

    # log-derivative picks up 2 pi i times the oval's half-period integer
    for x, n in ((0.43, 0.0), (0.43 + 0.5j, 1.0)):
        for p in (0.3 + 0.2j, 0.8 + 0.4j):
            lhs = np.conj(dlog_prime_form_x(ctx, np.conj(p), x))
            rhs = dlog_prime_form_x(ctx, p, x) + 2j * np.pi * n
            assert abs(lhs - rhs) < 1e-9


def test_three_point_addition_identity(torus_cfg):
    rng = np.random.default_rng(3)
    surf = torus_cfg.surface
    worst = 0.0
    for _ in range(500):
        x, p, r = surf.random_interior(rng, 3)
        worst = max(worst, addition_identity_residual(torus_cfg, x, p, r))
    assert worst < 1e-10


def test_half_plane_function_properties(torus, sphere, torus_measure):
    phi = CaratheodoryFunction(torus_measure, POLICY)
    rng = np.random.default_rng(11)
    for p in torus.random_interior(rng, 20):
        assert abs(phi(p) + np.conj(phi(np.conj(p)))) < 1e-10

    xs, ys = np.meshgrid(np.linspace(0.02, 0.98, 20), np.linspace(0.03, 0.47, 20))
    for a, b in zip(xs.ravel(), ys.ravel()):
        assert phi(complex(a, b)).real > 0

    lop = CaratheodoryFunction(
        RealMeasure(torus, atoms=[(0, 0.2, 1.0), (1, 0.7, 0.4)]), POLICY
    )
    pa, pb = lop.periods()
    assert abs(pa.real) < 1e-10 and abs(pb.real) < 1e-10

    data = [(-0.5, 0.8), (1.2, 0.6)]
    dict_phi = CaratheodoryFunction(genus0_dictionary(sphere, 0.9, 0.0, data))
    for p in (0.3 + 0.8j, -1.4 + 0.5j):
        target = -1j * (0.9 + sum(c * (1 / (t - p) - t / (1 + t * t)) for t, c in data))
        assert abs(dict_phi(p) - target) < 1e-11

    assert abs(harmonic_mass(torus, 0.4 + 0.31j, nodes=512) - 1.0) < 2e-8
    assert abs(harmonic_mass(sphere, 0.5 + 1.3j, nodes=512) - 1.0) < 2e-8


def test_kernel_product_identity_three_regimes(torus, torus_cfg, torus_space, sphere_space):
    rng = np.random.default_rng(29)
    for _ in range(25):
        p, q = torus.random_interior(rng, 2)
        assert kernel_identity_residual(torus_space, p, q) < 1e-10
    signed = LPhiSpace(torus_cfg, RealMeasure(
        torus, atoms=[(0, 0.1, 0.7), (0, 0.55, -0.2), (1, 0.3, 0.9)],
        constant=0.2, signed_ok=True,
    ))
    assert kernel_identity_residual(signed, 0.31 + 0.22j, 0.67 + 0.34j) < 1e-10

    dens = LPhiSpace(torus_cfg, RealMeasure(
        torus,
        densities={0: lambda s: 1.0 + 0.3 * np.cos(2 * np.pi * s), 1: np.ones(512)},
        nodes=512,
    ))
    assert kernel_identity_residual(dens, 0.31 + 0.22j, 0.67 + 0.34j) < 1e-8

    # line degeneration: the identity closes with zero correction terms
    space = sphere_space
    assert space.b_vector().size == 0
    for _ in range(25):
        re2 = rng.standard_normal(2)
        im2 = rng.uniform(0.3, 2.0, 2)
        p, q = re2 + 1j * im2
        r = np.conj(q)
        qd = space.quad
        kp = np.array([cauchy_kernel(space.cfg, p, x) for x in qd.z])
        kr = np.array([cauchy_kernel(space.cfg, r, x) for x in qd.z])
        lhs = np.sum(qd.v * kp * kr)
        rhs = 2j * (space.phi(p) - space.phi(r)) / (p - r)
        assert abs(lhs - rhs) < 1e-12


def test_multiplication_and_resolvent_operators(torus, torus_cfg, torus_space):
    y = real_elliptic(torus, 0.4, 0.7, 0.3 + 0.2j)
    pair = OperatorPair(torus_space, y)
    rng = np.random.default_rng(41)
    f = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    g = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    alpha, beta = 0.37 + 0.51j, -0.22 + 0.304j

    r_ab = pair.resolvent(f, alpha) - pair.resolvent(f, beta)
    assert np.max(np.abs(r_ab - (alpha - beta) * pair.resolvent(pair.resolvent(f, beta), alpha))) < 1e-13

    assert pair.structure_identity_residual(f, g, alpha, beta) < 1e-12
    assert pair.selfadjoint_residual(f, g) < 1e-12

    bad = MeromorphicFunction(
        torus, constant=0.1, poles=[0.3 + 0.2j, 0.31 - 0.2j], residues=[0.8, -0.8]
    )
    assert OperatorPair(torus_space, bad, allow_nonreal=True).selfadjoint_residual(f, g) > 1e-3

    assert pair.commutation_residual(np.ones(3, dtype=complex), alpha) < 1e-15

    pre = level_set(y, alpha)
    assert resolvent_eigen_residual(
        torus_cfg, y, alpha, 0.44 + 0.27j, 0.71 + 0.13j, preimages=pre
    ) < 1e-10

    samples = torus.random_interior(rng, 5)
    assert pair.representation_residual(f, samples) < 1e-9


def test_disk_transport_and_conjugation(torus, torus_space):
    s = cayley(torus_space.phi)
    rng = np.random.default_rng(53)
    for p in torus.random_interior(rng, 10):
        assert abs(s.inverse_value(p) - torus_space.phi(p)) < 1e-12

    pts = torus.random_interior(rng, 6)
    assert lambda_gram_residual(torus_space, s, pts) < 1e-10

    y = MeromorphicFunction(torus, constant=0.1, poles=[0.4, 0.9], residues=[0.45, -0.45])
    cm = ConjugatedMultiplier(torus_space, y)
    f = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    assert cm.pointwise_residual(f, torus.random_interior(rng, 5)) < 1e-9

    zeros = phi_boundary_zeros(torus_space.phi, 0)
    poles = [torus.oval_point(0, z).z for z in zeros[:2]]
    for pj in poles:
        assert abs(s(pj) - 1.0) < 1e-9
    yz = MeromorphicFunction(torus, constant=0.1, poles=poles, residues=[0.45, -0.45])
    cmz = ConjugatedMultiplier(torus_space, yz)
    assert np.max(np.abs(cmz.real_part_multiply(f) - cmz.yx * f)) < 1e-9


def test_value_table_closed_forms():
    runner = CliRunner()
    first = runner.invoke(main, ["table", "--builtin", "genus0"])
    second = runner.invoke(main, ["table", "--builtin", "genus0"])
    assert first.exit_code == 0, first.output
    assert first.output == second.output

    rows = {r[1]: r for r in list(csv.reader(io.StringIO(first.output)))[1:]}
    assert len(rows) == 8
    p, q = 0.4 + 0.7j, -0.8 + 1.1j
    xs, ws, m_const = np.array([-1.0, 0.3, 1.7]), np.array([0.5, 1.1, 0.8]), 0.4

    def phi(z):
        return 1j * m_const + np.sum(ws * 0.5j / (z - xs))

    def y(z):
        return 0.3 + 0.6 / (z + 0.35) - 0.25 / (z - 3.2)

    h0 = 1.0 / (-1j * (p - np.conj(q)))
    expected = {
        "prime-form": q - p,
        "cauchy-kernel": 1.0 / (p - q),
        "hardy-kernel": h0,
        "lphi-kernel": (phi(p) + np.conj(phi(q))) * h0,
        "element": np.sum(0.5 * ws / (p - xs)),
        "herglotz": phi(p),
        "multiplier": y(xs[0]),
        "resolvent": 1.0 / (y(xs[0]) - (0.37 + 0.51j)),
    }
    for name, want in expected.items():
        got = complex(float(rows[name][4]), float(rows[name][5]))
        assert abs(got - want) < 1e-12, name

    torus_out = runner.invoke(main, ["table"])
    assert torus_out.exit_code == 0, torus_out.output
    assert len(list(csv.reader(io.StringIO(torus_out.output)))) == 9
