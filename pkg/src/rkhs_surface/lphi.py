"""Weighted boundary-measure space: sections, Gram data, kernel identities."""

from __future__ import annotations

import numpy as np

from . import theta as th
from .herglotz import CaratheodoryFunction, RealMeasure
from .kernels import KernelConfig, cauchy_kernel, hardy_kernel
from .prime_form import dlog_prime_form_x, prime_form
from .surface import as_point


class LPhiSpace:
    """Sections over the atoms of a boundary measure, weighted by mu = w/2.

    Inner product <f, g> = sum_i mu_i f_i conj(g_i); the evaluation map sends
    a section f to sum_i mu_i K(p, x_i) f_i.
    """

    def __init__(self, cfg: KernelConfig, measure: RealMeasure):
        if measure.surface is not cfg.surface:
            raise ValueError("measure and kernel config must share a surface")
        self.cfg = cfg
        self.measure = measure
        self.quad = measure.quadrature()
        self.phi = CaratheodoryFunction(measure, cfg.policy)

    def __len__(self) -> int:
        return len(self.quad)

    def a_matrix(self) -> np.ndarray:
        """Per-oval signed masses against the differentials, shape (k, g)."""
        surf = self.cfg.surface
        k = max(surf.ovals, 1)
        g = surf.genus
        a = np.zeros((k, g))
        q = self.quad
        for j in range(k):
            sel = q.oval == j
            if g >= 1:
                a[j, 0] = np.sum(q.v[sel])
        return a

    def b_vector(self) -> np.ndarray:
        """Column sums of the per-oval mass matrix, shape (g,)."""
        return self.a_matrix().sum(axis=0)

    def inner(self, f, g) -> complex:
        return complex(np.sum(self.quad.mu * np.asarray(f) * np.conj(np.asarray(g))))

    def norm(self, f) -> float:
        return float(np.sqrt(max(self.inner(f, f).real, 0.0)))

    def element_eval(self, f, p) -> complex:
        """Evaluation sum_i mu_i K(p, x_i) f_i of the section f."""
        pz = as_point(p).z
        q = self.quad
        kv = np.array([cauchy_kernel(self.cfg, pz, x) for x in q.z])
        return complex(np.sum(q.mu * kv * np.asarray(f)))

    def kernel_section(self, q_pt) -> np.ndarray:
        """Section representing evaluation at q: f_i = conj(K(q, x_i))."""
        qz = as_point(q_pt).z
        return np.conj(np.array([cauchy_kernel(self.cfg, qz, x) for x in self.quad.z]))

    def gram(self, points) -> np.ndarray:
        """Gram matrix of the kernel sections at the given points."""
        secs = [self.kernel_section(p) for p in points]
        n = len(secs)
        g = np.empty((n, n), dtype=complex)
        for a in range(n):
            for b in range(a, n):
                g[a, b] = self.inner(secs[a], secs[b])
                g[b, a] = np.conj(g[a, b])
        return g

    def dimension(self, probes=None, rtol: float = 1e-10, seed: int = 11) -> int:
        """Rank of the span of kernel sections, probed at random points."""
        if self.measure.densities:
            raise ValueError("dimension is defined for atomic measures")
        n = len(self)
        if probes is None:
            rng = np.random.default_rng(seed)
            surf = self.cfg.surface
            if surf.genus == 0:
                probes = rng.standard_normal(2 * n + 4) + 1j * (0.3 + rng.uniform(0.2, 2.0, 2 * n + 4))
            else:
                probes = surf.random_interior(rng, 2 * n + 4)
        g = self.gram(probes)
        ev = np.linalg.eigvalsh(g)
        top = max(ev.max(), 0.0)
        if top == 0.0:
            return 0
        return int(np.sum(ev > rtol * top))


def lphi_kernel(space: LPhiSpace, p, q) -> complex:
    """(phi(p) + conj(phi(q))) H0(p, q); reproduces evaluations in the space."""
    return complex(
        (space.phi(p) + np.conj(space.phi(q))) * hardy_kernel(space.cfg, p, q)
    )


def kernel_identity_residual(space: LPhiSpace, p, q) -> float:
    """Defect of the product identity tying kernel sums to phi differences.

    LHS = sum_i v_i K(p, x_i) K(r, x_i) with r the reflected q; RHS couples
    2i (phi(p) - phi(r)) with the lattice corrections carried by the total
    signed mass.  Exact for any signed atomic measure.
    """
    cfg = space.cfg
    surf = cfg.surface
    pz = as_point(p).z
    rz = np.conj(as_point(q).z)
    qd = space.quad
    kp = np.array([cauchy_kernel(cfg, pz, x) for x in qd.z])
    kr = np.array([cauchy_kernel(cfg, rz, x) for x in qd.z])
    lhs = np.sum(qd.v * kp * kr)
    dphi = space.phi(pz) - space.phi(rz)
    if surf.genus == 0:
        rhs = 2j * dphi / (pz - rz)
        return float(abs(lhs - rhs))
    om, pol = surf.omega, cfg.policy
    c = th.theta_char(cfg.zeta, np.array([pz - rz]), om, pol) / (
        cfg.zeta0 * prime_form(cfg.prime, rz, pz)
    )
    b = space.b_vector()[0]
    yy = surf.y[0, 0]
    d1 = th.theta_dlog_grad(cfg.zeta, np.array([pz - rz]), om, pol)[0]
    d0 = th.theta_dlog_grad(cfg.zeta, np.zeros(1), om, pol)[0]
    rhs = c * (2j * dphi + 2.0 * np.pi * b * yy * (pz - rz) + b * (d1 - d0))
    return float(abs(lhs - rhs))


def hardy_decomposition_residual(space: LPhiSpace, p, q) -> float:
    """|sum_i w_i K(p,x_i) conj(K(q,x_i)) - 2 (phi(p)+conj(phi(q))) H0(p,q)|.

    Needs a real measure; the reflected kernel factor collapses through the
    per-oval conjugation signs.
    """
    cfg = space.cfg
    pz, qz = as_point(p).z, as_point(q).z
    qd = space.quad
    kp = np.array([cauchy_kernel(cfg, pz, x) for x in qd.z])
    kq = np.array([cauchy_kernel(cfg, qz, x) for x in qd.z])
    lhs = np.sum(qd.w * kp * np.conj(kq))
    return float(abs(lhs - 2.0 * lphi_kernel(space, pz, qz)))


def single_valued_residual(space: LPhiSpace, p, r) -> float:
    """|(phi(p) - phi(r)) K(p,r) - (i/2) sum_i v_i K(p,x_i) K(x_i,r)|."""
    cfg = space.cfg
    pz, rz = as_point(p).z, as_point(r).z
    qd = space.quad
    kp = np.array([cauchy_kernel(cfg, pz, x) for x in qd.z])
    kr = np.array([cauchy_kernel(cfg, x, rz) for x in qd.z])
    lhs = (space.phi(pz) - space.phi(rz)) * cauchy_kernel(cfg, pz, rz)
    rhs = 0.5j * np.sum(qd.v * kp * kr)
    return float(abs(lhs - rhs))


def addition_identity_residual(cfg: KernelConfig, x, p, r) -> float:
    """Defect of the three-point addition rule for kernel log-derivatives.

    D(p,x) - D(r,x) + b-corrections = E(r,p) theta[z](x-r) theta[z](p-x)
    / (E(x,r) E(x,p) theta[z](p-r) theta[z](0)) for arbitrary chart points.
    """
    surf = cfg.surface
    xz, pz, rz = as_point(x).z, as_point(p).z, as_point(r).z
    dp = dlog_prime_form_x(cfg.prime, pz, xz)
    dr = dlog_prime_form_x(cfg.prime, rz, xz)
    e_rp = prime_form(cfg.prime, rz, pz)
    e_xr = prime_form(cfg.prime, xz, rz)
    e_xp = prime_form(cfg.prime, xz, pz)
    if surf.genus == 0:
        lhs = dp - dr
        rhs = e_rp / (e_xr * e_xp)
        return float(abs(lhs - rhs))
    om, pol = surf.omega, cfg.policy
    d1 = th.theta_dlog_grad(cfg.zeta, np.array([pz - rz]), om, pol)[0]
    d0 = th.theta_dlog_grad(cfg.zeta, np.zeros(1), om, pol)[0]
    lhs = dp - dr + (d1 - d0)
    num = th.theta_char(cfg.zeta, np.array([xz - rz]), om, pol) * th.theta_char(
        cfg.zeta, np.array([pz - xz]), om, pol
    )
    den = th.theta_char(cfg.zeta, np.array([pz - rz]), om, pol) * cfg.zeta0
    rhs = (e_rp / (e_xr * e_xp)) * (num / den)
    return float(abs(lhs - rhs))
