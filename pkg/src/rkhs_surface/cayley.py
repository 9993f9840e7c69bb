"""Right-half-plane to disk transport and conjugated multiplication."""

from __future__ import annotations

import numpy as np
from scipy.optimize import brentq

from .herglotz import CaratheodoryFunction, RealMeasure
from .kernels import MeromorphicFunction, cauchy_kernel, hardy_kernel, model_op_pointwise
from .lphi import LPhiSpace, lphi_kernel
from .surface import as_point

DENOM_TOL = 1e-10


class SchurFunction:
    """s = (1 - phi)/(1 + phi) for a single-valued right-half-plane phi.

    Unimodular on the boundary ovals; the inverse map is phi = (1 - s)/(1 + s).
    """

    def __init__(self, phi: CaratheodoryFunction, allow_multivalued: bool = False, period_tol: float = 1e-10):
        if not allow_multivalued and not phi.is_single_valued(period_tol):
            a, b = phi.periods()
            raise ValueError(
                f"phi is multivalued (periods {abs(a):.3e}, {abs(b):.3e}); balance the measure first"
            )
        self.phi = phi
        self.surface = phi.surface

    def __call__(self, p) -> complex:
        v = self.phi(p)
        den = 1.0 + v
        if abs(den) < DENOM_TOL:
            raise ZeroDivisionError("phi = -1 at the evaluation point")
        return complex((1.0 - v) / den)

    def inverse_value(self, p) -> complex:
        """phi recovered from s at a point."""
        sv = self(p)
        return complex((1.0 - sv) / (1.0 + sv))

    def unimodular_residual(self, n: int = 64, pad: float = 1e-3) -> float:
        """Max | |s| - 1 | over oval grids, skipping measure atoms."""
        surf = self.surface
        q = self.phi.quad
        worst = 0.0
        if surf.genus == 0:
            grid = np.linspace(-3.0, 3.0, n).astype(complex)
        else:
            grid = np.concatenate([
                np.array([surf.oval_point(j, sk).z for sk in np.arange(n) / n])
                for j in range(surf.ovals)
            ])
        for z in grid:
            if len(q) and np.min(np.abs(z - q.z)) < 10 * pad:
                continue
            try:
                worst = max(worst, abs(abs(self(z)) - 1.0))
            except ZeroDivisionError:
                continue
        return worst


def cayley(phi: CaratheodoryFunction, **kw) -> SchurFunction:
    return SchurFunction(phi, **kw)


def hs_kernel(space: LPhiSpace, s: SchurFunction, p, q) -> complex:
    """(1 - s(p) conj(s(q))) H0(p, q); de Branges-Rovnyak style positive kernel."""
    return complex((1.0 - s(p) * np.conj(s(q))) * hardy_kernel(space.cfg, p, q))


def hs_factorization_residual(space: LPhiSpace, s: SchurFunction, p, q) -> float:
    """|(1 + phi(p))(1 + conj(phi(q))) H_s(p, q) - 2 K_L(p, q)|."""
    fp = space.phi(p)
    fq = space.phi(q)
    lhs = (1.0 + fp) * (1.0 + np.conj(fq)) * hs_kernel(space, s, p, q)
    return float(abs(lhs - 2.0 * lphi_kernel(space, p, q)))


def lambda_map(space: LPhiSpace, combo) -> np.ndarray:
    """Section image of sum_a c_a H_s(., q_a): sum_a c_a sqrt2 f_{q_a}/(1+conj phi(q_a))."""
    out = np.zeros(len(space), dtype=complex)
    for c, q_pt in combo:
        den = 1.0 + np.conj(space.phi(q_pt))
        if abs(den) < DENOM_TOL:
            raise ZeroDivisionError("phi = -1 at a combination point")
        out += c * np.sqrt(2.0) * space.kernel_section(q_pt) / den
    return out


def lambda_star(space: LPhiSpace, f):
    """Adjoint image of a section: p -> sqrt2 element(f, p) / (1 + phi(p))."""
    f = np.asarray(f, dtype=complex)

    def func(p):
        den = 1.0 + space.phi(p)
        if abs(den) < DENOM_TOL:
            raise ZeroDivisionError("phi = -1 at the evaluation point")
        return np.sqrt(2.0) * space.element_eval(f, p) / den

    return func


def lambda_gram_residual(space: LPhiSpace, s: SchurFunction, points) -> float:
    """Unitarity defect: Gram of section images vs the H_s kernel Gram."""
    secs = [lambda_map(space, [(1.0, q)]) for q in points]
    worst = 0.0
    for a, qa in enumerate(points):
        for b, qb in enumerate(points):
            lhs = space.inner(secs[a], secs[b])
            rhs = hs_kernel(space, s, qb, qa)
            worst = max(worst, abs(lhs - rhs))
    return worst


class ConjugatedMultiplier:
    """Transport of multiplication by y into the section space.

    The closed form adds to the diagonal action a rank-degree(y) correction
    carried by the poles of y:

        g_i = y(x_i) f_i + i sigma_i sum_j c_j gamma_j K(x_i, p_j) F(p_j)

    with c_j = -res_j, gamma_j = 1/(1 + phi(p_j)), F = evaluated section.
    """

    def __init__(self, space: LPhiSpace, y: MeromorphicFunction):
        if y.surface is not space.cfg.surface:
            raise ValueError("multiplier and space must share a surface")
        if y.linear != 0:
            raise ValueError("conjugated transport needs a finite-pole multiplier")
        if not space.phi.is_single_valued():
            raise ValueError("phi must be single-valued; balance the measure first")
        self.space = space
        self.y = y
        self.gamma = np.array([1.0 / (1.0 + space.phi(pj)) for pj in y.poles])
        self.phi_at_poles = np.array([space.phi(pj) for pj in y.poles])
        self.yx = np.array([y(x) for x in space.quad.z])
        self.kxp = np.array([
            [cauchy_kernel(space.cfg, xi, pj) for pj in y.poles]
            for xi in space.quad.z
        ])

    def multiply(self, f) -> np.ndarray:
        f = np.asarray(f, dtype=complex)
        sp, y = self.space, self.y
        fp = np.array([sp.element_eval(f, pj) for pj in y.poles])
        corr = self.kxp @ ((-y.residues) * self.gamma * fp)
        return self.yx * f + 1j * sp.quad.sg * corr

    def pointwise_residual(self, f, samples) -> float:
        """Two-path check: closed form vs transport through function evaluations."""
        sp, y = self.space, self.y
        f = np.asarray(f, dtype=complex)
        g = self.multiply(f)
        u_func = lambda_star(sp, f)
        worst = 0.0
        for u in samples:
            uz = as_point(u).z
            myu = model_op_pointwise(sp.cfg, y, u_func, uz)
            fhat = (1.0 + sp.phi(uz)) / np.sqrt(2.0) * myu
            worst = max(worst, abs(sp.element_eval(g, uz) - fhat))
        return worst

    def phi_map(self, f) -> np.ndarray:
        """Pole evaluations Phi_j = sqrt2 gamma_j element(f, p_j)."""
        f = np.asarray(f, dtype=complex)
        fp = np.array([self.space.element_eval(f, pj) for pj in self.y.poles])
        return np.sqrt(2.0) * self.gamma * fp

    def phi_map_adjoint(self, d) -> np.ndarray:
        """(Phi* d)_i = sqrt2 sum_j conj(gamma_j K(p_j, x_i)) d_j."""
        d = np.asarray(d, dtype=complex)
        kpx = -self.kxp.T  # K(p_j, x_i) by antisymmetry
        return np.sqrt(2.0) * (np.conj(self.gamma)[:, None] * np.conj(kpx) * d[:, None]).sum(axis=0)

    def sigma_y(self) -> np.ndarray:
        """diag(res_j (1 + conj phi(p_j))); defined for boundary-fixed poles."""
        return self.y.residues * (1.0 + np.conj(self.phi_at_poles))

    def multiply_sigma_form(self, f) -> np.ndarray:
        """y f + (i/2) Phi* sigma_y Phi f; matches multiply() for real poles."""
        f = np.asarray(f, dtype=complex)
        return self.yx * f + 0.5j * self.phi_map_adjoint(self.sigma_y() * self.phi_map(f))

    def real_part_multiply(self, f) -> np.ndarray:
        """Transport of the symmetrized action: y f + (1/2) Phi* diag(res Im phi) Phi f."""
        f = np.asarray(f, dtype=complex)
        d = self.y.residues * np.imag(self.phi_at_poles)
        return self.yx * f + 0.5 * self.phi_map_adjoint(d * self.phi_map(f))


def balance_weights(measure: RealMeasure) -> RealMeasure:
    """Rescale per-oval masses to a common total, forcing single-valuedness."""
    tot = measure.oval_totals()
    if np.any(tot == 0):
        raise ValueError("every oval needs positive mass to balance")
    target = float(np.mean(tot))
    atoms = [(j, s, w * target / tot[j]) for (j, s, w) in measure.atoms]
    dens = {
        j: (lambda r, sc: (lambda s: sc * np.asarray(r(s), dtype=float)))(r, target / tot[int(j)])
        if callable(r)
        else np.asarray(r, dtype=float) * (target / tot[int(j)])
        for j, r in measure.densities.items()
    }
    return RealMeasure(
        measure.surface, atoms=atoms, densities=dens or None,
        constant=measure.constant, signed_ok=measure.signed_ok, nodes=measure.nodes,
    )


def phi_boundary_zeros(phi: CaratheodoryFunction, oval: int, pad: float = 1e-4) -> list[float]:
    """Zeros of Im phi along an oval, one per gap between consecutive atoms.

    phi is purely imaginary on the ovals once single-valued, so these are
    genuine zeros of phi; handy as boundary-fixed multiplier poles.
    """
    surf = phi.surface
    if surf.genus == 0:
        raise NotImplementedError("zero bracketing is implemented on compact ovals")
    ss = sorted(s for (j, s, _) in phi.measure.atoms if j == oval)
    if not ss:
        raise ValueError("the oval carries no atoms to bracket between")

    def imphi(s):
        return float(np.imag(phi(surf.oval_point(oval, s % 1.0).z, allow_boundary=True)))

    zeros = []
    for a, b in zip(ss, ss[1:] + [ss[0] + 1.0]):
        lo, hi = a + pad, b - pad
        flo, fhi = imphi(lo), imphi(hi)
        if flo == 0.0:
            zeros.append(lo % 1.0)
            continue
        if np.sign(flo) == np.sign(fhi):
            continue
        root = brentq(imphi, lo, hi, xtol=1e-14)
        zeros.append(root % 1.0)
    return zeros
