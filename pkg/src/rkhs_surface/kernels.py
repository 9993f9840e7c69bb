"""Cauchy and Hardy kernels, meromorphic multipliers, and pointwise model operators."""

from __future__ import annotations

import numpy as np

from . import theta as th
from .prime_form import PrimeFormContext, dlog_prime_form_x, prime_form
from .surface import RealSurfaceDescriptor, as_point

POLE_SEP_TOL = 1e-8


class LevelSetError(ValueError):
    """Preimage search failed or found a degenerate configuration."""


def default_zeta(surf: RealSurfaceDescriptor) -> th.Characteristic:
    """Even characteristic giving a positive Hardy diagonal on both sides."""
    g = max(surf.genus, 1)
    return th.Characteristic(0.5 * np.ones(g), np.zeros(g))


class KernelConfig:
    """Surface, even characteristic zeta, prime form context, truncation policy."""

    def __init__(self, surf: RealSurfaceDescriptor, zeta: th.Characteristic | None = None, policy: th.TruncationPolicy = th.TruncationPolicy(), prime_ctx: PrimeFormContext | None = None):
        self.surface = surf
        self.policy = policy
        self.zeta = zeta if zeta is not None else default_zeta(surf)
        self.prime = prime_ctx if prime_ctx is not None else PrimeFormContext(surf, policy)
        if surf.genus > 0:
            self.zeta0 = complex(
                th.theta_char(self.zeta, np.zeros(surf.genus), surf.omega, policy)
            )
            if abs(self.zeta0) < 1e-13:
                raise th.ThetaZeroError("theta[zeta](0) vanishes; pick another zeta")
        else:
            self.zeta0 = 1.0 + 0j

    def theta_zeta(self, z):
        return th.theta_char(self.zeta, np.atleast_1d(z), self.surface.omega, self.policy)


def cauchy_kernel(cfg: KernelConfig, u, v) -> complex:
    """K(u, v) = theta[zeta](v-u) / (theta[zeta](0) E(v, u)); 1/(u-v) at genus 0."""
    uz, vz = as_point(u).coords, as_point(v).coords
    if cfg.surface.genus == 0:
        return complex(1.0 / (uz[0] - vz[0]))
    num = cfg.theta_zeta(vz - uz)
    return complex(num / (cfg.zeta0 * prime_form(cfg.prime, v, u)))


def hardy_kernel(cfg: KernelConfig, p, q) -> complex:
    """Positive kernel K(p, tau q) / (-i); 1/(-i(p - conj(q))) at genus 0."""
    tq = cfg.surface.involution(q)
    return complex(cauchy_kernel(cfg, p, tq) / (-1j))


class MeromorphicFunction:
    """Finite-pole multiplier y.

    Genus 0: y(u) = constant + linear*u + sum res_m/(u - p_m).
    Genus 1: y(u) = constant + sum res_m * f1(u - p_m) with sum res_m = 0.
    """

    def __init__(self, surf: RealSurfaceDescriptor, constant=0.0, poles=(), residues=(), linear=0.0, policy: th.TruncationPolicy = th.TruncationPolicy()):
        self.surface = surf
        self.constant = complex(constant)
        self.linear = complex(linear)
        self.poles = np.asarray(
            [as_point(p).z for p in poles], dtype=complex
        ) if len(poles) else np.zeros(0, dtype=complex)
        self.residues = np.asarray(residues, dtype=complex)
        self.policy = policy
        if self.residues.shape != self.poles.shape:
            raise ValueError("poles and residues must pair up")
        if surf.genus == 0:
            pass
        elif surf.genus == 1:
            if self.linear != 0:
                raise ValueError("linear term is a genus-0 notion")
            if len(self.residues) and abs(self.residues.sum()) > 1e-12:
                raise ValueError(
                    f"elliptic residues must sum to zero, got {abs(self.residues.sum()):.3e}"
                )
        else:
            raise NotImplementedError("multipliers implemented for genus 0 and 1")
        for i in range(len(self.poles)):
            for j in range(i + 1, len(self.poles)):
                d = self.poles[i] - self.poles[j]
                if surf.genus == 1:
                    red = surf.reduce([d]).coords[0]
                    sep = min(
                        abs(red - n - surf.z_matrix[0, 0] * m)
                        for n in (0, 1, -1)
                        for m in (0, 1, -1)
                    )
                else:
                    sep = abs(d)
                if sep < POLE_SEP_TOL:
                    raise ValueError("poles must be distinct and simple")

    @property
    def degree(self) -> int:
        return len(self.poles) + (1 if self.linear != 0 else 0)

    def __call__(self, u) -> complex:
        z = as_point(u).z
        if self.surface.genus == 0:
            val = self.constant + self.linear * z
            for p, r in zip(self.poles, self.residues):
                val += r / (z - p)
            return complex(val)
        om, pol = self.surface.omega, self.policy
        val = self.constant
        for p, r in zip(self.poles, self.residues):
            val += r * th.f1(np.array([z - p]), om, pol)
        return complex(val)

    def deriv(self, u) -> complex:
        z = as_point(u).z
        if self.surface.genus == 0:
            val = self.linear
            for p, r in zip(self.poles, self.residues):
                val -= r / (z - p) ** 2
            return complex(val)
        om, pol = self.surface.omega, self.policy
        val = 0.0 + 0j
        for p, r in zip(self.poles, self.residues):
            val += r * th.f1_prime(np.array([z - p]), om, pol)
        return complex(val)

    def reality_residual(self, n: int = 32) -> float:
        """Max |Im y| over oval grids away from the poles."""
        surf = self.surface
        worst = 0.0
        if surf.genus == 0:
            xs = np.linspace(-3.0, 3.0, n)
            pts = xs.astype(complex)
        else:
            pts = []
            for j in range(surf.ovals):
                for s in np.linspace(0.0, 1.0, n, endpoint=False):
                    pts.append(surf.oval_point(j, s).z)
            pts = np.array(pts)
        for z in pts:
            if len(self.poles) and np.min(np.abs(z - self.poles)) < 0.05:
                continue
            worst = max(worst, abs(np.imag(self(z))))
        return worst


def real_elliptic(surf: RealSurfaceDescriptor, a0: float, strength: float, pole) -> MeromorphicFunction:
    """Degree-2 elliptic multiplier, real on both ovals, poles at pole and conj(pole)."""
    p0 = as_point(pole).z
    return MeromorphicFunction(
        surf, constant=float(a0),
        poles=[p0, np.conj(p0)],
        residues=[1j * float(strength), -1j * float(strength)],
    )


def level_set(y: MeromorphicFunction, alpha: complex, grid: int = 32):
    """All chart solutions of y(u) = alpha (degree-many, deduplicated)."""
    surf = y.surface
    if surf.genus == 0:
        # clear denominators into a polynomial
        base = np.array([1.0 + 0j])
        for p in y.poles:
            base = np.convolve(base, np.array([1.0, -p]))
        num = np.convolve(np.array([y.linear, y.constant - alpha]) if y.linear != 0 else np.array([y.constant - alpha]), base)
        for p, r in zip(y.poles, y.residues):
            part = np.array([r + 0j])
            for q in y.poles:
                if q != p:
                    part = np.convolve(part, np.array([1.0, -q]))
            pad = len(num) - len(part)
            num = num + np.concatenate([np.zeros(pad, dtype=complex), part])
        num = np.trim_zeros(num, "f")
        if len(num) <= 1:
            raise LevelSetError("constant function has no level set")
        roots = np.roots(num)
    else:
        roots = _level_set_newton(y, alpha, grid)
        if len(roots) != y.degree:
            roots = _level_set_newton(y, alpha, 2 * grid)
    if len(roots) != y.degree:
        raise LevelSetError(
            f"degenerate level set: found {len(roots)} preimages, degree {y.degree}"
        )
    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            if abs(roots[i] - roots[j]) < 1e-6:
                raise LevelSetError("degenerate level set: coincident preimages")
    dy = np.array([y.deriv(r) for r in roots])
    if np.min(np.abs(dy)) < 1e-8:
        raise LevelSetError("critical point on the level set")
    return np.asarray(roots, dtype=complex)


def _level_set_newton(y: MeromorphicFunction, alpha: complex, grid: int) -> np.ndarray:
    surf = y.surface
    t = surf.t_param
    om = complex(surf.z_matrix[0, 0])
    roots: list[complex] = []
    for ux in np.linspace(0.0, 1.0, grid, endpoint=False):
        for uy in np.linspace(0.0, 1.0, grid, endpoint=False):
            u = complex(ux + 0.013, (uy + 0.017) * t)
            if len(y.poles) and np.min(np.abs(u - y.poles)) < 0.02:
                continue
            try:
                for _ in range(60):
                    du = (y(u) - alpha) / y.deriv(u)
                    u -= du
                    if abs(du) < 1e-14:
                        break
                    if abs(u.imag) > 6.0 * t:
                        raise ZeroDivisionError
                if abs(y(u) - alpha) > 1e-10:
                    continue
            except (ZeroDivisionError, OverflowError, th.ThetaZeroError, th.TruncationError):
                continue
            u -= om * np.floor(u.imag / t)
            u -= np.floor(u.real)
            if not any(
                min(abs(u - r0 - n) for n in (-1, 0, 1)) < POLE_SEP_TOL
                or abs(u - r0 - om) < POLE_SEP_TOL
                or abs(u - r0 + om) < POLE_SEP_TOL
                for r0 in roots
            ):
                roots.append(u)
    return np.asarray(roots, dtype=complex)


def collection_residual(cfg: KernelConfig, y: MeromorphicFunction, p, q) -> float:
    """|(y(p) - y(q)) K(p,q) - linear - sum_j res_j K(p,p_j) K(p_j,q)|."""
    lhs = (y(p) - y(q)) * cauchy_kernel(cfg, p, q)
    rhs = y.linear + sum(
        r * cauchy_kernel(cfg, p, pj) * cauchy_kernel(cfg, pj, q)
        for pj, r in zip(y.poles, y.residues)
    )
    return abs(lhs - rhs)


def model_op_pointwise(cfg: KernelConfig, y: MeromorphicFunction, f, u, f_infinity=None) -> complex:
    """(M^y F)(u) = y(u) F(u) - sum_m res_m F(p_m) K(u, p_m) - linear * lim zF.

    f is a callable section; f_infinity supplies lim z F(z) when y has a
    linear part (genus 0 only).
    """
    uz = as_point(u).z
    val = y(uz) * f(uz)
    for pm, rm in zip(y.poles, y.residues):
        val -= rm * f(pm) * cauchy_kernel(cfg, uz, pm)
    if y.linear != 0:
        if f_infinity is None:
            raise ValueError("y has a linear part; supply f_infinity = lim z F(z)")
        val -= y.linear * f_infinity
    return complex(val)


def resolvent_pointwise(cfg: KernelConfig, y: MeromorphicFunction, alpha, f, u, preimages=None) -> complex:
    """(R_alpha F)(u) = F(u)/(y(u)-alpha) - sum_j F(u_j) K(u,u_j)/y'(u_j)."""
    uz = as_point(u).z
    if preimages is None:
        preimages = level_set(y, alpha)
    den = y(uz) - alpha
    if abs(den) < 1e-12:
        raise ZeroDivisionError("evaluation point lies on the level set of alpha")
    val = f(uz) / den
    for uj in preimages:
        val -= f(uj) * cauchy_kernel(cfg, uz, uj) / y.deriv(uj)
    return complex(val)
