"""Multiplication and resolvent operators on measure sections."""

from __future__ import annotations

import numpy as np

from .kernels import (
    KernelConfig,
    MeromorphicFunction,
    cauchy_kernel,
    level_set,
    model_op_pointwise,
    resolvent_pointwise,
)
from .lphi import LPhiSpace
from .surface import as_point

POLE_ATOM_TOL = 1e-6


class OperatorPair:
    """A section space together with a boundary-real multiplier y.

    Multiplication acts diagonally through the boundary values y(x_i); its
    resolvent is the diagonal of 1/(y(x_i) - alpha).
    """

    def __init__(self, space: LPhiSpace, y: MeromorphicFunction, allow_nonreal: bool = False, reality_tol: float = 1e-10):
        if y.surface is not space.cfg.surface:
            raise ValueError("multiplier and space must share a surface")
        self.space = space
        self.y = y
        surf = y.surface
        for pm in y.poles:
            for x in space.quad.z:
                d = pm - x
                if surf.genus >= 1:
                    om = complex(surf.z_matrix[0, 0])
                    sep = min(
                        abs(d - nn - om * mm) for nn in (-1, 0, 1) for mm in (-1, 0, 1)
                    )
                else:
                    sep = abs(d)
                if sep < POLE_ATOM_TOL:
                    raise ValueError("multiplier pole sits on a measure atom")
        if not allow_nonreal:
            res = y.reality_residual()
            if res > reality_tol:
                raise ValueError(
                    f"multiplier is not real on the ovals, residual {res:.3e}"
                )
        self.yx = np.array([y(x) for x in space.quad.z])

    def multiply(self, f) -> np.ndarray:
        return self.yx * np.asarray(f, dtype=complex)

    def resolvent(self, f, alpha: complex) -> np.ndarray:
        den = self.yx - alpha
        if np.min(np.abs(den)) < 1e-10:
            raise ZeroDivisionError("alpha is an approximate boundary value of y")
        return np.asarray(f, dtype=complex) / den

    def selfadjoint_residual(self, f, g) -> float:
        sp = self.space
        return abs(sp.inner(self.multiply(f), g) - sp.inner(f, self.multiply(g)))

    def structure_identity_residual(self, f, g, alpha: complex, beta: complex) -> float:
        """|<R_a f, g> - <f, R_b g> - (a - conj(b)) <R_a f, R_b g>|."""
        sp = self.space
        ra = self.resolvent(f, alpha)
        rb = self.resolvent(g, beta)
        return abs(
            sp.inner(ra, g) - sp.inner(f, rb) - (alpha - np.conj(beta)) * sp.inner(ra, rb)
        )

    def commutation_residual(self, f, alpha: complex) -> float:
        """Max defect of R_alpha(y f) - y R_alpha(f); zero for diagonals."""
        a = self.resolvent(self.multiply(f), alpha)
        b = self.multiply(self.resolvent(f, alpha))
        return float(np.max(np.abs(a - b))) if len(a) else 0.0

    def representation_residual(self, f, samples) -> float:
        """Consistency of diagonal multiplication with the pointwise model.

        Evaluating y.f through the section map must agree with the pointwise
        operator applied to the evaluated section; the linear part feeds on
        lim z F(z) = sum_i mu_i f_i.
        """
        sp = self.space
        f = np.asarray(f, dtype=complex)
        yf = self.multiply(f)
        f_inf = complex(np.sum(sp.quad.mu * f)) if self.y.linear != 0 else None
        worst = 0.0
        for u in samples:
            lhs = sp.element_eval(yf, u)
            rhs = model_op_pointwise(
                sp.cfg, self.y, lambda z: sp.element_eval(f, z), u, f_infinity=f_inf
            )
            worst = max(worst, abs(lhs - rhs))
        return worst


def resolvent_eigen_residual(cfg: KernelConfig, y: MeromorphicFunction, alpha: complex, w, u_eval, preimages=None) -> float:
    """Reflected kernel sections are resolvent eigenvectors.

    R_alpha K(., conj-lift of w) = K(., conj-lift of w) / (conj(y(w)) - alpha),
    checked at the point u_eval.
    """
    wz = as_point(w).z
    tw = cfg.surface.involution(wz).z
    if preimages is None:
        preimages = level_set(y, alpha)

    def section(z):
        return cauchy_kernel(cfg, z, tw)

    lhs = resolvent_pointwise(cfg, y, alpha, section, u_eval, preimages)
    rhs = section(as_point(u_eval).z) / (np.conj(y(wz)) - alpha)
    return abs(lhs - rhs)
