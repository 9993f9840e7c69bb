"""Prime form and its logarithmic derivative in the oval variable."""

from __future__ import annotations

import numpy as np

from . import theta as th
from .surface import RealSurfaceDescriptor, as_point


class PrimeFormContext:
    """Surface plus the odd characteristic and truncation policy for E(u, v).

    Genus 0 uses E(u, v) = v - u.  Genus 1 uses the odd theta over its
    derivative at zero.  Higher genus normalizes by the gradient of the odd
    theta paired with a fixed chart direction.
    """

    def __init__(self, surf: RealSurfaceDescriptor, policy: th.TruncationPolicy = th.TruncationPolicy(), odd_char: th.Characteristic | None = None, direction=None):
        self.surface = surf
        self.policy = policy
        g = surf.genus
        if g == 0:
            self.odd_char = None
            self._norm = 1.0 + 0j
            return
        if odd_char is None:
            odd_char = th.Characteristic(0.5 * np.ones(g), 0.5 * np.ones(g))
        if odd_char.parity() != -1:
            raise ValueError("prime form needs an odd characteristic")
        self.odd_char = odd_char
        self.direction = (
            np.asarray(direction, dtype=complex)
            if direction is not None
            else np.eye(g)[0].astype(complex)
        )
        _, grad = th.theta_char_and_grad(odd_char, np.zeros(g), surf.omega, policy)
        self._norm = complex(grad @ self.direction)
        if abs(self._norm) < 1e-13:
            raise ValueError("odd theta gradient degenerate along the chosen direction")


def prime_form(ctx: PrimeFormContext, p, q) -> complex:
    """E(p, q); antisymmetric, vanishing only on the diagonal."""
    surf = ctx.surface
    pc, qc = as_point(p).coords, as_point(q).coords
    if surf.genus == 0:
        return complex(qc[0] - pc[0])
    val = th.theta_char(ctx.odd_char, qc - pc, surf.omega, ctx.policy)
    return complex(val / ctx._norm)


def dlog_prime_form_x(ctx: PrimeFormContext, p, x, direction=None) -> complex:
    """d/dx log E(p, x) in the chart (genus >= 2: along the given direction)."""
    surf = ctx.surface
    pc, xc = as_point(p).coords, as_point(x).coords
    if surf.genus == 0:
        return complex(1.0 / (xc[0] - pc[0]))
    grad = th.theta_dlog_grad(ctx.odd_char, xc - pc, surf.omega, ctx.policy)
    if surf.genus == 1:
        return complex(grad[0])
    d = np.asarray(direction, dtype=complex) if direction is not None else ctx.direction
    return complex(grad @ d)
