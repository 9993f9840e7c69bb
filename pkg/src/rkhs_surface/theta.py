"""Riemann theta functions with characteristics.

Direct lattice summation with a deterministic truncation policy.  Scalar
genus-1 evaluations are routed to the compiled core when it is available;
everything else uses vectorized numpy sums.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product

import numpy as np

try:
    from . import _theta_fast
except ImportError:  # pure-python install
    _theta_fast = None

HAVE_FAST_PATH = _theta_fast is not None

# relative size below which a theta value counts as a zero of the series
ZERO_TOL = 1e-13


class ThetaZeroError(ArithmeticError):
    """Log-derivative requested at (or too close to) a zero of theta."""


class TruncationError(ValueError):
    """The tail bound cannot be met within the allowed lattice radius."""


@dataclass(frozen=True)
class TruncationPolicy:
    """Deterministic truncation for the lattice sum.

    eps is relative to the peak term magnitude exp(pi y^T Y0^{-1} y), so
    accuracy is uniform in quasi-periodicity shifts.
    """

    eps: float = 1e-14
    max_radius: int = 40

    def __post_init__(self):
        if not 0 < self.eps < 1:
            raise ValueError("eps must be in (0, 1)")
        if self.max_radius < 1:
            raise ValueError("max_radius must be positive")


class RiemannMatrix:
    """Symmetric g x g complex matrix with positive definite imaginary part."""

    def __init__(self, omega):
        omega = np.atleast_2d(np.asarray(omega, dtype=complex))
        if omega.shape[0] != omega.shape[1]:
            raise ValueError("matrix must be square")
        sym = np.max(np.abs(omega - omega.T)) if omega.size else 0.0
        if sym > 1e-13:
            raise ValueError(f"matrix not symmetric, residual {sym:.3e}")
        self.omega = 0.5 * (omega + omega.T)
        imag = self.omega.imag
        eigs = np.linalg.eigvalsh(imag)
        if eigs.min() <= 0:
            raise ValueError(
                f"imaginary part not positive definite, min eigenvalue {eigs.min():.3e}"
            )
        self._lam_min = float(eigs.min())

    @property
    def g(self) -> int:
        return self.omega.shape[0]

    @cached_property
    def y0(self) -> np.ndarray:
        return self.omega.imag.copy()

    @cached_property
    def y0_inv(self) -> np.ndarray:
        return np.linalg.inv(self.omega.imag)

    @property
    def lam_min(self) -> float:
        return self._lam_min

    def __repr__(self):
        return f"RiemannMatrix(g={self.g})"


@dataclass(frozen=True)
class Characteristic:
    """Real theta characteristic [a, b]."""

    a: np.ndarray
    b: np.ndarray

    def __init__(self, a, b):
        object.__setattr__(self, "a", np.atleast_1d(np.asarray(a, dtype=float)))
        object.__setattr__(self, "b", np.atleast_1d(np.asarray(b, dtype=float)))
        if self.a.shape != self.b.shape or self.a.ndim != 1:
            raise ValueError("a and b must be vectors of equal length")

    @property
    def g(self) -> int:
        return self.a.shape[0]

    @classmethod
    def zero(cls, g: int) -> "Characteristic":
        return cls(np.zeros(g), np.zeros(g))

    @classmethod
    def half(cls, a_half, b_half) -> "Characteristic":
        """Half-integer characteristic from integer vectors (value/2)."""
        return cls(np.asarray(a_half, dtype=float) / 2.0, np.asarray(b_half) / 2.0)

    def is_half_integer(self) -> bool:
        return bool(
            np.allclose(2 * self.a, np.round(2 * self.a))
            and np.allclose(2 * self.b, np.round(2 * self.b))
        )

    def parity(self) -> int:
        """+1 even, -1 odd; defined for half-integer characteristics."""
        if not self.is_half_integer():
            raise ValueError("parity defined only for half-integer characteristics")
        return -1 if int(round(4 * float(self.a @ self.b))) % 2 else 1


def _radius(policy: TruncationPolicy, g: int, lam_min: float, offset: float) -> int:
    # smallest R with (2R+1)^g * g * exp(-pi lam_min (R-offset)^2) < eps
    base = np.sqrt(np.log(1.0 / policy.eps) / (np.pi * lam_min))
    r = max(1, int(np.ceil(offset + base)))
    while r <= policy.max_radius:
        bound = g * (2 * r + 1) ** g * np.exp(-np.pi * lam_min * (r - offset) ** 2)
        if bound < policy.eps:
            return r
        r += 1
    raise TruncationError(
        f"needed lattice radius beyond max_radius={policy.max_radius}; "
        "matrix too ill-conditioned for this policy"
    )


def _offsets(g: int, r: int) -> np.ndarray:
    rng = np.arange(-r, r + 1)
    if g == 1:
        return rng[:, None].astype(float)
    return np.array(list(product(rng, repeat=g)), dtype=float)


def _series_sums(c: Characteristic, z, m: RiemannMatrix, t: TruncationPolicy):
    """Scaled sums (s0, s1, s2, logscale) of the theta series at one point.

    s0 approximates theta * exp(-logscale); s1 and s2 carry the extra factors
    2*pi*i*(n+a) and its outer square, for log-derivatives.
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    g = m.g
    if z.shape != (g,):
        raise ValueError(f"point must have {g} coordinates")
    y = z.imag
    center = -c.a - m.y0_inv @ y
    n0 = np.round(center)
    offset = float(np.linalg.norm(center - n0))
    r = _radius(t, g, m.lam_min, offset)
    ns = _offsets(g, r) + n0  # (L, g)
    na = ns + c.a
    quad = np.einsum("lj,jk,lk->l", na, m.omega, na)
    expo = 1j * np.pi * quad + 2j * np.pi * (na @ (z + c.b))
    scale = float(np.max(expo.real))
    terms = np.exp(expo - scale)
    factors = 2j * np.pi * na  # (L, g)
    s0 = complex(np.sum(terms))
    s1 = factors.T @ terms  # (g,)
    s2 = np.einsum("lj,lk,l->jk", factors, factors, terms)
    abssum = float(np.sum(np.abs(terms)))
    return s0, s1, s2, scale, abssum


def _series_sums_fast(c: Characteristic, z: complex, m: RiemannMatrix, t: TruncationPolicy):
    om = complex(m.omega[0, 0])
    try:
        return _theta_fast.series1(
            float(c.a[0]), float(c.b[0]), complex(z), om, t.eps, t.max_radius
        )
    except ValueError as exc:
        raise TruncationError(str(exc)) from exc


def _sums(c: Characteristic, z, m: RiemannMatrix, t: TruncationPolicy):
    if m.g == 1 and HAVE_FAST_PATH:
        zz = np.atleast_1d(np.asarray(z, dtype=complex))
        if zz.shape != (1,):
            raise ValueError("point must have 1 coordinate")
        s0, s1, s2, scale, abssum = _series_sums_fast(c, complex(zz[0]), m, t)
        return s0, np.array([s1]), np.array([[s2]]), scale, abssum
    return _series_sums(c, z, m, t)


def theta_char(c: Characteristic, z, m: RiemannMatrix, t: TruncationPolicy = TruncationPolicy()):
    """Theta with characteristic [a, b] at a point of C^g.

    Args:
        c: characteristic.
        z: point, complex vector of length g (scalar accepted at g=1).
        m: period matrix.
        t: truncation policy.

    Returns:
        Complex value of the series.
    """
    s0, _, _, scale, _ = _sums(c, z, m, t)
    return s0 * np.exp(scale)


def theta(z, m: RiemannMatrix, t: TruncationPolicy = TruncationPolicy()):
    """Theta with zero characteristic."""
    return theta_char(Characteristic.zero(m.g), z, m, t)


def theta_char_and_grad(c, z, m, t=TruncationPolicy()):
    """Value and gradient of theta (not of its logarithm)."""
    s0, s1, _, scale, _ = _sums(c, z, m, t)
    pref = np.exp(scale)
    return s0 * pref, s1 * pref


def theta_dlog_grad(c, z, m, t=TruncationPolicy()):
    """Gradient of log theta[a,b]; raises ThetaZeroError near a zero."""
    s0, s1, _, _, abssum = _sums(c, z, m, t)
    if abs(s0) < ZERO_TOL * max(abssum, 1.0):
        raise ThetaZeroError("log-derivative at a zero of theta")
    return s1 / s0


def theta_dlog_hess(c, z, m, t=TruncationPolicy()):
    """Hessian of log theta[a,b]."""
    s0, s1, s2, _, abssum = _sums(c, z, m, t)
    if abs(s0) < ZERO_TOL * max(abssum, 1.0):
        raise ThetaZeroError("log-derivative at a zero of theta")
    d1 = s1 / s0
    return s2 / s0 - np.outer(d1, d1)


def theta_char_batch(c: Characteristic, zs, m: RiemannMatrix, t: TruncationPolicy = TruncationPolicy(), chunk: int = 2048):
    """Theta values at many points (array of shape (P, g) or (P,) at g=1)."""
    zs = np.asarray(zs, dtype=complex)
    if m.g == 1 and zs.ndim == 1:
        zs = zs[:, None]
    if zs.ndim != 2 or zs.shape[1] != m.g:
        raise ValueError(f"points must have shape (P, {m.g})")
    out = np.empty(zs.shape[0], dtype=complex)
    for lo in range(0, zs.shape[0], chunk):
        block = zs[lo : lo + chunk]
        out[lo : lo + block.shape[0]] = _batch_block(c, block, m, t)
    return out


def _batch_block(c, zs, m, t):
    g = m.g
    ys = zs.imag
    centers = -c.a - ys @ m.y0_inv.T  # (P, g)
    n0 = np.round(centers)
    offset = float(np.max(np.linalg.norm(centers - n0, axis=1))) if len(zs) else 0.0
    lo = n0.min(axis=0)
    hi = n0.max(axis=0)
    r = _radius(t, g, m.lam_min, offset)
    # one shared lattice box covering every per-point center
    axes = [np.arange(lo[j] - r, hi[j] + r + 1) for j in range(g)]
    if g == 1:
        ns = axes[0][:, None].astype(float)
    else:
        ns = np.array(list(product(*axes)), dtype=float)
    na = ns + c.a  # (L, g)
    quad = np.einsum("lj,jk,lk->l", na, m.omega, na)  # (L,)
    expo = 1j * np.pi * quad[None, :] + 2j * np.pi * ((zs + c.b) @ na.T)  # (P, L)
    scale = expo.real.max(axis=1, keepdims=True)
    vals = np.exp(expo - scale).sum(axis=1)
    return vals * np.exp(scale[:, 0])


def theta_fast_batch(c: Characteristic, zs, m: RiemannMatrix, t: TruncationPolicy = TruncationPolicy()):
    """Compiled per-point genus-1 batch; used by the benchmark."""
    if m.g != 1:
        raise ValueError("compiled path is genus-1 only")
    if not HAVE_FAST_PATH:
        raise RuntimeError("compiled extension not available")
    zs = np.asarray(zs, dtype=complex).ravel()
    try:
        return _theta_fast.series1_batch(
            float(c.a[0]), float(c.b[0]), zs, complex(m.omega[0, 0]), t.eps, t.max_radius
        )
    except ValueError as exc:
        raise TruncationError(str(exc)) from exc


# genus-1 conveniences used by the prime form and elliptic functions

_ODD1 = Characteristic(np.array([0.5]), np.array([0.5]))


def theta1(z, m: RiemannMatrix, t: TruncationPolicy = TruncationPolicy()):
    """Odd theta value theta[1/2,1/2](z)."""
    return theta_char(_ODD1, z, m, t)


def theta1_prime0(m: RiemannMatrix, t: TruncationPolicy = TruncationPolicy()):
    """Derivative of the odd theta at 0 (genus 1)."""
    _, grad = theta_char_and_grad(_ODD1, np.zeros(1), m, t)
    return complex(grad[0])


def f1(z, m: RiemannMatrix, t: TruncationPolicy = TruncationPolicy()):
    """Logarithmic derivative theta1'/theta1 (genus 1)."""
    return complex(theta_dlog_grad(_ODD1, z, m, t)[0])


def f1_prime(z, m: RiemannMatrix, t: TruncationPolicy = TruncationPolicy()):
    """Derivative of f1 (genus 1)."""
    return complex(theta_dlog_hess(_ODD1, z, m, t)[0, 0])
