# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled genus-1 theta series: value and log-derivative sums in one pass."""

import numpy as np

cimport numpy as cnp
from libc.math cimport M_PI, ceil, cos, exp, fabs, log, round, sin, sqrt

cnp.import_array()


cdef int _radius1(double eps, int max_radius, double lam, double offset) except -1:
    cdef double base = sqrt(log(1.0 / eps) / (M_PI * lam))
    cdef int r = <int>ceil(offset + base)
    cdef double bound
    if r < 1:
        r = 1
    while r <= max_radius:
        bound = (2.0 * r + 1.0) * exp(-M_PI * lam * (r - offset) * (r - offset))
        if bound < eps:
            return r
        r += 1
    raise ValueError(
        "needed lattice radius beyond max_radius; "
        "matrix too ill-conditioned for this policy"
    )


cdef void _core1(double a, double b, double zre, double zim,
                 double omre, double omim, int n0, int r,
                 double complex *s0, double complex *s1, double complex *s2,
                 double *scale, double *abssum) noexcept:
    cdef int n
    cdef double na, ere, eim, mag, fre, fim
    cdef double complex term, fac
    cdef double m = -1e300
    for n in range(n0 - r, n0 + r + 1):
        na = n + a
        ere = -M_PI * na * na * omim - 2.0 * M_PI * na * zim
        if ere > m:
            m = ere
    cdef double complex acc0 = 0, acc1 = 0, acc2 = 0
    cdef double asum = 0
    for n in range(n0 - r, n0 + r + 1):
        na = n + a
        ere = -M_PI * na * na * omim - 2.0 * M_PI * na * zim
        eim = M_PI * na * na * omre + 2.0 * M_PI * na * (zre + b)
        mag = exp(ere - m)
        term = mag * (cos(eim) + 1j * sin(eim))
        fac = 2.0 * M_PI * 1j * na
        acc0 += term
        acc1 += fac * term
        acc2 += fac * fac * term
        asum += mag
    s0[0] = acc0
    s1[0] = acc1
    s2[0] = acc2
    scale[0] = m
    abssum[0] = asum


def series1(double a, double b, double complex z, double complex om,
            double eps, int max_radius):
    """Scaled sums (s0, s1, s2, logscale, abssum) of the genus-1 series."""
    cdef double omim = om.imag
    cdef double center = -a - z.imag / omim
    cdef int n0 = <int>round(center)
    cdef double offset = fabs(center - n0)
    cdef int r = _radius1(eps, max_radius, omim, offset)
    cdef double complex s0, s1, s2
    cdef double scale, abssum
    _core1(a, b, z.real, z.imag, om.real, omim, n0, r, &s0, &s1, &s2, &scale, &abssum)
    return s0, s1, s2, scale, abssum


def series1_batch(double a, double b, cnp.ndarray[cnp.complex128_t, ndim=1] zs,
                  double complex om, double eps, int max_radius):
    """Theta values at an array of points (per-point truncation)."""
    cdef Py_ssize_t npts = zs.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.empty(npts, dtype=np.complex128)
    cdef Py_ssize_t i
    cdef double omim = om.imag, omre = om.real
    cdef double center, offset, scale, abssum
    cdef int n0, r
    cdef double complex s0, s1, s2, z
    for i in range(npts):
        z = zs[i]
        center = -a - z.imag / omim
        n0 = <int>round(center)
        offset = fabs(center - n0)
        r = _radius1(eps, max_radius, omim, offset)
        _core1(a, b, z.real, z.imag, omre, omim, n0, r, &s0, &s1, &s2, &scale, &abssum)
        out[i] = s0 * exp(scale)
    return out
