"""Reproducing kernels, Herglotz functions, and model operators on real Riemann surfaces."""

__version__ = "0.1.0"
