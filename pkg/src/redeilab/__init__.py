"""Exact tools for polynomials over F_p with range sum p, Legendre shift sums,
direction sets in AG(2, p) and their Fourier spectra."""

__version__ = "0.1.0"
