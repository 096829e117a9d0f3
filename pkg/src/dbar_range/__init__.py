"""Closed-range certificates and discrete verification for the
Cauchy-Riemann operator on planar domains."""

__version__ = "0.1.0"
