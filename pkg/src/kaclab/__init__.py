"""Kac random polynomials: real roots, densities and the limit process."""
__version__ = "0.1.0"
