"""Numerical laboratory for Waring-Goldbach counts, circle-method sums and
Sato-Tate statistics of the discriminant form."""

__version__ = "0.1.0"
