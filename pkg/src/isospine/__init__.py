"""Supersingular isogeny graphs over F_p and F_p^2, their F_p spines, and congruence predictions."""

__version__ = "0.1.0"
