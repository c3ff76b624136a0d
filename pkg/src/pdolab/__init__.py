"""Numerical laboratory for pseudo-differential operators on a discretized torus."""

__version__ = "0.1.0"
