"""Normality of maximal torus orbit closures in simple modules."""

__version__ = "0.1.0"
