"""Numerical laboratory for the quantum binary adder channel."""

__version__ = "0.1.0"
