"""Simulation and exact checks for random multiplicative functions."""

__version__ = "0.1.0"
