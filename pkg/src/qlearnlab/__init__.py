"""Simulation toolkit for quantum-enhanced versus conventional learning experiments."""

__version__ = "0.1.0"
