"""Exact computations with homotopy Gerstenhaber structures on Hochschild cochains."""

__version__ = "0.1.0"
