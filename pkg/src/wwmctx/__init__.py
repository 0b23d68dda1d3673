"""Discrete Wigner-Weyl-Moyal tools for measurement-contextuality witnesses."""

__version__ = "0.1.0"
