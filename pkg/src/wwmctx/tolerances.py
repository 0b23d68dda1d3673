"""Absolute tolerances shared across the package (all compared values are O(1))."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    hermitian: float = 1e-12
    projector: float = 1e-12
    normalization: float = 1e-12
    eig_residual: float = 1e-10
    jacobi_offdiag: float = 1e-14
    jacobi_max_sweeps: int = 100
    roundtrip: float = 1e-12
    oracle: float = 1e-10
    orthogonality: float = 1e-12
    verdict_margin: float = 1e-9
    golden: float = 1e-9
    basis_fit: float = 1e-9
    grid_exact: float = 1e-12


TOL = Tolerances()
