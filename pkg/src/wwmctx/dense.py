"""Dense complex linear algebra used as the ground-truth oracle.

Operators are plain ``numpy`` complex arrays of shape ``(dim, dim)`` and pure
states are 1-D complex arrays.  Everything here is a pure function.
"""

from __future__ import annotations

import numpy as np

from .tolerances import TOL


class DimensionError(ValueError):
    pass


class NotHermitianError(ValueError):
    pass


def as_operator(a) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise DimensionError(f"operator must be a non-empty square matrix, got shape {m.shape}")
    return m


def as_state(v, *, normalize: bool = False) -> np.ndarray:
    """Return ``v`` as a complex state vector, checking (or enforcing) unit norm."""
    psi = np.asarray(v, dtype=complex).reshape(-1)
    norm = np.linalg.norm(psi)
    if norm == 0:
        raise ValueError("zero vector is not a state")
    if normalize:
        return psi / norm
    if abs(norm**2 - 1.0) > TOL.normalization:
        raise ValueError(f"state is not normalized (norm^2 = {norm**2!r})")
    return psi


def is_hermitian(a, tol: float = TOL.hermitian) -> bool:
    m = as_operator(a)
    return bool(np.max(np.abs(m - m.conj().T)) <= tol)


def is_projector(a, tol: float = TOL.projector) -> bool:
    m = as_operator(a)
    if not is_hermitian(m, tol):
        return False
    if np.max(np.abs(m @ m - m)) > tol:
        return False
    rank = np.linalg.matrix_rank(m, tol=1e-8)
    return abs(np.trace(m) - rank) <= tol


def density(psi) -> np.ndarray:
    psi = as_state(psi)
    return np.outer(psi, psi.conj())


def expectation_trace(a, psi) -> complex:
    """``<psi|A|psi>`` for a normalized ``psi``."""
    m = as_operator(a)
    psi = as_state(psi)
    if m.shape[0] != psi.shape[0]:
        raise DimensionError(f"operator dim {m.shape[0]} != state dim {psi.shape[0]}")
    return complex(np.vdot(psi, m @ psi))


def projector_from_ray(v) -> np.ndarray:
    """Rank-1 projector ``|v><v| / <v|v>``; ``v`` need not be normalized."""
    v = np.asarray(v, dtype=complex).reshape(-1)
    nrm2 = float(np.vdot(v, v).real)
    if nrm2 == 0.0:
        raise ValueError("cannot build a projector from the zero vector")
    return np.outer(v, v.conj()) / nrm2


def _offdiag_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.linalg.norm(off))


def jacobi_eigh(a, *, tol: float = TOL.jacobi_offdiag, max_sweeps: int = TOL.jacobi_max_sweeps):
    """Cyclic Jacobi diagonalization of a Hermitian matrix.

    Returns unsorted ``(eigenvalues, eigenvectors-as-columns)``.  Convergence is
    declared once the off-diagonal Frobenius norm drops below
    ``tol * max(1, ||A||_F)``.
    """
    m = as_operator(a).copy()
    if not is_hermitian(m):
        raise NotHermitianError("Jacobi eigensolver requires a Hermitian matrix")
    m = 0.5 * (m + m.conj().T)
    n = m.shape[0]
    v = np.eye(n, dtype=complex)
    scale = max(1.0, float(np.linalg.norm(m)))
    for _ in range(max_sweeps):
        if _offdiag_norm(m) < tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = m[p, q]
                mag = abs(apq)
                if mag < 1e-300:
                    continue
                phase = apq / mag
                tau = (m[q, q].real - m[p, p].real) / (2.0 * mag)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                j = np.eye(n, dtype=complex)
                j[p, p] = c
                j[p, q] = s
                j[q, p] = -s * np.conj(phase)
                j[q, q] = c * np.conj(phase)
                m = j.conj().T @ m @ j
                v = v @ j
    else:
        if _offdiag_norm(m) >= tol * scale:
            raise RuntimeError("Jacobi iteration did not converge")
    return np.real(np.diag(m)).copy(), v


def _canonical_phase(vec: np.ndarray) -> np.ndarray:
    for comp in vec:
        if abs(comp) > 1e-8:
            return vec * (abs(comp) / comp)
    return vec


def _lex_key(vec: np.ndarray) -> tuple:
    return tuple(x for c in np.round(vec, 9) for x in (c.real + 0.0, c.imag + 0.0))


def eig_hermitian(a, *, tie_tol: float = 1e-9):
    """Eigenvalues (descending) and orthonormal eigenvectors of a Hermitian matrix.

    Each eigenvector is phase-fixed so its first non-negligible component is
    real positive.  Near-degenerate eigenvalues (within ``tie_tol``) are ordered
    lexicographically on the rounded eigenvector components.
    """
    vals, vecs = jacobi_eigh(a)
    cols = [_canonical_phase(vecs[:, k] / np.linalg.norm(vecs[:, k])) for k in range(len(vals))]
    order = sorted(range(len(vals)), key=lambda k: -vals[k])
    out: list[int] = []
    i = 0
    while i < len(order):
        j = i + 1
        while j < len(order) and abs(vals[order[j]] - vals[order[i]]) < tie_tol:
            j += 1
        out.extend(sorted(order[i:j], key=lambda k: _lex_key(cols[k])))
        i = j
    return [float(vals[k]) for k in out], [cols[k] for k in out]
