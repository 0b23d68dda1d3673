"""Discrete Weyl-Wigner calculus on ``(Z_d)^{2n}`` for odd ``d``.

Symbols are stored as dense ``(d**n, d**n)`` grids indexed ``[x_p, x_q]``
(mixed radix, register 0 most significant), which is the orientation of the
printed tables: rows are momenta, columns positions.

Observable symbols are ``W_A(x) = tr(A R(x))`` so basis projectors map to
{0, 1} indicator functions; state symbols carry an extra ``d**-n`` so they
sum to one.  The pairing ``sum_x W_A(x) W_rho(x)`` is then ``tr(A rho)``.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .dense import DimensionError, as_operator, density, is_hermitian
from .tolerances import TOL

Normalization = Literal["observable", "state"]


class EvenDimensionError(ValueError):
    """Raised for even ``d``; qubits go through :mod:`wwmctx.grassmann`."""


def _check_odd(d: int) -> None:
    if not isinstance(d, (int, np.integer)) or d < 3 or d % 2 == 0:
        raise EvenDimensionError(f"odd-d WWM needs an odd dimension >= 3, got {d!r}")


def half(d: int) -> int:
    """The residue of 1/2 mod ``d``, i.e. ``(d + 1) / 2``."""
    return pow(2, -1, d)


@dataclass(frozen=True)
class PhasePoint:
    p: tuple[int, ...]
    q: tuple[int, ...]
    d: int

    def __post_init__(self):
        _check_odd(self.d)
        p = tuple(int(v) % self.d for v in np.atleast_1d(self.p))
        q = tuple(int(v) % self.d for v in np.atleast_1d(self.q))
        if len(p) != len(q) or not p:
            raise ValueError("p and q must be non-empty tuples of equal length")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @property
    def n(self) -> int:
        return len(self.p)

    @property
    def index(self) -> tuple[int, int]:
        return _radix(self.p, self.d), _radix(self.q, self.d)

    @classmethod
    def from_index(cls, ip: int, iq: int, d: int, n: int) -> "PhasePoint":
        return cls(_digits(ip, d, n), _digits(iq, d, n), d)


def _radix(digits, d: int) -> int:
    out = 0
    for v in digits:
        out = out * d + v
    return out


def _digits(index: int, d: int, n: int) -> tuple[int, ...]:
    out = []
    for _ in range(n):
        index, r = divmod(index, d)
        out.append(r)
    return tuple(reversed(out))


def pairing(a: PhasePoint, b: PhasePoint) -> int:
    """Symplectic form ``a_q . b_p - a_p . b_q`` mod ``d``."""
    d = a.d
    return (sum(x * y for x, y in zip(a.q, b.p)) - sum(x * y for x, y in zip(a.p, b.q))) % d


@dataclass
class WeylSymbolOdd:
    d: int
    n: int
    values: np.ndarray
    normalization: Normalization = "observable"

    def __post_init__(self):
        _check_odd(self.d)
        size = self.d**self.n
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != (size, size):
            raise DimensionError(f"symbol grid must be {size}x{size}, got {self.values.shape}")
        if self.normalization not in ("observable", "state"):
            raise ValueError(f"unknown normalization {self.normalization!r}")

    def __getitem__(self, x: PhasePoint) -> complex:
        return complex(self.values[x.index])

    def _like(self, values, normalization=None) -> "WeylSymbolOdd":
        return WeylSymbolOdd(self.d, self.n, values, normalization or self.normalization)

    def _check(self, other: "WeylSymbolOdd") -> None:
        if not isinstance(other, WeylSymbolOdd) or (other.d, other.n) != (self.d, self.n):
            raise DimensionError("symbols live on different phase spaces")

    def __add__(self, other):
        self._check(other)
        if other.normalization != self.normalization:
            raise ValueError("cannot add symbols with different normalizations")
        return self._like(self.values + other.values)

    def __sub__(self, other):
        self._check(other)
        if other.normalization != self.normalization:
            raise ValueError("cannot subtract symbols with different normalizations")
        return self._like(self.values - other.values)

    def __mul__(self, scalar):
        return self._like(self.values * scalar)

    __rmul__ = __mul__

    @property
    def real_grid(self) -> np.ndarray:
        return self.values.real.copy()

    def is_real(self, tol: float = TOL.hermitian) -> bool:
        return bool(np.max(np.abs(self.values.imag)) <= tol)


def boost_shift(d: int, exponent_p: int, exponent_q: int) -> np.ndarray:
    """``Z**exponent_p @ X**exponent_q`` on a single register."""
    _check_odd(d)
    omega = np.exp(2j * np.pi / d)
    k = np.arange(d)
    z = np.diag(omega ** ((exponent_p * k) % d))
    x = np.roll(np.eye(d, dtype=complex), exponent_q % d, axis=0)
    return z @ x


def _single_translation(d: int, lp: int, lq: int) -> np.ndarray:
    omega = np.exp(2j * np.pi / d)
    return omega ** ((-lp * lq * half(d)) % d) * boost_shift(d, lp, lq)


@functools.lru_cache(maxsize=None)
def _single_reflections(d: int) -> np.ndarray:
    omega = np.exp(2j * np.pi / d)
    table = np.zeros((d, d, d, d), dtype=complex)
    for xp, xq in itertools.product(range(d), repeat=2):
        acc = np.zeros((d, d), dtype=complex)
        for a, b in itertools.product(range(d), repeat=2):
            acc += omega ** ((b * xp - a * xq) % d) * _single_translation(d, a, b)
        table[xp, xq] = acc / d
    table.setflags(write=False)
    return table


def _kron_all(mats) -> np.ndarray:
    return functools.reduce(np.kron, mats)


def translation_op(lam: PhasePoint) -> np.ndarray:
    """Displacement ``T(lam)``, the tensor product of single-register translations."""
    return _kron_all([_single_translation(lam.d, a, b) for a, b in zip(lam.p, lam.q)])


def reflection_op(x: PhasePoint) -> np.ndarray:
    """Phase-point operator ``R(x)``: Hermitian, squares to one, unit trace."""
    table = _single_reflections(x.d)
    return _kron_all([table[a, b] for a, b in zip(x.p, x.q)])


@functools.lru_cache(maxsize=16)
def reflection_table(d: int, n: int) -> np.ndarray:
    """All ``R(x)`` as an array of shape ``(d**n, d**n, d**n, d**n)`` indexed ``[p, q]``."""
    _check_odd(d)
    size = d**n
    out = np.zeros((size, size, size, size), dtype=complex)
    for ip, iq in itertools.product(range(size), repeat=2):
        out[ip, iq] = reflection_op(PhasePoint.from_index(ip, iq, d, n))
    out.setflags(write=False)
    return out


def registers_for(dim: int, d: int) -> int:
    n, rest = 0, dim
    while rest > 1 and rest % d == 0:
        rest //= d
        n += 1
    if rest != 1 or n == 0:
        raise DimensionError(f"dimension {dim} is not a power of {d}")
    return n


def weyl_observable(a, d: int, n: int | None = None) -> WeylSymbolOdd:
    m = as_operator(a)
    _check_odd(d)
    n = registers_for(m.shape[0], d) if n is None else n
    if m.shape[0] != d**n:
        raise DimensionError(f"operator dim {m.shape[0]} != {d}**{n}")
    vals = np.einsum("ij,pqji->pq", m, reflection_table(d, n))
    return WeylSymbolOdd(d, n, vals, "observable")


def wigner_state(rho, d: int, n: int | None = None) -> WeylSymbolOdd:
    """Wigner function of a density matrix (a 1-D input is taken as a pure state)."""
    m = np.asarray(rho, dtype=complex)
    if m.ndim == 1:
        m = density(m)
    m = as_operator(m)
    if not is_hermitian(m) or abs(np.trace(m) - 1) > TOL.normalization:
        raise ValueError("wigner_state needs a Hermitian, unit-trace density matrix")
    if np.min(np.linalg.eigvalsh(m)) < -1e-10:
        raise ValueError("wigner_state needs a positive semidefinite density matrix")
    w = weyl_observable(m, d, n)
    return WeylSymbolOdd(d, w.n, w.values / d**w.n, "state")


def inverse_weyl(w: WeylSymbolOdd, normalization: Normalization | None = None) -> np.ndarray:
    """Operator whose symbol is ``w``.

    ``normalization`` defaults to the tag carried by ``w``; passing a
    different one reads the grid under that convention instead.
    """
    norm = normalization or w.normalization
    if norm not in ("observable", "state"):
        raise ValueError(f"unknown normalization {norm!r}")
    table = reflection_table(w.d, w.n)
    op = np.einsum("pq,pqij->ij", w.values, table)
    return op / w.d**w.n if norm == "observable" else op


def phase_space_expectation(w_a: WeylSymbolOdd, w_rho: WeylSymbolOdd):
    """``sum_x W_A(x) W_rho(x)`` for an observable symbol and a state symbol."""
    w_a._check(w_rho)
    if w_a.normalization != "observable" or w_rho.normalization != "state":
        raise ValueError("expectation pairs an observable symbol with a state symbol")
    val = complex(np.sum(w_a.values * w_rho.values))
    return val.real if abs(val.imag) <= TOL.oracle else val


def marginal(w_rho: WeylSymbolOdd, axis: Literal["p", "q"]) -> np.ndarray:
    """Momentum (``"p"``) or position (``"q"``) marginal of a state symbol."""
    if w_rho.normalization != "state":
        raise ValueError("marginals are taken of state symbols")
    if axis == "p":
        return np.sum(w_rho.values, axis=1).real
    if axis == "q":
        return np.sum(w_rho.values, axis=0).real
    raise ValueError(f"axis must be 'p' or 'q', got {axis!r}")
