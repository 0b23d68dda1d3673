"""Order-hbar^0 / correction split of product symbols, and contextuality verdicts.

The hbar^0 part of a product symbol is the pointwise product of the factor
symbols.  For odd ``d`` two scalings are offered:

``"wigner"`` (default)
    multiply the Wigner-normalized factor symbols ``W_A / d**n`` and express
    the result back in observable units, i.e. ``d**(-n(k-1)) * prod_k W_{A_k}``
    for ``k`` factors.  This is the scaling behind the published hbar^0 column
    and the 16/27 value.
``"observable"``
    the plain pointwise product of observable symbols, under which the
    idempotent indicator ``W_P`` of a basis projector satisfies ``W_P * W_P = W_P``.

Qubit symbols have a single scaling: the iterated Grassmann product.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Literal, Sequence, Union

import numpy as np

from . import grassmann as gr
from . import odd
from .dense import DimensionError, as_operator, as_state, density
from .tolerances import TOL

Symbol = Union[odd.WeylSymbolOdd, gr.GrassmannPoly]
Kind = Literal["odd", "qubit"]
Scale = Literal["wigner", "observable"]

CONTEXTUAL = "contextual"
NOT_CONTEXTUAL = "not-contextual-under-this-witness"


class SymbolKindError(TypeError):
    pass


@dataclass
class HbarSplit:
    exact: Symbol
    h0: Symbol
    correction: Symbol = None

    def __post_init__(self):
        if self.correction is None:
            self.correction = self.exact - self.h0
        diff = self.exact - (self.h0 + self.correction)
        bad = (np.max(np.abs(diff.values)) if isinstance(diff, odd.WeylSymbolOdd)
               else max((abs(c) for c in diff.terms.values()), default=0.0))
        if bad > 1e-12:
            raise ValueError(f"split is inconsistent: exact - h0 - correction = {bad:.3g}")

    def __add__(self, other: "HbarSplit") -> "HbarSplit":
        return HbarSplit(self.exact + other.exact, self.h0 + other.h0, self.correction + other.correction)

    def scaled(self, c: float) -> "HbarSplit":
        return HbarSplit(self.exact * c, self.h0 * c, self.correction * c)

    @property
    def kind(self) -> Kind:
        return "odd" if isinstance(self.exact, odd.WeylSymbolOdd) else "qubit"

    def expectations(self, state, conv: gr.QubitWeylConvention | None = None) -> tuple[float, float, float]:
        """(exact, h0, correction) phase-space averages against a state."""
        return (symbol_expectation(self.exact, state, conv),
                symbol_expectation(self.h0, state, conv),
                symbol_expectation(self.correction, state, conv))


def _rho(state) -> np.ndarray:
    m = np.asarray(state, dtype=complex)
    return density(as_state(m)) if m.ndim == 1 else as_operator(m)


def symbol_expectation(sym: Symbol, state, conv: gr.QubitWeylConvention | None = None):
    """Average of an operator symbol against a state (vector or density matrix)."""
    rho = _rho(state)
    if isinstance(sym, odd.WeylSymbolOdd):
        return odd.phase_space_expectation(sym, odd.wigner_state(rho, sym.d, sym.n))
    conv = conv or gr.QubitWeylConvention.fitted()
    return gr.grassmann_expectation(sym, gr.dual_state_symbol(rho, conv), conv)


def h0_product(symbols: Sequence[Symbol], scale: Scale = "wigner") -> Symbol:
    """Iterated pointwise product of factor symbols (the Groenewold leading term)."""
    symbols = list(symbols)
    if len(symbols) < 2:
        raise ValueError("h0_product needs at least two symbols")
    if scale not in ("wigner", "observable"):
        raise ValueError(f"unknown scale {scale!r}")
    first = symbols[0]
    if isinstance(first, odd.WeylSymbolOdd):
        if not all(isinstance(s, odd.WeylSymbolOdd) for s in symbols):
            raise SymbolKindError("cannot mix odd-d and Grassmann symbols")
        for s in symbols[1:]:
            first._check(s)
        if any(s.normalization != "observable" for s in symbols):
            raise ValueError("h0_product takes observable-normalized symbols")
        vals = functools.reduce(np.multiply, [s.values for s in symbols])
        if scale == "wigner":
            vals = vals / float(first.d ** first.n) ** (len(symbols) - 1)
        return odd.WeylSymbolOdd(first.d, first.n, vals, "observable")
    if isinstance(first, gr.GrassmannPoly):
        if not all(isinstance(s, gr.GrassmannPoly) for s in symbols):
            raise SymbolKindError("cannot mix odd-d and Grassmann symbols")
        return functools.reduce(gr.g_mul, symbols)
    raise SymbolKindError(f"not a Weyl symbol: {type(first).__name__}")


def infer_odd_d(dim: int) -> int:
    """Smallest odd prime ``d`` with ``dim`` a power of ``d``."""
    for p in range(3, dim + 1, 2):
        if all(p % k for k in range(3, int(p**0.5) + 1, 2)) and dim % p == 0:
            odd.registers_for(dim, p)
            return p
    raise DimensionError(f"dimension {dim} is not a power of an odd prime")


@dataclass(frozen=True)
class SymbolMap:
    """Operator -> symbol map for one pipeline."""

    kind: Kind
    d: int | None = None
    conv: gr.QubitWeylConvention = field(default_factory=gr.QubitWeylConvention.fitted)

    @classmethod
    def for_dimension(cls, dim: int, kind: Kind | None = None, d: int | None = None,
                      conv: gr.QubitWeylConvention | None = None) -> "SymbolMap":
        if kind is None:
            kind = "qubit" if dim & (dim - 1) == 0 else "odd"
        if kind == "odd":
            d = d or infer_odd_d(dim)
            odd.registers_for(dim, d)
            return cls("odd", d)
        if kind != "qubit":
            raise ValueError(f"unknown kind {kind!r}")
        if dim < 2 or dim & (dim - 1):
            raise DimensionError(f"dimension {dim} is not a power of 2")
        return cls("qubit", 2, conv or gr.QubitWeylConvention.fitted())

    def symbol(self, a) -> Symbol:
        if self.kind == "odd":
            return odd.weyl_observable(a, self.d)
        return gr.qubit_weyl(a, self.conv)


def decompose_chain(operators, kind: Kind | None = None, *, d: int | None = None,
                    conv: gr.QubitWeylConvention | None = None, scale: Scale = "wigner") -> HbarSplit:
    """Split the symbol of ``A_1 A_2 ... A_k``; a single factor has no correction."""
    ops = [as_operator(a) for a in operators]
    if not ops:
        raise ValueError("empty operator chain")
    dim = ops[0].shape[0]
    if any(a.shape != ops[0].shape for a in ops):
        raise DimensionError("operators in a product must share one dimension")
    smap = SymbolMap.for_dimension(dim, kind, d, conv)
    exact = smap.symbol(functools.reduce(np.matmul, ops))
    if len(ops) == 1:
        return HbarSplit(exact, exact)
    return HbarSplit(exact, h0_product([smap.symbol(a) for a in ops], scale))


def decompose_product(a, b, kind: Kind | None = None, *, d: int | None = None,
                      conv: gr.QubitWeylConvention | None = None, scale: Scale = "wigner") -> HbarSplit:
    return decompose_chain([a, b], kind, d=d, conv=conv, scale=scale)


def witness_split(pairs, coefficients=None, kind: Kind | None = None, *, d: int | None = None,
                  conv: gr.QubitWeylConvention | None = None, scale: Scale = "wigner") -> HbarSplit:
    """Sum of chain splits, optionally weighted, over a list of operator tuples."""
    pairs = [tuple(p) for p in pairs]
    if not pairs:
        raise ValueError("witness_split needs a non-empty list of products")
    coefficients = [1.0] * len(pairs) if coefficients is None else list(coefficients)
    if len(coefficients) != len(pairs):
        raise ValueError("one coefficient per product is required")
    total = None
    for c, chain in zip(coefficients, pairs):
        part = decompose_chain(chain, kind, d=d, conv=conv, scale=scale).scaled(c)
        total = part if total is None else total + part
    return total


@dataclass(frozen=True)
class ContextualityReport:
    state_label: str
    witness: str
    exact_expectation: float
    h0_contribution: float
    correction_contribution: float
    classical_bound: float
    verdict: str
    h0_exceeds_bound: bool

    def __post_init__(self):
        if abs(self.exact_expectation - self.h0_contribution - self.correction_contribution) > 1e-10:
            raise ValueError("exact != h0 + correction in contextuality report")

    @property
    def contextual(self) -> bool:
        return self.verdict == CONTEXTUAL

    def to_dict(self) -> dict:
        return {
            "state": self.state_label,
            "witness": self.witness,
            "exact": self.exact_expectation,
            "h0": self.h0_contribution,
            "correction": self.correction_contribution,
            "classical_bound": self.classical_bound,
            "verdict": self.verdict,
            "h0_exceeds_bound": self.h0_exceeds_bound,
        }


def verdict_for(exact: float, bound: float) -> str:
    return CONTEXTUAL if exact > bound + TOL.verdict_margin else NOT_CONTEXTUAL


def _real(x) -> float:
    x = complex(x)
    if abs(x.imag) > 1e-9:
        raise ValueError(f"expectation of a Hermitian witness has imaginary part {x.imag:.3g}")
    return x.real


def contextuality_report(psi, witness, *, which: str | None = None, label: str = "state",
                         scale: Scale = "wigner", split: HbarSplit | None = None) -> ContextualityReport:
    """Exact, hbar^0 and correction expectations of a witness and the verdict.

    ``witness`` is a construction (its primary witness is used unless
    ``which`` names another one) or a witness together with ``operators``.
    A precomputed ``split`` skips rebuilding the witness symbols.
    """
    construction = witness
    w = construction.witness(which)
    rho = _rho(psi)
    if rho.shape[0] != construction.dimension:
        raise DimensionError(f"state dim {rho.shape[0]} != construction dim {construction.dimension}")
    if split is None:
        split = construction.split(w.name, scale=scale)
    conv = construction.symbol_map().conv
    exact, h0, corr = (_real(v) for v in split.expectations(rho, conv))
    return ContextualityReport(
        state_label=label,
        witness=w.name,
        exact_expectation=exact,
        h0_contribution=h0,
        correction_contribution=corr,
        classical_bound=w.classical_bound,
        verdict=verdict_for(exact, w.classical_bound),
        h0_exceeds_bound=h0 > w.classical_bound + TOL.verdict_margin,
    )
