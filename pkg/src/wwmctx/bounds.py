"""Exhaustive enumeration of noncontextual value assignments.

An assignment is encoded as an integer whose bit ``N-1-k`` holds variable
``k``, so integer order is lexicographic order on the bit tuple.  Bit 0 means
value 0 in the ``"01"`` domain and value +1 in the ``"pm1"`` domain.

Only deterministic assignments are enumerated: a maximum over mixtures of
deterministic assignments is attained at one of them, since the objectives
are linear in the mixture weights.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Literal, NamedTuple

import numpy as np

MAX_ENUMERATION = 1 << 24
CHUNK = 1 << 16

Domain = Literal["01", "pm1"]


class EnumerationTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class AssignmentProblem:
    """Variables, constraints and a quadratic objective over one domain.

    ``objective(a) = constant + sum_i linear[i] a_i + sum_(i, j, w) w a_i a_j``
    plus ``sum_(c, idx) c prod_(k in idx) a_k`` for the ``polynomial`` terms.
    ``product_constraints`` entries ``(indices, sign)`` require the product of
    the (+1/-1 valued) variables to equal ``sign``.
    """

    variables: tuple[str, ...]
    domain: Domain = "01"
    exclusive_edges: tuple[tuple[int, int], ...] = ()
    basis_cliques: tuple[tuple[int, ...], ...] = ()
    cardinality: int | None = None
    product_constraints: tuple[tuple[tuple[int, ...], int], ...] = ()
    linear: tuple[float, ...] | None = None
    quadratic: tuple[tuple[int, int, float], ...] = ()
    polynomial: tuple[tuple[float, tuple[int, ...]], ...] = ()
    constant: float = 0.0
    labels: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        n = len(self.variables)
        if n == 0:
            raise ValueError("assignment problem needs at least one variable")
        if self.domain not in ("01", "pm1"):
            raise ValueError(f"unknown domain {self.domain!r}")
        for e in self.exclusive_edges:
            _check_indices(e, n)
        for c in self.basis_cliques:
            _check_indices(c, n)
        for idx, sign in self.product_constraints:
            _check_indices(idx, n)
            if sign not in (1, -1):
                raise ValueError("product constraint sign must be +1 or -1")
        if self.product_constraints and self.domain != "pm1":
            raise ValueError("product constraints need the pm1 domain")
        if (self.exclusive_edges or self.basis_cliques or self.cardinality is not None) and self.domain != "01":
            raise ValueError("exclusivity, basis and cardinality constraints need the 01 domain")
        if self.linear is not None and len(self.linear) != n:
            raise ValueError("linear weights must match the variables")
        for i, j, _ in self.quadratic:
            _check_indices((i, j), n)
        for _, idx in self.polynomial:
            _check_indices(idx, n)

    @property
    def size(self) -> int:
        return 1 << len(self.variables)

    def with_objective(self, linear=None, quadratic=(), polynomial=(), constant=0.0) -> "AssignmentProblem":
        return replace(self, linear=None if linear is None else tuple(linear),
                       quadratic=tuple(quadratic),
                       polynomial=tuple((c, tuple(idx)) for c, idx in polynomial),
                       constant=constant)

    def with_constraints(self, **changes) -> "AssignmentProblem":
        return replace(self, **changes)


def _check_indices(idx, n):
    for i in idx:
        if not 0 <= int(i) < n:
            raise ValueError(f"variable index {i} out of range for {n} variables")


class MaxResult(NamedTuple):
    value: float
    argmax: list[tuple[int, ...]]


def _values(problem: AssignmentProblem, codes: np.ndarray) -> np.ndarray:
    n = len(problem.variables)
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    bits = (codes[:, None] >> shifts) & 1
    if problem.domain == "01":
        return bits.astype(np.int8)
    return (1 - 2 * bits).astype(np.int8)


def _feasible(problem: AssignmentProblem, a: np.ndarray) -> np.ndarray:
    ok = np.ones(a.shape[0], dtype=bool)
    for i, j in problem.exclusive_edges:
        ok &= ~((a[:, i] == 1) & (a[:, j] == 1))
    for clique in problem.basis_cliques:
        ok &= a[:, list(clique)].sum(axis=1) == 1
    if problem.cardinality is not None:
        ok &= a.sum(axis=1) == problem.cardinality
    for idx, sign in problem.product_constraints:
        ok &= np.prod(a[:, list(idx)], axis=1) == sign
    return ok


def _objective(problem: AssignmentProblem, a: np.ndarray) -> np.ndarray:
    af = a.astype(float)
    out = np.full(a.shape[0], float(problem.constant))
    if problem.linear is not None:
        out += af @ np.asarray(problem.linear, dtype=float)
    for i, j, w in problem.quadratic:
        out += w * af[:, i] * af[:, j]
    for c, idx in problem.polynomial:
        out += c * np.prod(af[:, list(idx)], axis=1)
    return out


def evaluate(problem: AssignmentProblem, assignment) -> float:
    """Objective of one assignment given as a value tuple (constraints ignored)."""
    a = np.asarray(assignment, dtype=np.int8).reshape(1, -1)
    if a.shape[1] != len(problem.variables):
        raise ValueError("assignment length does not match the variables")
    return float(_objective(problem, a)[0])


def is_feasible(problem: AssignmentProblem, assignment) -> bool:
    a = np.asarray(assignment, dtype=np.int8).reshape(1, -1)
    return bool(_feasible(problem, a)[0])


def _guard(problem: AssignmentProblem) -> None:
    if problem.size > MAX_ENUMERATION:
        raise EnumerationTooLarge(
            f"{problem.size} assignments exceed the enumeration limit {MAX_ENUMERATION}"
        )


def _threads(threads: int | None) -> int:
    if threads is not None:
        return max(1, int(threads))
    env = os.environ.get("CTX_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ValueError(f"CTX_THREADS must be an integer, got {env!r}") from None
    return 1


def _chunks(size: int):
    return [(lo, min(lo + CHUNK, size)) for lo in range(0, size, CHUNK)]


def _map_chunks(fn, problem: AssignmentProblem, threads: int | None):
    chunks = _chunks(problem.size)
    workers = _threads(threads)
    if workers == 1 or len(chunks) == 1:
        return [fn(lo, hi) for lo, hi in chunks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        # map preserves chunk order, which keeps the reduction deterministic
        return list(pool.map(lambda c: fn(*c), chunks))


def _to_tuple(problem, code: int) -> tuple[int, ...]:
    return tuple(int(v) for v in _values(problem, np.array([code], dtype=np.int64))[0])


def max_objective(problem: AssignmentProblem, *, threads: int | None = None,
                  tol: float = 1e-9) -> MaxResult:
    """Exact maximum over feasible assignments with all maximizers in lexicographic order.

    Values within ``tol`` of the maximum count as ties.  An infeasible
    problem gives ``(-inf, [])``.
    """
    _guard(problem)

    def chunk(lo, hi):
        codes = np.arange(lo, hi, dtype=np.int64)
        a = _values(problem, codes)
        ok = _feasible(problem, a)
        if not ok.any():
            return -math.inf, np.empty(0, dtype=np.int64)
        vals = np.where(ok, _objective(problem, a), -np.inf)
        best = vals.max()
        return float(best), codes[vals >= best - tol]

    parts = _map_chunks(chunk, problem, threads)
    best = max(p[0] for p in parts)
    if best == -math.inf:
        return MaxResult(-math.inf, [])
    winners: list[int] = []
    for value, codes in parts:
        if value >= best - tol:
            winners.extend(int(c) for c in codes)
    # re-filter against the global best so ties are judged consistently
    a = _values(problem, np.array(winners, dtype=np.int64))
    vals = _objective(problem, a)
    best = float(vals.max())
    keep = [c for c, v in zip(winners, vals) if v >= best - tol]
    return MaxResult(best, [_to_tuple(problem, c) for c in sorted(keep)])


def count_satisfying(problem: AssignmentProblem, *, threads: int | None = None) -> int:
    _guard(problem)

    def chunk(lo, hi):
        a = _values(problem, np.arange(lo, hi, dtype=np.int64))
        return int(_feasible(problem, a).sum())

    return sum(_map_chunks(chunk, problem, threads))


def pair_objective_max(problem: AssignmentProblem, pairs, *, threads: int | None = None) -> float:
    """Maximum of ``sum_(i, j) a_i a_j`` over the given ordered pairs."""
    pairs = list(pairs)
    if not pairs:
        raise ValueError("pair list is empty")
    return max_objective(problem.with_objective(quadratic=[(i, j, 1.0) for i, j in pairs]),
                         threads=threads).value


@dataclass(frozen=True)
class BoundCertificate:
    witness: str
    value: float
    assignment: tuple[int, ...] | None
    n_maximizers: int
    space: int

    def to_dict(self) -> dict:
        return {
            "witness": self.witness,
            "classical_bound": self.value,
            "argmax": list(self.assignment) if self.assignment is not None else None,
            "n_maximizers": self.n_maximizers,
            "assignments_enumerated": self.space,
        }


def certificate(name: str, problem: AssignmentProblem, *, threads: int | None = None) -> BoundCertificate:
    res = max_objective(problem, threads=threads)
    return BoundCertificate(name, res.value, res.argmax[0] if res.argmax else None,
                            len(res.argmax), problem.size)
