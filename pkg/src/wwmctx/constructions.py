"""Peres-Mermin square, KCSB pentagon and the Yu-Oh 13-ray set.

Each construction is a :class:`WitnessConstruction`: a list of labeled
operators, one or more witnesses (weighted sums of operator products) each
paired with the classical assignment problem that bounds it, an
exclusivity/compatibility graph and a family of test states.
"""

from __future__ import annotations

import copy
import functools
import itertools
import math
from dataclasses import dataclass, field

import networkx as nx
import numpy as np
from scipy.optimize import least_squares

from . import bounds, golden, hbar, odd
from .dense import eig_hermitian, projector_from_ray
from .grassmann import pauli_string
from .tolerances import TOL


class BasisFitError(RuntimeError):
    """No basis convention reproduces the published KCSB tables."""


@dataclass(frozen=True)
class Witness:
    """``sum_t coef_t * prod(operators[i] for i in chain_t)`` with its classical model."""

    name: str
    terms: tuple[tuple[float, tuple[int, ...]], ...]
    problem: bounds.AssignmentProblem
    classical_bound: float
    quantum_bound: float
    description: str = ""

    @property
    def products_only(self) -> bool:
        """True when every term is a product of at least two operators."""
        return all(len(chain) >= 2 for _, chain in self.terms)

    def operator(self, operators) -> np.ndarray:
        mats = [np.asarray(m, dtype=complex) for m in operators]
        out = np.zeros_like(mats[0])
        for c, chain in self.terms:
            out = out + c * functools.reduce(np.matmul, [mats[i] for i in chain])
        return out


@dataclass(frozen=True)
class OrthogonalityGraph:
    labels: tuple[str, ...]
    adjacency: np.ndarray
    basis_cliques: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        a = np.asarray(self.adjacency, dtype=bool)
        if a.shape != (len(self.labels),) * 2 or (a != a.T).any() or a.diagonal().any():
            raise ValueError("adjacency must be symmetric with a zero diagonal")
        a.setflags(write=False)
        object.__setattr__(self, "adjacency", a)

    @property
    def edges(self) -> list[tuple[int, int]]:
        n = len(self.labels)
        return [(i, j) for i in range(n) for j in range(i + 1, n) if self.adjacency[i, j]]

    def ordered_edges(self) -> list[tuple[int, int]]:
        n = len(self.labels)
        return [(i, j) for i in range(n) for j in range(n) if self.adjacency[i, j]]

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(len(self.labels)))
        g.add_edges_from(self.edges)
        return g

    @classmethod
    def from_rays(cls, rays, labels, tol: float = TOL.orthogonality) -> "OrthogonalityGraph":
        vecs = [np.asarray(r, dtype=complex) / np.linalg.norm(r) for r in rays]
        n = len(vecs)
        adj = np.zeros((n, n), dtype=bool)
        for i, j in itertools.combinations(range(n), 2):
            adj[i, j] = adj[j, i] = abs(np.vdot(vecs[i], vecs[j])) < tol
        dim = len(vecs[0])
        g = nx.Graph()
        g.add_nodes_from(range(n))
        g.add_edges_from(zip(*np.nonzero(np.triu(adj))))
        cliques = sorted(tuple(sorted(int(v) for v in c)) for c in nx.find_cliques(g) if len(c) == dim)
        return cls(tuple(labels), adj, tuple(cliques))


@dataclass(frozen=True)
class WitnessConstruction:
    name: str
    dimension: int
    kind: str
    labels: tuple[str, ...]
    operators: tuple[np.ndarray, ...]
    witnesses: dict
    primary: str
    graph: OrthogonalityGraph
    state_family: tuple[tuple[str, np.ndarray], ...]
    rays: tuple[np.ndarray, ...] | None = None
    metadata: dict = field(default_factory=dict)

    def witness(self, name: str | None = None) -> Witness:
        key = name or self.primary
        if key not in self.witnesses:
            raise KeyError(f"{self.name} has no witness {key!r}; have {sorted(self.witnesses)}")
        return self.witnesses[key]

    @property
    def pair_list(self) -> list[tuple[int, ...]]:
        return [chain for _, chain in self.witness().terms]

    @property
    def classical_bound(self) -> float:
        return self.witness().classical_bound

    @property
    def quantum_bound(self) -> float:
        return self.witness().quantum_bound

    def operator_by_label(self, label: str) -> np.ndarray:
        return self.operators[self.labels.index(label)]

    def witness_operator(self, name: str | None = None) -> np.ndarray:
        return self.witness(name).operator(self.operators)

    def symbol_map(self) -> hbar.SymbolMap:
        return hbar.SymbolMap.for_dimension(self.dimension, self.kind)

    def split(self, name: str | None = None, scale: hbar.Scale = "wigner") -> hbar.HbarSplit:
        w = self.witness(name)
        return _cached_split(self, w.name, scale)

    def check_commutation(self, tol: float = 1e-12) -> list[str]:
        """Problems with the pair/adjacency commutation invariant (empty when fine)."""
        out = []
        for _, chain in self.witness().terms:
            if len(chain) != 2 or chain[0] == chain[1]:
                continue
            i, j = chain
            a, b = self.operators[i], self.operators[j]
            comm = np.max(np.abs(a @ b - b @ a))
            adjacent = i < len(self.graph.labels) and j < len(self.graph.labels) and self.graph.adjacency[i, j]
            if adjacent and comm > tol:
                out.append(f"adjacent pair {chain} does not commute")
            if not adjacent and comm <= tol:
                out.append(f"non-adjacent pair {chain} commutes")
        return out

    def __hash__(self):
        return id(self)

    def __eq__(self, other):
        return self is other


@functools.lru_cache(maxsize=64)
def _cached_split(construction: WitnessConstruction, name: str, scale: str) -> hbar.HbarSplit:
    w = construction.witness(name)
    chains = [[construction.operators[i] for i in chain] for _, chain in w.terms]
    coefs = [c for c, _ in w.terms]
    return hbar.witness_split(chains, coefs, construction.kind, scale=scale)


def make_witness(name, terms, problem, operators, description="") -> Witness:
    """Witness whose classical bound is enumerated and quantum bound is the top eigenvalue."""
    terms = tuple((float(c), tuple(int(i) for i in chain)) for c, chain in terms)
    classical = bounds.max_objective(problem).value
    op = Witness(name, terms, problem, classical, 0.0).operator(operators)
    quantum = eig_hermitian(op)[0][0]
    return Witness(name, terms, problem, float(classical), float(quantum), description)


def _frozen(m) -> np.ndarray:
    a = np.array(m, dtype=complex)
    a.setflags(write=False)
    return a


# ---------------------------------------------------------------------------
# Peres-Mermin


PM_LABELS = ("XI", "IX", "XX", "IZ", "ZI", "ZZ", "XZ", "ZX", "YY")
PM_CONTEXTS = {
    "row1": ((0, 1, 2), 1),
    "row2": ((3, 4, 5), 1),
    "row3": ((6, 7, 8), 1),
    "col1": ((0, 3, 6), 1),
    "col2": ((1, 4, 7), 1),
    "col3": ((2, 5, 8), -1),
}


def pm_problem(flip_third_column: bool = False) -> bounds.AssignmentProblem:
    cons = []
    for name, (idx, sign) in PM_CONTEXTS.items():
        if name == "col3" and flip_third_column:
            sign = -sign
        cons.append((idx, sign))
    return bounds.AssignmentProblem(PM_LABELS, "pm1", product_constraints=tuple(cons))


def pm_states() -> tuple[tuple[str, np.ndarray], ...]:
    s = 1 / math.sqrt(2)
    basis = np.eye(4)
    return (
        ("|00>", basis[0]),
        ("|01>", basis[1]),
        ("|10>", basis[2]),
        ("|11>", basis[3]),
        ("Phi+", np.array([s, 0, 0, s])),
        ("Psi-", np.array([0, s, -s, 0])),
        ("|++>", np.full(4, 0.5)),
    )


@functools.lru_cache(maxsize=1)
def build_peres_mermin() -> WitnessConstruction:
    ops = tuple(_frozen(pauli_string(lab)) for lab in PM_LABELS)
    n = len(ops)
    adj = np.zeros((n, n), dtype=bool)
    for idx, _ in PM_CONTEXTS.values():
        for i, j in itertools.permutations(idx, 2):
            adj[i, j] = True
    graph = OrthogonalityGraph(PM_LABELS, adj, tuple(tuple(sorted(c)) for c, _ in PM_CONTEXTS.values()))
    free = bounds.AssignmentProblem(PM_LABELS, "pm1")
    witnesses = {}
    for name, (idx, sign) in PM_CONTEXTS.items():
        terms = [(sign, idx)]
        witnesses[name] = make_witness(
            name, terms, free.with_objective(polynomial=terms), ops,
            f"signed product of the {name} context",
        )
    terms = [(sign, idx) for idx, sign in PM_CONTEXTS.values()]
    witnesses["pm_sum"] = make_witness(
        "pm_sum", terms, free.with_objective(polynomial=terms), ops,
        "rows plus first two columns minus third column",
    )
    return WitnessConstruction(
        name="peres-mermin", dimension=4, kind="qubit", labels=PM_LABELS, operators=ops,
        witnesses=witnesses, primary="pm_sum", graph=graph, state_family=pm_states(),
        metadata={"contexts": {k: {"indices": list(v[0]), "sign": v[1]} for k, v in PM_CONTEXTS.items()}},
    )


# ---------------------------------------------------------------------------
# KCSB pentagon


def kcsb_seed_vectors() -> list[np.ndarray]:
    c = math.cos(math.pi / 5)
    ct = math.sqrt(c / (1 + c))
    st = math.sqrt(1 - ct * ct)
    return [np.array([ct, st * math.cos(4 * math.pi * j / 5), st * math.sin(4 * math.pi * j / 5)])
            for j in range(1, 6)]


def kcsb_pairs() -> list[tuple[int, int]]:
    """Ordered non-adjacent pairs of the pentagon, grouped by first index."""
    return [(i, (i + s) % 5) for i in range(5) for s in (2, 3)]


def stabilizer_states(d: int) -> list[tuple[str, np.ndarray]]:
    """Basis states then ``sum_k w**(a k^2 + b k)|k>/sqrt(d)`` for ``a, b`` in ``Z_d``."""
    omega = np.exp(2j * np.pi / d)
    out = [(f"e{k}", np.eye(d, dtype=complex)[k]) for k in range(d)]
    k = np.arange(d)
    for a, b in itertools.product(range(d), repeat=2):
        out.append((f"quad({a},{b})", omega ** ((a * k * k + b * k) % d) / math.sqrt(d)))
    return out


def stabilizer_states_qutrit() -> list[tuple[str, np.ndarray]]:
    """The twelve qutrit stabilizer states in the published table order."""
    omega = np.exp(2j * np.pi / 3)
    out = []
    for label, phases in golden.QUTRIT_STATE_ROWS:
        if phases is None:
            out.append((label, np.eye(3, dtype=complex)[int(label[-1]) - 1]))
        else:
            out.append((label, np.array([omega**a for a in phases]) / math.sqrt(3)))
    return out


def _dihedral_labelings() -> list[tuple[int, ...]]:
    out = []
    for rev in (False, True):
        for sh in range(5):
            out.append(tuple((sh - k) % 5 if rev else (sh + k) % 5 for k in range(5)))
    return out


@dataclass(frozen=True)
class KcsbBasisFit:
    angle: float
    reflection: int
    phi3_sign: int
    labeling: tuple[int, ...]
    basis: np.ndarray
    projector_grid_error: float
    table_error: float

    @property
    def projector_grids_match(self) -> bool:
        return self.projector_grid_error <= TOL.basis_fit

    def to_dict(self) -> dict:
        return {
            "doublet_angle": self.angle,
            "reflection": self.reflection,
            "phi3_sign": self.phi3_sign,
            "labeling": list(self.labeling),
            "projector_grid_error": self.projector_grid_error,
            "table_error": self.table_error,
            "projector_grids_match": self.projector_grids_match,
        }


def _basis(t: float, f1, f2, e1, reflection: int, phi3_sign: int) -> np.ndarray:
    phi1 = math.cos(t) * f1 + math.sin(t) * f2
    phi2 = reflection * (-math.sin(t) * f1 + math.cos(t) * f2)
    return np.column_stack([phi1, phi2, phi3_sign * e1])


def _state_grids(projectors, basis) -> np.ndarray:
    table = odd.reflection_table(3, 1)
    mats = np.array([basis.T @ p @ basis for p in projectors])
    return np.einsum("kij,pqji->kpq", mats, table).real / 3.0


def _table_error(projectors, pairs) -> float:
    states = stabilizer_states_qutrit()
    ops = [projector_from_ray(v) for v in projectors]
    split = hbar.witness_split([(ops[i], ops[j]) for i, j in pairs], kind="odd")
    err = 0.0
    for label, psi in states:
        got = split.expectations(psi)
        want = [c.value for c in golden.PAIR_WITNESS_TABLE[label]]
        err = max(err, max(abs(g - w) for g, w in zip(got, want)))
    return err


@functools.lru_cache(maxsize=1)
def fit_kcsb_basis() -> KcsbBasisFit:
    """Choose the doublet basis and pentagon labeling that reproduce the published grids.

    ``phi3`` is the sqrt(5) eigenvector of ``Sigma_Gamma``; ``phi1, phi2`` span
    the doublet at angle ``t`` with an optional reflection.  The projector
    expectation table is invariant under ``t``, so the angle is fixed by the
    projector grids and the table is then verified with no further freedom.
    """
    seeds = kcsb_seed_vectors()
    proj = [np.outer(v, v) for v in seeds]
    vals, vecs = eig_hermitian(sum(proj))
    e1, f1, f2 = (np.real(v) for v in vecs)
    target = golden.projector_grid_values()
    grid = np.linspace(0.0, 2 * math.pi, 721)[:-1]
    candidates = []
    for labeling in _dihedral_labelings():
        ordered = [proj[i] for i in labeling]
        for phi3_sign in (1, -1):
            for reflection in (1, -1):
                def resid(t, ordered=ordered, r=reflection, s=phi3_sign):
                    t = float(np.ravel(t)[0])
                    return (_state_grids(ordered, _basis(t, f1, f2, e1, r, s)) - target).ravel()

                coarse = [float(np.max(np.abs(resid(t)))) for t in grid]
                k = int(np.argmin(coarse))
                if coarse[k] > 0.05:
                    continue
                res = least_squares(resid, x0=[grid[k]], xtol=1e-15, ftol=1e-15, gtol=1e-15)
                t = float(res.x[0]) % (2 * math.pi)
                err = float(np.max(np.abs(resid(t))))
                candidates.append((err, labeling, phi3_sign, reflection, t))
    if candidates:
        best = min(c[0] for c in candidates)
        # canonical order among equally good fits: first labeling, then signs
        chosen = next(c for c in candidates if c[0] <= max(best, TOL.basis_fit))
    else:
        chosen = (math.inf, tuple(range(5)), 1, 1, 0.0)
    grid_err, labeling, phi3_sign, reflection, t = chosen
    basis = _basis(t, f1, f2, e1, reflection, phi3_sign)
    rays = [basis.T @ seeds[i] for i in labeling]
    table_err = _table_error(rays, kcsb_pairs())
    if table_err > TOL.golden:
        raise BasisFitError(
            f"no KCSB basis convention reproduces the expectation table (max error {table_err:.3g}); "
            f"best projector-grid error {grid_err:.3g}"
        )
    return KcsbBasisFit(t, reflection, phi3_sign, tuple(labeling), basis, float(grid_err), float(table_err))


def kcsb_rays() -> list[np.ndarray]:
    """The five pentagon rays expressed in the fitted ``phi`` basis."""
    fit = fit_kcsb_basis()
    seeds = kcsb_seed_vectors()
    return [fit.basis.T @ seeds[i] for i in fit.labeling]


def _ray_json(r) -> list[list[float]]:
    return [[float(np.real(c)), float(np.imag(c))] for c in np.asarray(r, dtype=complex)]


def kcsb_config() -> dict:
    """The pentagon as a construction config, rays in the fitted basis."""
    return {
        "name": "kcsb",
        "dimension": 3,
        "labels": [f"Pi{i + 1}" for i in range(5)],
        "rays": [_ray_json(r) for r in kcsb_rays()],
        "adjacency": "auto",
        "primary": "sigma_gamma2",
        "witness": [
            {"name": "sigma_gamma", "kind": "sum_projectors", "parameters": {}},
            {"name": "sigma_gamma2", "kind": "sum_pair_products",
             "parameters": {"pairs": [list(p) for p in kcsb_pairs()]}},
        ],
        "classical_bound": "enumerate",
        "states": "stabilizer_all",
    }


@functools.lru_cache(maxsize=1)
def build_kcsb() -> WitnessConstruction:
    return construction_from_config(kcsb_config(), metadata={"basis_fit": fit_kcsb_basis().to_dict()})


# ---------------------------------------------------------------------------
# Yu-Oh 13 rays


YU_OH_RAYS = {
    "y1-": (0, 1, -1), "y2-": (1, 0, -1), "y3-": (1, -1, 0),
    "y1+": (0, 1, 1), "y2+": (1, 0, 1), "y3+": (1, 1, 0),
    "h0": (1, 1, 1), "h1": (-1, 1, 1), "h2": (1, -1, 1), "h3": (1, 1, -1),
    "z1": (1, 0, 0), "z2": (0, 1, 0), "z3": (0, 0, 1),
}
YU_OH_H = (6, 7, 8, 9)


def yu_oh_config() -> dict:
    h = list(YU_OH_H)
    return {
        "name": "yu-oh",
        "dimension": 3,
        "labels": list(YU_OH_RAYS),
        "rays": [[[float(c), 0.0] for c in r] for r in YU_OH_RAYS.values()],
        "adjacency": "auto",
        "primary": "h_square",
        "witness": [
            {"name": "dichotomic", "kind": "dichotomic_quadratic", "parameters": {}},
            {"name": "h_sum", "kind": "sum_projectors",
             "parameters": {"indices": h, "basis_completeness": True}},
            {"name": "h_square", "kind": "sum_pair_products",
             "parameters": {"pairs": [[a, b] for a in h for b in h], "basis_completeness": True}},
        ],
        "classical_bound": "enumerate",
        "states": "stabilizer_all",
    }


@functools.lru_cache(maxsize=1)
def build_yu_oh() -> WitnessConstruction:
    return construction_from_config(yu_oh_config())


# ---------------------------------------------------------------------------
# ray constructions from a (validated) config dict


def _complex_vector(pairs) -> np.ndarray:
    return np.array([complex(re, im) for re, im in pairs])


def _config_states(cfg: dict, dim: int) -> list[tuple[str, np.ndarray]]:
    states = cfg.get("states", "stabilizer_all")
    if states == "stabilizer_all":
        if dim == 3:
            return stabilizer_states_qutrit()
        return stabilizer_states(dim)
    out = []
    for k, entry in enumerate(states):
        if isinstance(entry, dict):
            label, amps = entry.get("label", f"state{k}"), entry["amplitudes"]
        else:
            label, amps = f"state{k}", entry
        v = _complex_vector(amps)
        out.append((label, v / np.linalg.norm(v)))
    return out


def _witness_from_spec(spec: dict, m: int, graph: OrthogonalityGraph, var_labels, ops, default_bound):
    kind = spec["kind"]
    params = spec.get("parameters", {}) or {}
    base = bounds.AssignmentProblem(
        tuple(var_labels), "01", exclusive_edges=tuple(graph.edges),
        basis_cliques=graph.basis_cliques if params.get("basis_completeness") else (),
    )
    if kind == "sum_projectors":
        idx = params.get("indices", list(range(m)))
        terms = [(1.0, (i,)) for i in idx]
        weights = [0.0] * m
        for i in idx:
            weights[i] += 1.0
        problem = base.with_objective(linear=weights)
        desc = "sum of projectors"
    elif kind == "sum_pair_products":
        pairs = params.get("pairs", "non_adjacent")
        if pairs == "non_adjacent":
            idx = params.get("indices", list(range(m)))
            pairs = [(i, j) for i in idx for j in idx if i != j and not graph.adjacency[i, j]]
        terms = [(1.0, (int(i), int(j))) for i, j in pairs]
        problem = base.with_objective(quadratic=[(i, j, 1.0) for _, (i, j) in terms])
        desc = "sum of ordered projector products"
    elif kind == "dichotomic_quadratic":
        edges = graph.ordered_edges()
        terms = [(1.0, (m + v,)) for v in range(m)] + [(-0.25, (m + a, m + b)) for a, b in edges]
        problem = bounds.AssignmentProblem(tuple(var_labels), "pm1").with_objective(
            linear=[1.0] * m, quadratic=[(a, b, -0.25) for a, b in edges])
        desc = "sum A_v - 1/4 sum_{mu,nu} Gamma_{mu nu} A_mu A_nu"
    else:
        raise ValueError(f"unknown witness kind {kind!r}")
    name = spec.get("name", kind)
    w = make_witness(name, terms, problem, ops, desc)
    bound = spec.get("classical_bound", default_bound)
    if bound != "enumerate":
        w = Witness(w.name, w.terms, w.problem, float(bound), w.quantum_bound, w.description)
    return w


def construction_from_config(cfg: dict, *, metadata: dict | None = None) -> WitnessConstruction:
    """Build a ray construction from an already validated config dict."""
    dim = int(cfg["dimension"])
    rays = tuple(_complex_vector(r) for r in cfg["rays"])
    m = len(rays)
    labels = tuple(cfg.get("labels") or [f"v{i}" for i in range(m)])
    if cfg.get("adjacency", "auto") == "auto":
        graph = OrthogonalityGraph.from_rays(rays, labels)
    else:
        adj = np.array(cfg["adjacency"], dtype=bool)
        g = nx.Graph()
        g.add_nodes_from(range(m))
        g.add_edges_from(zip(*np.nonzero(np.triu(adj))))
        cliques = sorted(tuple(sorted(int(v) for v in c)) for c in nx.find_cliques(g) if len(c) == dim)
        graph = OrthogonalityGraph(labels, adj, tuple(cliques))
    projs = [projector_from_ray(r) for r in rays]
    ops = tuple(_frozen(p) for p in projs) + tuple(_frozen(np.eye(dim) - 2 * p) for p in projs)
    op_labels = labels + tuple(f"A[{k}]" for k in labels)
    specs = cfg["witness"] if isinstance(cfg["witness"], list) else [cfg["witness"]]
    default_bound = cfg.get("classical_bound", "enumerate")
    witnesses = {}
    for spec in specs:
        w = _witness_from_spec(spec, m, graph, labels, ops, default_bound)
        witnesses[w.name] = w
    primary = cfg.get("primary") or next(iter(witnesses))
    kind = "qubit" if dim & (dim - 1) == 0 else "odd"
    meta = {"config": copy.deepcopy(cfg)}
    meta.update(metadata or {})
    return WitnessConstruction(
        name=cfg["name"], dimension=dim, kind=kind, labels=op_labels, operators=ops,
        witnesses=witnesses, primary=primary, graph=graph,
        state_family=tuple(_config_states(cfg, dim)), rays=rays, metadata=meta,
    )


def to_config(construction: WitnessConstruction) -> dict:
    """Config dict that rebuilds ``construction`` through :func:`construction_from_config`."""
    if "config" not in construction.metadata:
        raise ValueError(f"{construction.name} is not a ray construction and has no config form")
    return copy.deepcopy(construction.metadata["config"])


BUILTINS = {
    "kcsb": build_kcsb,
    "peres-mermin": build_peres_mermin,
    "yu-oh": build_yu_oh,
}


def build(name: str) -> WitnessConstruction:
    try:
        return BUILTINS[name]()
    except KeyError:
        raise KeyError(f"unknown construction {name!r}; choose from {sorted(BUILTINS)}") from None
