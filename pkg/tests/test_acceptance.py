"""The eight acceptance criteria, one test each, with a PASS/FAIL line per criterion."""

import itertools
import math

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES, random_density, random_hermitian, random_state
from wwmctx import bounds, constructions, golden, grassmann, hbar, odd
from wwmctx.dense import eig_hermitian, expectation_trace
from wwmctx.report import pm_context_summary

SQ5 = math.sqrt(5)


def verdict(number: int, title: str, failures: list[str]) -> None:
    status = "PASS" if not failures else "FAIL"
    line = f"{status} criterion {number}: {title}"
    if failures:
        line += " | " + "; ".join(failures[:4]) + (f" (+{len(failures) - 4} more)" if len(failures) > 4 else "")
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert not failures, line


@pytest.fixture(scope="module")
def kcsb():
    return constructions.build_kcsb()


@pytest.fixture(scope="module")
def yu_oh():
    return constructions.build_yu_oh()


@pytest.fixture(scope="module")
def pm():
    return constructions.build_peres_mermin()


def test_criterion_1_table_reproduction(kcsb):
    failures = []
    states = dict(kcsb.state_family)
    assert list(states) == [label for label, _ in golden.QUTRIT_STATE_ROWS]
    for label, expected in golden.PAIR_WITNESS_TABLE.items():
        rep = hbar.contextuality_report(states[label], kcsb, which="sigma_gamma2", label=label)
        got = (rep.exact_expectation, rep.h0_contribution, rep.correction_contribution)
        for col, g, e in zip(("exact", "h0", "correction"), got, expected):
            if abs(g - e.value) > 1e-9:
                failures.append(f"{label} {col}: {g:.12g} vs {e.text}")
    verdict(1, "pair-witness table, 12 states x (exact, h0, correction) to 1e-9", failures)


def test_criterion_2_golden_grids(kcsb):
    failures = []
    for label, psi in kcsb.state_family:
        grid = odd.wigner_state(psi, 3).values
        diff = np.max(np.abs(grid - golden.PUBLISHED_STATE_GRIDS[label]))
        if diff > 1e-12:
            failures.append(f"state grid {label} differs by {diff:.3g}")
    published = golden.projector_grid_values()
    for k in range(5):
        grid = odd.weyl_observable(kcsb.operators[k], 3).values / 3
        diff = np.max(np.abs(grid - published[k]))
        if diff > 1e-9:
            failures.append(f"projector grid Pi{k + 1} differs by {diff:.3g}")
    verdict(2, "published state grids to 1e-12 and projector grids to 1e-9", failures)


def test_criterion_3_spectral_facts(kcsb):
    failures = []
    vals, vecs = eig_hermitian(kcsb.witness_operator("sigma_gamma"))
    want = [c.value for c in golden.KCSB_SIGMA_EIGENVALUES]
    if max(abs(a - b) for a, b in zip(vals, want)) > 1e-10:
        failures.append(f"eig(sigma_gamma) = {vals}")
    phi3 = dict(kcsb.state_family)["phi3"]
    e = expectation_trace(kcsb.witness_operator("sigma_gamma"), phi3).real
    if abs(e - SQ5) > 1e-10:
        failures.append(f"<phi3|sigma_gamma|phi3> = {e}")
    pair_op = kcsb.witness_operator("sigma_gamma2")
    top = eig_hermitian(pair_op)[0][0]
    if abs(top - (5 - SQ5)) > 1e-10:
        failures.append(f"quantum bound of sigma_gamma2 = {top}")
    attained = expectation_trace(pair_op, phi3).real
    if abs(attained - (5 - SQ5)) > 1e-10:
        failures.append(f"<phi3|sigma_gamma2|phi3> = {attained}")
    verdict(3, "pentagon spectrum, sqrt(5) on phi3, pair-witness quantum bound 5-sqrt(5)", failures)


def test_criterion_4_classical_bounds(kcsb, yu_oh):
    failures = []
    for name in ("sigma_gamma", "sigma_gamma2"):
        value = bounds.max_objective(kcsb.witness(name).problem).value
        if value != 2.0:
            failures.append(f"pentagon {name} bound {value}")
    dich = yu_oh.witness("dichotomic").problem
    if dich.size != 2**13 or bounds.max_objective(dich).value != 8.0:
        failures.append(f"Yu-Oh dichotomic bound {bounds.max_objective(dich).value} over {dich.size}")
    h = yu_oh.witness("h_sum").problem
    if not h.exclusive_edges or not h.basis_cliques or bounds.max_objective(h).value != 1.0:
        failures.append(f"Yu-Oh h-sum bound {bounds.max_objective(h).value}")
    prob = constructions.pm_problem()
    if prob.size != 2**9 or bounds.count_satisfying(prob) != 0:
        failures.append(f"Peres-Mermin satisfying count {bounds.count_satisfying(prob)}")
    verdict(4, "classical bounds 2, 2, 8, 1 and zero Peres-Mermin assignments", failures)


def test_criterion_5_yu_oh_identities(yu_oh):
    failures = []
    eye = np.eye(3)
    for name, value in (("dichotomic", 25 / 3), ("h_sum", 4 / 3), ("h_square", 16 / 9)):
        diff = np.max(np.abs(yu_oh.witness_operator(name) - value * eye))
        if diff > 1e-10:
            failures.append(f"{name} differs from {value:.6g} I by {diff:.3g}")
    for label, psi in yu_oh.state_family:
        rep = hbar.contextuality_report(psi, yu_oh, which="h_square", label=label)
        if abs(rep.h0_contribution - 16 / 27) > 1e-10 or abs(rep.correction_contribution - 32 / 27) > 1e-10:
            failures.append(f"{label}: h0 {rep.h0_contribution:.12g}, correction {rep.correction_contribution:.12g}")
    if len(yu_oh.state_family) != 12:
        failures.append("stabilizer family does not have 12 states")
    verdict(5, "Yu-Oh operator identities and h0 16/27, correction 32/27 on all stabilizer states", failures)


def test_criterion_6_peres_mermin_h0(pm):
    failures = []
    conv = grassmann.QubitWeylConvention.fitted()
    rng = np.random.default_rng(6)
    states = [random_state(rng, 4) for _ in range(20)]
    for name, (idx, _) in constructions.PM_CONTEXTS.items():
        symbols = [grassmann.qubit_weyl(pm.operators[i], conv) for i in idx]
        if not hbar.h0_product(symbols).is_zero():
            failures.append(f"{name}: pointwise product is not zero")
        split = hbar.decompose_chain([pm.operators[i] for i in idx], "qubit")
        want = -1.0 if name == "col3" else 1.0
        for psi in states:
            got = split.expectations(psi, conv)[0]
            if abs(got - want) > 1e-10:
                failures.append(f"{name}: exact expectation {got}")
                break
    summary = pm_context_summary(pm)
    if sorted(summary) != sorted(constructions.PM_CONTEXTS):
        failures.append("context summary does not list the six contexts")
    verdict(6, "Peres-Mermin pointwise products vanish, exact contexts give +1 and -1 (col3)", failures)


def test_criterion_7_oracle_properties(kcsb):
    failures = []
    rng = np.random.default_rng(7)
    for d in (3, 5):
        worst = 0.0
        for _ in range(50):
            a, rho = random_hermitian(rng, d), random_density(rng, d)
            w = odd.phase_space_expectation(odd.weyl_observable(a, d), odd.wigner_state(rho, d))
            worst = max(worst, abs(w - np.trace(a @ rho)))
        if worst > 1e-10:
            failures.append(f"d={d} expectation error {worst:.3g}")
    conv = grassmann.QubitWeylConvention.fitted()
    worst = 0.0
    for _ in range(50):
        a, rho = random_hermitian(rng, 4), random_density(rng, 4)
        w = grassmann.grassmann_expectation(grassmann.qubit_weyl(a, conv), grassmann.dual_state_symbol(rho, conv), conv)
        worst = max(worst, abs(w - np.trace(a @ rho)))
    if worst > 1e-10:
        failures.append(f"2-qubit expectation error {worst:.3g}")
    worst = 0.0
    for d in (3, 5):
        for _ in range(20):
            a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
            worst = max(worst, np.max(np.abs(odd.inverse_weyl(odd.weyl_observable(a, d)) - a)))
    if worst > 1e-12:
        failures.append(f"roundtrip error {worst:.3g}")
    worst = 0.0
    labels = ["".join(t) for t in itertools.product("IXYZ", repeat=2)]
    for la, lb in itertools.product(labels, repeat=2):
        a, b = grassmann.pauli_string(la), grassmann.pauli_string(lb)
        prod = grassmann.groenewold_product(grassmann.qubit_weyl(a, conv), grassmann.qubit_weyl(b, conv), conv)
        diff = prod - grassmann.qubit_weyl(a @ b, conv)
        worst = max(worst, max((abs(c) for c in diff.terms.values()), default=0.0))
    if worst > 1e-12:
        failures.append(f"Groenewold product error {worst:.3g}")
    s1, s2 = kcsb.witness_operator("sigma_gamma"), kcsb.witness_operator("sigma_gamma2")
    diff = np.max(np.abs(s2 - (s1 @ s1 - s1)))
    if diff > 1e-12:
        failures.append(f"sigma_gamma2 != sigma_gamma^2 - sigma_gamma by {diff:.3g}")
    verdict(7, "oracle equivalence, roundtrip, 256 Pauli products, pair-witness identity", failures)


def test_criterion_8_verdicts(kcsb, yu_oh):
    failures = []
    states = dict(kcsb.state_family)
    rep = hbar.contextuality_report(states["phi3"], kcsb, which="sigma_gamma2", label="phi3")
    if rep.verdict != hbar.CONTEXTUAL:
        failures.append(f"phi3 verdict {rep.verdict}")
    if not rep.h0_contribution < rep.classical_bound or rep.h0_exceeds_bound:
        failures.append(f"phi3 h0 {rep.h0_contribution} not below the bound")
    if not rep.correction_contribution > rep.classical_bound:
        failures.append(f"phi3 correction {rep.correction_contribution} not above the bound")
    for label in ("phi1", "phi2"):
        rep = hbar.contextuality_report(states[label], kcsb, which="sigma_gamma2", label=label)
        if rep.verdict != hbar.NOT_CONTEXTUAL:
            failures.append(f"{label} verdict {rep.verdict}")
    for label, psi in yu_oh.state_family:
        rep = hbar.contextuality_report(psi, yu_oh, which="h_square", label=label)
        if rep.verdict != hbar.CONTEXTUAL:
            failures.append(f"Yu-Oh {label} verdict {rep.verdict}")
    verdict(8, "verdicts for phi3, phi1, phi2 and state-independent Yu-Oh", failures)
