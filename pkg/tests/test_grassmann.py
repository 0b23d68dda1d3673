import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_density, random_hermitian
from wwmctx import grassmann as g
from wwmctx.grassmann import P, Q, R, GrassmannPoly, gen

CONV = g.QubitWeylConvention.fitted()


def xi(role, n=1, qubit=0):
    return GrassmannPoly.monomial(n, gen(qubit, role))


def test_canonical_order_signs():
    assert (xi(P) * xi(Q)).terms == {0b011: 1}
    assert (xi(Q) * xi(P)).terms == {0b011: -1}
    assert (xi(P) * xi(P)).is_zero()


def test_shared_generator_bilinears_multiply_to_zero():
    a = GrassmannPoly.monomial(1, R, Q, coeff=1j)
    b = GrassmannPoly.monomial(1, P, Q, coeff=1j)
    assert g.g_mul(a, b).is_zero()


def test_anticommutation_over_all_monomial_pairs():
    n = 2
    for ma, mb in itertools.product(range(1 << (3 * n)), repeat=2):
        a, b = GrassmannPoly(n, {ma: 1}), GrassmannPoly(n, {mb: 1})
        sign = (-1) ** (bin(ma).count("1") * bin(mb).count("1"))
        assert g.g_mul(a, b).allclose(g.g_mul(b, a) * sign, 0)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 63), st.floats(-2, 2)), min_size=1, max_size=6),
       st.lists(st.tuples(st.integers(0, 63), st.floats(-2, 2)), min_size=1, max_size=6),
       st.lists(st.tuples(st.integers(0, 63), st.floats(-2, 2)), min_size=1, max_size=6))
def test_product_is_associative(ta, tb, tc):
    a, b, c = (GrassmannPoly(2, dict(t)) for t in (ta, tb, tc))
    assert ((a * b) * c).allclose(a * (b * c), 1e-9)


def test_berezin_defining_rules_and_duplicates():
    assert g.berezin(xi(Q), [gen(0, Q)]).terms == {0: 1}
    assert g.berezin(GrassmannPoly.scalar(1), [gen(0, Q)]).is_zero()
    with pytest.raises(ValueError):
        g.berezin(xi(Q), [gen(0, Q), gen(0, Q)])


def test_marginal_identity_fixes_sign_convention():
    # the displayed odd symbol measures 1/2 (1 + alpha) on a Bloch state with z-component alpha
    q_minus = g.displayed_q_minus()
    for alpha in (-1.0, -0.3, 0.0, 0.6, 1.0):
        rho = 0.5 * (np.eye(2) + alpha * g.PAULI_MATRICES["Z"])
        got = g.grassmann_expectation(g.qubit_weyl(rho, CONV), q_minus, CONV)
        assert abs(got - 0.5 * (1 + alpha)) < 1e-12


def test_dual_of_up_state_is_the_displayed_symbol():
    assert g.dual_state_symbol(np.diag([1.0, 0.0]), CONV).allclose(g.displayed_q_minus())


def test_dual_of_maximally_mixed_is_top_monomial_only():
    dual = g.dual_state_symbol(np.eye(2) / 2, CONV)
    assert set(dual.terms) == {0b111}


def test_qubit_symbol_shapes():
    assert g.qubit_weyl(np.eye(2), CONV).allclose(GrassmannPoly.scalar(1))
    rho = 0.5 * (np.eye(2) + 0.2 * g.PAULI_MATRICES["X"] + 0.3 * g.PAULI_MATRICES["Y"] + 0.4 * g.PAULI_MATRICES["Z"])
    w = g.qubit_weyl(rho, CONV)
    assert abs(w.terms[0] - 0.5) < 1e-15
    for pauli, coeff in zip("XYZ", (0.2, 0.3, 0.4)):
        a, b = g.PAULI_ROLES[pauli]
        assert abs(abs(w.coefficient(a, b)) - 0.5 * coeff) < 1e-15
    xz = g.qubit_weyl(g.pauli_string("XZ"), CONV)
    assert len(xz.terms) == 1 and bin(next(iter(xz.terms))).count("1") == 4
    assert xz.qubit_parities() == (0, 0)


def test_non_power_of_two_rejected():
    with pytest.raises(Exception):
        g.qubit_weyl(np.eye(3), CONV)


def test_grade_mismatch_rejected():
    w = g.qubit_weyl(g.PAULI_MATRICES["Z"], CONV)
    with pytest.raises(g.GradeError):
        g.grassmann_expectation(w, w, CONV)


def test_expectation_examples():
    up = g.dual_state_symbol(np.diag([1.0, 0.0]), CONV)
    assert abs(g.grassmann_expectation(GrassmannPoly.scalar(1), up, CONV) - 1) < 1e-12
    assert abs(g.grassmann_expectation(g.qubit_weyl(g.PAULI_MATRICES["Z"], CONV), up, CONV) - 1) < 1e-12


@pytest.mark.parametrize("n", [1, 2])
def test_pairing_completeness(n, rng):
    labels = ["".join(t) for t in itertools.product("IXYZ", repeat=n)]
    for _ in range(20):
        rho = random_density(rng, 2**n)
        dual = g.dual_state_symbol(rho, CONV)
        for lab in labels:
            op = g.pauli_string(lab)
            got = g.grassmann_expectation(g.qubit_weyl(op, CONV), dual, CONV)
            assert abs(got - np.trace(op @ rho)) < 1e-12


def test_operator_roundtrip(rng):
    for dim in (2, 4, 8):
        a = random_hermitian(rng, dim)
        assert np.allclose(g.operator_from_symbol(g.qubit_weyl(a, CONV), CONV), a, atol=1e-12)


def test_dual_map_agrees_with_dual_state_symbol(rng):
    rho = random_density(rng, 4)
    assert CONV.dual_map(g.qubit_weyl(rho, CONV)).allclose(g.dual_state_symbol(rho, CONV), 1e-12)


def test_groenewold_examples():
    w = {s: g.qubit_weyl(g.PAULI_MATRICES[s], CONV) for s in "IXYZ"}
    assert g.groenewold_product(w["I"], w["Z"], CONV).allclose(w["Z"])
    assert g.groenewold_product(w["X"], w["X"], CONV).allclose(w["I"])
    xz = g.PAULI_MATRICES["X"] @ g.PAULI_MATRICES["Z"]
    assert g.groenewold_product(w["X"], w["Z"], CONV).allclose(g.qubit_weyl(xz, CONV))
    assert (w["X"] * w["Z"]).is_zero()


def test_single_qubit_traceless_pointwise_products_vanish():
    for a, b in itertools.product("XYZ", repeat=2):
        assert (CONV.string_symbol(a) * CONV.string_symbol(b)).is_zero()


def test_exact_product_on_all_two_qubit_pauli_pairs():
    labels = ["".join(t) for t in itertools.product("IXYZ", repeat=2)]
    for la, lb in itertools.product(labels, repeat=2):
        a, b = g.pauli_string(la), g.pauli_string(lb)
        got = g.groenewold_product(g.qubit_weyl(a, CONV), g.qubit_weyl(b, CONV), CONV)
        assert got.allclose(g.qubit_weyl(a @ b, CONV), 1e-12)


def test_indexed_product_matches_dense_kernel(rng):
    a, b = random_hermitian(rng, 2), random_hermitian(rng, 2)
    wa, wb = g.qubit_weyl(a, CONV), g.qubit_weyl(b, CONV)
    assert g.groenewold_product(wa, wb, CONV).allclose(g.groenewold_product_dense(wa, wb, CONV), 1e-12)


@pytest.mark.parametrize("hbar", [1.0, 2.0, 1 / math.pi])
def test_hbar_independence(hbar, rng):
    conv = g.QubitWeylConvention.fitted(hbar)
    a, b = random_hermitian(rng, 4), random_hermitian(rng, 4)
    wa, wb = g.qubit_weyl(a, conv), g.qubit_weyl(b, conv)
    exact = g.operator_from_symbol(g.groenewold_product(wa, wb, conv), conv)
    assert np.allclose(exact, a @ b, atol=1e-10)
    pointwise = g.operator_from_symbol(wa * wb, conv)
    reference = g.operator_from_symbol(g.qubit_weyl(a, CONV) * g.qubit_weyl(b, CONV), CONV)
    assert np.allclose(pointwise, reference, atol=1e-12)


def test_triples_roundtrip(rng):
    w = g.qubit_weyl(random_hermitian(rng, 4), CONV)
    assert GrassmannPoly.from_triples(2, w.to_triples()).allclose(w, 0)
