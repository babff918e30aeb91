import numpy as np
import pytest
import scipy.linalg as sla
from hypothesis import given, settings, strategies as st

from ncbl.clifford import build_generators, conditional_expectation
from ncbl.flow import (
    clifford_entropy,
    derivative_maps,
    dirichlet_form,
    entropy_production,
    gross_hat,
    mehler_flow,
    number_component,
    number_operator,
    number_operator_domination,
    number_operator_matrix,
    production_via_gross,
    random_positive_element,
    restricted_entropy_production,
    restricted_number_matrix,
    skew_derivative,
    subadditivity_curve,
    verify_deficit_monotone,
    verify_gross_formula,
    verify_production_monotonicity,
)
from ncbl.frames import SubspaceSpec, mercedes_frame, random_admissible_frame, random_inadmissible_frame, random_subspace


@pytest.mark.parametrize("n", [1, 2, 4])
def test_derivative_maps_match_skew_derivative(rng, n):
    alg = build_generators(n)
    a = alg.element(rng.standard_normal(alg.dim) + 1j * rng.standard_normal(alg.dim))
    for i, d in enumerate(derivative_maps(alg), start=1):
        assert np.allclose(d @ a.coeffs, skew_derivative(a, i).coeffs, atol=1e-14)


def test_derivative_of_generators():
    alg = build_generators(3)
    for i in range(1, 4):
        for j in range(1, 4):
            got = skew_derivative(alg.generator(j), i).coeffs
            assert np.allclose(got, alg.identity().coeffs * (i == j))


@pytest.mark.parametrize("n", [1, 3, 5])
def test_number_operator_is_degree(n):
    alg = build_generators(n)
    assert np.array_equal(number_operator_matrix(alg), np.diag(alg.degrees.astype(float)))
    assert np.array_equal(restricted_number_matrix(alg, SubspaceSpec(np.eye(n))), number_operator_matrix(alg))


def test_dirichlet_form_defines_number_operator(rng):
    alg = build_generators(3)
    a, b = (alg.element(rng.standard_normal(8) + 1j * rng.standard_normal(8)) for _ in range(2))
    assert dirichlet_form(a, b) == pytest.approx(np.vdot(a.coeffs, number_operator(b).coeffs), abs=1e-13)


def test_mehler_flow_semigroup_and_limit(rng):
    alg = build_generators(4)
    rho = random_positive_element(alg, rng)
    assert np.allclose(mehler_flow(mehler_flow(rho, 0.3), 0.9).coeffs, mehler_flow(rho, 1.2).coeffs, rtol=1e-14, atol=0)
    assert np.array_equal(mehler_flow(rho, 0.0).coeffs, rho.coeffs)
    assert np.allclose(mehler_flow(rho, 60.0).coeffs, alg.identity().coeffs, atol=1e-20)
    with pytest.raises(ValueError):
        mehler_flow(rho, -1.0)


def test_flow_commutes_with_conditional_expectation(rng):
    alg = build_generators(4)
    rho = random_positive_element(alg, rng)
    v = random_subspace(4, 2, rng)
    a = conditional_expectation(mehler_flow(rho, 0.7), v).coeffs
    b = mehler_flow(conditional_expectation(rho, v), 0.7).coeffs
    assert np.allclose(a, b, atol=1e-12)


def test_entropy_derivative_is_production(rng):
    alg = build_generators(3)
    rho = random_positive_element(alg, rng)
    for t in (0.05, 0.4, 1.5):
        h = 1e-4
        ds = (clifford_entropy(mehler_flow(rho, t + h)) - clifford_entropy(mehler_flow(rho, t - h))) / (2 * h)
        assert ds == pytest.approx(entropy_production(mehler_flow(rho, t)), rel=1e-5)


def test_production_equals_gross_relative_entropy_sum(rng):
    for n in (2, 3, 4):
        rho = random_positive_element(build_generators(n), rng)
        assert entropy_production(rho) == pytest.approx(production_via_gross(rho), rel=1e-10)


def _independent_f(m, f):
    return {"exp": sla.expm, "log": sla.logm, "identity": lambda x: x}[f](m)


@pytest.mark.parametrize("f", ["identity", "exp", "log"])
@pytest.mark.parametrize("n", [2, 4])
def test_gross_formula_against_scipy_functions(rng, f, n):
    alg = build_generators(n)
    a = random_positive_element(alg, rng)
    fa = alg.from_operator(_independent_f(a.matrix, f))
    for j in range(1, n + 1):
        f_hat = alg.from_operator(_independent_f(gross_hat(a, j).matrix, f))
        lhs = number_component(fa, j).coeffs
        rhs = 0.5 * (fa.coeffs - f_hat.coeffs)
        assert np.sqrt(alg.dim) * np.linalg.norm(lhs - rhs) < 1e-10
    assert verify_gross_formula(a, f).lhs <= 1e-10


def test_gross_hat_is_conjugation_by_generator(rng):
    alg = build_generators(3)
    a = alg.random_self_adjoint(rng)
    for j in range(1, 4):
        q = alg.generator(j)
        # Q_j Gamma(A) Q_j flips terms without Q_j relative to those with it; hat is an automorphism
        assert np.allclose((gross_hat(a, j) @ gross_hat(a, j)).coeffs, gross_hat(a @ a, j).coeffs, atol=1e-13)
        assert np.allclose(gross_hat(q, j).coeffs, -q.coeffs)


def test_production_monotonicity_random(rng):
    for _ in range(20):
        n = int(rng.integers(2, 5))
        rho = random_positive_element(build_generators(n), rng, rank=None)
        v = random_subspace(n, int(rng.integers(1, n + 1)), rng)
        rep = verify_production_monotonicity(rho, v)
        assert rep.passed
    rho = random_positive_element(build_generators(3), rng)
    assert restricted_entropy_production(rho, SubspaceSpec(np.eye(3))) == pytest.approx(entropy_production(rho), rel=1e-12)


def test_subadditivity_curve_decreases_to_zero(rng):
    alg = build_generators(2)
    rho = random_positive_element(alg, rng)
    rep = verify_deficit_monotone(rho, mercedes_frame())
    assert rep.passed
    curve = subadditivity_curve(rho, mercedes_frame(), [0.0, 40.0])
    assert curve[0] >= 0 and abs(curve[1]) < 1e-9


def test_number_operator_domination_tracks_frame_condition(rng):
    alg = build_generators(3)
    assert number_operator_domination(alg, random_admissible_frame(3, 3, rng)) >= -1e-12
    assert number_operator_domination(alg, random_inadmissible_frame(3, 3, rng)) < 0


@settings(max_examples=20, deadline=None)
@given(st.integers(2, 5), st.integers(0, 2**32 - 1))
def test_production_nonnegative(n, seed):
    rng = np.random.default_rng(seed)
    rho = random_positive_element(build_generators(n), rng)
    assert entropy_production(rho) >= -1e-12
