import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import taylor_exp
from ncbl.linalg import (
    Density,
    DomainError,
    TraceFunctional,
    entropy,
    extended_entropy,
    hermitian,
    log_trace_exp,
    matrix_exp,
    matrix_log,
    random_density,
    random_hermitian,
    relative_entropy,
    schatten_norm,
    spectral_decompose,
)


def test_hermitian_check_rejects_asymmetric():
    with pytest.raises(ValueError):
        hermitian(np.array([[0, 1], [0, 0]]), check=True)
    with pytest.raises(ValueError):
        hermitian(np.zeros((2, 3)))


def test_spectral_decompose_two_by_two_closed_form():
    # eigenvalues of [[a, b], [b*, c]] from the characteristic polynomial
    a, c, b = 0.3, -1.1, 0.4 - 0.7j
    w, _ = spectral_decompose(np.array([[a, b], [np.conj(b), c]]))
    mid, rad = (a + c) / 2, np.sqrt(((a - c) / 2) ** 2 + abs(b) ** 2)
    assert np.allclose(w, [mid - rad, mid + rad], atol=1e-14)


@pytest.mark.parametrize("dim", [1, 2, 5, 9])
def test_matrix_exp_matches_taylor_series(rng, dim):
    h = random_hermitian(dim, rng, scale=3.0)
    assert np.allclose(matrix_exp(h), taylor_exp(h), atol=1e-11 * np.exp(3.0))


def test_log_inverts_exp_on_full_rank(rng):
    h = random_hermitian(6, rng, scale=2.0)
    assert np.allclose(matrix_log(matrix_exp(h)), h, atol=1e-12)


def test_log_is_zero_on_kernel():
    rho = np.diag([0.5, 0.5, 0.0])
    lg = matrix_log(rho)
    assert np.allclose(lg, np.diag([np.log(0.5), np.log(0.5), 0.0]))
    with pytest.raises(DomainError):
        matrix_log(np.zeros((2, 2)))


def test_log_trace_exp_shift_is_stable():
    h = np.diag([1000.0, 999.0])
    assert log_trace_exp(h) == pytest.approx(1000 + np.log1p(np.exp(-1.0)), abs=1e-12)
    assert log_trace_exp(h, "normalized") == pytest.approx(1000 + np.log1p(np.exp(-1.0)) - np.log(2), abs=1e-12)


@pytest.mark.parametrize("p", np.linspace(0, 1, 9))
def test_binary_entropy(p):
    expected = 0.0 if p in (0, 1) else -(p * np.log(p) + (1 - p) * np.log(1 - p))
    assert entropy(np.diag([p, 1 - p])) == pytest.approx(expected, abs=1e-14)


def test_entropy_sign_depends_on_functional(rng):
    # under the trace 0 <= S <= ln d; under the normalized trace S <= 0
    for _ in range(20):
        rho = random_density(8, rng, rank=int(rng.integers(1, 9)))
        s = entropy(rho)
        assert -1e-12 <= s <= np.log(8) + 1e-12
        tau_rho = Density.from_matrix(rho.op * 8, "normalized")
        assert entropy(tau_rho) == pytest.approx(s - np.log(8), abs=1e-12)
        assert entropy(tau_rho) <= 1e-12


def test_pure_state_entropy_zero(rng):
    v = rng.standard_normal(5) + 1j * rng.standard_normal(5)
    v /= np.linalg.norm(v)
    assert abs(entropy(np.outer(v, v.conj()))) < 1e-12


def test_density_validation():
    with pytest.raises(ValueError):
        Density.from_matrix(np.diag([0.7, 0.7]))
    with pytest.raises(ValueError):
        Density.from_matrix(np.diag([1.5, -0.5]))
    rho = Density.from_matrix(np.diag([2.0, 2.0]), normalize=True)
    assert np.allclose(rho.op, np.eye(2) / 2)
    assert extended_entropy(np.diag([1.5, -0.5])) == -np.inf


def test_relative_entropy_commuting_is_kl(rng):
    p = rng.dirichlet(np.ones(4))
    q = rng.dirichlet(np.ones(4))
    kl = float(np.sum(p * np.log(p / q)))
    assert relative_entropy(np.diag(p), np.diag(q)) == pytest.approx(kl, abs=1e-13)


def test_relative_entropy_support_mismatch_is_infinite():
    assert relative_entropy(np.diag([0.5, 0.5]), np.diag([1.0, 0.0])) == np.inf
    assert relative_entropy(np.diag([1.0, 0.0]), np.diag([0.5, 0.5])) == pytest.approx(np.log(2))


def test_schatten_norm_from_singular_values(rng):
    a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    s = np.linalg.svd(a, compute_uv=False)
    assert schatten_norm(a, 3.0) == pytest.approx(np.sum(s**3) ** (1 / 3), rel=1e-12)
    assert schatten_norm(a, 2.0, "normalized") == pytest.approx(np.sqrt(np.sum(s**2) / 4), rel=1e-12)


def test_trace_functional_kinds():
    with pytest.raises(ValueError):
        TraceFunctional("bogus", 2)
    assert TraceFunctional("normalized", 4)(np.eye(4)) == pytest.approx(1.0)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_relative_entropy_nonnegative(dim, seed):
    rng = np.random.default_rng(seed)
    rho = random_density(dim, rng, rank=int(rng.integers(1, dim + 1)))
    sigma = random_density(dim, rng)
    assert relative_entropy(rho, sigma) >= -1e-12


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2**32 - 1), st.floats(0.01, 20.0))
def test_random_hermitian_norm_and_exp_positivity(dim, seed, scale):
    h = random_hermitian(dim, np.random.default_rng(seed), scale)
    assert np.allclose(h, h.conj().T)
    assert np.linalg.norm(h) == pytest.approx(scale, rel=1e-12)
    assert np.linalg.eigvalsh(matrix_exp(h)).min() > 0
