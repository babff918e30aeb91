import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ncbl.linalg import entropy, random_density, random_hermitian
from ncbl.tensor import (
    CoverSpec,
    FactorSystem,
    UncoveredIndexError,
    embed,
    golden_thompson_gap,
    parse_cover,
    partial_trace,
    product_density,
    random_cover,
    tensor_bl_sides,
    verify_entropy_combination,
    verify_ssa,
    verify_tensor_bl,
    zero_hamiltonian_ratio,
)


def brute_partial_trace(rho, dims, keep):
    """Reduced matrix by explicit sums over multi-indices."""
    n = len(dims)
    keep = [k - 1 for k in keep]
    drop = [i for i in range(n) if i not in keep]
    kd = [dims[i] for i in keep]
    out = np.zeros((int(np.prod(kd)),) * 2, dtype=complex)
    flat = lambda idx: int(np.ravel_multi_index(idx, dims))
    for a in itertools.product(*[range(d) for d in kd]):
        for b in itertools.product(*[range(d) for d in kd]):
            total = 0.0
            for c in itertools.product(*[range(dims[i]) for i in drop]):
                ia, ib = [0] * n, [0] * n
                for pos, i in enumerate(keep):
                    ia[i], ib[i] = a[pos], b[pos]
                for pos, i in enumerate(drop):
                    ia[i] = ib[i] = c[pos]
                total += rho[flat(ia), flat(ib)]
            out[np.ravel_multi_index(a, kd), np.ravel_multi_index(b, kd)] = total
    return out


def brute_embed(h, dims, subset):
    """Matrix elements <i|h (x) I|j> by explicit index matching."""
    n = len(dims)
    sub = [k - 1 for k in subset]
    sd = [dims[i] for i in sub]
    big = int(np.prod(dims))
    out = np.zeros((big, big), dtype=complex)
    for i in range(big):
        ii = np.unravel_index(i, dims)
        for j in range(big):
            jj = np.unravel_index(j, dims)
            if all(ii[k] == jj[k] for k in range(n) if k not in sub):
                out[i, j] = h[np.ravel_multi_index([ii[k] for k in sub], sd), np.ravel_multi_index([jj[k] for k in sub], sd)]
    return out


@pytest.mark.parametrize("dims,subset", [([2, 3], [1]), ([2, 3], [2]), ([2, 3, 2], [1, 3]), ([3, 2, 2], [3, 1]), ([2, 2, 2], [2])])
def test_embed_and_partial_trace_match_index_sums(rng, dims, subset):
    system = FactorSystem(dims)
    d_sub = system.subset_dim(subset)
    h = random_hermitian(d_sub, rng)
    assert np.allclose(embed(system, subset, h), brute_embed(h, dims, sorted(subset)), atol=1e-14)
    rho = random_density(system.total_dim, rng).op
    assert np.allclose(partial_trace(system, rho, subset), brute_partial_trace(rho, dims, sorted(subset)), atol=1e-14)


def test_partial_trace_is_adjoint_of_embedding(rng):
    system = FactorSystem([2, 3, 2])
    rho = random_density(12, rng).op
    for subset in [(1,), (2, 3), (1, 3)]:
        a = random_hermitian(system.subset_dim(subset), rng)
        lhs = np.trace(partial_trace(system, rho, subset) @ a)
        rhs = np.trace(rho @ embed(system, subset, a))
        assert lhs == pytest.approx(rhs, abs=1e-13)


def test_factor_system_validation():
    with pytest.raises(ValueError):
        FactorSystem([1, 2])
    with pytest.raises(ValueError):
        FactorSystem([16, 16, 32])
    with pytest.raises(ValueError):
        CoverSpec(2, [(1, 3)])


def test_cover_multiplicities_and_parse():
    cover = CoverSpec(3, parse_cover("{1,2},{2,3},{3,1}"))
    assert cover.multiplicities == (2, 2, 2) and cover.p == 2
    assert parse_cover("{1},{2}") == [(1,), (2,)]


def test_uncovered_index_rejected():
    system = FactorSystem([2, 2])
    with pytest.raises(UncoveredIndexError):
        tensor_bl_sides(system, CoverSpec(2, [(1,)]), [np.zeros((2, 2))], 1)


def shannon(p):
    p = p[p > 0]
    return float(-np.sum(p * np.log(p)))


def test_ssa_on_classical_tables(rng):
    # diagonal densities reduce SSA to Shannon entropies of marginal tables
    for _ in range(20):
        p = rng.dirichlet(np.ones(8) * 0.5).reshape(2, 2, 2)
        rho = np.diag(p.ravel())
        system = FactorSystem([2, 2, 2])
        rep = verify_ssa(system, rho, (1, 2), (2, 3))
        expected = shannon(p.sum(2).ravel()) + shannon(p.sum(0).ravel()) - shannon(p.ravel()) - shannon(p.sum((0, 2)))
        assert rep.deficit == pytest.approx(expected, abs=1e-13)
        assert rep.passed


def test_ssa_saturated_by_product_states(rng):
    system = FactorSystem([2, 2, 2])
    rho = product_density([random_density(2, rng).op for _ in range(3)])
    assert abs(verify_ssa(system, rho, (1, 2), (2, 3)).deficit) < 1e-12
    assert abs(verify_ssa(system, rho, (1,), (3,)).deficit) < 1e-12


def test_entropy_combination_on_pure_state(rng):
    system = FactorSystem([2, 2, 2])
    v = rng.standard_normal(8) + 1j * rng.standard_normal(8)
    rho = np.outer(v, v.conj()) / np.vdot(v, v)
    rep = verify_entropy_combination(system, rho, CoverSpec(3, [(1, 2), (2, 3), (3, 1)]))
    assert rep.rhs == pytest.approx(0.0, abs=1e-12)
    assert rep.passed


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_ssa_random_mixed_ranks(seed):
    rng = np.random.default_rng(seed)
    system = FactorSystem([2, 2, 2])
    rho = random_density(8, rng, rank=int(rng.integers(1, 9))).op
    assert verify_ssa(system, rho, (1, 2), (2, 3)).deficit >= -1e-9
    assert verify_entropy_combination(system, rho, CoverSpec(3, [(1, 2), (2, 3), (3, 1)])).deficit >= -1e-9


def test_zero_hamiltonians():
    system = FactorSystem([2, 2])
    cover = CoverSpec(2, [(1,), (2,)])
    zeros = [np.zeros((2, 2))] * 2
    log_lhs, log_rhs = tensor_bl_sides(system, cover, zeros, 1)
    assert log_lhs == pytest.approx(log_rhs, abs=1e-14)
    log_lhs, log_rhs = tensor_bl_sides(system, cover, zeros, 2)
    assert np.exp(log_lhs - log_rhs) == pytest.approx(2.0, rel=1e-14)
    assert zero_hamiltonian_ratio(system, cover, 2) == pytest.approx(2.0, rel=1e-14)
    assert zero_hamiltonian_ratio(system, cover, 1) == pytest.approx(1.0, rel=1e-14)


def test_commuting_case_reduces_to_classical(rng):
    # diagonal H_j: the trace inequality becomes a sum over the product grid
    system = FactorSystem([2, 3])
    cover = CoverSpec(2, [(1, 2), (1,), (2,)])
    hs = [np.diag(rng.standard_normal(d)) for d in (6, 2, 3)]
    log_lhs, log_rhs = tensor_bl_sides(system, cover, hs, 1)
    grid = np.diag(hs[0]).reshape(2, 3) + np.diag(hs[1])[:, None] + np.diag(hs[2])[None, :]
    assert log_lhs == pytest.approx(np.log(np.exp(grid).sum()), abs=1e-12)
    assert log_rhs == pytest.approx(sum(np.log(np.exp(np.diag(h)).sum()) for h in hs), abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_tensor_inequality_random(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 4))
    system = FactorSystem([int(rng.choice((2, 3))) for _ in range(n)])
    cover = random_cover(n, int(rng.integers(1, 3)), rng)
    hs = [random_hermitian(system.subset_dim(s), rng, rng.uniform(0, 3)) for s in cover.subsets]
    assert verify_tensor_bl(system, cover, hs, cover.p).passed


def test_golden_thompson(rng):
    for _ in range(10):
        a, b = random_hermitian(4, rng, 2.0), random_hermitian(4, rng, 2.0)
        lhs, rhs, gap = golden_thompson_gap(a, b)
        assert gap >= -1e-12 * rhs
    # commuting operators give equality
    d = np.diag([0.1, -0.4, 1.0])
    assert abs(golden_thompson_gap(d, 2 * d)[2]) < 1e-12


def test_uniform_random_cover_has_constant_multiplicity(rng):
    for p in (1, 2, 3):
        cover = random_cover(4, p, rng, uniform=True)
        assert set(cover.multiplicities) == {p}
