"""Tensor-product trace spaces: embeddings, partial traces and the inequalities on them.

Factor indices are 1-based throughout, matching the way covers such as
``{1,2},{2,3},{3,1}`` are usually written.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Iterable, Sequence

import numpy as np

from .linalg import Density, entropy, hermitian, log_trace_exp, matrix_exp
from .report import DEFAULT_TOL, VerificationReport, log_ratio_report

MAX_TOTAL_DIM = 4096


class UncoveredIndexError(ValueError):
    pass


@dataclass(frozen=True)
class FactorSystem:
    dims: tuple[int, ...]

    def __init__(self, dims: Iterable[int]):
        dims = tuple(int(d) for d in dims)
        if not dims or any(d < 2 for d in dims):
            raise ValueError(f"factor dimensions must be >= 2, got {dims}")
        if prod(dims) > MAX_TOTAL_DIM:
            raise ValueError(f"total dimension {prod(dims)} exceeds {MAX_TOTAL_DIM}")
        object.__setattr__(self, "dims", dims)

    @property
    def n(self) -> int:
        return len(self.dims)

    @property
    def total_dim(self) -> int:
        return prod(self.dims)

    def subset_dim(self, subset) -> int:
        return prod(self.dims[i - 1] for i in normalize_subset(subset, self.n))


def normalize_subset(subset, n) -> tuple[int, ...]:
    members = tuple(sorted(set(int(i) for i in subset)))
    if not members:
        raise ValueError("index subsets must be nonempty")
    if members[0] < 1 or members[-1] > n:
        raise ValueError(f"subset {members} is not contained in 1..{n}")
    return members


def _split_axes(system, members):
    inside = [i - 1 for i in members]
    outside = [i for i in range(system.n) if i not in inside]
    return inside, outside


def embed(system: FactorSystem, subset, h) -> np.ndarray:
    """Embed an operator on the factors in ``subset`` as ``h (x) I`` in canonical slot order."""
    members = normalize_subset(subset, system.n)
    h = np.asarray(h, dtype=complex)
    d_in = system.subset_dim(members)
    if h.shape != (d_in, d_in):
        raise ValueError(f"operator has shape {h.shape}, subset {members} needs ({d_in}, {d_in})")
    inside, outside = _split_axes(system, members)
    d_out = system.total_dim // d_in
    big = np.kron(h, np.eye(d_out))
    n = system.n
    order = inside + outside
    shape = [system.dims[i] for i in order]
    t = big.reshape(shape + shape)
    # axis k of t holds factor order[k]; send it back to slot order[k]
    inv = np.argsort(order)
    t = t.transpose(list(inv) + [n + k for k in inv])
    return t.reshape(system.total_dim, system.total_dim)


def partial_trace(system: FactorSystem, rho, subset) -> np.ndarray:
    """Reduced operator on the factors in ``subset``, tracing out the rest."""
    members = normalize_subset(subset, system.n)
    rho = rho.op if isinstance(rho, Density) else np.asarray(rho)
    inside, outside = _split_axes(system, members)
    n = system.n
    t = rho.reshape(list(system.dims) * 2)
    t = t.transpose(inside + outside + [n + i for i in inside] + [n + i for i in outside])
    d_in = system.subset_dim(members)
    d_out = system.total_dim // d_in
    t = t.reshape(d_in, d_out, d_in, d_out)
    return hermitian(np.einsum("ajbj->ab", t))


def marginal(system, rho, subset) -> Density:
    return Density.from_matrix(partial_trace(system, rho, subset), "trace")


@dataclass(frozen=True)
class CoverSpec:
    n: int
    subsets: tuple[tuple[int, ...], ...]

    def __init__(self, n: int, subsets: Iterable[Iterable[int]]):
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "subsets", tuple(normalize_subset(s, n) for s in subsets))
        if not self.subsets:
            raise ValueError("a cover needs at least one subset")

    @property
    def multiplicities(self) -> tuple[int, ...]:
        return tuple(sum(i in s for s in self.subsets) for i in range(1, self.n + 1))

    @property
    def p(self) -> int:
        return min(self.multiplicities)


def min_multiplicity(cover: CoverSpec) -> tuple[tuple[int, ...], int]:
    """Per-index multiplicities ``p(i)`` and their minimum ``p``."""
    return cover.multiplicities, cover.p


def _require_covered(cover):
    if cover.p < 1:
        missing = [i + 1 for i, m in enumerate(cover.multiplicities) if m == 0]
        raise UncoveredIndexError(f"indices {missing} are not covered")


def tensor_bl_sides(system, cover, hamiltonians, q) -> tuple[float, float]:
    """``(ln Tr exp(sum phi_J(H_j)), sum_j (1/q) ln Tr_J exp(q H_j))``."""
    _require_covered(cover)
    if len(hamiltonians) != len(cover.subsets):
        raise ValueError("need one Hamiltonian per subset")
    total = np.zeros((system.total_dim,) * 2, dtype=complex)
    log_rhs = 0.0
    for subset, h in zip(cover.subsets, hamiltonians):
        h = hermitian(h)
        total += embed(system, subset, h)
        log_rhs += log_trace_exp(q * h) / q
    return log_trace_exp(total), log_rhs


def verify_tensor_bl(system, cover, hamiltonians, q, tol=DEFAULT_TOL) -> VerificationReport:
    """Check ``Tr exp(sum phi_J(H_j)) <= prod (Tr_J exp(q H_j))^(1/q)``; expected to hold for ``q <= p``."""
    log_lhs, log_rhs = tensor_bl_sides(system, cover, hamiltonians, q)
    return log_ratio_report(
        "tensor-bl",
        log_lhs,
        log_rhs,
        tol,
        params={"dims": list(system.dims), "subsets": [list(s) for s in cover.subsets], "q": q, "p": cover.p},
    )


def zero_hamiltonian_ratio(system, cover, q) -> float:
    """Exact ``lhs/rhs = prod_i d_i^(1 - p(i)/q)`` at ``H_j = 0``."""
    return float(np.prod([d ** (1.0 - m / q) for d, m in zip(system.dims, cover.multiplicities)]))


def verify_ssa(system, rho, j, k, tol=DEFAULT_TOL) -> VerificationReport:
    """Strong subadditivity ``S(J) + S(K) >= S(J u K) + S(J n K)``.

    The intersection term is dropped when ``J`` and ``K`` are disjoint.
    """
    j = normalize_subset(j, system.n)
    k = normalize_subset(k, system.n)
    union = tuple(sorted(set(j) | set(k)))
    inter = tuple(sorted(set(j) & set(k)))
    s = lambda sub: entropy(partial_trace(system, rho, sub), "trace")
    lhs = s(j) + s(k)
    rhs = s(union) + (s(inter) if inter else 0.0)
    return VerificationReport(
        "ssa", lhs, rhs, lhs - rhs, tol, params={"J": list(j), "K": list(k), "dims": list(system.dims)}
    )


def verify_entropy_combination(system, rho, cover, tol=DEFAULT_TOL) -> VerificationReport:
    """Check ``(1/p) sum_j S(rho_{J_j}) >= S(rho)``."""
    _require_covered(cover)
    p = cover.p
    lhs = sum(entropy(partial_trace(system, rho, s), "trace") for s in cover.subsets) / p
    rhs = entropy(rho, "trace")
    return VerificationReport(
        "entropy-combination",
        lhs,
        rhs,
        lhs - rhs,
        tol,
        params={"subsets": [list(s) for s in cover.subsets], "p": p},
    )


def golden_thompson_gap(h1, h2) -> tuple[float, float, float]:
    """``(Tr e^{H1+H2}, Tr e^{H1} e^{H2}, gap)`` with ``gap = rhs - lhs >= 0``."""
    h1, h2 = hermitian(h1), hermitian(h2)
    if h1.shape != h2.shape:
        raise ValueError("operators must have the same dimension")
    lhs = float(np.trace(matrix_exp(h1 + h2)).real)
    rhs = float(np.trace(matrix_exp(h1) @ matrix_exp(h2)).real)
    return lhs, rhs, rhs - lhs


def random_cover(n, p, rng, max_subsets=8, uniform=False) -> CoverSpec:
    """Random cover of ``1..n`` whose minimum multiplicity is exactly ``p``.

    With ``uniform=True`` every index is covered exactly ``p`` times (``p``
    stacked random partitions).
    """
    if uniform:
        subsets = []
        for _ in range(p):
            labels = rng.integers(0, n, size=n)
            for lab in np.unique(labels):
                subsets.append(tuple(int(i) + 1 for i in np.flatnonzero(labels == lab)))
        return CoverSpec(n, subsets)
    while True:
        subsets = []
        counts = np.zeros(n, dtype=int)
        while counts.min() < p and len(subsets) < max_subsets:
            size = int(rng.integers(1, n + 1))
            members = rng.choice(n, size=size, replace=False)
            counts[members] += 1
            subsets.append(tuple(int(i) + 1 for i in sorted(members)))
        if counts.min() == p:
            return CoverSpec(n, subsets)


def parse_cover(text: str) -> list[tuple[int, ...]]:
    """Parse ``"{1,2},{2,3}"`` into ``[(1, 2), (2, 3)]``."""
    out = []
    for chunk in text.replace(" ", "").split("}"):
        chunk = chunk.lstrip(",").lstrip("{")
        if chunk:
            out.append(tuple(int(x) for x in chunk.split(",")))
    return out


def subsets_equal_multiplicity(cover: CoverSpec) -> bool:
    return len(set(cover.multiplicities)) == 1


def product_density(mats: Sequence[np.ndarray]) -> np.ndarray:
    out = np.array([[1.0 + 0j]])
    for m in mats:
        out = np.kron(out, m)
    return out
