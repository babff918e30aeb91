"""Clifford algebra over R^n in the Jordan-Wigner representation.

Elements are stored as coefficient vectors over the multi-index basis
``Q^alpha = Q_1^{alpha_1} ... Q_n^{alpha_n}``. A multi-index is encoded as an
integer whose binary expansion, most significant bit first, is
``alpha_1 ... alpha_n``; generator ``i`` is therefore bit ``n - i``.

In this encoding ``Q^alpha`` is a signed permutation matrix with nonzero
entries at ``(r, r XOR alpha)``, which makes conversion between coefficients
and matrices an ``O(4^n)`` gather instead of a sum of ``2^n`` dense products.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Sequence

import numpy as np

from .frames import FrameSpec, SubspaceSpec, check_frame_condition
from .linalg import Density, log_trace_exp
from .report import DEFAULT_TOL, log_ratio_report

MAX_GENERATORS = 10
MAX_MATRIX_GENERATORS = 10


def popcount(a):
    a = np.asarray(a, dtype=np.int64)
    out = np.zeros(a.shape, dtype=np.int64)
    while np.any(a):
        out += a & 1
        a = a >> 1
    return out


def multi_index(bits: Sequence[int]) -> int:
    """Integer code of the multi-index ``(alpha_1, ..., alpha_n)``."""
    code = 0
    for b in bits:
        code = (code << 1) | (1 if b else 0)
    return code


def multi_index_bits(code: int, n: int) -> tuple[int, ...]:
    return tuple((code >> (n - 1 - k)) & 1 for k in range(n))


class CliffordAlgebra:
    """Generators ``Q_i = Z^{(i-1)} (x) X (x) I^{(n-i)}`` on ``(C^2)^{(x)n}``."""

    def __init__(self, n: int):
        if not 1 <= n <= MAX_GENERATORS:
            raise ValueError(f"generator count must be in 1..{MAX_GENERATORS}, got {n}")
        self.n = n
        self.dim = 2**n
        self.codes = np.arange(self.dim)

    def __repr__(self):
        return f"CliffordAlgebra(n={self.n})"

    @cached_property
    def degrees(self) -> np.ndarray:
        return popcount(self.codes)

    @cached_property
    def adjoint_signs(self) -> np.ndarray:
        """``(Q^alpha)^* = s_alpha Q^alpha`` with ``s = (-1)^{k(k-1)/2}``, ``k = |alpha|``."""
        k = self.degrees
        return np.where((k * (k - 1) // 2) % 2 == 0, 1.0, -1.0)

    def generator_bit(self, i: int) -> int:
        if not 1 <= i <= self.n:
            raise ValueError(f"generator index {i} outside 1..{self.n}")
        return 1 << (self.n - i)

    @cached_property
    def phases(self) -> np.ndarray:
        """``phases[alpha, r]`` is the entry of ``Q^alpha`` at ``(r, r ^ alpha)``."""
        r = self.codes
        table = np.empty((self.dim, self.dim))
        table[0] = 1.0
        for a in range(1, self.dim):
            low = a & -a  # last generator in the ordered product
            rest = a ^ low
            high = ~((low << 1) - 1) & (self.dim - 1)  # qubits carrying Z in that generator
            gen_phase = np.where(popcount(r & high) % 2 == 0, 1.0, -1.0)
            table[a] = table[rest] * gen_phase[r ^ rest]
        return table

    @cached_property
    def product_signs(self) -> np.ndarray:
        """``Q^alpha Q^beta = sign[alpha, beta] Q^{alpha ^ beta}``."""
        a = self.codes[:, None]
        b = self.codes[None, :]
        count = np.zeros((self.dim, self.dim), dtype=np.int64)
        for bit in range(self.n):
            # generators of alpha with larger index than the generator at this bit
            below = popcount(self.codes & ((1 << bit) - 1))[:, None]
            count += ((b >> bit) & 1) * below
        return np.where(count % 2 == 0, 1.0, -1.0)

    @cached_property
    def xor_table(self) -> np.ndarray:
        return self.codes[:, None] ^ self.codes[None, :]

    # -- representation ----------------------------------------------------------

    def to_matrix(self, coeffs) -> np.ndarray:
        coeffs = np.asarray(coeffs)
        r = self.codes
        m = np.zeros((self.dim, self.dim), dtype=complex)
        m[r[None, :], r[None, :] ^ r[:, None]] = coeffs[:, None] * self.phases
        return m

    def from_matrix(self, m) -> np.ndarray:
        """Coefficients ``x_alpha = tau((Q^alpha)^* M)``."""
        m = np.asarray(m)
        r = self.codes
        gathered = m[r[None, :], r[None, :] ^ r[:, None]]
        return np.sum(self.phases * gathered, axis=1) / self.dim

    def multiply(self, x, y) -> np.ndarray:
        """Product of two coefficient vectors, computed in coefficient space."""
        w = self.product_signs * np.outer(x, y)
        idx = self.xor_table.ravel()
        re = np.bincount(idx, weights=w.real.ravel(), minlength=self.dim)
        im = np.bincount(idx, weights=w.imag.ravel(), minlength=self.dim)
        return re + 1j * im

    # -- elements ---------------------------------------------------------------

    def element(self, coeffs) -> "CliffordElement":
        return CliffordElement(self, np.asarray(coeffs, dtype=complex))

    def from_operator(self, m) -> "CliffordElement":
        return CliffordElement(self, self.from_matrix(m))

    def identity(self) -> "CliffordElement":
        x = np.zeros(self.dim, dtype=complex)
        x[0] = 1.0
        return self.element(x)

    def basis_coeffs(self, code: int) -> np.ndarray:
        x = np.zeros(self.dim, dtype=complex)
        x[code] = 1.0
        return x

    def generator(self, i: int) -> "CliffordElement":
        return self.element(self.basis_coeffs(self.generator_bit(i)))

    @cached_property
    def generator_matrices(self) -> list[np.ndarray]:
        return [self.to_matrix(self.basis_coeffs(self.generator_bit(i))).real for i in range(1, self.n + 1)]

    def random_self_adjoint(self, rng, scale=1.0) -> "CliffordElement":
        """Random self-adjoint element with L^2(tau) norm ``scale``."""
        x = rng.standard_normal(self.dim) + 1j * rng.standard_normal(self.dim)
        x = self_adjoint_part(self, x)
        return self.element(x * scale / np.linalg.norm(x))


def self_adjoint_part(algebra: CliffordAlgebra, x) -> np.ndarray:
    """Coefficients of ``(A + A^*)/2``."""
    x = np.asarray(x, dtype=complex)
    return 0.5 * (x + algebra.adjoint_signs * x.conj())


@dataclass(frozen=True, eq=False)
class CliffordElement:
    algebra: CliffordAlgebra
    coeffs: np.ndarray

    @cached_property
    def matrix(self) -> np.ndarray:
        return self.algebra.to_matrix(self.coeffs)

    def adjoint(self) -> "CliffordElement":
        return CliffordElement(self.algebra, self.algebra.adjoint_signs * self.coeffs.conj())

    def is_self_adjoint(self, tol=1e-12) -> bool:
        return bool(np.max(np.abs(self.coeffs - self.adjoint().coeffs)) <= tol)

    def __add__(self, other):
        return CliffordElement(self.algebra, self.coeffs + other.coeffs)

    def __sub__(self, other):
        return CliffordElement(self.algebra, self.coeffs - other.coeffs)

    def __mul__(self, scalar):
        return CliffordElement(self.algebra, self.coeffs * scalar)

    __rmul__ = __mul__

    def __matmul__(self, other):
        return CliffordElement(self.algebra, self.algebra.multiply(self.coeffs, other.coeffs))

    def density(self) -> Density:
        """View as a density for the normalized trace; validates positivity and ``tau = 1``."""
        return Density.from_matrix(self.matrix, "normalized")


@lru_cache(maxsize=None)
def build_generators(n: int) -> CliffordAlgebra:
    """Shared algebra instance for ``n`` generators (its tables are built once)."""
    return CliffordAlgebra(n)


def basis_element(algebra: CliffordAlgebra, alpha) -> np.ndarray:
    """Matrix of ``Q^alpha``; ``alpha`` is a bit tuple or its integer code."""
    code = alpha if isinstance(alpha, (int, np.integer)) else multi_index(alpha)
    return algebra.to_matrix(algebra.basis_coeffs(int(code)))


def tau(a) -> complex:
    """Coefficient of the identity."""
    return complex(a.coeffs[0])


def tau_matrix(m) -> complex:
    return complex(np.trace(m) / m.shape[0])


def canonical_injection(algebra: CliffordAlgebra, x) -> CliffordElement:
    """``J(x) = sum_j x_j Q_j``."""
    x = np.asarray(x, dtype=float)
    if x.shape != (algebra.n,):
        raise ValueError(f"vector must have length {algebra.n}")
    coeffs = np.zeros(algebra.dim, dtype=complex)
    for i in range(1, algebra.n + 1):
        coeffs[algebra.generator_bit(i)] = x[i - 1]
    return algebra.element(coeffs)


def subalgebra_generators(algebra: CliffordAlgebra, subspace: SubspaceSpec) -> list[CliffordElement]:
    if subspace.n != algebra.n:
        raise ValueError("subspace lives in the wrong ambient dimension")
    return [canonical_injection(algebra, subspace.basis[:, k]) for k in range(subspace.dim)]


def subalgebra_basis(algebra: CliffordAlgebra, subspace: SubspaceSpec) -> np.ndarray:
    """Columns are the coefficient vectors of ``J(u)^beta``, ``beta`` in ``{0,1}^m``.

    They are orthonormal for the L^2(tau) inner product, which in coefficient
    space is the standard one.
    """
    return _subalgebra_basis(algebra, subspace.basis.tobytes(), subspace.basis.shape)


@lru_cache(maxsize=256)
def _subalgebra_basis(algebra, key, shape):
    basis = np.frombuffer(key).reshape(shape)
    m = shape[1]
    gens = [canonical_injection(algebra, basis[:, k]).coeffs for k in range(m)]
    cols = np.zeros((algebra.dim, 2**m), dtype=complex)
    cols[0, 0] = 1.0
    for beta in range(1, 2**m):
        low = beta & -beta
        k = m - low.bit_length()  # 0-based generator index of the last factor
        cols[:, beta] = algebra.multiply(cols[:, beta ^ low], gens[k])
    return cols


def embed_subalgebra(algebra, subspace, sub_coeffs) -> CliffordElement:
    """Image of ``sum_beta y_beta Q^beta`` in C(R^m) under the embedding determined by ``subspace``."""
    return algebra.element(subalgebra_basis(algebra, subspace) @ np.asarray(sub_coeffs, dtype=complex))


def conditional_expectation(a: CliffordElement, subspace: SubspaceSpec) -> CliffordElement:
    """L^2(tau)-orthogonal projection of ``a`` onto C(V)."""
    b = subalgebra_basis(a.algebra, subspace)
    return CliffordElement(a.algebra, b @ (b.conj().T @ a.coeffs))


def random_subalgebra_self_adjoint(algebra, subspace, rng, scale=1.0) -> CliffordElement:
    """Random self-adjoint element of C(V) with L^2(tau) norm ``scale``."""
    sub = CliffordAlgebra(subspace.dim) if subspace.dim else None
    y = sub.random_self_adjoint(rng, scale).coeffs
    return embed_subalgebra(algebra, subspace, y)


def rho_a(algebra: CliffordAlgebra, a) -> CliffordElement:
    """``I + a . Q``, a density for ``tau`` exactly when ``|a| <= 1``."""
    a = np.asarray(a, dtype=float)
    if np.linalg.norm(a) > 1.0 + 1e-15:
        raise ValueError(f"|a| = {np.linalg.norm(a)} > 1 does not give a density")
    return algebra.identity() + canonical_injection(algebra, a)


def verify_clifford_bl(algebra, frame: FrameSpec, hamiltonians, tol=DEFAULT_TOL):
    """Check ``tau exp(sum H_j) <= prod_j (tau exp(p_j H_j))^(1/p_j)`` for ``H_j`` in C(V_j).

    ``hamiltonians`` are elements of the ambient algebra lying in the
    respective subalgebras. ``tau_j`` is evaluated as ``tau`` on the embedded
    element, which is legitimate because the embedding preserves the trace.
    The report status is ``condition-violated`` when the frame is not admissible.
    """
    if len(hamiltonians) != len(frame.subspaces):
        raise ValueError("need one Hamiltonian per subspace")
    total = np.zeros((algebra.dim, algebra.dim), dtype=complex)
    log_rhs = 0.0
    for h, v, p in zip(hamiltonians, frame.subspaces, frame.exponents):
        if not h.is_self_adjoint(1e-10):
            raise ValueError("Hamiltonians must be self-adjoint")
        resid = np.linalg.norm(conditional_expectation(h, v).coeffs - h.coeffs)
        if resid > 1e-9 * (1 + np.linalg.norm(h.coeffs)):
            raise ValueError(f"Hamiltonian is not in the subalgebra (residual {resid:.2e})")
        total += h.matrix
        log_rhs += log_trace_exp(p * h.matrix, "normalized") / p
    log_lhs = log_trace_exp(total, "normalized")
    admissible, min_eig, _ = check_frame_condition(frame)
    report = log_ratio_report(
        "clifford-bl",
        log_lhs,
        log_rhs,
        tol,
        params={"n": algebra.n, "frame": frame.to_json()},
        extra={"slack_min_eigenvalue": min_eig},
    )
    if not admissible:
        report.status = "condition-violated"
    return report
