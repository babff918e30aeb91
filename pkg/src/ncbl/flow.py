"""Differential calculus on the Clifford algebra and the Clifford-Mehler flow.

Linear operations (grading, derivatives, number operators, the flow) act on
coefficient vectors, where they are exact; logarithms and entropies go through
the matrix representation.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .clifford import CliffordAlgebra, CliffordElement, conditional_expectation, popcount
from .frames import FrameSpec, SubspaceSpec, check_frame_condition
from .linalg import DomainError, apply_function, entropy, relative_entropy, spectral_decompose
from .report import DEFAULT_TOL, VerificationReport

POSITIVITY_FLOOR = 1e-12
REGULARIZATION = 1e-10

FUNCTIONS = {
    "identity": lambda w: w,
    "exp": np.exp,
    "log": np.log,
    "power": lambda w: w**1.5,
}


def grading(a: CliffordElement) -> CliffordElement:
    return CliffordElement(a.algebra, a.coeffs * (-1.0) ** a.algebra.degrees)


def skew_derivative(a: CliffordElement, i: int) -> CliffordElement:
    """``(1/2)[Q_i A - Gamma(A) Q_i]``."""
    q = a.algebra.generator(i)
    return 0.5 * ((q @ a) - (grading(a) @ q))


@lru_cache(maxsize=16)
def derivative_maps(algebra: CliffordAlgebra) -> tuple[np.ndarray, ...]:
    """Matrices of ``nabla_1 .. nabla_n`` acting on coefficient vectors.

    ``nabla_i Q^alpha`` is zero unless ``alpha_i = 1``, in which case it is
    ``Q^alpha`` with the ``Q_i`` factor anticommuted to the front and removed.
    """
    codes = algebra.codes
    maps = []
    for i in range(1, algebra.n + 1):
        bit = algebra.generator_bit(i)
        d = np.zeros((algebra.dim, algebra.dim))
        has = (codes & bit) != 0
        # generators preceding Q_i in the ordered product sit at higher bits
        before = popcount(codes & ~((bit << 1) - 1))
        sign = np.where(before % 2 == 0, 1.0, -1.0)
        src = codes[has]
        d[src ^ bit, src] = sign[has]
        maps.append(d)
    return tuple(maps)


def number_operator(a: CliffordElement) -> CliffordElement:
    """``N Q^alpha = |alpha| Q^alpha``."""
    return CliffordElement(a.algebra, a.coeffs * a.algebra.degrees)


def number_operator_matrix(algebra: CliffordAlgebra) -> np.ndarray:
    """``sum_j nabla_j^* nabla_j`` assembled from the derivative maps."""
    return sum(d.T @ d for d in derivative_maps(algebra))


def restricted_number_matrix(algebra: CliffordAlgebra, subspace: SubspaceSpec) -> np.ndarray:
    """``N_V = sum_{ij} [P_V]_{ij} nabla_i^* nabla_j`` on coefficient vectors."""
    return _restricted_number_matrix(algebra, subspace.projection.tobytes())


@lru_cache(maxsize=256)
def _restricted_number_matrix(algebra, key):
    p = np.frombuffer(key).reshape(algebra.n, algebra.n)
    ds = derivative_maps(algebra)
    out = np.zeros((algebra.dim, algebra.dim))
    for i, di in enumerate(ds):
        for j, dj in enumerate(ds):
            if p[i, j] != 0.0:
                out += p[i, j] * (di.T @ dj)
    return out


def restricted_number_operator(a: CliffordElement, subspace: SubspaceSpec) -> CliffordElement:
    return CliffordElement(a.algebra, restricted_number_matrix(a.algebra, subspace) @ a.coeffs)


def mehler_flow(a: CliffordElement, t: float) -> CliffordElement:
    """``exp(-t N) a``."""
    if t < 0:
        raise ValueError("the flow is only defined for t >= 0")
    return CliffordElement(a.algebra, a.coeffs * np.exp(-t * a.algebra.degrees))


def dirichlet_form(a: CliffordElement, b: CliffordElement) -> complex:
    """``tau(sum_j (nabla_j A)^* nabla_j B)``."""
    return complex(sum(np.vdot(d @ a.coeffs, d @ b.coeffs) for d in derivative_maps(a.algebra)))


def restricted_dirichlet_form(a: CliffordElement, b: CliffordElement, subspace: SubspaceSpec) -> complex:
    ds = derivative_maps(a.algebra)
    p = subspace.projection
    da = [d @ a.coeffs for d in ds]
    db = [d @ b.coeffs for d in ds]
    return complex(sum(p[i, j] * np.vdot(da[i], db[j]) for i in range(len(ds)) for j in range(len(ds))))


def _positive(rho: CliffordElement) -> CliffordElement:
    w = np.linalg.eigvalsh(rho.matrix)
    if w.min() >= POSITIVITY_FLOOR:
        return rho
    eps = REGULARIZATION
    out = rho * (1 - eps) + rho.algebra.identity() * eps
    if np.linalg.eigvalsh(out.matrix).min() <= 0:
        raise DomainError("density is not positive even after regularization")
    return out


def log_element(rho: CliffordElement) -> CliffordElement:
    rho = _positive(rho)
    return rho.algebra.from_operator(apply_function(rho.matrix, np.log))


def clifford_entropy(rho: CliffordElement) -> float:
    """``-tau(rho ln rho)``."""
    return entropy(rho.matrix, "normalized")


def entropy_production(rho: CliffordElement) -> float:
    """``D(rho) = tau(ln(rho) N(rho))``."""
    rho = _positive(rho)
    lg = log_element(rho)
    return float(np.vdot(lg.coeffs, rho.coeffs * rho.algebra.degrees).real)


def restricted_entropy_production(rho: CliffordElement, subspace: SubspaceSpec) -> float:
    """``D_V(rho) = tau(ln(rho) N_V(rho))``."""
    rho = _positive(rho)
    lg = log_element(rho)
    return float(np.vdot(lg.coeffs, restricted_number_matrix(rho.algebra, subspace) @ rho.coeffs).real)


def gross_hat(a: CliffordElement, j: int) -> CliffordElement:
    """Flip the sign of every basis term containing ``Q_j``."""
    bit = a.algebra.generator_bit(j)
    sign = np.where(a.algebra.codes & bit, -1.0, 1.0)
    return CliffordElement(a.algebra, a.coeffs * sign)


def number_component(a: CliffordElement, j: int) -> CliffordElement:
    """``N_j a``: the part of ``a`` whose basis terms contain ``Q_j``."""
    bit = a.algebra.generator_bit(j)
    return CliffordElement(a.algebra, np.where(a.algebra.codes & bit, a.coeffs, 0.0))


def production_via_gross(rho: CliffordElement) -> float:
    """``sum_j [H(rho|rho_j) + H(rho_j|rho)] / 4`` with ``rho_j`` the hat of ``rho`` at ``j``."""
    rho = _positive(rho)
    total = 0.0
    for j in range(1, rho.algebra.n + 1):
        hat = gross_hat(rho, j)
        total += relative_entropy(rho.matrix, hat.matrix, "normalized")
        total += relative_entropy(hat.matrix, rho.matrix, "normalized")
    return 0.25 * total


def verify_gross_formula(a: CliffordElement, f="exp", j=None, tol=1e-10) -> VerificationReport:
    """Check ``N_j f(A) = (f(A) - f(A_hat))/2`` for each ``j`` (or only the given one).

    The deficit is ``tol*(1 + |f(A)|_F) - max_j error``, so it is nonnegative
    exactly when every residual is inside the relative tolerance.
    """
    fn = FUNCTIONS[f] if isinstance(f, str) else f
    if f == "log" and np.linalg.eigvalsh(a.matrix).min() <= 0:
        raise DomainError("log needs a positive element")
    alg = a.algebra
    fa = alg.from_operator(apply_function(a.matrix, fn))
    scale = 1.0 + np.sqrt(alg.dim) * np.linalg.norm(fa.coeffs)
    worst = 0.0
    for jj in [j] if j is not None else range(1, alg.n + 1):
        f_hat = alg.from_operator(apply_function(gross_hat(a, jj).matrix, fn))
        diff = number_component(fa, jj).coeffs - 0.5 * (fa.coeffs - f_hat.coeffs)
        # Frobenius norm of the matrix is sqrt(2^n) times the coefficient norm
        worst = max(worst, float(np.sqrt(alg.dim) * np.linalg.norm(diff)))
    return VerificationReport(
        "gross", worst, tol * scale, tol * scale - worst, 0.0, params={"f": f if isinstance(f, str) else "custom", "n": alg.n}
    )


def verify_production_monotonicity(rho: CliffordElement, subspace: SubspaceSpec, tol=DEFAULT_TOL) -> VerificationReport:
    """``D(rho_V) <= D_V(rho)``."""
    rho_v = conditional_expectation(rho, subspace)
    lhs = entropy_production(rho_v)
    rhs = restricted_entropy_production(rho, subspace)
    return VerificationReport("production-monotonicity", lhs, rhs, rhs - lhs, tol, params={"n": rho.algebra.n})


def subadditivity_curve(rho: CliffordElement, frame: FrameSpec, ts) -> np.ndarray:
    """``a(t) = sum_j S((rho_t)_{V_j})/p_j - S(rho_t)`` along the flow."""
    out = []
    for t in ts:
        rt = mehler_flow(rho, t)
        marg = sum(w * clifford_entropy(conditional_expectation(rt, v)) for v, w in zip(frame.subspaces, frame.weights))
        out.append(marg - clifford_entropy(rt))
    return np.array(out)


def verify_deficit_monotone(rho, frame: FrameSpec, t_grid=None, step_tol=1e-8, limit_tol=1e-9, t_limit=40.0):
    """Check that ``a(t)`` is non-increasing on ``t_grid`` and vanishes at ``t_limit``.

    The reported deficit is the smallest slack among the step checks and the
    limit check. For an inadmissible frame the status says so and nothing is
    asserted.
    """
    t_grid = np.round(np.arange(0, 5.0 + 1e-9, 0.1), 10) if t_grid is None else np.asarray(t_grid)
    curve = subadditivity_curve(rho, frame, list(t_grid) + [t_limit])
    steps = np.diff(curve[:-1])
    worst_step = float(steps.max(initial=-np.inf))
    limit = float(abs(curve[-1]))
    deficit = min(step_tol - worst_step, limit_tol - limit)
    admissible, _, _ = check_frame_condition(frame)
    return VerificationReport(
        "deficit-monotone",
        float(curve[0]),
        float(curve[-1]),
        deficit,
        0.0,
        status="ok" if admissible else "condition-violated",
        params={"t_grid": [float(t) for t in t_grid]},
        extra={"max_step_increase": worst_step, "limit_value": float(curve[-1])},
    )


def number_operator_domination(algebra: CliffordAlgebra, frame: FrameSpec) -> float:
    """Smallest eigenvalue of ``N - sum_j N_{V_j}/p_j`` on coefficient space."""
    gap = number_operator_matrix(algebra) - sum(
        w * restricted_number_matrix(algebra, v) for v, w in zip(frame.subspaces, frame.weights)
    )
    return float(np.linalg.eigvalsh(0.5 * (gap + gap.T))[0])


def random_positive_element(algebra: CliffordAlgebra, rng, rank=None) -> CliffordElement:
    """Random density for ``tau`` (Wishart-type); ``rank=None`` gives full rank."""
    d = algebra.dim
    cols = 2 * d if rank is None else rank
    g = rng.standard_normal((d, cols)) + 1j * rng.standard_normal((d, cols))
    m = g @ g.conj().T
    m *= d / np.trace(m).real
    return algebra.from_operator(m)


def spectrum(a: CliffordElement) -> np.ndarray:
    return spectral_decompose(a.matrix, check=False)[0]
