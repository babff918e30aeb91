"""Legendre duality between entropy and log-partition, and the equivalence of
Brascamp-Lieb inequalities with generalized subadditivity of entropy.

A *setting* bundles an ambient trace space with ``N`` embedded subalgebras and
exponents ``p_j``; :class:`TensorSetting` and :class:`CliffordSetting` are the
two concrete ones.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import minimize

from .clifford import (
    CliffordAlgebra,
    conditional_expectation,
    random_subalgebra_self_adjoint,
)
from .frames import FrameSpec
from .linalg import (
    Density,
    TraceFunctional,
    as_density,
    entropy,
    hermitian,
    log_trace_exp,
    matrix_exp,
    matrix_log,
    random_hermitian,
    spectral_decompose,
)
from .report import VerificationReport
from .tensor import CoverSpec, FactorSystem, embed, partial_trace


# --- Legendre transform of the entropy ---------------------------------------------


def _real(x) -> float:
    return float(np.real(x))


def legendre_objective(a, h, functional) -> float:
    """``lambda(A H) - ln lambda(e^H)``."""
    return _real(functional(a @ h)) - log_trace_exp(h, functional)


def gibbs_state(h, functional) -> np.ndarray:
    """``e^H / lambda(e^H)``, computed with a max-eigenvalue shift."""
    w, v = spectral_decompose(h, check=False)
    e = np.exp(w - w.max())
    e /= functional.of_spectrum(e)
    return (v * e) @ v.conj().T


def _herm_to_vec(m):
    d = m.shape[0]
    iu = np.triu_indices(d, 1)
    return np.concatenate([m.real[np.diag_indices(d)], m.real[iu], m.imag[iu]])


def _vec_to_herm(x, d):
    iu = np.triu_indices(d, 1)
    k = len(iu[0])
    m = np.zeros((d, d), dtype=complex)
    m[np.diag_indices(d)] = x[:d]
    m[iu] = x[d : d + k] + 1j * x[d + k :]
    m[(iu[1], iu[0])] = x[d : d + k] - 1j * x[d + k :]
    return m


def _grad_to_vec(g):
    # df = Re Tr(G E) in the real coordinates of _vec_to_herm
    d = g.shape[0]
    iu = np.triu_indices(d, 1)
    return np.concatenate([g.real[np.diag_indices(d)], 2 * g.real[iu], 2 * g.imag[iu]])


def maximize_legendre(a, functional, rng, restarts=3, maxiter=500):
    """Ascent on ``H -> lambda(AH) - ln lambda(e^H)`` from random starts.

    The gradient is ``w (A - e^H/lambda(e^H))`` with ``w`` the functional's
    weight; L-BFGS handles the badly scaled directions belonging to small
    eigenvalues of ``A``. Returns ``(best_value, best_H)``.
    """
    a = hermitian(a)
    d = a.shape[0]

    def neg(x):
        h = _vec_to_herm(x, d)
        val = legendre_objective(a, h, functional)
        g = functional.weight * (a - gibbs_state(h, functional))
        return -val, -_grad_to_vec(g.conj().T)

    best = (-np.inf, None)
    for _ in range(restarts):
        x0 = _herm_to_vec(random_hermitian(d, rng))
        res = minimize(neg, x0, jac=True, method="L-BFGS-B", options={"maxiter": maxiter, "gtol": 1e-12, "ftol": 1e-15})
        if -res.fun > best[0]:
            best = (-res.fun, _vec_to_herm(res.x, d))
    return best


def _exp_derivative_adjoint(w, v, m):
    """Adjoint of the Frechet derivative of ``exp`` at ``V diag(w) V^*`` applied to ``m``."""
    dw = w[:, None] - w[None, :]
    ew = np.exp(w)
    with np.errstate(divide="ignore", invalid="ignore"):
        gamma = np.where(np.abs(dw) > 1e-12, (ew[:, None] - ew[None, :]) / dw, 0.5 * (ew[:, None] + ew[None, :]))
    mt = v.conj().T @ m @ v
    return v @ (gamma * mt) @ v.conj().T


def dual_objective(a, h, functional) -> float:
    """``lambda(A H) + S(A)``."""
    return _real(functional(a @ h)) + entropy(Density.from_matrix(a, functional, normalize=True))


def maximize_dual(h, functional, rng, restarts=3, maxiter=500):
    """Ascent on ``A -> lambda(AH) + S(A)`` over full-rank densities ``A = e^K/lambda(e^K)``.

    Returns ``(best_value, best_A)``.
    """
    h = hermitian(h)
    d = h.shape[0]
    # shifting K by a multiple of I leaves A unchanged; work around the max eigenvalue
    def neg(x):
        k = _vec_to_herm(x, d)
        w, v = spectral_decompose(k, check=False)
        shift = w.max()
        w = w - shift
        ek = (v * np.exp(w)) @ v.conj().T
        z = functional.of_spectrum(np.exp(w))
        m = h - (k - shift * np.eye(d))
        f = _real(functional(ek @ m))
        val = f / z + np.log(z)
        g = functional.weight * (_exp_derivative_adjoint(w, v, m) / z - (f / z**2) * ek)
        return -val, -_grad_to_vec(g.conj().T)

    best = (-np.inf, None)
    for _ in range(restarts):
        x0 = _herm_to_vec(random_hermitian(d, rng))
        res = minimize(neg, x0, jac=True, method="L-BFGS-B", options={"maxiter": maxiter, "gtol": 1e-12, "ftol": 1e-15})
        if -res.fun > best[0]:
            best = (-res.fun, gibbs_state(_vec_to_herm(res.x, d), functional))
    return best


def legendre_entropy_check(a, rng, trial_count=20, restarts=3, maxiter=500, kind="trace", tol=1e-9, ascent_tol=1e-6):
    """Numerical check that ``-S(A) = sup_H {lambda(AH) - ln lambda(e^H)}``.

    (a) sampled ``H`` never exceed ``-S(A)``; (b) for strictly positive ``A`` the
    value at ``H = ln A`` equals ``-S(A)``; (c) ascent from random starts gets
    within ``ascent_tol``. For singular ``A`` only (a) is asserted.
    """
    rho = as_density(a, kind)
    fn = rho.functional
    target = -entropy(rho)
    sampled = max(
        legendre_objective(rho.op, random_hermitian(rho.dim, rng, scale=rng.uniform(0.1, 5.0)), fn)
        for _ in range(trial_count)
    )
    extra = {"sampled_max": sampled, "neg_entropy": target}
    full_rank = np.linalg.eigvalsh(rho.op).min() > 1e-12 * np.linalg.eigvalsh(rho.op).max()
    deficit = target - sampled
    if full_rank:
        attained = legendre_objective(rho.op, matrix_log(rho), fn)
        ascent, _ = maximize_legendre(rho.op, fn, rng, restarts, maxiter)
        extra.update(attained=attained, ascent=ascent)
        deficit = min(
            target - sampled,
            tol - abs(attained - target),
            ascent_tol - abs(ascent - target),
        )
    return VerificationReport(
        "legendre-entropy", target, sampled, deficit, tol, params={"dim": rho.dim, "kind": fn.kind}, status="ok" if full_rank else "singular", extra=extra
    )


def log_partition_check(h, rng, trial_count=20, restarts=3, maxiter=500, kind="trace", tol=1e-9, ascent_tol=1e-6):
    """Numerical check that ``ln lambda(e^H) = sup_A {lambda(AH) + S(A)}``, attained at the Gibbs state."""
    h = hermitian(h)
    fn = TraceFunctional(kind, h.shape[0])
    from .linalg import random_density

    target = log_trace_exp(h, fn)
    sampled = max(dual_objective(random_density(h.shape[0], rng, kind=kind).op, h, fn) for _ in range(trial_count))
    gibbs = gibbs_state(h, fn)
    attained = dual_objective(gibbs, h, fn)
    ascent, a_found = maximize_dual(h, fn, rng, restarts, maxiter)
    residual = float(np.linalg.norm(a_found - gibbs))
    deficit = min(target - sampled, tol - abs(attained - target), ascent_tol - abs(ascent - target), ascent_tol - residual)
    return VerificationReport(
        "log-partition",
        target,
        sampled,
        deficit,
        tol,
        params={"dim": h.shape[0], "kind": kind},
        extra={"attained": attained, "ascent": ascent, "maximizer_residual": residual},
    )


# --- settings -------------------------------------------------------------------


class TensorSetting:
    """Tensor product ``K = H_1 (x) ... (x) H_n`` with the trace and subsystems ``J_j``."""

    def __init__(self, system: FactorSystem, cover: CoverSpec, exponents: Sequence[float] | None = None):
        self.system = system
        self.cover = cover
        self.exponents = tuple(float(p) for p in (exponents or [cover.p] * len(cover.subsets)))
        if len(self.exponents) != len(cover.subsets) or any(p < 1 for p in self.exponents):
            raise ValueError("need one exponent >= 1 per subset")
        self.functional = TraceFunctional("trace", system.total_dim)

    @property
    def dim(self):
        return self.system.total_dim

    @property
    def size(self):
        return len(self.cover.subsets)

    def local_functional(self, j):
        return TraceFunctional("trace", self.system.subset_dim(self.cover.subsets[j]))

    def embed(self, j, h):
        return embed(self.system, self.cover.subsets[j], h)

    def marginal(self, j, rho):
        return partial_trace(self.system, rho, self.cover.subsets[j])

    def random_local(self, j, rng, scale=1.0):
        return random_hermitian(self.system.subset_dim(self.cover.subsets[j]), rng, scale)

    def describe(self):
        return {"kind": "tensor", "dims": list(self.system.dims), "subsets": [list(s) for s in self.cover.subsets], "p": list(self.exponents)}


class CliffordSetting:
    """Clifford algebra over R^n with the subalgebras C(V_j); local objects are
    represented by their images in the ambient algebra, with ``tau_j`` computed
    as ``tau`` of the image."""

    def __init__(self, algebra: CliffordAlgebra, frame: FrameSpec):
        if frame.n != algebra.n:
            raise ValueError("frame and algebra dimensions differ")
        self.algebra = algebra
        self.frame = frame
        self.exponents = frame.exponents
        self.functional = TraceFunctional("normalized", algebra.dim)

    @property
    def dim(self):
        return self.algebra.dim

    @property
    def size(self):
        return len(self.frame.subspaces)

    def local_functional(self, j):
        return self.functional

    def embed(self, j, h):
        return np.asarray(h)

    def marginal(self, j, rho):
        el = self.algebra.from_operator(rho)
        return hermitian(conditional_expectation(el, self.frame.subspaces[j]).matrix)

    def random_local(self, j, rng, scale=1.0):
        return random_subalgebra_self_adjoint(self.algebra, self.frame.subspaces[j], rng, scale).matrix

    def describe(self):
        return {"kind": "clifford", **self.frame.to_json()}


def subadditivity_deficit(setting, rho, log_constant=0.0) -> float:
    """``sum_j S(rho_j)/p_j - S(rho) + ln C``."""
    rho = rho.op if isinstance(rho, Density) else np.asarray(rho)
    s = entropy(Density.from_matrix(rho, setting.functional))
    total = 0.0
    for j, p in enumerate(setting.exponents):
        total += entropy(Density.from_matrix(setting.marginal(j, rho), setting.local_functional(j))) / p
    return total - s + log_constant


def bl_sides(setting, hams):
    """``(ln lambda exp(sum phi_j H_j), sum_j ln lambda_j exp(p_j H_j) / p_j)``."""
    total = sum(setting.embed(j, h) for j, h in enumerate(hams))
    log_lhs = log_trace_exp(total, setting.functional)
    log_rhs = sum(log_trace_exp(p * h, setting.local_functional(j)) / p for j, (h, p) in enumerate(zip(hams, setting.exponents)))
    return log_lhs, log_rhs


def induced_density_residual(setting, rho, probe, j) -> float:
    """``|lambda_j(rho_j A) - lambda(rho phi_j(A))|`` for one probe ``A``."""
    lhs = setting.local_functional(j)(setting.marginal(j, rho) @ probe)
    rhs = setting.functional(rho @ setting.embed(j, probe))
    return float(abs(lhs - rhs))


def forward_chain(setting, rho, hams, log_constant=0.0):
    """Links of the chain from a B-L inequality to subadditivity.

    Returns the values ``L0 >= L1 = L2 >= L3 = L4`` where ``L0 = -S(rho)``,
    ``L1 = lambda(rho sum phi_j H_j) - ln lambda exp(sum phi_j H_j)`` and so on
    down to ``L4 = sum_j [lambda_j(rho_j p_j H_j) - ln lambda_j e^{p_j H_j}]/p_j - ln C``.
    """
    fn = setting.functional
    total = sum(setting.embed(j, h) for j, h in enumerate(hams))
    log_lhs, log_rhs = bl_sides(setting, hams)
    l0 = -entropy(Density.from_matrix(rho, fn))
    l1 = _real(fn(rho @ total)) - log_lhs
    local = [_real(setting.local_functional(j)(setting.marginal(j, rho) @ h)) for j, h in enumerate(hams)]
    l2 = sum(local) - log_lhs
    l3 = sum(local) - log_rhs - log_constant
    l4 = (
        sum(
            (_real(setting.local_functional(j)(setting.marginal(j, rho) @ (p * h))) - log_trace_exp(p * h, setting.local_functional(j))) / p
            for j, (h, p) in enumerate(zip(hams, setting.exponents))
        )
        - log_constant
    )
    return [l0, l1, l2, l3, l4]


def backward_chain(setting, hams, log_constant=0.0):
    """Links of the chain from subadditivity back to the B-L inequality at the Gibbs state.

    Returns ``B0 = B1 = B2 <= B3 <= B4`` with ``B0 = ln lambda exp(sum phi_j H_j)``
    and ``B4 = sum_j ln lambda_j exp(p_j H_j)/p_j + ln C``.
    """
    fn = setting.functional
    total = hermitian(sum(setting.embed(j, h) for j, h in enumerate(hams)))
    log_lhs, log_rhs = bl_sides(setting, hams)
    rho = gibbs_state(total, fn)
    s = entropy(Density.from_matrix(rho, fn))
    marg = [setting.marginal(j, rho) for j in range(setting.size)]
    b0 = log_lhs
    b1 = _real(fn(rho @ total)) + s
    b2 = sum(_real(setting.local_functional(j)(m @ h)) for j, (m, h) in enumerate(zip(marg, hams))) + s
    b3 = (
        sum(
            (_real(setting.local_functional(j)(m @ (p * h))) + entropy(Density.from_matrix(m, setting.local_functional(j)))) / p
            for j, (m, h, p) in enumerate(zip(marg, hams, setting.exponents))
        )
        + log_constant
    )
    b4 = log_rhs + log_constant
    return [b0, b1, b2, b3, b4]


def optimal_local_hamiltonians(setting, rho):
    """``H_j = ln(rho_j)/p_j``, the maximizers in the forward chain."""
    return [matrix_log(Density.from_matrix(setting.marginal(j, rho), setting.local_functional(j))) / p for j, p in enumerate(setting.exponents)]


def _chain_slack(values, relations):
    """Smallest signed slack along a chain; ``=`` links contribute ``-|x - y|``."""
    worst = np.inf
    for (x, y), rel in zip(zip(values, values[1:]), relations):
        if rel == "=":
            worst = min(worst, -abs(x - y))
        elif rel == ">=":
            worst = min(worst, x - y)
        else:
            worst = min(worst, y - x)
    return worst


def check_duality_instance(setting, rho, hams, log_constant=0.0) -> tuple[float, float]:
    """Worst signed link slack and subadditivity-identity error for one instance.

    ``rho`` goes through the forward chain at the optimal ``H_j = ln(rho_j)/p_j``
    and at the given ``hams``; ``hams`` also go through the backward chain.
    """
    fwd = forward_chain(setting, rho, optimal_local_hamiltonians(setting, rho), log_constant)
    worst = _chain_slack(fwd, [">=", "=", ">=", "="])
    # sa deficit = legendre gap + bl deficit
    sa = subadditivity_deficit(setting, rho, log_constant)
    identity_err = abs(sa - ((fwd[0] - fwd[1]) + (fwd[2] - fwd[3])))
    worst = min(worst, -identity_err)
    worst = min(worst, _chain_slack(backward_chain(setting, hams, log_constant), ["=", "=", "<=", "<="]))
    worst = min(worst, _chain_slack(forward_chain(setting, rho, hams, log_constant), [">=", "=", ">=", "="]))
    return float(worst), float(identity_err)


def random_duality_instance(setting, rng, scale=1.0):
    """Full-rank density (inside the algebra for Clifford settings) and random local ``H_j``."""
    from .linalg import random_density

    rho = random_density(setting.dim, rng, kind=setting.functional.kind).op
    if setting.functional.kind == "normalized":
        # project into the algebra; the trace-preserving projection keeps positivity
        rho = setting.algebra.from_operator(rho).matrix
    hams = [setting.random_local(j, rng, rng.uniform(0.1, scale * 3)) for j in range(setting.size)]
    return rho, hams


def verify_duality_equivalence(setting, rng, samples=100, scale=1.0, tol=1e-8, log_constant=0.0):
    """Instantiate both directions of the B-L / subadditivity equivalence on samples.

    Every link is checked to ``tol``: the reported deficit is the worst signed
    slack over samples, with equalities contributing ``-|difference|``.
    """
    worst, worst_identity = np.inf, 0.0
    for _ in range(samples):
        rho, hams = random_duality_instance(setting, rng, scale)
        w, ident = check_duality_instance(setting, rho, hams, log_constant)
        worst = min(worst, w)
        worst_identity = max(worst_identity, ident)
    return VerificationReport(
        "duality", 0.0, 0.0, float(worst), tol, params={"setting": setting.describe(), "samples": samples}, extra={"max_identity_error": worst_identity}
    )


def zero_hamiltonian_chains(setting):
    hams = [np.zeros((setting.local_functional(j).dim,) * 2) for j in range(setting.size)]
    return backward_chain(setting, hams)
