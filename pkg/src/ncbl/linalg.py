"""Dense Hermitian linear algebra, trace functionals and entropies.

Every matrix function in the package goes through :func:`spectral_decompose`;
there is no Pade or scaling-and-squaring path.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

HERMITIAN_ATOL = 1e-12
SUPPORT_CUTOFF = 1e-14
PSD_CLAMP = 1e-10


class EigensolverError(RuntimeError):
    """Raised when the eigensolver fails or the decomposition does not reconstruct."""

    def __init__(self, message, residual=np.nan):
        super().__init__(f"{message} (residual={residual:.3e})")
        self.residual = residual


class DomainError(ValueError):
    pass


def hermitian(a, check=False) -> np.ndarray:
    """Return ``(a + a^*)/2`` as a complex array.

    With ``check=True`` a :class:`ValueError` is raised when ``a`` is further
    than ``HERMITIAN_ATOL`` (relative to its size) from Hermitian.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if check:
        err = np.max(np.abs(a - a.conj().T), initial=0.0)
        if err > HERMITIAN_ATOL * max(1.0, np.max(np.abs(a), initial=0.0)):
            raise ValueError(f"matrix is not Hermitian (max asymmetry {err:.3e})")
    return 0.5 * (a + a.conj().T)


@dataclass(frozen=True)
class TraceFunctional:
    """Either the trace (``kind="trace"``) or the normalized trace on ``dim x dim`` matrices."""

    kind: str
    dim: int

    def __post_init__(self):
        if self.kind not in ("trace", "normalized"):
            raise ValueError(f"unknown trace functional {self.kind!r}")
        if self.dim < 1:
            raise ValueError("dimension must be positive")

    @property
    def weight(self) -> float:
        return 1.0 if self.kind == "trace" else 1.0 / self.dim

    def __call__(self, a) -> complex:
        return self.weight * np.trace(a)

    def of_spectrum(self, values) -> float:
        return self.weight * float(np.sum(values))


def trace_functional(kind, dim) -> TraceFunctional:
    if isinstance(kind, TraceFunctional):
        return kind
    return TraceFunctional(kind, dim)


def spectral_decompose(h, check=True):
    """Eigen-decomposition of a Hermitian matrix.

    Returns ``(w, v)`` with ascending eigenvalues ``w`` and orthonormal columns ``v``.
    """
    h = hermitian(h)
    try:
        w, v = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(f"eigh did not converge: {exc}") from exc
    if check:
        scale = 1.0 + np.linalg.norm(h)
        resid = np.linalg.norm(h - (v * w) @ v.conj().T) / scale
        if not np.isfinite(resid) or resid > 1e-10:
            raise EigensolverError("reconstruction check failed", resid)
    return w, v


def apply_function(h, f: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Spectral calculus ``f(H) = V f(Lambda) V^*`` for a Hermitian ``H``."""
    w, v = spectral_decompose(h, check=False)
    return (v * f(w)) @ v.conj().T


def matrix_exp(h) -> np.ndarray:
    return apply_function(h, np.exp)


def support_mask(values, cutoff=SUPPORT_CUTOFF) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    top = values.max(initial=0.0)
    if top <= 0.0:
        return np.zeros(values.shape, dtype=bool)
    return values > cutoff * top


def matrix_log(rho) -> np.ndarray:
    """Logarithm of a positive semidefinite matrix, restricted to its support.

    Eigenvalues at or below ``SUPPORT_CUTOFF * lambda_max`` are treated as exact
    zeros and mapped to 0, so the result is ``ln rho`` on the support and 0 on
    the kernel.
    """
    rho = rho.op if isinstance(rho, Density) else rho
    w, v = spectral_decompose(rho, check=False)
    mask = support_mask(w)
    if not mask.any():
        raise DomainError("logarithm of the zero matrix")
    logw = np.zeros_like(w)
    logw[mask] = np.log(w[mask])
    return (v * logw) @ v.conj().T


def log_trace_exp(h, functional="trace") -> float:
    """``ln lambda(exp H)`` evaluated with a max-eigenvalue shift."""
    h = np.asarray(h)
    fn = trace_functional(functional, h.shape[0])
    w = np.linalg.eigvalsh(hermitian(h))
    top = w.max()
    return float(top + np.log(np.sum(np.exp(w - top)) * fn.weight))


def xlogx(x) -> np.ndarray:
    """Elementwise ``x ln x`` with the convention ``0 ln 0 = 0``."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = x[pos] * np.log(x[pos])
    return out


@dataclass(frozen=True, eq=False)
class Density:
    """A positive semidefinite matrix with unit integral under ``functional``."""

    op: np.ndarray
    functional: TraceFunctional

    @classmethod
    def from_matrix(cls, m, kind="trace", normalize=False) -> "Density":
        """Symmetrize, clamp eigenvalues in ``[-PSD_CLAMP, 0)`` to zero and validate.

        With ``normalize=True`` the matrix is rescaled to unit integral instead of
        being rejected.
        """
        m = hermitian(m)
        fn = trace_functional(kind, m.shape[0])
        w, v = spectral_decompose(m, check=False)
        scale = max(1.0, float(np.max(np.abs(w), initial=0.0)))
        if w.min() < -PSD_CLAMP * scale:
            raise DomainError(f"not positive semidefinite (min eigenvalue {w.min():.3e})")
        w = np.clip(w, 0.0, None)
        mass = fn.of_spectrum(w)
        if normalize:
            if mass <= 0:
                raise DomainError("cannot normalize the zero matrix")
            w = w / mass
        elif abs(mass - 1.0) > PSD_CLAMP:
            raise DomainError(f"integral is {mass!r}, expected 1")
        op = (v * w) @ v.conj().T
        return cls(0.5 * (op + op.conj().T), fn)

    @property
    def dim(self) -> int:
        return self.op.shape[0]

    def eigenvalues(self) -> np.ndarray:
        return np.clip(np.linalg.eigvalsh(self.op), 0.0, None)


def as_density(rho, kind="trace") -> Density:
    if isinstance(rho, Density):
        return rho
    return Density.from_matrix(rho, kind)


def entropy(rho, kind="trace") -> float:
    """Entropy ``S(rho) = -lambda(rho ln rho)`` computed on the spectrum."""
    rho = as_density(rho, kind)
    return -rho.functional.of_spectrum(xlogx(rho.eigenvalues()))


def extended_entropy(a, kind="trace") -> float:
    """Entropy extended to all Hermitian ``a``: ``-inf`` unless ``a`` is a density."""
    try:
        rho = Density.from_matrix(a, kind)
    except DomainError:
        return -np.inf
    return entropy(rho)


def relative_entropy(rho, sigma, kind="trace") -> float:
    """``H[rho|sigma] = lambda(rho (ln rho - ln sigma))``; ``inf`` if the supports are not nested."""
    rho = as_density(rho, kind)
    sigma = as_density(sigma, rho.functional.kind)
    if rho.dim != sigma.dim or rho.functional != sigma.functional:
        raise ValueError("relative entropy needs densities on the same space and functional")
    wr, vr = spectral_decompose(rho.op, check=False)
    ws, vs = spectral_decompose(sigma.op, check=False)
    mr, ms = support_mask(wr), support_mask(ws)
    # overlap of supp(rho) with ker(sigma)
    leak = vs[:, ~ms].conj().T @ vr[:, mr]
    if leak.size and np.max(np.abs(leak)) > 1e-7:
        return np.inf
    logs = np.zeros_like(ws)
    logs[ms] = np.log(ws[ms])
    # lambda(rho ln sigma) = w * sum_ij wr_i |<r_i|s_j>|^2 ln ws_j
    overlap = np.abs(vr[:, mr].conj().T @ vs[:, ms]) ** 2
    cross = float(wr[mr] @ overlap @ logs[ms])
    self_term = float(np.sum(xlogx(wr[mr])))
    return rho.functional.weight * (self_term - cross)


def schatten_norm(a, q=2.0, kind="trace") -> float:
    """``(lambda[(A^* A)^{q/2}])^{1/q}``."""
    a = np.asarray(a)
    fn = trace_functional(kind, a.shape[0])
    s = np.linalg.svd(a, compute_uv=False)
    return float((fn.weight * np.sum(s**q)) ** (1.0 / q))


def random_hermitian(dim, rng, scale=1.0) -> np.ndarray:
    """GUE-style Hermitian matrix normalized to Frobenius norm ``scale``."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    h = 0.5 * (g + g.conj().T)
    return h * (scale / np.linalg.norm(h))


def random_density(dim, rng, rank=None, kind="trace") -> Density:
    """Random density from a Wishart-type ensemble ``G G^*`` with ``G`` of shape ``dim x rank``.

    ``rank=None`` draws ``2*dim`` columns, which keeps the spectrum away from zero.
    """
    cols = 2 * dim if rank is None else rank
    g = rng.standard_normal((dim, cols)) + 1j * rng.standard_normal((dim, cols))
    return Density.from_matrix(g @ g.conj().T, kind, normalize=True)


def random_unitary(dim, rng) -> np.ndarray:
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))
