"""Frame conditions on projections and the psi / log-cosh inequalities.

A frame is a list of subspaces ``V_j`` of R^n with exponents ``p_j``; it is
admissible when ``slack = I - sum_j P_j / p_j`` is positive semidefinite and
tight when the slack vanishes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .report import VerificationReport

ADMISSIBLE_TOL = 1e-10
TIGHT_TOL = 1e-10
LN2 = float(np.log(2.0))
UNIT_SLOP = 1e-12


@dataclass(frozen=True, eq=False)
class SubspaceSpec:
    """Subspace of R^n given by orthonormal columns ``basis`` (shape ``n x m``)."""

    basis: np.ndarray

    def __post_init__(self):
        b = np.atleast_2d(np.asarray(self.basis, dtype=float))
        if b.shape[1] > b.shape[0]:
            raise ValueError(f"basis has {b.shape[1]} columns in dimension {b.shape[0]}")
        gram_err = np.max(np.abs(b.T @ b - np.eye(b.shape[1])), initial=0.0)
        if gram_err > 1e-12:
            raise ValueError(f"basis is not orthonormal (Gram error {gram_err:.2e}); orthonormalize first")
        object.__setattr__(self, "basis", b)

    @classmethod
    def span(cls, vectors, n=None) -> "SubspaceSpec":
        """Orthonormalize ``vectors`` (given as columns, or a single vector) by QR."""
        v = np.asarray(vectors, dtype=float)
        if v.ndim == 1:
            v = v[:, None]
        q, r = np.linalg.qr(v)
        keep = np.abs(np.diag(r)) > 1e-12
        return cls(q[:, keep])

    @classmethod
    def coordinate(cls, n, indices) -> "SubspaceSpec":
        """Span of the standard basis vectors ``e_i`` for 1-based ``indices``."""
        return cls(np.eye(n)[:, [i - 1 for i in indices]])

    @property
    def n(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def projection(self) -> np.ndarray:
        return self.basis @ self.basis.T


@dataclass(frozen=True, eq=False)
class FrameSpec:
    subspaces: tuple[SubspaceSpec, ...]
    exponents: tuple[float, ...]

    def __init__(self, subspaces: Sequence[SubspaceSpec], exponents: Sequence[float]):
        subspaces = tuple(subspaces)
        exponents = tuple(float(p) for p in exponents)
        if len(subspaces) != len(exponents) or not subspaces:
            raise ValueError("need one exponent per subspace and at least one subspace")
        if len({v.n for v in subspaces}) != 1:
            raise ValueError("all subspaces must live in the same ambient space")
        if any(p < 1 for p in exponents):
            raise ValueError("exponents must be >= 1")
        object.__setattr__(self, "subspaces", subspaces)
        object.__setattr__(self, "exponents", exponents)

    @property
    def n(self) -> int:
        return self.subspaces[0].n

    @property
    def weights(self) -> np.ndarray:
        return 1.0 / np.array(self.exponents)

    @property
    def slack(self) -> np.ndarray:
        s = np.eye(self.n)
        for v, w in zip(self.subspaces, self.weights):
            s = s - w * v.projection
        return 0.5 * (s + s.T)

    @property
    def one_dimensional(self) -> bool:
        return all(v.dim == 1 for v in self.subspaces)

    def unit_vectors(self) -> np.ndarray:
        """Rows ``u_j`` for a frame of lines."""
        if not self.one_dimensional:
            raise ValueError("frame has subspaces of dimension > 1")
        return np.array([v.basis[:, 0] for v in self.subspaces])

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "frames": [{"basis": v.basis.T.tolist(), "p": p} for v, p in zip(self.subspaces, self.exponents)],
        }

    @classmethod
    def from_json(cls, data) -> "FrameSpec":
        """Inverse of :meth:`to_json`; each ``basis`` is a list of vectors in R^n."""
        n = int(data["n"])
        subspaces, ps = [], []
        for item in data["frames"]:
            vecs = np.array(item["basis"], dtype=float).reshape(-1, n)
            subspaces.append(SubspaceSpec.span(vecs.T))
            ps.append(item["p"])
        return cls(subspaces, ps)


def check_frame_condition(frame: FrameSpec, tol=ADMISSIBLE_TOL):
    """Return ``(admissible, min_eigenvalue, witness)`` for ``slack >= 0``.

    ``witness`` is a unit eigenvector of the smallest slack eigenvalue.
    """
    w, v = np.linalg.eigh(frame.slack)
    return bool(w[0] >= -tol), float(w[0]), v[:, 0]


def is_tight(frame: FrameSpec, tol=TIGHT_TOL) -> bool:
    return float(np.max(np.abs(frame.slack))) <= tol


def frame_of_lines(vectors, exponents) -> FrameSpec:
    vectors = np.atleast_2d(np.asarray(vectors, dtype=float))
    units = vectors / np.linalg.norm(vectors, axis=1, keepdims=True)
    return FrameSpec([SubspaceSpec(u[:, None]) for u in units], exponents)


def mercedes_frame() -> FrameSpec:
    """Three lines at 120 degrees in R^2 with ``p_j = 3/2``."""
    angles = np.pi / 2 + 2 * np.pi * np.arange(3) / 3
    return frame_of_lines(np.column_stack([np.cos(angles), np.sin(angles)]), [1.5] * 3)


def random_tight_frame(n, N, seed=None) -> FrameSpec:
    """Random frame of ``N`` lines in R^n with ``sum_j u_j u_j^T / p_j = I``.

    The rows ``q_j`` of an ``N x n`` matrix with orthonormal columns satisfy
    ``sum q_j q_j^T = I``; taking ``u_j = q_j/|q_j|`` and ``1/p_j = |q_j|^2 <= 1``
    gives the frame.
    """
    if N < n:
        raise ValueError(f"a tight frame of lines in R^{n} needs at least {n} lines, got {N}")
    rng = np.random.default_rng(seed)
    while True:
        q, _ = np.linalg.qr(rng.standard_normal((N, n)))
        norms2 = np.sum(q**2, axis=1)
        if norms2.min() > 1e-6:
            break
    units = q / np.sqrt(norms2)[:, None]
    # rounding can push a weight a hair above 1 when N == n
    return frame_of_lines(units, np.maximum(1.0 / norms2, 1.0))


def random_subspace(n, m, rng) -> SubspaceSpec:
    q, _ = np.linalg.qr(rng.standard_normal((n, m)))
    return SubspaceSpec(q[:, :m])


def _scaled_frame(subspaces, raw_weights, level):
    total = sum(w * v.projection for v, w in zip(subspaces, raw_weights))
    top = np.linalg.eigvalsh(total)[-1]
    weights = np.asarray(raw_weights) * (level / top)
    return weights


def random_admissible_frame(n, N, rng, level=None, dims=None) -> FrameSpec:
    """Random subspaces of mixed dimension with ``lambda_max(sum P_j/p_j) = level <= 1``."""
    level = rng.uniform(0.5, 1.0) if level is None else level
    dims = [int(rng.integers(1, n + 1)) for _ in range(N)] if dims is None else dims
    subspaces = [random_subspace(n, m, rng) for m in dims]
    weights = _scaled_frame(subspaces, rng.uniform(0.2, 1.0, size=N), level)
    return FrameSpec(subspaces, np.maximum(1.0 / weights, 1.0))


def random_inadmissible_frame(n, N, rng, level=None) -> FrameSpec:
    """Random frame with ``lambda_max(sum P_j/p_j) = level > 1`` and every ``p_j >= 1``."""
    if N < 2:
        raise ValueError("an inadmissible frame with p_j >= 1 needs at least two subspaces")
    level = rng.uniform(1.1, 1.8) if level is None else level
    while True:
        dims = [int(rng.integers(1, n + 1)) for _ in range(N)]
        subspaces = [random_subspace(n, m, rng) for m in dims]
        weights = _scaled_frame(subspaces, rng.uniform(0.3, 1.0, size=N), level)
        if weights.max() <= 1.0:
            return FrameSpec(subspaces, 1.0 / weights)


# --- psi and its Legendre transform -------------------------------------------------


def psi(x):
    """``(1/2)[(1+x)ln(1+x) + (1-x)ln(1-x)]`` on ``|x| <= 1``, ``inf`` outside.

    ``|x|`` up to ``1 + UNIT_SLOP`` counts as 1.

    Evaluated as ``x artanh(x) + ln(1-x^2)/2``, which keeps full relative
    precision near 0.
    """
    x = np.asarray(x, dtype=float)
    ax = np.abs(x)
    # norms of unit vectors can come out a rounding error above 1
    ax = np.where((ax > 1.0) & (ax <= 1.0 + UNIT_SLOP), 1.0, ax)
    out = np.full(x.shape, np.inf)
    inner = ax < 1.0
    xi = ax[inner]
    out[inner] = xi * np.arctanh(xi) + 0.5 * np.log1p(-xi * xi)
    out[ax == 1.0] = LN2
    return out[()] if out.ndim == 0 else out


def psi_prime(x):
    return np.arctanh(x)


def psi_second(x):
    x = np.asarray(x, dtype=float)
    return 1.0 / (1.0 - x * x)


def psi_star(y):
    """``ln cosh(y)``, overflow-safe."""
    ay = np.abs(np.asarray(y, dtype=float))
    return ay + np.log1p(np.exp(-2.0 * ay)) - LN2


def psi_star_numeric(y, xatol=1e-12) -> float:
    """``sup_{|x|<=1} (x y - psi(x))`` by bounded scalar maximization."""
    res = minimize_scalar(lambda x: -(x * y - psi(x)), bounds=(-1.0, 1.0), method="bounded", options={"xatol": xatol})
    return float(-res.fun)


def psi_numeric(x, ymax=40.0, yatol=1e-12) -> float:
    """``sup_y (x y - psi_star(y))`` for ``|x| < 1``."""
    res = minimize_scalar(lambda y: -(x * y - psi_star(y)), bounds=(-ymax, ymax), method="bounded", options={"xatol": yatol})
    return float(-res.fun)


def _projected_norms(a, frame):
    # |P_j a| = |U_j^T a|
    return np.stack([np.linalg.norm(a @ v.basis, axis=-1) for v in frame.subspaces], axis=-1)


def psi_deficits(a, frame):
    """Vectorized ``psi(|a|) - sum_j psi(|P_j a|)/p_j`` for a batch of rows ``a``."""
    a = np.atleast_2d(a)
    pa = _projected_norms(a, frame)
    return psi(np.linalg.norm(a, axis=1)) - psi(pa) @ frame.weights


def rational_deficits(a, frame):
    """Vectorized ``|a|^2/(1-|a|^2) - sum_j (|P_j a|^2/(1-|P_j a|^2))/p_j`` for ``|a| < 1``."""
    a = np.atleast_2d(a)
    r2 = np.sum(a * a, axis=1)
    pa2 = _projected_norms(a, frame) ** 2
    return r2 / (1 - r2) - (pa2 / (1 - pa2)) @ frame.weights


def verify_psi_subadditivity(a, frame, tol=1e-12) -> VerificationReport:
    """``sum_j psi(|P_j a|)/p_j <= psi(|a|)``; for ``|a| < 1`` also the rational bound."""
    a = np.asarray(a, dtype=float)
    r = float(np.linalg.norm(a))
    if r > 1.0 + UNIT_SLOP:
        raise ValueError(f"|a| = {r} > 1")
    lhs = float(psi(r))
    rhs = float(psi(_projected_norms(a[None, :], frame)[0]) @ frame.weights)
    extra = {}
    if r < 1.0:
        extra["rational_deficit"] = float(rational_deficits(a[None, :], frame)[0])
    admissible, _, _ = check_frame_condition(frame)
    return VerificationReport(
        "psi",
        lhs,
        rhs,
        lhs - rhs,
        tol,
        status="ok" if admissible else "condition-violated",
        params={"a": a.tolist(), "frame": frame.to_json()},
        extra=extra,
    )


def cosh_deficits(b, frame):
    """Vectorized ``sum_j lncosh(p_j b_j)/p_j - lncosh(|sum_j b_j u_j|)`` for rows ``b``."""
    b = np.atleast_2d(b)
    u = frame.unit_vectors()
    p = np.array(frame.exponents)
    rhs = psi_star(b * p) @ frame.weights
    lhs = psi_star(np.linalg.norm(b @ u, axis=1))
    return rhs - lhs


def verify_cosh_inequality(b, frame, tol=1e-12, require_tight=True) -> VerificationReport:
    """``ln cosh|sum b_j u_j| <= sum_j ln cosh(p_j b_j)/p_j`` for a tight frame of lines."""
    if not frame.one_dimensional:
        raise ValueError("the log-cosh inequality needs one-dimensional subspaces")
    if require_tight and not is_tight(frame):
        raise ValueError("the log-cosh inequality is stated for tight frames")
    b = np.asarray(b, dtype=float)
    u = frame.unit_vectors()
    p = np.array(frame.exponents)
    lhs = float(psi_star(np.linalg.norm(b @ u)))
    rhs = float(psi_star(b * p) @ frame.weights)
    return VerificationReport("cosh", lhs, rhs, rhs - lhs, tol, params={"b": b.tolist(), "frame": frame.to_json()})
