"""The commutative Gaussian case.

Densities are taken against the standard Gaussian measure ``gamma_n``. The
family ``rho_b(x) = exp(b.x - |b|^2/2)`` is closed under marginals and the
Mehler flow, so every quantity has a closed form in ``b``; low-dimensional
Simpson quadrature provides an independent oracle for those closed forms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from .frames import FrameSpec, SubspaceSpec, check_frame_condition
from .report import DEFAULT_TOL, VerificationReport, log_ratio_report

MASS_TOL = 1e-6
WINDOW = 8.0
MAX_STEP = {1: 0.01, 2: 0.05}


@dataclass(frozen=True)
class LinearExponentialDensity:
    """``rho(x) = exp(b.x - |b|^2/2)``, a unit-mass density for ``gamma_n``."""

    b: np.ndarray

    def __init__(self, b):
        object.__setattr__(self, "b", np.atleast_1d(np.asarray(b, dtype=float)))

    @property
    def n(self) -> int:
        return self.b.shape[0]

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return np.exp(x @ self.b - 0.5 * self.b @ self.b)

    def log(self, x):
        return np.asarray(x, dtype=float) @ self.b - 0.5 * self.b @ self.b

    def entropy(self) -> float:
        return gaussian_entropy(self.b)


def gaussian_entropy(b) -> float:
    """``-int rho_b ln rho_b dgamma = -|b|^2/2``."""
    b = np.atleast_1d(np.asarray(b, dtype=float))
    return -0.5 * float(b @ b)


def gaussian_marginal(b, subspace: SubspaceSpec) -> LinearExponentialDensity:
    """Marginal of ``rho_b`` on ``V``, as a density on R^n depending only on ``P_V x``."""
    return LinearExponentialDensity(subspace.projection @ np.asarray(b, dtype=float))


def mehler_action(b, t) -> LinearExponentialDensity:
    """``exp(-tN) rho_b = rho_{e^{-t} b}``."""
    if t < 0:
        raise ValueError("the flow is only defined for t >= 0")
    return LinearExponentialDensity(np.exp(-t) * np.asarray(b, dtype=float))


def gaussian_entropy_production(b) -> float:
    """``int |grad ln rho_b|^2 rho_b dgamma = |b|^2``."""
    b = np.atleast_1d(np.asarray(b, dtype=float))
    return float(b @ b)


def slack_quadratic_form(b, frame: FrameSpec) -> float:
    """``b . slack . b / 2``."""
    b = np.asarray(b, dtype=float)
    return 0.5 * float(b @ frame.slack @ b)


def verify_gaussian_sa(b, frame: FrameSpec, tol=DEFAULT_TOL) -> VerificationReport:
    """Check ``sum_j S(rho_{P_j b})/p_j >= S(rho_b)`` from the closed-form entropies.

    The deficit is ``b.slack.b / 2``; ``extra["quadratic_form"]`` holds that
    value computed directly from the slack matrix.
    """
    b = np.asarray(b, dtype=float)
    if b.shape != (frame.n,):
        raise ValueError(f"b has shape {b.shape}, frame lives in R^{frame.n}")
    lhs = sum(w * gaussian_marginal(b, v).entropy() for v, w in zip(frame.subspaces, frame.weights))
    rhs = gaussian_entropy(b)
    admissible, min_eig, _ = check_frame_condition(frame)
    return VerificationReport(
        "gaussian-sa",
        float(lhs),
        rhs,
        float(lhs - rhs),
        tol,
        status="ok" if admissible else "condition-violated",
        params={"b": b.tolist(), "frame": frame.to_json()},
        extra={"quadratic_form": slack_quadratic_form(b, frame), "slack_min_eigenvalue": min_eig},
    )


# --- quadrature -------------------------------------------------------------------


def _grid_axis(h, window=WINDOW):
    m = int(round(2 * window / h))
    if m % 2:
        m += 1
    return np.linspace(-window, window, m + 1)


def gaussian_weight(x):
    """Standard Gaussian density on the last axis of ``x``."""
    x = np.asarray(x, dtype=float)
    n = x.shape[-1]
    return np.exp(-0.5 * np.sum(x * x, axis=-1)) / (2 * np.pi) ** (n / 2)


@dataclass
class GridDensity:
    """Samples of a function on a uniform grid over ``[-L, L]^n``, ``n`` in {1, 2}.

    Integrals are against ``gamma_n`` via tensor-product Simpson quadrature.
    """

    n: int
    h: float
    values: np.ndarray
    window: float = WINDOW

    @classmethod
    def from_function(cls, f, n, h=None, window=WINDOW) -> "GridDensity":
        if n not in (1, 2):
            raise ValueError("quadrature is available for n = 1, 2 only")
        h = MAX_STEP[n] if h is None else float(h)
        if h > MAX_STEP[n]:
            raise ValueError(f"grid step {h} exceeds {MAX_STEP[n]} for n = {n}")
        axis = _grid_axis(h, window)
        pts = np.stack(np.meshgrid(*[axis] * n, indexing="ij"), axis=-1)
        return cls(n, float(axis[1] - axis[0]), np.asarray(f(pts), dtype=float), window)

    @property
    def axis(self):
        return np.linspace(-self.window, self.window, self.values.shape[0])

    @property
    def points(self):
        return np.stack(np.meshgrid(*[self.axis] * self.n, indexing="ij"), axis=-1)

    def integrate(self, g=None) -> float:
        """``int g dgamma`` for samples ``g`` on the grid (default: this density)."""
        g = self.values if g is None else g
        y = g * gaussian_weight(self.points)
        for _ in range(self.n):
            y = simpson(y, x=self.axis, axis=0)
        return float(y)

    def mass(self) -> float:
        return self.integrate()

    def check_mass(self, tol=MASS_TOL):
        err = abs(self.mass() - 1.0)
        if err > tol:
            raise ValueError(f"quadrature mass error {err:.2e} > {tol:g}; enlarge the window or shrink the step")
        return err

    def normalized(self) -> "GridDensity":
        return GridDensity(self.n, self.h, self.values / self.mass(), self.window)

    def entropy(self) -> float:
        v = self.values
        with np.errstate(divide="ignore", invalid="ignore"):
            integrand = np.where(v > 0, v * np.log(v), 0.0)
        return -self.integrate(integrand)

    def entropy_production(self) -> float:
        """``int |grad ln rho|^2 rho dgamma`` with central-difference gradients."""
        with np.errstate(divide="ignore"):
            lg = np.log(self.values)
        grads = np.gradient(lg, self.h, edge_order=2)
        grads = [grads] if self.n == 1 else grads
        return self.integrate(sum(g * g for g in grads) * self.values)


def quadrature_entropy(b, h=0.005) -> float:
    """Entropy of ``rho_b`` for ``b`` in R^1 or R^2 by quadrature."""
    rho = LinearExponentialDensity(b)
    grid = GridDensity.from_function(rho, rho.n, h)
    grid.check_mass()
    return grid.entropy()


def quadrature_marginal(b, u, s, h=0.005) -> np.ndarray:
    """Marginal of ``rho_b`` (``b`` in R^2) along the unit vector ``u``, at coordinates ``s``.

    Integrates ``rho_b(s u + r w)`` against ``gamma_1(dr)`` over the
    orthogonal direction ``w``.
    """
    b = np.asarray(b, dtype=float)
    u = np.asarray(u, dtype=float) / np.linalg.norm(u)
    w = np.array([-u[1], u[0]])
    r = _grid_axis(h)
    rho = LinearExponentialDensity(b)
    pts = np.asarray(s, dtype=float)[:, None, None] * u + r[None, :, None] * w
    vals = rho(pts) * gaussian_weight(r[:, None])
    return simpson(vals, x=r, axis=1)


def quadrature_mehler(b, t, x, h=0.005) -> np.ndarray:
    """``(e^{-tN} rho_b)(x)`` for ``n = 1`` from the Mehler kernel.

    ``int rho_b(e^{-t} x + sqrt(1 - e^{-2t}) y) gamma_1(dy)``.
    """
    b = float(np.atleast_1d(b)[0])
    y = _grid_axis(h)
    x = np.asarray(x, dtype=float)
    arg = np.exp(-t) * x[:, None] + np.sqrt(1 - np.exp(-2 * t)) * y[None, :]
    vals = np.exp(b * arg - 0.5 * b * b) * gaussian_weight(y[:, None])
    return simpson(vals, x=y, axis=1)


def quadrature_entropy_production(b, h=0.005) -> float:
    rho = LinearExponentialDensity(b)
    grid = GridDensity.from_function(rho, rho.n, h)
    grid.check_mass()
    return grid.entropy_production()


def _lift(subspace, c):
    # f(y) = exp(c.y) on V composed with P_V: exp((U c).x)
    return subspace.basis @ np.atleast_1d(np.asarray(c, dtype=float))


def gaussian_bl_closed_form(frame: FrameSpec, cs) -> tuple[float, float]:
    """``(ln lhs, ln rhs)`` for ``f_j(y) = exp(c_j.y)``.

    ``lhs = exp(|sum_j U_j c_j|^2/2)``, ``rhs = exp(sum_j p_j |c_j|^2/2)``.
    """
    total = sum(_lift(v, c) for v, c in zip(frame.subspaces, cs))
    log_lhs = 0.5 * float(total @ total)
    log_rhs = sum(0.5 * p * float(np.dot(c, c)) for c, p in zip(map(np.atleast_1d, cs), frame.exponents))
    return log_lhs, log_rhs


def verify_gaussian_bl_quadrature(frame: FrameSpec, cs, h=None, cross_tol=1e-8, rel_tol=1e-6) -> VerificationReport:
    """Quadrature check of ``int prod f_j(P_j x) dgamma <= prod (int f_j^{p_j} dgamma_{d_j})^{1/p_j}``.

    ``f_j(y) = exp(c_j.y)`` with ``c_j`` in the coordinates of ``V_j``. Both
    sides are also evaluated in closed form and must agree with quadrature to
    ``cross_tol`` (relative); the check passes when ``lhs <= rhs (1 + rel_tol)``.
    """
    n = frame.n
    if n not in (1, 2):
        raise ValueError("quadrature is available for n = 1, 2 only")
    cs = [np.atleast_1d(np.asarray(c, dtype=float)) for c in cs]
    for c, v in zip(cs, frame.subspaces):
        if c.shape != (v.dim,):
            raise ValueError(f"coefficient {c} does not match a subspace of dimension {v.dim}")
    total = sum(_lift(v, c) for v, c in zip(frame.subspaces, cs))
    # the tilted weight exp(c.x) gamma is centred at c; widen the window to keep its tails negligible
    grid = GridDensity.from_function(lambda x: np.exp(x @ total), n, h, WINDOW + float(np.max(np.abs(total))))
    GridDensity.from_function(lambda x: np.ones(x.shape[:-1]), n, h).check_mass()
    lhs = grid.integrate()
    log_rhs = 0.0
    for c, v, p in zip(cs, frame.subspaces, frame.exponents):
        local = GridDensity.from_function(
            lambda y, c=c, p=p: np.exp(p * (y @ c)), v.dim, h if v.dim == n else None, WINDOW + p * float(np.max(np.abs(c), initial=0.0))
        )
        log_rhs += np.log(local.integrate()) / p
    closed_lhs, closed_rhs = gaussian_bl_closed_form(frame, cs)
    cross = max(abs(np.expm1(np.log(lhs) - closed_lhs)), abs(np.expm1(log_rhs - closed_rhs)))
    report = log_ratio_report(
        "gaussian-bl",
        np.log(lhs),
        log_rhs,
        float(np.log1p(rel_tol)),
        params={"frame": frame.to_json(), "c": [c.tolist() for c in cs], "h": grid.h},
        extra={"closed_log_lhs": closed_lhs, "closed_log_rhs": closed_rhs, "closed_form_error": float(cross)},
    )
    if cross > cross_tol:
        report.status = "quadrature-mismatch"
        report.deficit = -np.inf
    admissible, _, _ = check_frame_condition(frame)
    if not admissible:
        report.status = "condition-violated"
    return report


def dirichlet_decay_check(b, t, dt=1e-4) -> tuple[float, float]:
    """``(dS/dt by finite differences, D(rho_t))`` at time ``t`` along the flow."""
    s = lambda tt: gaussian_entropy(mehler_action(b, tt).b)
    if t < dt:
        # second-order one-sided difference; the flow is not defined before 0
        ds = (-3 * s(t) + 4 * s(t + dt) - s(t + 2 * dt)) / (2 * dt)
    else:
        ds = (s(t + dt) - s(t - dt)) / (2 * dt)
    return ds, gaussian_entropy_production(mehler_action(b, t).b)
