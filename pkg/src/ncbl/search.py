"""Derivative-free search for violations, sharpness counterexamples and tightness probes.

An *objective* maps a real parameter vector to a deficit (negative means the
inequality fails). The search minimizes the deficit by coordinate moves with
step halving, from a seeded list of starting points; restarts are merged in
index order so results do not depend on scheduling.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .clifford import CliffordAlgebra, conditional_expectation, rho_a
from .duality import _vec_to_herm
from .flow import clifford_entropy
from .frames import FrameSpec, check_frame_condition
from .gaussian import slack_quadratic_form
from .report import DEFAULT_TOL, VerificationReport
from .tensor import CoverSpec, FactorSystem, tensor_bl_sides, zero_hamiltonian_ratio

VIOLATION_THRESHOLD = -1e-7


@dataclass
class Objective:
    """Deficit as a function of ``dim`` real parameters; ``zero`` is the trivial extremizer."""

    name: str
    dim: int
    evaluate: Callable[[np.ndarray], float]
    zero: np.ndarray
    sample: Callable[[np.random.Generator], np.ndarray]
    describe: dict = field(default_factory=dict)
    project: Callable[[np.ndarray], np.ndarray] = lambda x: x


@dataclass
class SearchConfig:
    objective: Objective
    budget: int = 2000
    restarts: int = 4
    seed: int = 42
    initial_step: float = 0.5
    min_step: float = 1e-6
    starts: list = field(default_factory=list)

    def __post_init__(self):
        if self.budget < 1:
            raise ValueError("budget must be >= 1")
        if self.restarts < 0:
            raise ValueError("restarts must be >= 0")


@dataclass
class SearchResult:
    best_params: np.ndarray
    best_deficit: float
    trace: list
    evaluations: int

    @property
    def violation(self) -> bool:
        return self.best_deficit < VIOLATION_THRESHOLD


def _coordinate_descent(f, x0, budget, step, min_step):
    x = np.array(x0, dtype=float)
    fx = f(x)
    used = 1
    trace = [fx]
    while used < budget and step >= min_step:
        improved = False
        for i in range(len(x)):
            for s in (step, -step):
                if used >= budget:
                    break
                y = x.copy()
                y[i] += s
                fy = f(y)
                used += 1
                if fy < fx:
                    x, fx, improved = y, fy, True
                    break
        trace.append(fx)
        if not improved:
            step *= 0.5
    return x, fx, trace, used


def maximize_deficit_violation(config: SearchConfig) -> SearchResult:
    """Drive the deficit as negative as possible within ``config.budget`` evaluations.

    Starting points: any explicit ``config.starts``, the zero point, then
    ``config.restarts`` random samples from ``default_rng([seed, k])``.
    """
    obj = config.objective
    starts = [np.asarray(s, dtype=float) for s in config.starts] + [obj.zero]
    starts += [obj.sample(np.random.default_rng([config.seed, k])) for k in range(config.restarts)]
    per_start = max(1, config.budget // len(starts))
    best = (np.inf, None)
    trace = []
    total = 0
    for x0 in starts:
        x, fx, tr, used = _coordinate_descent(obj.evaluate, x0, per_start, config.initial_step, config.min_step)
        trace.extend(tr)
        total += used
        if fx < best[0]:
            best = (fx, x)
    return SearchResult(obj.project(best[1]), float(best[0]), trace, total)


# --- objectives -------------------------------------------------------------------


def tensor_objective(system: FactorSystem, cover: CoverSpec, q: float, max_norm=3.0) -> Objective:
    """``ln rhs - ln lhs`` of the tensor inequality over Hamiltonians with ``|H_j|_F <= max_norm``."""
    sizes = [system.subset_dim(s) for s in cover.subsets]

    def unpack(x):
        hams, k = [], 0
        for d in sizes:
            h = _vec_to_herm(x[k : k + d * d], d)
            k += d * d
            nrm = np.linalg.norm(h)
            hams.append(h * (max_norm / nrm) if nrm > max_norm else h)
        return hams

    def evaluate(x):
        log_lhs, log_rhs = tensor_bl_sides(system, cover, unpack(x), q)
        return log_rhs - log_lhs

    dim = sum(d * d for d in sizes)
    return Objective(
        "tensor",
        dim,
        evaluate,
        np.zeros(dim),
        lambda rng: rng.standard_normal(dim),
        {"dims": list(system.dims), "subsets": [list(s) for s in cover.subsets], "q": q, "p": cover.p},
    )


def _clip_ball(x, radius=0.999):
    r = np.linalg.norm(x)
    return x * (radius / r) if r > radius else x


def clifford_objective(algebra: CliffordAlgebra, frame: FrameSpec) -> Objective:
    """Subadditivity deficit ``sum_j S(E_j rho_a)/p_j - S(rho_a)`` computed in the algebra.

    ``rho_a = I + a.Q`` with ``a`` clipped to the ball of radius 0.999.
    """

    def evaluate(x):
        rho = rho_a(algebra, _clip_ball(x))
        marg = sum(w * clifford_entropy(conditional_expectation(rho, v)) for v, w in zip(frame.subspaces, frame.weights))
        return float(marg - clifford_entropy(rho))

    n = algebra.n
    return Objective(
        "clifford",
        n,
        evaluate,
        np.zeros(n),
        lambda rng: _clip_ball(rng.standard_normal(n) * 0.5),
        {"n": n, "frame": frame.to_json()},
        _clip_ball,
    )


def gaussian_objective(frame: FrameSpec) -> Objective:
    """``b.slack.b / 2`` on the unit ball."""
    n = frame.n
    return Objective(
        "gaussian",
        n,
        lambda x: slack_quadratic_form(_clip_ball(x, 1.0), frame),
        np.zeros(n),
        lambda rng: _clip_ball(rng.standard_normal(n), 1.0),
        {"n": n, "frame": frame.to_json()},
        lambda x: _clip_ball(x, 1.0),
    )


def slack_witness_starts(frame: FrameSpec, ts=(0.05, 0.2, 0.5, 0.9)) -> list[np.ndarray]:
    """Points ``t v`` along the slack eigenvector of smallest eigenvalue."""
    _, _, v = check_frame_condition(frame)
    return [t * v for t in ts]


def clifford_witness(algebra: CliffordAlgebra, frame: FrameSpec, ts=(0.05, 0.1, 0.2, 0.4, 0.6, 0.8)):
    """Most negative deficit of ``rho_{ta}`` along the slack direction ``a``.

    Returns ``(t, a, deficit)``; for an inadmissible frame the deficit is
    negative for small ``t`` (it behaves like ``t^2 a.slack.a / 2``).
    """
    obj = clifford_objective(algebra, frame)
    _, _, a = check_frame_condition(frame)
    vals = [(obj.evaluate(t * a), t) for t in ts]
    best, t = min(vals)
    return t, a, best


# --- sharpness and tightness ----------------------------------------------------------


def scaling_counterexample(q, cover: CoverSpec, dims, doublings=3) -> VerificationReport:
    """The ``H_j = 0`` instance for ``q > p`` and its ratio ``prod_i d_i^{1 - p(i)/q}``.

    The ratio is computed both from traces and from the formula; the schedule
    doubles every dimension ``doublings`` times (formula only beyond the size
    limit of explicit matrices).
    """
    if q <= cover.p:
        raise ValueError(f"q = {q} <= p = {cover.p}: the inequality holds, there is no counterexample")
    system = FactorSystem(dims)
    hams = [np.zeros((system.subset_dim(s),) * 2) for s in cover.subsets]
    log_lhs, log_rhs = tensor_bl_sides(system, cover, hams, q)
    computed = float(np.exp(log_lhs - log_rhs))
    formula = zero_hamiltonian_ratio(system, cover, q)
    schedule = []
    d = list(system.dims)
    for _ in range(doublings + 1):
        ratio = float(np.prod([di ** (1.0 - m / q) for di, m in zip(d, cover.multiplicities)]))
        schedule.append({"dims": list(d), "ratio": ratio})
        d = [2 * di for di in d]
    return VerificationReport(
        "tensor-scaling",
        float(np.exp(log_lhs)),
        float(np.exp(log_rhs)),
        log_rhs - log_lhs,
        DEFAULT_TOL,
        status="violation-expected",
        params={"dims": list(system.dims), "subsets": [list(s) for s in cover.subsets], "q": q, "p": cover.p},
        extra={"ratio": computed, "formula_ratio": formula, "relative_error": abs(computed - formula) / formula, "schedule": schedule},
    )


def tightness_probe(objective: Objective, budget=400, restarts=2, seed=42, tol=DEFAULT_TOL) -> VerificationReport:
    """Deficit at the zero point (expected exactly 0) and the smallest deficit a search finds.

    The deficit reported is the search minimum; ``extra["zero_deficit"]`` is
    the value at the trivial extremizer.
    """
    zero = objective.evaluate(objective.zero)
    res = maximize_deficit_violation(SearchConfig(objective, budget=budget, restarts=restarts, seed=seed))
    return VerificationReport(
        f"{objective.name}-tightness",
        zero,
        res.best_deficit,
        min(res.best_deficit, zero),
        tol,
        params=objective.describe,
        extra={"zero_deficit": zero, "search_min": res.best_deficit, "evaluations": res.evaluations},
    )
