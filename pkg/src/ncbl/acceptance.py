"""The acceptance suite: one function per criterion, shared by the test suite and ``ncbl selftest``.

Each criterion returns a :class:`CriterionResult` whose ``details`` are
deterministic for a given seed, so two selftest runs can be compared byte for
byte.
"""

from __future__ import annotations

import json
import os
import subprocess
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .cli import (
    eval_clifford,
    eval_ssa,
    eval_tensor,
    gen_clifford,
    gen_ssa,
    gen_tensor,
    run_trial,
    trial_rng,
)
from .clifford import build_generators, canonical_injection, conditional_expectation, rho_a, tau, verify_clifford_bl
from .duality import (
    CliffordSetting,
    TensorSetting,
    check_duality_instance,
    legendre_entropy_check,
    log_partition_check,
    random_duality_instance,
)
from .flow import (
    clifford_entropy,
    derivative_maps,
    entropy_production,
    log_element,
    mehler_flow,
    number_operator_matrix,
    random_positive_element,
    verify_deficit_monotone,
    verify_gross_formula,
    verify_production_monotonicity,
)
from .frames import (
    check_frame_condition,
    cosh_deficits,
    frame_of_lines,
    mercedes_frame,
    psi,
    psi_deficits,
    psi_numeric,
    psi_prime,
    psi_star,
    psi_star_numeric,
    random_admissible_frame,
    random_inadmissible_frame,
    random_subspace,
    random_tight_frame,
)
from .gaussian import (
    LinearExponentialDensity,
    gaussian_entropy,
    gaussian_entropy_production,
    gaussian_marginal,
    mehler_action,
    quadrature_entropy,
    quadrature_entropy_production,
    quadrature_marginal,
    quadrature_mehler,
    slack_quadratic_form,
    verify_gaussian_bl_quadrature,
    verify_gaussian_sa,
)
from .linalg import random_density, random_hermitian, random_unitary
from .search import clifford_objective, clifford_witness, gaussian_objective, tightness_probe, tensor_objective
from .tensor import CoverSpec, FactorSystem, random_cover, tensor_bl_sides, zero_hamiltonian_ratio

VIOLATION = -1e-7
# e^{-s k} e^{-t k} and e^{-(s+t) k} agree to a few ulps of the exponent, not bitwise
SEMIGROUP_TOL = 1e-14


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    details: dict = field(default_factory=dict)
    timing: float | None = None

    def line(self) -> str:
        return f"criterion {self.number:2d} [{self.name}]: {'PASS' if self.passed else 'FAIL'}"

    def to_dict(self, timing=True):
        d = {"criterion": self.number, "name": self.name, "pass": bool(self.passed), "details": _jsonable(self.details)}
        if timing:
            d["timing"] = self.timing
        return d


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if np.isfinite(x) else str(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


def _rng(seed, k):
    return np.random.default_rng([int(seed), 1000 + int(k)])


# --- 1, 2: the Clifford construction -------------------------------------------------------


def car_exactness(seed=42, n_max=8):
    worst = {}
    for n in range(1, n_max + 1):
        qs = build_generators(n).generator_matrices
        eye = np.eye(2**n)
        err = 0.0
        for i in range(n):
            for j in range(i, n):
                anti = qs[i] @ qs[j] + qs[j] @ qs[i] - 2.0 * (i == j) * eye
                err = max(err, float(np.linalg.norm(anti, 2)))
        worst[n] = err
    top = max(worst.values())
    return CriterionResult(1, "CAR exactness", top <= 1e-12, {"max_error_by_n": worst, "max_error": top})


def tau_consistency(seed=42, n_max=8, samples=100):
    rng = _rng(seed, 2)
    top = 0.0
    for n in range(1, n_max + 1):
        alg = build_generators(n)
        for _ in range(samples):
            x = rng.standard_normal(alg.dim) + 1j * rng.standard_normal(alg.dim)
            el = alg.element(x)
            top = max(top, abs(tau(el) - np.trace(el.matrix) / alg.dim))
    return CriterionResult(2, "tau consistency", top <= 1e-12, {"max_error": top})


# --- 3, 4, 5: tensor products -----------------------------------------------------------------


def tensor_suite(seed=42, trials=1000):
    worst = np.inf
    failures = 0
    ps = {1: 0, 2: 0, 3: 0}
    for k in range(trials):
        rng = trial_rng(seed, k)
        inp = gen_tensor({}, rng)
        rep = eval_tensor(inp, 1e-9)
        ps[rep.params["p"]] += 1
        worst = min(worst, rep.deficit)
        failures += not rep.passed
    # zero Hamiltonians on covers with constant multiplicity
    rng = _rng(seed, 3)
    zero_err = 0.0
    for _ in range(100):
        n = int(rng.integers(2, 5))
        system = FactorSystem([int(rng.choice((2, 3))) for _ in range(n)])
        cover = random_cover(n, int(rng.integers(1, 4)), rng, uniform=True)
        lhs, rhs = tensor_bl_sides(system, cover, [np.zeros((system.subset_dim(s),) * 2) for s in cover.subsets], cover.p)
        zero_err = max(zero_err, abs(rhs - lhs))
    ok = failures == 0 and worst >= -1e-9 and zero_err <= 1e-12
    return CriterionResult(3, "tensor B-L suite", ok, {"trials": trials, "failures": failures, "min_deficit": worst, "trials_by_p": ps, "zero_hamiltonian_max_deficit": zero_err})


def sharpness(seed=42):
    cases = [
        ([2, 2], [(1,), (2,)]),
        ([2, 3], [(1,), (2,)]),
        ([2, 2, 2], [(1, 2), (2, 3), (3, 1)]),
        ([2, 2, 2], [(1, 2), (2, 3)]),
        ([3, 2, 2], [(1, 2, 3)]),
        ([2, 2, 2], [(1,), (2, 3), (1, 2), (3,)]),
    ]
    rows, ok = [], True
    for dims, subsets in cases:
        cover = CoverSpec(len(dims), subsets)
        q = cover.p + 1
        ratios = []
        d = list(dims)
        while np.prod(d) <= 1024:
            system = FactorSystem(d)
            hams = [np.zeros((system.subset_dim(s),) * 2) for s in cover.subsets]
            log_lhs, log_rhs = tensor_bl_sides(system, cover, hams, q)
            ratio = float(np.exp(log_lhs - log_rhs))
            formula = zero_hamiltonian_ratio(system, cover, q)
            rel = abs(ratio - formula) / formula
            ok &= rel <= 1e-12 and ratio > 1.0
            ratios.append({"dims": list(d), "ratio": ratio, "formula": formula, "relative_error": rel})
            d = [2 * x for x in d]
        ok &= all(b["ratio"] > a["ratio"] for a, b in zip(ratios, ratios[1:])) and len(ratios) >= 2
        rows.append({"subsets": [list(s) for s in cover.subsets], "q": q, "schedule": ratios})
    return CriterionResult(4, "sharpness of q", bool(ok), {"cases": rows})


def ssa_suite(seed=42, trials=1000):
    worst_ssa = worst_comb = np.inf
    ranks = set()
    for k in range(trials):
        rng = trial_rng(seed, k)
        inp = gen_ssa({}, rng)
        rep = eval_ssa(inp, 1e-9)
        worst_ssa = min(worst_ssa, rep.extra["ssa_deficit"])
        worst_comb = min(worst_comb, rep.extra["combination_deficit"])
        ranks.add(int(np.linalg.matrix_rank(np.asarray(inp["rho"])[..., 0] + 1j * np.asarray(inp["rho"])[..., 1], tol=1e-10)))
    ok = worst_ssa >= -1e-9 and worst_comb >= -1e-9
    return CriterionResult(5, "strong subadditivity", ok, {"trials": trials, "min_ssa_deficit": worst_ssa, "min_combination_deficit": worst_comb, "ranks_seen": sorted(ranks)})


# --- 6, 7: duality -------------------------------------------------------------------------


def _spread_density(dim, rng, kind):
    # full rank with eigenvalues spread over several decades
    w = np.exp(rng.uniform(-8, 0, size=dim))
    u = random_unitary(dim, rng)
    m = (u * w) @ u.conj().T
    from .linalg import Density

    return Density.from_matrix(m, kind, normalize=True).op


def legendre_duality(seed=42, samples=100):
    rng = _rng(seed, 6)
    worst_closed = worst_ascent = worst_dual_closed = worst_dual_ascent = 0.0
    worst_sampled = np.inf
    for k in range(samples):
        dim = int(rng.integers(2, 17))
        kind = ("trace", "normalized")[k % 2]
        a = random_density(dim, rng, kind=kind).op if k % 4 < 2 else _spread_density(dim, rng, kind)
        rep = legendre_entropy_check(a, rng, trial_count=10, kind=kind)
        target = rep.extra["neg_entropy"]
        worst_closed = max(worst_closed, abs(rep.extra["attained"] - target))
        worst_ascent = max(worst_ascent, abs(rep.extra["ascent"] - target))
        worst_sampled = min(worst_sampled, target - rep.extra["sampled_max"])
        h = random_hermitian(dim, rng, rng.uniform(0.1, 5.0))
        rep = log_partition_check(h, rng, trial_count=10, kind=kind)
        worst_dual_closed = max(worst_dual_closed, abs(rep.extra["attained"] - rep.lhs))
        worst_dual_ascent = max(worst_dual_ascent, abs(rep.extra["ascent"] - rep.lhs))
        worst_sampled = min(worst_sampled, rep.lhs - rep.rhs)
    ok = worst_closed <= 1e-9 and worst_dual_closed <= 1e-9 and worst_ascent <= 1e-6 and worst_dual_ascent <= 1e-6 and worst_sampled >= -1e-9
    return CriterionResult(
        6,
        "Legendre duality",
        ok,
        {
            "entropy_closed_form_error": worst_closed,
            "entropy_ascent_error": worst_ascent,
            "log_partition_closed_form_error": worst_dual_closed,
            "log_partition_ascent_error": worst_dual_ascent,
            "min_sampled_slack": worst_sampled,
        },
    )


def duality_chains(seed=42, samples=100):
    rng = _rng(seed, 7)
    tensor_settings = [
        TensorSetting(FactorSystem([2, 2, 2]), CoverSpec(3, [(1, 2), (2, 3), (3, 1)])),
        TensorSetting(FactorSystem([2, 3]), CoverSpec(2, [(1,), (2,)])),
        TensorSetting(FactorSystem([2, 2, 2]), CoverSpec(3, [(1, 2), (2, 3)])),
        TensorSetting(FactorSystem([3, 2, 2]), CoverSpec(3, [(1,), (2, 3), (1, 2), (3,)])),
    ]
    worst = {"tensor": np.inf, "clifford": np.inf}
    ident = {"tensor": 0.0, "clifford": 0.0}
    for k in range(samples):
        setting = tensor_settings[k % len(tensor_settings)]
        rho, hams = random_duality_instance(setting, rng)
        w, e = check_duality_instance(setting, rho, hams)
        worst["tensor"] = min(worst["tensor"], w)
        ident["tensor"] = max(ident["tensor"], e)
    for k in range(samples):
        n = int(rng.integers(2, 5))
        if k % 2:
            frame = random_tight_frame(n, int(rng.integers(n, n + 3)), int(rng.integers(2**32)))
        else:
            frame = random_admissible_frame(n, int(rng.integers(1, 5)), rng)
        setting = CliffordSetting(build_generators(n), frame)
        rho, hams = random_duality_instance(setting, rng)
        w, e = check_duality_instance(setting, rho, hams)
        worst["clifford"] = min(worst["clifford"], w)
        ident["clifford"] = max(ident["clifford"], e)
    ok = min(worst.values()) >= -1e-8
    return CriterionResult(7, "duality chains", ok, {"min_link_slack": worst, "max_identity_error": ident, "samples_per_setting": samples})


# --- 8: Clifford B-L -------------------------------------------------------------------------


def clifford_suite(seed=42, trials=1000, inadmissible=100):
    worst = np.inf
    failures = 0
    for k in range(trials):
        rep = eval_clifford(gen_clifford({}, trial_rng(seed, k)), 1e-9)
        worst = min(worst, rep.deficit)
        failures += not rep.passed
    rng = _rng(seed, 8)
    found = 0
    worst_witness = -np.inf
    for _ in range(inadmissible):
        n = int(rng.integers(2, 7))
        frame = random_inadmissible_frame(n, int(rng.integers(2, 6)), rng)
        alg = build_generators(n)
        t, a, sa_deficit = clifford_witness(alg, frame)
        # B-L at the optimal local Hamiltonians ln(E_j rho)/p_j is at most the entropy deficit
        rho = rho_a(alg, t * a)
        hams = [log_element(conditional_expectation(rho, v)) * (1.0 / p) for v, p in zip(frame.subspaces, frame.exponents)]
        bl = verify_clifford_bl(alg, frame, hams)
        witness = max(sa_deficit, bl.deficit)
        worst_witness = max(worst_witness, witness)
        found += witness < VIOLATION
    ok = failures == 0 and worst >= -1e-9 and found == inadmissible
    return CriterionResult(
        8,
        "Clifford B-L suite",
        ok,
        {"trials": trials, "failures": failures, "min_deficit": worst, "inadmissible_frames": inadmissible, "witnesses_found": found, "weakest_witness_deficit": worst_witness},
    )


# --- 9, 10, 11: flow -------------------------------------------------------------------------


def gross_formula(seed=42, samples=100):
    rng = _rng(seed, 9)
    worst = {"identity": 0.0, "exp": 0.0, "log": 0.0}
    for k in range(samples):
        n = 2 + k % 5
        a = random_positive_element(build_generators(n), rng)
        for f in worst:
            worst[f] = max(worst[f], verify_gross_formula(a, f).lhs)
    return CriterionResult(9, "Gross formula", max(worst.values()) <= 1e-10, {"max_frobenius_error": worst})


def flow_suite(seed=42, samples=20):
    rng = _rng(seed, 10)
    number_err = semigroup_err = commute_err = deriv_err = 0.0
    for n in range(1, 7):
        alg = build_generators(n)
        number_err = max(number_err, float(np.max(np.abs(number_operator_matrix(alg) - np.diag(alg.degrees.astype(float))))))
        # nabla_i Q^alpha computed as a product and via the closed form
        for i, d in enumerate(derivative_maps(alg), start=1):
            q = alg.generator(i)
            for code in range(alg.dim):
                el = alg.element(alg.basis_coeffs(code))
                graded = alg.element(el.coeffs * (-1.0) ** alg.degrees)
                direct = 0.5 * ((q @ el) - (graded @ q)).coeffs
                number_err = max(number_err, float(np.max(np.abs(direct - d @ el.coeffs))))
    for k in range(samples):
        n = 2 + k % 5
        alg = build_generators(n)
        rho = random_positive_element(alg, rng)
        s, t = rng.uniform(0, 2, size=2)
        lhs = mehler_flow(mehler_flow(rho, s), t).coeffs
        rhs = mehler_flow(rho, s + t).coeffs
        semigroup_err = max(semigroup_err, float(np.max(np.abs(lhs - rhs) / np.maximum(np.abs(rhs), 1e-300))))
        v = random_subspace(n, int(rng.integers(1, n + 1)), rng)
        a = conditional_expectation(mehler_flow(rho, t), v).coeffs
        b = mehler_flow(conditional_expectation(rho, v), t).coeffs
        commute_err = max(commute_err, float(np.max(np.abs(a - b))))
        for tt in (0.1, 0.5, 1.0):
            h = 1e-4
            ds = (clifford_entropy(mehler_flow(rho, tt + h)) - clifford_entropy(mehler_flow(rho, tt - h))) / (2 * h)
            dd = entropy_production(mehler_flow(rho, tt))
            deriv_err = max(deriv_err, abs(ds - dd) / abs(dd))
    ok = number_err == 0.0 and semigroup_err <= SEMIGROUP_TOL and commute_err <= 1e-11 and deriv_err <= 1e-5
    return CriterionResult(
        10,
        "Mehler flow suite",
        ok,
        {"number_operator_error": number_err, "semigroup_relative_error": semigroup_err, "commutation_error": commute_err, "entropy_derivative_relative_error": deriv_err},
    )


def production_monotonicity(seed=42, pairs=1000, curves=100):
    rng = _rng(seed, 11)
    worst = np.inf
    for k in range(pairs):
        n = 2 + k % 5
        alg = build_generators(n)
        rank = None if k % 3 else int(rng.integers(1, alg.dim + 1))
        rho = random_positive_element(alg, rng, rank)
        v = random_subspace(n, int(rng.integers(1, n + 1)), rng)
        worst = min(worst, verify_production_monotonicity(rho, v).deficit)
    worst_curve = np.inf
    worst_step = -np.inf
    for k in range(curves):
        n = 2 + k % 4
        alg = build_generators(n)
        frame = random_tight_frame(n, n + int(rng.integers(0, 3)), int(rng.integers(2**32))) if k % 2 else random_admissible_frame(n, int(rng.integers(1, 5)), rng)
        rep = verify_deficit_monotone(random_positive_element(alg, rng), frame)
        worst_curve = min(worst_curve, rep.deficit)
        worst_step = max(worst_step, rep.extra["max_step_increase"])
    ok = worst >= -1e-9 and worst_curve >= 0.0
    return CriterionResult(11, "production monotonicity", ok, {"min_production_deficit": worst, "min_curve_slack": worst_curve, "max_step_increase": worst_step})


# --- 12: Gaussian ------------------------------------------------------------------------------


def gaussian_suite(seed=42, samples=200):
    rng = _rng(seed, 12)
    form_err = 0.0
    min_admissible = np.inf
    for k in range(samples):
        n = int(rng.integers(1, 7))
        frame = random_admissible_frame(n, int(rng.integers(1, 6)), rng) if k % 2 else random_inadmissible_frame(max(n, 2), int(rng.integers(2, 6)), rng)
        b = rng.standard_normal(frame.n) * rng.uniform(0.1, 3)
        rep = verify_gaussian_sa(b, frame)
        form_err = max(form_err, abs(rep.deficit - rep.extra["quadratic_form"]) / max(1.0, float(b @ b)))
        if k % 2:
            min_admissible = min(min_admissible, rep.deficit)
    quad = {}
    quad["entropy_n1"] = abs(quadrature_entropy([0.7]) - gaussian_entropy([0.7]))
    quad["entropy_n2"] = abs(quadrature_entropy([0.6, -0.4], h=0.05) - gaussian_entropy([0.6, -0.4]))
    b2 = rng.standard_normal(2) * 0.7
    u = np.array([1.0, 1.0]) / np.sqrt(2)
    s = np.linspace(-4, 4, 17)
    marg = gaussian_marginal(b2, frame_of_lines([u], [1.0]).subspaces[0])
    quad["marginal_n2"] = float(np.max(np.abs(quadrature_marginal(b2, u, s) - marg(np.outer(s, u)))))
    x = np.linspace(-4, 4, 17)
    quad["mehler_n1"] = max(
        float(np.max(np.abs(quadrature_mehler([0.9], t, x) - mehler_action([0.9], t)(x[:, None])))) for t in (0.1, 0.5, 2.0)
    )
    quad["production_n1"] = abs(quadrature_entropy_production([0.5]) - gaussian_entropy_production([0.5]))
    quad["production_n2"] = abs(quadrature_entropy_production([0.5, 0.3], h=0.02) - gaussian_entropy_production([0.5, 0.3]))
    bl_cases = [
        (frame_of_lines([[1.0], [1.0]], [2.0, 2.0]), [[0.8], [-0.3]]),
        (frame_of_lines([[1.0], [1.0]], [2.0, 2.0]), [[0.0], [0.0]]),
        (mercedes_frame(), [[0.5], [-0.2], [0.9]]),
        (mercedes_frame(), rng.standard_normal((3, 1)) * 0.6),
        (random_admissible_frame(2, 3, rng), None),
    ]
    bl_ok = True
    bl_err = 0.0
    for frame, cs in bl_cases:
        if cs is None:
            cs = [rng.standard_normal(v.dim) * 0.5 for v in frame.subspaces]
        rep = verify_gaussian_bl_quadrature(frame, cs)
        bl_ok &= rep.passed
        bl_err = max(bl_err, rep.extra["closed_form_error"])
    quad["bl_closed_form_relative"] = bl_err
    # necessity: inadmissible frames, b along the bottom slack eigenvector
    neg = 0
    for _ in range(50):
        n = int(rng.integers(2, 7))
        frame = random_inadmissible_frame(n, int(rng.integers(2, 6)), rng)
        _, _, v = check_frame_condition(frame)
        neg += verify_gaussian_sa(v, frame).deficit < VIOLATION
    ok = form_err <= 1e-12 and min_admissible >= -1e-9 and max(quad.values()) <= 1e-6 and bl_ok and neg == 50
    return CriterionResult(
        12,
        "Gaussian suite",
        bool(ok),
        {"quadratic_form_error": form_err, "min_admissible_deficit": min_admissible, "quadrature_errors": quad, "bl_quadrature_pass": bool(bl_ok), "negative_along_slack": neg},
    )


# --- 13: cosh / psi -----------------------------------------------------------------------


def cosh_psi_suite(seed=42, trials=100_000, per_frame=100):
    rng = _rng(seed, 13)
    frames = trials // per_frame
    worst_cosh = worst_psi = np.inf
    for _ in range(frames):
        n = int(rng.integers(1, 7))
        tight = random_tight_frame(n, int(rng.integers(n, n + 4)), int(rng.integers(2**32)))
        b = rng.standard_normal((per_frame, len(tight.subspaces))) * rng.uniform(0.01, 5.0, size=(per_frame, 1))
        worst_cosh = min(worst_cosh, float(cosh_deficits(b, tight).min()))
        frame = random_admissible_frame(n, int(rng.integers(1, 6)), rng)
        a = rng.standard_normal((per_frame, n))
        radii = rng.random(per_frame) ** (1.0 / n)
        radii[: per_frame // 20] = 1.0
        a *= (radii / np.linalg.norm(a, axis=1))[:, None]
        worst_psi = min(worst_psi, float(psi_deficits(a, frame).min()))
    # Clifford cross-check: the algebra computations reduce to the closed forms
    cross = 0.0
    for k in range(60):
        n = 2 + k % 4
        alg = build_generators(n)
        tight = random_tight_frame(n, n + int(rng.integers(0, 3)), int(rng.integers(2**32)))
        u = tight.unit_vectors()
        b = rng.standard_normal(len(u)) * rng.uniform(0.1, 3.0)
        hams = [canonical_injection(alg, bj * uj) for bj, uj in zip(b, u)]
        rep = verify_clifford_bl(alg, tight, hams)
        cross = max(cross, abs(rep.deficit - float(cosh_deficits(b, tight)[0])))
        a = rng.standard_normal(n)
        a *= rng.random() / np.linalg.norm(a)
        sa = clifford_objective(alg, tight).evaluate(a)
        cross = max(cross, abs(sa - float(psi_deficits(a, tight)[0])))
        cross = max(cross, abs(clifford_entropy(rho_a(alg, a)) + float(psi(np.linalg.norm(a)))))
    # psi / psi* pairing
    pair = 0.0
    for x in np.linspace(-0.99, 0.99, 41):
        pair = max(pair, abs(psi_numeric(x) - psi(x)))
        y = float(psi_prime(x))
        pair = max(pair, abs(psi(x) + psi_star(y) - x * y))
    for y in np.linspace(-6, 6, 41):
        pair = max(pair, abs(psi_star_numeric(y) - psi_star(y)))
    ok = worst_cosh >= -1e-12 and worst_psi >= -1e-12 and cross <= 1e-9 and pair <= 1e-8
    return CriterionResult(
        13,
        "cosh / psi suite",
        ok,
        {"trials_each": frames * per_frame, "min_cosh_deficit": worst_cosh, "min_psi_deficit": worst_psi, "clifford_cross_check_error": cross, "legendre_pairing_error": pair},
    )


# --- 14: tightness ------------------------------------------------------------------------


def tightness(seed=42):
    rng = _rng(seed, 14)
    rows = []
    ok = True
    probes = []
    for dims, subsets in [([2, 2], [(1,), (2,)]), ([2, 2, 2], [(1, 2), (2, 3), (3, 1)]), ([3, 2], [(1, 2)])]:
        system = FactorSystem(dims)
        cover = CoverSpec(len(dims), subsets)
        probes.append(("tensor", tensor_objective(system, cover, cover.p), 1e-12))
    for n in (2, 3, 4):
        alg = build_generators(n)
        for frame in (random_tight_frame(n, n + 1, int(rng.integers(2**32))), random_admissible_frame(n, 3, rng)):
            probes.append(("clifford", clifford_objective(alg, frame), 0.0))
            probes.append(("gaussian", gaussian_objective(frame), 0.0))
    probes.append(("gaussian", gaussian_objective(mercedes_frame()), 0.0))
    for kind, obj, zero_tol in probes:
        rep = tightness_probe(obj, budget=200, restarts=1, seed=seed)
        zero = rep.extra["zero_deficit"]
        good = abs(zero) <= zero_tol and rep.extra["search_min"] >= -1e-9
        ok &= good
        rows.append({"setting": kind, "zero_deficit": zero, "search_min": rep.extra["search_min"], "pass": bool(good)})
    # cosh and psi closed forms at zero parameters
    tight = mercedes_frame()
    zeros = [float(cosh_deficits(np.zeros(3), tight)[0]), float(psi_deficits(np.zeros(2), tight)[0])]
    ok &= zeros == [0.0, 0.0]
    return CriterionResult(14, "tightness at zero", bool(ok), {"probes": rows, "cosh_psi_zero_deficits": zeros})


# --- 15: determinism ----------------------------------------------------------------------


def determinism(seed=42, criteria=None):
    """Run ``selftest`` twice in fresh interpreters (different hash seeds) and compare bytes."""
    criteria = criteria or list(range(1, 15))
    cmd = [sys.executable, "-m", "ncbl", "selftest", "--seed", str(seed), "--no-timing", "--only", *map(str, criteria)]
    procs = [
        subprocess.Popen(cmd, stdout=subprocess.PIPE, stderr=subprocess.DEVNULL, env={**os.environ, "PYTHONHASHSEED": h})
        for h in ("1", "2")
    ]
    outs = [p.communicate()[0] for p in procs]
    same = outs[0] == outs[1] and len(outs[0]) > 0
    return CriterionResult(15, "determinism", same, {"bytes": [len(o) for o in outs], "identical": same, "criteria": criteria})


CRITERIA = {
    1: car_exactness,
    2: tau_consistency,
    3: tensor_suite,
    4: sharpness,
    5: ssa_suite,
    6: legendre_duality,
    7: duality_chains,
    8: clifford_suite,
    9: gross_formula,
    10: flow_suite,
    11: production_monotonicity,
    12: gaussian_suite,
    13: cosh_psi_suite,
    14: tightness,
    15: determinism,
}


def run_criterion(number, seed=42) -> CriterionResult:
    t0 = time.perf_counter()
    res = CRITERIA[number](seed=seed)
    res.timing = time.perf_counter() - t0
    return res


def run_selftest(seed, stream, timing=True, only=None) -> int:
    numbers = sorted(only) if only else sorted(CRITERIA)
    failed = 0
    for k in numbers:
        if k not in CRITERIA:
            raise ValueError(f"no criterion {k}")
        res = run_criterion(k, seed)
        failed += not res.passed
        stream.write(json.dumps({**res.to_dict(timing), "version": __version__}, sort_keys=True) + "\n")
        stream.flush()
        print(res.line(), file=sys.stderr)
    stream.write(json.dumps({"summary": True, "command": "selftest", "seed": seed, "criteria": len(numbers), "failed": failed, "version": __version__}, sort_keys=True) + "\n")
    return 1 if failed else 0
