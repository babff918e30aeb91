import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ncbl.frames import (
    FrameSpec,
    SubspaceSpec,
    check_frame_condition,
    cosh_deficits,
    is_tight,
    mercedes_frame,
    psi,
    psi_deficits,
    psi_numeric,
    psi_prime,
    psi_second,
    psi_star,
    psi_star_numeric,
    random_admissible_frame,
    random_inadmissible_frame,
    random_tight_frame,
    rational_deficits,
    verify_cosh_inequality,
    verify_psi_subadditivity,
)


def test_psi_reference_values():
    assert psi(0.0) == 0.0
    assert psi(1.0) == pytest.approx(np.log(2), abs=1e-15)
    assert psi(-1.0) == pytest.approx(np.log(2), abs=1e-15)
    x = 0.5
    assert psi(x) == pytest.approx(0.5 * (1.5 * np.log(1.5) + 0.5 * np.log(0.5)), abs=1e-15)
    assert psi(1.2) == np.inf


def test_psi_small_argument_keeps_precision():
    # psi(x) = x^2/2 + x^4/12 + ...
    for x in (1e-3, 1e-6, 1e-9):
        assert psi(x) == pytest.approx(x**2 / 2 + x**4 / 12, rel=1e-10)


def test_psi_derivatives_by_finite_differences():
    h = 1e-6
    for x in (-0.7, 0.1, 0.6):
        assert (psi(x + h) - psi(x - h)) / (2 * h) == pytest.approx(psi_prime(x), rel=1e-7)
        assert (psi_prime(x + h) - psi_prime(x - h)) / (2 * h) == pytest.approx(psi_second(x), rel=1e-6)


def test_psi_star_is_log_cosh_without_overflow():
    for y in (0.0, 0.3, -4.0, 20.0):
        assert psi_star(y) == pytest.approx(np.log(np.cosh(y)), abs=1e-14)
    assert psi_star(1000.0) == pytest.approx(1000.0 - np.log(2), abs=1e-12)


@pytest.mark.parametrize("y", np.linspace(-5, 5, 11))
def test_legendre_pairing_psi_star(y):
    assert psi_star_numeric(y) == pytest.approx(psi_star(y), abs=1e-9)


@pytest.mark.parametrize("x", np.linspace(-0.95, 0.95, 9))
def test_legendre_pairing_psi(x):
    assert psi_numeric(x) == pytest.approx(psi(x), abs=1e-9)
    y = psi_prime(x)
    assert psi(x) + psi_star(y) == pytest.approx(x * y, abs=1e-12)


def test_subspace_validation_and_projection():
    with pytest.raises(ValueError):
        SubspaceSpec(np.array([[1.0, 1.0], [0.0, 1.0]]))
    v = SubspaceSpec.span(np.array([1.0, 1.0, 0.0]))
    assert np.allclose(v.projection, np.array([[0.5, 0.5, 0], [0.5, 0.5, 0], [0, 0, 0]]))
    assert SubspaceSpec.coordinate(3, [2]).projection[1, 1] == 1.0


def test_mercedes_frame_is_tight():
    frame = mercedes_frame()
    assert is_tight(frame)
    ok, min_eig, _ = check_frame_condition(frame)
    assert ok and abs(min_eig) < 1e-14


@pytest.mark.parametrize("n,N", [(2, 2), (3, 5), (5, 8)])
def test_random_tight_frame(n, N):
    frame = random_tight_frame(n, N, seed=3)
    assert is_tight(frame)
    assert all(p >= 1 for p in frame.exponents)
    with pytest.raises(ValueError):
        random_tight_frame(3, 2)


def test_random_frames_have_requested_condition(rng):
    for _ in range(10):
        ok, _, _ = check_frame_condition(random_admissible_frame(4, 3, rng))
        assert ok
        ok, min_eig, w = check_frame_condition(random_inadmissible_frame(4, 3, rng))
        assert not ok and min_eig < 0


def test_frame_json_roundtrip(rng):
    frame = random_admissible_frame(3, 3, rng)
    back = FrameSpec.from_json(json.loads(json.dumps(frame.to_json())))
    assert np.allclose(back.slack, frame.slack, atol=1e-14)
    assert back.exponents == pytest.approx(frame.exponents)


def test_cosh_single_line_is_equality():
    frame = FrameSpec([SubspaceSpec(np.array([[1.0]]))], [1.0])
    assert verify_cosh_inequality(np.array([0.7]), frame).deficit == 0.0


def test_cosh_requires_lines_and_tightness():
    with pytest.raises(ValueError):
        verify_cosh_inequality(np.zeros(1), FrameSpec([SubspaceSpec(np.eye(2))], [1.0]))
    loose = FrameSpec([SubspaceSpec(np.array([[1.0], [0.0]]))], [2.0])
    with pytest.raises(ValueError):
        verify_cosh_inequality(np.zeros(1), loose)


def test_psi_report_and_rational_bound(rng):
    frame = mercedes_frame()
    rep = verify_psi_subadditivity(np.array([0.3, 0.4]), frame)
    assert rep.passed and rep.extra["rational_deficit"] >= 0
    assert verify_psi_subadditivity(np.array([0.6, 0.8]), frame).passed  # on the unit sphere
    with pytest.raises(ValueError):
        verify_psi_subadditivity(np.array([1.0, 1.0]), frame)
    bad = random_inadmissible_frame(2, 3, rng)
    assert verify_psi_subadditivity(np.array([0.1, 0.1]), bad).status == "condition-violated"


def test_psi_deficit_small_t_expansion(rng):
    # deficit(t a) / t^2 -> a . slack . a / 2
    frame = random_admissible_frame(3, 2, rng, level=0.8)
    a = rng.standard_normal(3)
    a /= np.linalg.norm(a)
    t = 1e-4
    ratio = psi_deficits(t * a, frame)[0] / t**2
    assert ratio == pytest.approx(0.5 * a @ frame.slack @ a, rel=1e-6)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_cosh_and_psi_random(n, seed):
    rng = np.random.default_rng(seed)
    tight = random_tight_frame(n, n + int(rng.integers(0, 4)), seed)
    b = rng.standard_normal((50, len(tight.subspaces))) * 3
    assert cosh_deficits(b, tight).min() >= -1e-12
    frame = random_admissible_frame(n, int(rng.integers(1, 5)), rng)
    a = rng.standard_normal((50, n))
    a *= (rng.random(50) / np.linalg.norm(a, axis=1))[:, None]
    assert psi_deficits(a, frame).min() >= -1e-12
    assert rational_deficits(a, frame).min() >= -1e-12
