import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ncbl.frames import FrameSpec, SubspaceSpec, frame_of_lines, mercedes_frame, random_admissible_frame, random_inadmissible_frame
from ncbl.gaussian import (
    GridDensity,
    LinearExponentialDensity,
    dirichlet_decay_check,
    gaussian_bl_closed_form,
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


def test_entropy_closed_form():
    assert gaussian_entropy([1.0, 0.0]) == -0.5
    assert gaussian_entropy(0.0) == 0.0


def test_entropy_matches_quadrature_1d():
    assert quadrature_entropy([0.7]) == pytest.approx(-0.245, abs=1e-6)


def test_entropy_matches_quadrature_2d():
    b = np.array([0.4, -0.3])
    assert quadrature_entropy(b, h=0.05) == pytest.approx(gaussian_entropy(b), abs=1e-6)


def test_density_has_unit_mass():
    grid = GridDensity.from_function(LinearExponentialDensity([1.3]), 1, 0.005)
    assert grid.check_mass() < 1e-10


def test_marginal_matches_quadrature(rng):
    b = rng.standard_normal(2)
    u = np.array([1.0, 1.0]) / np.sqrt(2)
    v = SubspaceSpec.span(u)
    s = np.linspace(-2, 2, 9)
    closed = gaussian_marginal(b, v)(s[:, None] * u)
    assert np.allclose(quadrature_marginal(b, u, s), closed, atol=1e-6)
    assert np.allclose(gaussian_marginal(b, v).b, (b @ u) * u)


@pytest.mark.parametrize("t", [0.1, 0.5, 2.0])
def test_mehler_kernel_matches_parameter_flow(t):
    b = 0.8
    x = np.linspace(-3, 3, 13)
    closed = np.exp(np.exp(-t) * b * x - np.exp(-2 * t) * b * b / 2)
    assert np.allclose(quadrature_mehler([b], t, x), closed, atol=1e-6)
    assert np.allclose(mehler_action([b], t)(x[:, None]), closed, atol=1e-14)


def test_mehler_rejects_negative_time():
    with pytest.raises(ValueError):
        mehler_action([1.0], -0.1)


def test_marginal_commutes_with_flow(rng):
    b = rng.standard_normal(3)
    v = SubspaceSpec.span(rng.standard_normal((3, 2)))
    a = gaussian_marginal(mehler_action(b, 0.3).b, v).b
    c = mehler_action(gaussian_marginal(b, v).b, 0.3).b
    assert np.allclose(a, c, atol=1e-15)


def test_entropy_production():
    assert gaussian_entropy_production([0.5]) == 0.25
    assert quadrature_entropy_production([0.5]) == pytest.approx(0.25, abs=1e-6)


@pytest.mark.parametrize("t", [0.0, 0.3, 1.7])
def test_entropy_derivative_is_production(t):
    ds, d = dirichlet_decay_check([0.6, -1.1], t)
    assert ds == pytest.approx(d, rel=1e-7)


def test_sa_deficit_is_half_slack_form(rng):
    for _ in range(20):
        frame = random_admissible_frame(3, 4, rng)
        b = rng.standard_normal(3)
        rep = verify_gaussian_sa(b, frame)
        assert rep.passed
        assert rep.deficit == pytest.approx(slack_quadratic_form(b, frame), abs=1e-12)


def test_inadmissible_frame_has_negative_deficit(rng):
    frame = random_inadmissible_frame(2, 3, rng)
    _, v = np.linalg.eigh(frame.slack)
    rep = verify_gaussian_sa(v[:, 0], frame)
    assert rep.status == "condition-violated"
    assert rep.deficit < 0 and not rep.passed


def test_sa_rejects_wrong_shape():
    with pytest.raises(ValueError):
        verify_gaussian_sa(np.ones(3), mercedes_frame())


def test_cauchy_schwarz_case():
    full = SubspaceSpec(np.eye(1))
    frame = FrameSpec([full, full], [2.0, 2.0])
    lhs, rhs = gaussian_bl_closed_form(frame, [[0.3], [1.1]])
    assert lhs == pytest.approx((0.3 + 1.1) ** 2 / 2)
    assert rhs == pytest.approx(0.3**2 + 1.1**2)
    rep = verify_gaussian_bl_quadrature(frame, [[0.3], [1.1]])
    assert rep.passed and rep.extra["closed_form_error"] < 1e-8


def test_cauchy_schwarz_equality_for_equal_tilts():
    full = SubspaceSpec(np.eye(1))
    frame = FrameSpec([full, full], [2.0, 2.0])
    rep = verify_gaussian_bl_quadrature(frame, [[0.8], [0.8]])
    assert rep.passed
    assert abs(rep.deficit) < 1e-6


def test_mercedes_frame_quadrature(rng):
    frame = mercedes_frame()
    for _ in range(3):
        cs = [rng.standard_normal(1) for _ in range(3)]
        rep = verify_gaussian_bl_quadrature(frame, cs)
        assert rep.passed and rep.status == "ok"
        assert rep.extra["closed_form_error"] < 1e-8


def test_mercedes_frame_equality_for_single_vector():
    # c_j = (2/3) a.u_j lifts back to a, the extremal tilt for the tight frame
    frame = mercedes_frame()
    a = np.array([0.4, -0.2])
    cs = [np.array([2 / 3 * a @ v.basis[:, 0]]) for v in frame.subspaces]
    lhs, rhs = gaussian_bl_closed_form(frame, cs)
    assert lhs == pytest.approx(rhs, rel=1e-12)


def test_grid_rejects_coarse_step():
    with pytest.raises(ValueError):
        GridDensity.from_function(lambda x: np.ones(x.shape[:-1]), 1, 0.02)
    with pytest.raises(ValueError):
        GridDensity.from_function(lambda x: np.ones(x.shape[:-1]), 3, 0.01)


def test_mass_error_raises():
    grid = GridDensity.from_function(lambda x: 2 * np.ones(x.shape[:-1]), 1, 0.01)
    with pytest.raises(ValueError, match="mass"):
        grid.check_mass()


def test_bl_quadrature_rejects_bad_coefficients():
    with pytest.raises(ValueError):
        verify_gaussian_bl_quadrature(mercedes_frame(), [[1.0, 2.0], [0.0], [0.0]])


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(-3, 3), min_size=3, max_size=3))
def test_bl_closed_form_holds_for_tight_frame(c):
    lhs, rhs = gaussian_bl_closed_form(mercedes_frame(), [[x] for x in c])
    assert lhs <= rhs + 1e-12
