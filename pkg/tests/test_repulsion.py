import numpy as np
import pytest
from hypothesis import given, strategies as st

from szego_lab import PreconditionError, ball_model, synthetic_model, Ball
from szego_lab.domains import rho_jet, rho_value
from szego_lab.experiments import (boundary_repulsion_scan, empirical_epsilon, tangent_basis,
                                   tangential_directions, tangential_second_derivative)
from szego_lab.experiments.repulsion import RepulsionEntry, level_point


def test_every_tangential_direction_at_0_9_is_repelled():
    rep = boundary_repulsion_scan(ball_model(2), [-0.19], directions_per_point=24, points_per_level=1)
    assert len(rep.grid) == 24
    for e in rep.grid:
        np.testing.assert_allclose(e.point, [0.9, 0], atol=1e-14)
        assert e.second_derivative >= 2 - 1e-9
    assert rep.min_by_kind("reeb") == pytest.approx(4 * 0.81 / 0.19 + 2, rel=1e-12)


@given(st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1))
def test_ball_values_bounded_below_by_two(a, b, c):
    basis = tangent_basis([0.9, 0])
    v = a * basis[0] + b * basis[1] + c * basis[2]
    if np.linalg.norm(v) < 1e-3:
        return
    v = v / np.linalg.norm(v)
    assert tangential_second_derivative(ball_model(2), [0.9, 0], v) >= 2 - 1e-9


def test_non_tangential_direction_rejected():
    with pytest.raises(PreconditionError):
        tangential_second_derivative(ball_model(2), [0.9, 0], [1, 0])


def test_synthetic_model_positive_near_boundary():
    levels = [-1e-2, -1e-3, -1e-4, -1e-5]
    rep = boundary_repulsion_scan(synthetic_model(2), levels, 8, 4, seed=1)
    assert rep.min_second_derivative > 0
    assert rep.empirical_epsilon == pytest.approx(1e-2)
    for lv in levels:
        assert rep.level_minimum(lv) > 0


def test_scan_fd_check_and_determinism():
    a = boundary_repulsion_scan(synthetic_model(2), [-0.05], 4, 2, seed=3, check_fd=True)
    b = boundary_repulsion_scan(synthetic_model(2), [-0.05], 4, 2, seed=3, check_fd=True)
    for x, y in zip(a.grid, b.grid):
        assert x.second_derivative == y.second_derivative
        assert x.fd_second_derivative == pytest.approx(x.second_derivative, rel=1e-5)


def test_tangent_basis_is_orthonormal_and_tangential():
    grad = np.array([0.3 + 0.2j, -0.5j, 0.1])
    basis = tangent_basis(grad)
    assert len(basis) == 5
    real = np.array([np.concatenate([b.real, b.imag]) for b in basis])
    np.testing.assert_allclose(real @ real.T, np.eye(5), atol=1e-12)
    for b in basis:
        assert abs((grad @ b).real) < 1e-14
    for b in basis[:-1]:
        assert abs(grad @ b) < 1e-14


def test_tangential_directions_order():
    dirs = tangential_directions([0.9, 0], 8, np.random.default_rng(0))
    assert [k for _, k in dirs] == ["complex"] * 4 + ["reeb"] * 2 + ["random"] * 2


def test_level_point():
    p = level_point(synthetic_model(2), -0.01, [1, 1j])
    assert rho_value(synthetic_model(2), p) == pytest.approx(-0.01, abs=1e-14)


def test_empirical_epsilon_stops_at_first_failure():
    mk = lambda lv, val: RepulsionEntry(np.zeros(2), np.zeros(2), lv, val)
    grid = [mk(-0.001, 1.0), mk(-0.01, 2.0), mk(-0.1, -1.0), mk(-0.2, 3.0)]
    assert empirical_epsilon(grid, [-0.001, -0.01, -0.1, -0.2]) == 0.01
    assert empirical_epsilon([mk(-0.001, -1.0)], [-0.001]) == 0.0


def test_scan_preconditions():
    with pytest.raises(PreconditionError):
        boundary_repulsion_scan(Ball(2), [-0.1])
    with pytest.raises(PreconditionError):
        boundary_repulsion_scan(ball_model(2), [-0.5])
    with pytest.raises(PreconditionError):
        boundary_repulsion_scan(ball_model(2), [])
