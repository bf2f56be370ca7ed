import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from szego_lab import Annulus, Ball, PreconditionError, ball_model, synthetic_model
from szego_lab.domains import clearance
from szego_lab.experiments import circle_geodesic_radius
from szego_lab.geodesics import (BOUNDARY_GUARD, GeodesicState, christoffel, integrate_geodesic,
                                 launch_angle_state, rho_first_derivative, rho_second_derivative,
                                 rho_second_derivative_direct, rho_second_derivative_fd, speed,
                                 unit_speed_state)


def test_disk_christoffel():
    assert christoffel(Ball(1), [0])[0, 0, 0] == 0
    for t in (0.1, 0.5, -0.7):
        assert christoffel(Ball(1), [t])[0, 0, 0].real == pytest.approx(2 * t / (1 - t * t), rel=1e-13)


@given(st.floats(-0.5, 0.5), st.floats(-0.5, 0.5), st.floats(-0.5, 0.5), st.floats(-0.5, 0.5))
def test_ball_christoffel_is_odd(a, b, c, d):
    z = np.array([a + 1j * b, c + 1j * d])
    np.testing.assert_allclose(christoffel(Ball(2), z), -christoffel(Ball(2), -z), atol=1e-12)


def test_disk_geodesic_is_tanh():
    ts = np.linspace(0, 3, 31)[1:]
    tr = integrate_geodesic(Ball(1), GeodesicState.of([0], [1]), 3.0, tol=1e-12, t_eval=ts)
    assert tr.termination == "horizon"
    np.testing.assert_allclose(tr.t[1:], ts)
    assert np.max(np.abs(tr.z[1:, 0] - np.tanh(ts))) < 1e-6


def test_circle_geodesic_stays_on_circle():
    r = 0.5
    s = circle_geodesic_radius(r)
    st0 = launch_angle_state(Annulus(r), s, math.pi / 2)
    tr = integrate_geodesic(Annulus(r), st0, 5.0, tol=1e-12)
    assert np.max(np.abs(np.abs(tr.z[:, 0]) - s)) < 1e-6


def test_circle_geodesic_full_period_small_annulus():
    # one full turn at r = 0.25 (the circle is unstable, so the shorter period is used)
    r = 0.25
    s = circle_geodesic_radius(r)
    st0 = launch_angle_state(Annulus(r), s, math.pi / 2)
    period = 2 * math.pi * s / abs(st0.v[0])
    tr = integrate_geodesic(Annulus(r), st0, period, tol=1e-12, t_eval=[period])
    assert np.max(np.abs(np.abs(tr.z[:, 0]) - s)) < 1e-6
    assert abs(tr.z[-1, 0] - s) < 1e-5


@settings(max_examples=10)
@given(st.floats(-0.5, 0.5), st.floats(-0.5, 0.5), st.floats(-1, 1), st.floats(-1, 1))
def test_reversibility(a, b, c, d):
    model = synthetic_model(2)
    z = np.array([a, 1j * b])
    v = np.array([c + 0.1, 1j * d])
    fwd = integrate_geodesic(model, GeodesicState(z, v), 0.5, tol=1e-11, t_eval=[0.5])
    end = fwd.final
    back = integrate_geodesic(model, GeodesicState(end.z, -end.v), 0.5, tol=1e-11, t_eval=[0.5])
    np.testing.assert_allclose(back.z[-1], z, atol=1e-7)


def test_negative_time_retraces():
    s = GeodesicState.of([0.2, 0.1j], [0.5, 0.2])
    fwd = integrate_geodesic(Ball(2), s, 1.0, t_eval=[1.0])
    bwd = integrate_geodesic(Ball(2), GeodesicState(s.z, -s.v), -1.0, t_eval=[1.0])
    np.testing.assert_allclose(fwd.z[-1], bwd.z[-1], atol=1e-8)


def test_speed_is_conserved():
    rng = np.random.default_rng(7)
    for domain in (Ball(2), Annulus(0.5), synthetic_model(2)):
        z = np.array([0.7]) if isinstance(domain, Annulus) else 0.3 * rng.normal(size=2) + 0j
        st0 = unit_speed_state(domain, z, rng.normal(size=domain.n) + 1j * rng.normal(size=domain.n))
        st0 = GeodesicState(st0.z, 0.25 * st0.v)
        tr = integrate_geodesic(domain, st0, 20.0, tol=1e-10)
        assert tr.termination == "horizon"
        assert tr.speed_drift / tr.speeds[0] < 1e-7


def test_boundary_guard_stops_radial_ray():
    tr = integrate_geodesic(Ball(2), GeodesicState.of([0, 0], [1, 0]), 50.0)
    assert tr.termination == "boundary_guard"
    assert clearance(Ball(2), tr.z[-1]) < 10 * BOUNDARY_GUARD
    assert tr.duration < 50


def test_unit_speed_state():
    st0 = unit_speed_state(Annulus(0.5), [0.7], [1j])
    assert speed(Annulus(0.5), st0.z, st0.v) == pytest.approx(1.0)


def test_integrator_preconditions():
    with pytest.raises(PreconditionError):
        integrate_geodesic(Ball(2), GeodesicState.of([1.2, 0], [1, 0]), 1.0)
    with pytest.raises(PreconditionError):
        integrate_geodesic(Ball(2), GeodesicState.of([0, 0], [1, 0]), 1.0, tol=0)


def test_second_derivative_spot_values():
    model = ball_model(2)
    assert rho_second_derivative(model, GeodesicState.of([0.9, 0], [0, 1])) == pytest.approx(2.0, abs=1e-12)
    s = GeodesicState.of([0.9, 0], [1j, 0])
    assert rho_first_derivative(model, s) == pytest.approx(0.0, abs=1e-15)
    assert rho_second_derivative(model, s) == pytest.approx(4 * 0.81 / 0.19 + 2, rel=1e-12)
    assert rho_second_derivative(model, s) == pytest.approx(19.0526, abs=1e-4)


def _random_state(model, rng):
    z = rng.normal(size=2) + 1j * rng.normal(size=2)
    z *= rng.uniform(0.5, 0.97) / np.linalg.norm(z)
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    return GeodesicState(z, v / np.linalg.norm(v))


@pytest.mark.parametrize("model", [ball_model(2), synthetic_model(2)], ids=["ball", "synthetic"])
def test_second_derivative_three_routes(model):
    rng = np.random.default_rng(11)
    for _ in range(6):
        s = _random_state(model, rng)
        formula = rho_second_derivative(model, s)
        assert rho_second_derivative_direct(model, s) == pytest.approx(formula, rel=1e-9)
        assert rho_second_derivative_fd(model, s) == pytest.approx(formula, rel=1e-5)


def test_second_derivative_needs_model():
    with pytest.raises(PreconditionError):
        rho_second_derivative(Ball(2), GeodesicState.of([0.5, 0], [1, 0]))
