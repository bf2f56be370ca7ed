import math

import numpy as np
import pytest

from szego_lab import Annulus, Ball, PreconditionError
from szego_lab.experiments import circle_geodesic_radius, classify_geodesic, section_crossings
from szego_lab.experiments.classify import VERDICTS
from szego_lab.geodesics import GeodesicState, integrate_geodesic, launch_angle_state


def _trace(r, s, angle, T, speed=1.0, tol=1e-10):
    domain = Annulus(r)
    return integrate_geodesic(domain, launch_angle_state(domain, s, angle, speed), T, tol=tol)


@pytest.mark.parametrize("speed", [1.0, 0.3])
def test_circle_is_closed(speed):
    r = 0.25
    s = circle_geodesic_radius(r)
    tr = _trace(r, s, math.pi / 2, 10 / speed, speed=speed, tol=1e-12)
    res = classify_geodesic(tr, s, horizon=9.0)
    assert res.verdict == "closed"


def test_radial_ray_seeks_boundary():
    tr = _trace(0.5, 0.8, 0.0, 40.0)
    assert tr.termination == "boundary_guard"
    res = classify_geodesic(tr, 0.75, horizon=40.0)
    assert res.verdict == "boundary-seeking"
    assert res.final_clearance < 1e-5


def test_generic_launch_is_reproducible():
    a = classify_geodesic(_trace(0.5, 0.8, 1.1, 200.0), 0.7, horizon=200.0)
    b = classify_geodesic(_trace(0.5, 0.8, 1.1, 200.0), 0.7, horizon=200.0)
    assert a.verdict in VERDICTS
    assert a.as_dict() == b.as_dict()


def test_inward_launch_crosses_section():
    s = circle_geodesic_radius(0.5)
    tr = _trace(0.5, 0.8, 2.5, 30.0)
    crossings = section_crossings(tr, s)
    assert crossings
    first = crossings[0]
    assert not first.outward
    assert 0 <= first.position_angle < 2 * math.pi
    assert 0 < first.arclength < 30


def test_classify_preconditions():
    tr = _trace(0.5, 0.7, 1.0, 2.0)
    with pytest.raises(PreconditionError):
        classify_geodesic(tr, 0.3, horizon=1.0)
    with pytest.raises(PreconditionError):
        classify_geodesic(tr, 0.7, horizon=50.0)
    with pytest.raises(PreconditionError):
        classify_geodesic(tr, 0.7, horizon=-1.0)
    ball_trace = integrate_geodesic(Ball(1), GeodesicState.of([0], [1]), 1.0)
    with pytest.raises(PreconditionError):
        classify_geodesic(ball_trace, 0.5, horizon=0.5)
