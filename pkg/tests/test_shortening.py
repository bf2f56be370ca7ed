import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from szego_lab import Annulus, Ball, PreconditionError
from szego_lab.experiments import (LoopPath, birkhoff_shorten, circle_geodesic_radius, circle_length,
                                   closure_defect, ellipse_loop, random_loop, winding_number)
from szego_lab.geodesics import launch_angle_state

# 2 pi s lambda(s) at s = sqrt(r), from 40-digit differentiation of the Laurent series
ORACLE_CIRCLE_LENGTH = {0.25: 7.1424785804450079473, 0.5: 14.238866623331966643}


@pytest.mark.parametrize("r", [0.25, 0.5, 0.75])
def test_circle_radius_is_sqrt_r(r):
    assert circle_geodesic_radius(r) == pytest.approx(math.sqrt(r), abs=1e-10)


@pytest.mark.parametrize("r", sorted(ORACLE_CIRCLE_LENGTH))
def test_circle_length_oracle(r):
    assert circle_length(math.sqrt(r), r) == pytest.approx(ORACLE_CIRCLE_LENGTH[r], rel=1e-12)


@given(st.floats(0.1, 0.9), st.floats(0.05, 0.95))
def test_circle_length_symmetric_under_inversion(r, frac):
    s = r + (1 - r) * frac
    assert circle_length(s, r) == pytest.approx(circle_length(r / s, r), rel=1e-10)


@pytest.mark.parametrize("r", [0.25, 0.5])
def test_circle_closes_after_one_period(r):
    s = circle_geodesic_radius(r)
    state = launch_angle_state(Annulus(r), s, math.pi / 2)
    period = circle_length(s, r)
    dz, dv = closure_defect(Annulus(r), state, period)
    assert dz < 1e-5 and dv < 1e-5


def test_winding_number():
    theta = 2 * math.pi * np.arange(32) / 32
    assert winding_number(0.7 * np.exp(1j * theta)) == 1
    assert winding_number(0.7 * np.exp(-2j * theta)) == -2
    assert winding_number(0.7 + 0.1 * np.exp(1j * theta)) == 0


def test_loop_validation():
    theta = 2 * math.pi * np.arange(16) / 16
    with pytest.raises(PreconditionError):
        LoopPath(0.7 * np.exp(1j * theta), 2).validate(Annulus(0.5))
    with pytest.raises(PreconditionError):
        LoopPath(0.45 * np.exp(1j * theta), 1).validate(Annulus(0.5))
    with pytest.raises(PreconditionError):
        LoopPath([0.7, 0.7j, -0.7])
    with pytest.raises(PreconditionError):
        birkhoff_shorten(Annulus(0.5), LoopPath(0.7 * np.exp(2j * math.pi * np.arange(15) / 15), 1))


@settings(max_examples=20)
@given(st.floats(0.1, 0.9), st.integers(0, 2**31), st.integers(1, 3))
def test_random_loops_are_valid(r, seed, winding):
    loop = random_loop(r, np.random.default_rng(seed), winding=winding)
    loop.validate(Annulus(r))
    assert winding_number(loop.points) == winding


def test_ellipse_converges_to_circle():
    res = birkhoff_shorten(Annulus(0.5), ellipse_loop(0.7, 0.1, 64, 1))
    assert res.converged
    assert np.max(np.abs(res.loop.radii() - math.sqrt(0.5))) < 1e-4
    assert res.energy_monotone
    assert res.lengths[-1][-1] == pytest.approx(ORACLE_CIRCLE_LENGTH[0.5], rel=1e-6)
    assert [lv["vertices"] for lv in res.levels][:2] == [64, 128]


def test_energy_never_increases():
    res = birkhoff_shorten(Annulus(0.25), random_loop(0.25, np.random.default_rng(2)), keep_history=True)
    for seq in res.energies:
        assert np.all(np.diff(seq) <= 1e-14 * np.abs(np.asarray(seq[:-1])))
    assert len(res.history) > 1


def test_trivial_class_degenerates():
    res = birkhoff_shorten(Annulus(0.5), ellipse_loop(0.75, 0.05, 32, 0))
    assert res.status == "degenerate"
    assert not res.converged


def test_winding_two_gives_double_circle():
    res = birkhoff_shorten(Annulus(0.5), ellipse_loop(0.72, 0.08, 64, 2))
    assert res.converged
    assert np.max(np.abs(res.loop.radii() - math.sqrt(0.5))) < 1e-4
    assert res.lengths[-1][-1] == pytest.approx(2 * ORACLE_CIRCLE_LENGTH[0.5], rel=1e-6)


def test_loop_in_ball_contracts():
    base = ellipse_loop(0.3, 0.05, 16, 0)
    pts = np.column_stack([base.points, np.zeros(16)])
    res = birkhoff_shorten(Ball(2), LoopPath(pts, 0), max_refinements=0)
    assert res.status == "degenerate"


def test_shortening_preconditions():
    with pytest.raises(PreconditionError):
        birkhoff_shorten(Annulus(0.5), ellipse_loop(0.7, 0.1, 16, 1), tol=0)
    with pytest.raises(PreconditionError):
        birkhoff_shorten(Annulus(0.5), ellipse_loop(0.7, 0.1, 16, 1), max_iter=0)
