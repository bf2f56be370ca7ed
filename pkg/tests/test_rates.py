import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from szego_lab import PreconditionError, ball_model, synthetic_model
from szego_lab.experiments import rate_fit
from szego_lab.experiments.rates import (SAMPLERS, approach_point, deficit_closed_form, deficit_samples,
                                         q_vector_samples)

DELTAS = np.logspace(-5, -2, 12)


def test_pure_power():
    fit = rate_fit(list(zip(DELTAS, DELTAS)))
    assert fit.exponent == pytest.approx(1, abs=1e-12)
    assert not fit.log_factor and fit.r_squared == pytest.approx(1.0)


def test_log_factor():
    fit = rate_fit(list(zip(DELTAS, DELTAS * np.abs(np.log(DELTAS)))))
    assert fit.exponent == pytest.approx(1, abs=1e-12)
    assert fit.log_factor


@given(st.floats(-1, 3), st.floats(0.01, 100.0), st.booleans())
def test_recovers_exponent(p, c, with_log):
    vals = c * DELTAS**p * (np.abs(np.log(DELTAS)) if with_log else 1)
    fit = rate_fit(list(zip(DELTAS, vals)))
    assert fit.exponent == pytest.approx(p, abs=1e-8)
    assert fit.log_factor == with_log


def test_all_zero_values():
    fit = rate_fit([(d, 0.0) for d in DELTAS])
    assert math.isinf(fit.exponent)


@pytest.mark.parametrize("samples", [
    [(d, d) for d in DELTAS[:5]],                           # too few
    [(d, d) for d in np.linspace(0.01, 0.05, 10)],         # less than two decades
    [(d * 1000, d) for d in DELTAS],                       # delta outside (0, 1)
    [(d, 0.0 if k % 2 else d) for k, d in enumerate(DELTAS)],  # mixed zeros
    [1, 2, 3],
])
def test_preconditions(samples):
    with pytest.raises(PreconditionError):
        rate_fit(samples)


def test_ball_deficit_is_linear_without_log():
    fit = rate_fit(deficit_samples(ball_model(2), DELTAS, direction=[1, 0]))
    assert fit.exponent == pytest.approx(1, abs=1e-6)
    assert not fit.log_factor and fit.r_squared > 0.999


def test_ball_deficit_matches_closed_form():
    model = ball_model(2)
    np.testing.assert_allclose([v for _, v in deficit_samples(model, DELTAS)],
                               [v for _, v in deficit_closed_form(model, DELTAS)], rtol=1e-8)


def test_approach_point_level():
    z = approach_point(synthetic_model(2), 1e-3)
    assert np.linalg.norm(z) ** 2 == pytest.approx(1 - 1e-3)


def test_q_vector_stays_bounded():
    vals = [v for _, v in q_vector_samples(synthetic_model(2), DELTAS)]
    assert max(vals) < 10 * min(vals)


def test_samplers_registry():
    assert set(SAMPLERS) == {"deficit", "deficit-remainder", "levi-h", "q-vector"}
