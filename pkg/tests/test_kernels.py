import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from szego_lab import FeffermanModel, PreconditionError, ball_model
from szego_lab.kernels import annulus_series, kernel_diagonal_model, szego_annulus, szego_ball

# 2001-term brute-force sums evaluated in 40-digit arithmetic
ORACLE_S_07_07 = 0.5157873535488737259
ORACLE_S_07_07I = complex(0.019726359742279471719, 0.021620678748069485915)


def test_ball_kernel_examples():
    assert szego_ball([0], [0], 1).value == pytest.approx(1 / (2 * math.pi), rel=1e-15)
    assert szego_ball([0, 0], [0, 0], 2).value == pytest.approx(1 / (2 * math.pi**2), rel=1e-15)
    assert szego_ball([0.5], [0.5], 1).value == pytest.approx(1 / (2 * math.pi * 0.75), rel=1e-15)


@given(st.floats(-0.6, 0.6), st.floats(-0.6, 0.6), st.floats(-0.6, 0.6), st.floats(-0.6, 0.6))
def test_ball_kernel_hermitian(a, b, c, d):
    z, w = np.array([a, 1j * b]), np.array([c * 1j, d])
    assert szego_ball(z, w, 2).value == pytest.approx(np.conj(szego_ball(w, z, 2).value))


def test_ball_kernel_rejects_boundary():
    with pytest.raises(PreconditionError):
        szego_ball([1.0, 0], [1.0, 0], 2)


def test_annulus_kernel_against_long_sum():
    kv = szego_annulus(0.7, 0.7, 0.5, tol=1e-12)
    assert isinstance(kv.value, float) and kv.value > 0
    assert kv.value == pytest.approx(ORACLE_S_07_07, rel=1e-12)
    assert kv.truncation_error_bound <= 1e-12
    off = szego_annulus(0.7, 0.7j, 0.5).value
    assert abs(off - ORACLE_S_07_07I) < 1e-12


@given(st.floats(0.55, 0.95), st.floats(0, 2 * math.pi), st.floats(0.55, 0.95), st.floats(0, 2 * math.pi))
def test_annulus_kernel_hermitian(s1, a1, s2, a2):
    z, w = s1 * np.exp(1j * a1), s2 * np.exp(1j * a2)
    assert abs(szego_annulus(z, w, 0.5).value - np.conj(szego_annulus(w, z, 0.5).value)) < 1e-11


def test_annulus_kernel_rejects_divergent_pairs():
    with pytest.raises(PreconditionError):
        szego_annulus(0.3, 0.3, 0.5)
    with pytest.raises(PreconditionError):
        szego_annulus(0.7, 0.7, 0.5, tol=0)


@given(st.floats(0.2, 0.8), st.floats(0.0, 1.0))
def test_annulus_series_matches_direct_sum(r, frac):
    t = r * r + (1 - r * r) * (0.02 + 0.96 * frac)
    F, bound, _ = annulus_series(t, r, tol=1e-14)
    ns = np.arange(-4000, 4001)
    with np.errstate(over="ignore", under="ignore"):
        terms = np.exp(ns * math.log(t) - np.logaddexp(0.0, (2 * ns + 1) * math.log(r)))
    assert F[0] == pytest.approx(terms.sum(), rel=1e-12)
    assert bound <= 1e-14


def test_annulus_series_near_the_edge_is_cheap():
    F, bound, terms = annulus_series(0.999999, 0.5)
    assert terms < 200
    assert F[0] > 1e5 and bound < 1e-14


def test_model_kernel_ball_data():
    val = kernel_diagonal_model(ball_model(2), [0.9, 0]).value
    assert val == pytest.approx((1 / (2 * math.pi**2)) / 0.19**2, rel=1e-14)


@given(st.floats(0, 0.9), st.floats(0, 2 * math.pi))
def test_model_kernel_trivial_numerator(s, a):
    model = FeffermanModel(2, "norm2() - 1", "1", "0")
    z = np.array([s * math.cos(a), 1j * s * math.sin(a)])
    assert kernel_diagonal_model(model, z).value == pytest.approx(1 / (1 - s * s) ** 2, rel=1e-13)


def test_model_kernel_log_term():
    model = FeffermanModel(2, "norm2() - 1", "1", "1")
    z = np.array([math.sqrt(0.9), 0])
    assert kernel_diagonal_model(model, z).value == pytest.approx((1 + 0.01 * math.log(0.1)) / 0.01, rel=1e-12)


def test_model_kernel_exterior_point():
    with pytest.raises(PreconditionError):
        kernel_diagonal_model(ball_model(2), [0.9, 0.9])
