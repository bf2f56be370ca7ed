import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from szego_lab import Annulus, Ball, FeffermanModel, ModelValidityError, PreconditionError, ball_model, load_domain, synthetic_model
from szego_lab.domains import clearance, contains, domain_to_dict, rho_jet, rho_value
from szego_lab.recipes import RecipeError


def fd_rho_derivatives(model, z, h=1e-4):
    """Real-coordinate central differences of rho turned into Wirtinger derivatives."""
    n = model.n

    def f(x):
        return rho_value(model, x[:n] + 1j * x[n:])

    x0 = np.concatenate([z.real, z.imag])
    m = 2 * n
    grad = np.zeros(m)
    hess = np.zeros((m, m))
    E = np.eye(m) * h
    for i in range(m):
        grad[i] = (f(x0 + E[i]) - f(x0 - E[i])) / (2 * h)
        for j in range(m):
            hess[i, j] = (f(x0 + E[i] + E[j]) - f(x0 + E[i] - E[j])
                          - f(x0 - E[i] + E[j]) + f(x0 - E[i] - E[j])) / (4 * h * h)
    d1 = 0.5 * (grad[:n] - 1j * grad[n:])
    xx, yy, xy, yx = hess[:n, :n], hess[n:, n:], hess[:n, n:], hess[n:, :n]
    mixed = 0.25 * (xx + yy + 1j * (xy - yx))
    return d1, mixed


def test_ball_rho_jet_at_0_9():
    jet = rho_jet(Ball(2), [0.9, 0])
    assert jet.real_value == pytest.approx(-0.19, abs=1e-15)
    np.testing.assert_array_equal(jet.d1, [0.9, 0])
    np.testing.assert_array_equal(jet.d2_mixed, np.eye(2))


@pytest.mark.parametrize("n", [1, 2, 4])
def test_ball_rho_at_origin(n):
    jet = rho_jet(Ball(n), np.zeros(n))
    assert jet.real_value == -1
    assert not np.any(jet.d1)


def test_model_jet_matches_finite_differences_at_half():
    model = FeffermanModel(2, "norm2() - 1", "1", "0")
    z = np.array([0.5, 0.5], dtype=complex)
    jet = rho_jet(model, z)
    d1, mixed = fd_rho_derivatives(model, z)
    np.testing.assert_allclose(jet.d1, d1, atol=1e-8)
    np.testing.assert_allclose(jet.d2_mixed, mixed, atol=1e-7)


@given(st.floats(-0.6, 0.6), st.floats(-0.6, 0.6), st.floats(-0.6, 0.6), st.floats(-0.6, 0.6))
def test_synthetic_rho_jet_against_fd_oracle(a, b, c, d):
    model = FeffermanModel(2, "norm2() - 1 + 0.2*re(z1**2*zb2) + 0.1*abs2(z1)**2", "1", "0")
    z = np.array([a + 1j * b, c + 1j * d])
    jet = rho_jet(model, z)
    d1, mixed = fd_rho_derivatives(model, z)
    scale = max(1.0, np.max(np.abs(jet.d1)))
    assert np.max(np.abs(jet.d1 - d1)) <= 1e-7 * scale
    assert np.max(np.abs(jet.d2_mixed - mixed)) <= 1e-6 * max(1.0, np.max(np.abs(mixed)))
    # third order: difference the exact second-order jet
    h = 1e-4
    for j in range(2):
        e = np.zeros(2, dtype=complex)
        e[j] = h
        dx = (rho_jet(model, z + e).d2_mixed - rho_jet(model, z - e).d2_mixed) / (2 * h)
        dy = (rho_jet(model, z + 1j * e).d2_mixed - rho_jet(model, z - 1j * e).d2_mixed) / (2 * h)
        np.testing.assert_allclose(jet.d3[j], 0.5 * (dx - 1j * dy), atol=1e-5)


def test_contains_examples():
    assert contains(Annulus(0.5), [0.7])
    assert not contains(Annulus(0.5), [0.4])
    assert not contains(Ball(2), [1, 0])
    assert not contains(Ball(2), [0.5])          # wrong dimension


@given(st.floats(-1.2, 1.2), st.floats(-1.2, 1.2), st.floats(-1.2, 1.2), st.floats(-1.2, 1.2))
def test_rho_negative_exactly_on_interior(a, b, c, d):
    z = np.array([a + 1j * b, c + 1j * d])
    for model in (Ball(2), synthetic_model(2)):
        inside = contains(model, z)
        assert inside == (rho_value(model, z) < 0 and np.all(np.abs(z.real) <= 1.01)
                          and np.all(np.abs(z.imag) <= 1.01))


@given(st.floats(0.05, 0.95), st.floats(0.0, 1.2))
def test_annulus_containment(r, s):
    assert contains(Annulus(r), [s]) == (r < s < 1)


def test_annulus_rho_jet_uses_product_form():
    jet = rho_jet(Annulus(0.5), [0.7])
    assert jet.real_value == pytest.approx((0.49 - 1) * (0.49 - 0.25))


def test_clearance():
    assert clearance(Ball(2), [0.9, 0]) == pytest.approx(0.1)
    assert clearance(Annulus(0.5), [0.6j]) == pytest.approx(0.1)
    assert clearance(ball_model(2), [0.9, 0]) == pytest.approx(0.19 / 1.8)


def test_invalid_parameters():
    with pytest.raises(PreconditionError):
        Annulus(1.5)
    with pytest.raises(PreconditionError):
        Ball(0)
    with pytest.raises(PreconditionError):
        FeffermanModel(1, "norm2() - 1", "1", "0")
    with pytest.raises(RecipeError):
        FeffermanModel(2, "norm2( - 1", "1", "0")


def test_collar_check_rejects_negative_phi():
    with pytest.raises(ModelValidityError):
        FeffermanModel(2, "norm2() - 1", "re(z1)", "0")


def test_load_domain_forms():
    assert load_domain("annulus:r=0.5") == Annulus(0.5)
    assert load_domain({"kind": "ball", "n": 3}).n == 3
    m = load_domain({"kind": "model", "n": 2, "rho": "norm2() - 1", "phi": "2", "psi": "0"})
    assert isinstance(m, FeffermanModel) and m.phi.source == "2"
    s = load_domain("synthetic:n=2,eps0=0.1")
    assert s.eps0 == 0.1
    for bad in ("torus:r=1", "annulus", "annulus:r"):
        with pytest.raises(PreconditionError):
            load_domain(bad)


def test_domain_dict_roundtrip():
    for d in (Ball(2), Annulus(0.25), synthetic_model(2)):
        again = load_domain(domain_to_dict(d))
        assert domain_to_dict(again) == domain_to_dict(d)


def test_rho_jet_outside_box_raises():
    with pytest.raises(PreconditionError):
        rho_jet(ball_model(2), [2.0, 0])
    with pytest.raises(PreconditionError):
        rho_jet(Ball(2), [0.1, 0], order=4)


def test_domains_are_hashable_and_immutable():
    a = Annulus(0.5)
    with pytest.raises(Exception):
        a.r = 0.3
    assert hash(a) == hash(Annulus(0.5))
    assert math.isclose(rho_value(a, [0.75]), max(0.75**2 - 1, 0.25 - 0.75**2))
