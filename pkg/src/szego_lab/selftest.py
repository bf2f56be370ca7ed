"""Quick self-test: the elementary examples every module must reproduce."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .domains import Annulus, Ball, FeffermanModel, ball_model, contains, rho_jet
from .errors import PreconditionError
from .experiments import LoopPath, birkhoff_shorten, ellipse_loop, rate_fit, tangential_second_derivative
from .geodesics import GeodesicState, christoffel, integrate_geodesic, rho_second_derivative
from .kernels import kernel_diagonal_model, szego_annulus, szego_ball
from .metric import caratheodory_ball, levi_quantities, metric_ball, metric_fd_oracle, metric_model
from .svg import render_svg
from .weierstrass import WpParameters, weierstrass_p


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""

    def as_dict(self):
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


def _close(a, b, tol):
    return bool(np.all(np.abs(np.asarray(a) - np.asarray(b)) <= tol))


def _raises(exc, func, *args, **kwargs):
    try:
        func(*args, **kwargs)
    except exc:
        return True
    return False


def _checks():
    jet = rho_jet(Ball(2), [0.9, 0])
    yield "rho_jet ball (0.9,0)", (_close(jet.real_value, -0.19, 1e-15)
                                   and _close(jet.d1, [0.9, 0], 0)
                                   and _close(jet.d2_mixed, np.eye(2), 0)), ""
    jet0 = rho_jet(Ball(3), [0, 0, 0])
    yield "rho_jet ball origin", jet0.real_value == -1 and not np.any(jet0.d1), ""
    yield "contains annulus 0.7", contains(Annulus(0.5), [0.7]), ""
    yield "contains annulus 0.4", not contains(Annulus(0.5), [0.4]), ""
    yield "contains ball boundary", not contains(Ball(2), [1, 0]), ""

    yield "szego_ball n=1 origin", _close(szego_ball([0], [0], 1).value, 1 / (2 * math.pi), 1e-15), ""
    yield "szego_ball n=2 origin", _close(szego_ball([0, 0], [0, 0], 2).value,
                                          1 / (2 * math.pi**2), 1e-15), ""
    yield "szego_ball n=1 z=w=0.5", _close(szego_ball([0.5], [0.5], 1).value,
                                           1 / (2 * math.pi * 0.75), 1e-15), ""
    a = szego_annulus(0.7, 0.7j, 0.5).value
    b = szego_annulus(0.7j, 0.7, 0.5).value
    yield "szego_annulus Hermitian symmetry", abs(a - np.conj(b)) < 1e-13, f"|diff| = {abs(a - np.conj(b)):.2e}"

    params = WpParameters.for_annulus(0.5)
    u = 1e-4
    yield "wp leading Laurent term", abs(weierstrass_p(u, params) * u * u - 1) < 1e-6, ""
    u = 0.3 + 0.2j
    per = abs(weierstrass_p(u + 2 * params.omega1, params) - weierstrass_p(u, params))
    even = abs(weierstrass_p(-u, params) - weierstrass_p(u, params))
    yield "wp periodic and even", per < 1e-12 and even < 1e-12, f"{per:.1e}, {even:.1e}"

    trivial = FeffermanModel(2, "norm2() - 1", "1", "0")
    z = np.array([0.3, 0.4j])
    yield "model kernel Phi=1 Psi=0", _close(kernel_diagonal_model(trivial, z).value,
                                            1 / (1 - 0.25) ** 2, 1e-13), ""
    both = FeffermanModel(2, "norm2() - 1", "1", "1")
    zq = np.array([math.sqrt(0.9), 0])
    yield "model kernel Phi=1 Psi=1 rho=-0.1", _close(kernel_diagonal_model(both, zq).value,
                                                     (1 + 0.01 * math.log(0.1)) / 0.01, 1e-10), ""

    yield "metric_ball n=1 z=0.5", _close(metric_ball([0.5], 1).g[0, 0], 1 / 0.75**2, 1e-14), ""
    lq = levi_quantities(ball_model(2), [0.9, 0])
    yield "constant Phi gives zero log h jet", (not np.any(np.abs(lq.h_bj) > 1e-14)
                                                and not np.any(np.abs(lq.h_abj) > 1e-14)), ""
    lq0 = levi_quantities(ball_model(2), [0, 0])
    yield "Levi quantities at the centre", (not np.any(lq0.q_vector) and lq0.q_scalar == 0), ""
    exact = metric_ball([0.3, 0.1j], 2).g
    e1 = np.max(np.abs(metric_fd_oracle(Ball(2), [0.3, 0.1j], step=0.02).g - exact))
    e2 = np.max(np.abs(metric_fd_oracle(Ball(2), [0.3, 0.1j], step=0.01).g - exact))
    yield "FD oracle converges under step halving", e2 < e1, f"errors {e1:.2e} -> {e2:.2e}"

    yield "Caratheodory unit vector at 0", _close(caratheodory_ball([0, 0], [1, 0]), 1.0, 1e-15), ""
    yield "Christoffel disk origin", not np.any(christoffel(Ball(1), [0])), ""
    zz = np.array([0.3 + 0.1j, -0.2j])
    yield "Christoffel odd in z", _close(christoffel(Ball(2), zz), -christoffel(Ball(2), -zz), 1e-13), ""
    s = GeodesicState.of([0.2, 0.1j], [0.5, 0.2])
    fwd = integrate_geodesic(Ball(2), s, 1.0, t_eval=[1.0])
    bwd = integrate_geodesic(Ball(2), GeodesicState(s.z, -s.v), -1.0, t_eval=[1.0])
    yield "geodesic reversibility", _close(fwd.z[-1], bwd.z[-1], 1e-8), ""
    yield "ball spot value 2", _close(rho_second_derivative(ball_model(2), GeodesicState.of([0.9, 0], [0, 1])),
                                      2.0, 1e-12), ""

    d = np.logspace(-5, -2, 10)
    f1 = rate_fit(list(zip(d, d)))
    f2 = rate_fit(list(zip(d, d * np.abs(np.log(d)))))
    yield "rate_fit pure power", abs(f1.exponent - 1) < 1e-10 and not f1.log_factor and f1.r_squared > 0.999999, ""
    yield "rate_fit log factor", abs(f2.exponent - 1) < 1e-10 and f2.log_factor, ""
    yield "non-tangential direction rejected", _raises(PreconditionError, tangential_second_derivative,
                                                       ball_model(2), [0.9, 0], [1, 0]), ""
    res = birkhoff_shorten(Annulus(0.5), ellipse_loop(0.75, 0.05, 32, 0), max_refinements=0)
    yield "trivial loop degenerates", res.status == "degenerate", res.status
    yield "empty path cannot be rendered", _raises(PreconditionError, render_svg, np.array([])), ""
    loop = LoopPath(0.7 * np.exp(2j * math.pi * np.arange(16) / 16), 1)
    yield "SVG output is deterministic", render_svg(loop, domain=Annulus(0.5)) == render_svg(loop, domain=Annulus(0.5)), ""
    yield "ball model metric equals closed form", _close(metric_model(ball_model(2), [0.9, 0]).g,
                                                         metric_ball([0.9, 0], 2).g, 1e-10), ""


def run_selftest():
    """Run every check; exceptions count as failures."""
    out = []
    gen = _checks()
    while True:
        try:
            name, ok, detail = next(gen)
        except StopIteration:
            break
        except Exception as exc:  # a crashing check is a failed check
            out.append(Check("exception", False, f"{type(exc).__name__}: {exc}"))
            break
        out.append(Check(name, bool(ok), detail))
    return out
