"""Geodesic flow of the Szego metric.

Geodesics solve ``c''_l + Gamma^l_{jk} c'_j c'_k = 0`` with the Kahler
Christoffel symbols ``Gamma^l_{jk} = g^{l mbar} d_j g_{k mbar}`` (mixed-type
symbols vanish).  The state is advanced as a real first-order system of
dimension 4n with an embedded Dormand-Prince 5(4) pair and a PI step-size
controller.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .domains import Annulus, FeffermanModel, as_point, clearance, contains, rho_jet, rho_value
from .errors import PreconditionError
from .metric import hermitian_solve, levi_quantities, metric
from .kernels import model_jets

BOUNDARY_GUARD = 1e-6

# Dormand-Prince 5(4) tableau
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
_E = _B5 - _B4


@dataclass(frozen=True)
class GeodesicState:
    """Position ``z`` and holomorphic velocity ``v = c'``."""

    z: np.ndarray
    v: np.ndarray

    @classmethod
    def of(cls, z, v):
        return cls(np.atleast_1d(np.asarray(z, dtype=complex)).copy(),
                   np.atleast_1d(np.asarray(v, dtype=complex)).copy())


@dataclass
class GeodesicTrace:
    """Sampled geodesic with its speed ledger.

    ``termination`` is ``"horizon"`` when the requested time was reached,
    ``"boundary_guard"`` when the trace came within the numerical guard of
    the boundary, and ``"step_underflow"`` when the step size collapsed.
    """

    t: np.ndarray
    z: np.ndarray
    v: np.ndarray
    speeds: np.ndarray
    accepted: int = 0
    rejected: int = 0
    termination: str = "horizon"
    message: str = ""
    domain: object = field(default=None, repr=False)

    def __len__(self):
        return len(self.t)

    def state(self, i):
        return GeodesicState(self.z[i], self.v[i])

    @property
    def final(self):
        return self.state(-1)

    @property
    def speed_drift(self):
        return float(np.max(np.abs(self.speeds - self.speeds[0])))

    @property
    def duration(self):
        return float(abs(self.t[-1] - self.t[0]))


def christoffel(domain, z, form=None):
    """Christoffel symbols ``Gamma[l, j, k]`` of the Szego metric at ``z``."""
    form = form or metric(domain, z)
    n = form.g.shape[0]
    # (G^T) Gamma[:, j, k] = dg[j, k, :]
    rhs = form.dg.reshape(n * n, n).T
    gamma = hermitian_solve(form.g.T, rhs)
    return gamma.reshape(n, n, n)


def geodesic_acceleration(domain, z, v):
    form = metric(domain, z)
    d = np.einsum("abm,a,b->m", form.dg, v, v)
    return -hermitian_solve(form.g.T, d, check=False)


def speed(domain, z, v):
    return metric(domain, z).length(v)


def _outside_guard(domain, z):
    if not contains(domain, z):
        return True
    if isinstance(domain, Annulus):
        return clearance(domain, z) < BOUNDARY_GUARD
    return rho_value(domain, z) > -BOUNDARY_GUARD


class _RealSystem:
    def __init__(self, domain):
        self.domain = domain
        self.n = domain.n
        self.evals = 0

    def split(self, y):
        n = self.n
        return y[:n] + 1j * y[n:2 * n], y[2 * n:3 * n] + 1j * y[3 * n:]

    def join(self, z, v):
        return np.concatenate([z.real, z.imag, v.real, v.imag])

    def __call__(self, y):
        self.evals += 1
        z, v = self.split(y)
        a = geodesic_acceleration(self.domain, z, v)
        return np.concatenate([v.real, v.imag, a.real, a.imag])


def integrate_geodesic(domain, s0, T, tol=1e-10, t_eval=None, h0=None,
                       max_steps=1_000_000, min_step=1e-14):
    """Integrate the geodesic starting at ``s0`` over ``[0, T]`` (``T`` may be negative).

    Parameters
    ----------
    domain : DomainModel
    s0 : GeodesicState
    T : float
        Final time.
    tol : float
        Absolute and relative local error tolerance (split 1:1).
    t_eval : sequence of float, optional
        Record the state only at these times (the integrator lands on them
        exactly).  By default every accepted step is recorded.

    Returns
    -------
    GeodesicTrace
    """
    if tol <= 0:
        raise PreconditionError("tol must be positive")
    z0 = as_point(domain, s0.z)
    v0 = np.atleast_1d(np.asarray(s0.v, dtype=complex))
    if not contains(domain, z0) or _outside_guard(domain, z0):
        raise PreconditionError("initial point is not interior to the domain")
    sys_ = _RealSystem(domain)
    direction = 1.0 if T >= 0 else -1.0
    T_abs = abs(T)
    if t_eval is not None:
        targets = np.sort(np.abs(np.asarray(t_eval, dtype=float)))
        targets = targets[(targets > 0) & (targets <= T_abs)]
    else:
        targets = None

    y = sys_.join(z0, v0)
    f = sys_(y)
    ts, zs, vs = [0.0], [z0.copy()], [v0.copy()]
    t = 0.0
    scale0 = max(np.linalg.norm(y), 1e-3)
    h = h0 if h0 is not None else min(T_abs, 0.01 * scale0 / max(np.linalg.norm(f), 1e-12)) if T_abs else 0.0
    h = max(h, min_step * 10)
    err_prev = 1e-4
    accepted = rejected = 0
    termination, message = "horizon", ""
    next_target = 0

    while t < T_abs * (1 - 1e-15) and T_abs > 0:
        if accepted + rejected > max_steps:
            termination, message = "step_underflow", "maximum number of steps exceeded"
            break
        stop = T_abs if targets is None or next_target >= len(targets) else targets[next_target]
        clipped = h >= stop - t
        h_try = stop - t if clipped else h
        k = [f]
        for i in range(1, 7):
            yi = y + direction * h_try * sum(a * kk for a, kk in zip(_A[i], k))
            zi, _ = sys_.split(yi)
            if not contains(domain, zi):
                k = None
                break
            k.append(sys_(yi))
        if k is None:
            err = np.inf
        else:
            y_new = y + direction * h_try * sum(b * kk for b, kk in zip(_B5, k) if b)
            err_vec = direction * h_try * sum(e * kk for e, kk in zip(_E, k))
            sc = tol + tol * np.maximum(np.abs(y), np.abs(y_new))
            err = float(np.sqrt(np.mean((err_vec / sc) ** 2)))
        if err <= 1.0:
            t = stop if clipped else t + h_try
            y = y_new
            f = k[6]
            accepted += 1
            z, v = sys_.split(y)
            on_target = targets is not None and clipped and next_target < len(targets)
            if on_target:
                next_target += 1
            if targets is None or on_target:
                ts.append(direction * t)
                zs.append(z.copy())
                vs.append(v.copy())
            # PI controller (exponents 0.7/k and 0.4/k with k = 5)
            factor = 0.9 * max(err, 1e-10) ** (-0.7 / 5) * err_prev ** (0.4 / 5)
            h = h_try * min(5.0, max(0.2, factor))
            err_prev = max(err, 1e-4)
            if _near_guard(domain, z):
                termination = "boundary_guard"
                message = "trace reached the numerical boundary guard"
                break
        else:
            rejected += 1
            if np.isfinite(err):
                h = h_try * max(0.1, 0.9 * err ** (-1 / 5))
            else:
                h = h_try * 0.25
            if h < min_step:
                termination = "step_underflow" if not _near_guard(domain, sys_.split(y)[0], 10) \
                    else "boundary_guard"
                message = f"step size fell below {min_step:g} at t = {direction * t:.6g}"
                break

    zs, vs = np.array(zs), np.array(vs)
    speeds = np.array([speed(domain, zz, vv) for zz, vv in zip(zs, vs)])
    return GeodesicTrace(np.array(ts), zs, vs, speeds, accepted, rejected,
                         termination, message, domain)


def _near_guard(domain, z, factor=1.0):
    if isinstance(domain, Annulus):
        return clearance(domain, z) < factor * BOUNDARY_GUARD
    return rho_value(domain, z) > -factor * BOUNDARY_GUARD


# -- second derivative of rho along geodesics -----------------------------------------

def rho_first_derivative(model, s):
    """``(rho o c)'(0) = 2 Re(grad rho . c')``."""
    grad = rho_jet(model, s.z, order=1).d1
    return 2.0 * float(np.real(grad @ s.v))


def rho_second_derivative(model, s):
    """``(rho o c)''(0)`` for the geodesic through state ``s`` of a Fefferman model.

    Evaluates the five-term boundary formula: the third-derivative term
    against ``L_g^{-1} (grad rho)^t``, the ``L_h L_g^{-1}`` cross term, the
    ``1 - (n/rho^2) conj(grad rho) L_g^{-1} (grad rho)^t`` term, and
    ``(4/rho) Re((grad rho . c')^2) + 2 c' L_rho conj(c')``.
    """
    if not isinstance(model, FeffermanModel):
        raise PreconditionError("rho_second_derivative needs a FeffermanModel")
    z = as_point(model, s.z)
    v = np.atleast_1d(np.asarray(s.v, dtype=complex))
    jets = model_jets(model, z)
    lq = levi_quantities(model, z)
    n = model.n
    rj = jets.rho
    rho = rj.real_value
    grad = rj.d1
    x = lq.q_vector * rho**2                       # L_g^{-1} (grad rho)^t
    third = jets.frak_h.d3 - (n / rho) * rj.d3     # [a, b, j]
    term1 = -2.0 * np.real(np.einsum("abj,j,a,b->", third, x, v, v))
    cross = v @ (jets.frak_h.d2_mixed @ x)
    X = grad @ v
    term2 = -(4.0 / rho) * np.real(cross * X)
    term3 = 2.0 * (1.0 - n * lq.q_scalar) * np.real(v @ rj.d2_pure @ v)
    term4 = (4.0 / rho) * np.real(X * X)
    term5 = 2.0 * np.real(v @ rj.d2_mixed @ np.conj(v))
    return float(term1 + term2 + term3 + term4 + term5)


def rho_second_derivative_direct(domain, s):
    """``(rho o c)''`` from the chain rule and the geodesic equation (cross-check)."""
    z = as_point(domain, s.z)
    v = np.atleast_1d(np.asarray(s.v, dtype=complex))
    rj = rho_jet(domain, z, order=2)
    acc = geodesic_acceleration(domain, z, v)
    return float(2 * np.real(v @ rj.d2_pure @ v) + 2 * np.real(v @ rj.d2_mixed @ np.conj(v))
                 + 2 * np.real(rj.d1 @ acc))


def rho_second_derivative_fd(domain, s, h=None, tol=1e-13):
    """Fourth-order central difference of ``rho(c(t))`` at ``t = 0`` along integrated traces."""
    if h is None:
        scale = max(-rho_value(domain, s.z), 1e-6)
        h = 0.01 * scale / max(float(np.linalg.norm(s.v)), 1e-12)
    fwd = integrate_geodesic(domain, s, 2 * h, tol=tol, t_eval=[h, 2 * h])
    bwd = integrate_geodesic(domain, s, -2 * h, tol=tol, t_eval=[h, 2 * h])
    if len(fwd) != 3 or len(bwd) != 3:
        raise PreconditionError("finite-difference stencil left the domain")

    def f(zz):
        return rho_jet(domain, zz, order=0).real_value

    f0 = f(s.z)
    fp1, fp2 = f(fwd.z[1]), f(fwd.z[2])
    fm1, fm2 = f(bwd.z[1]), f(bwd.z[2])
    return (-fp2 + 16 * fp1 - 30 * f0 + 16 * fm1 - fm2) / (12 * h * h)


def unit_speed_state(domain, z, direction):
    """State at ``z`` whose velocity points along ``direction`` with unit metric speed."""
    z = as_point(domain, z)
    d = np.atleast_1d(np.asarray(direction, dtype=complex))
    return GeodesicState(z, d / speed(domain, z, d))


def launch_angle_state(annulus, s, angle, speed_value=1.0):
    """Annulus state at ``z = s`` whose velocity makes ``angle`` with the radial direction."""
    z = np.array([complex(s)])
    d = np.array([complex(math.cos(angle), math.sin(angle))])
    st = unit_speed_state(annulus, z, d)
    return GeodesicState(st.z, st.v * speed_value)
