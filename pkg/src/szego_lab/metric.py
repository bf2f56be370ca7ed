"""Szego metric tensors ``g_{j kbar} = d^2 log S(z,z) / dz_j dzbar_k``.

Conventions: ``g[j, k] = g_{j kbar}`` and ``dg[a, j, k] = d/dz_a g_{j kbar}``.
The length of a tangent vector ``v`` is ``sqrt(sum_jk g_{j kbar} v_j conj(v_k))``.

The same metric can be written as ``ds^2 = J^(1) / J^(0)`` with
``J^(0) = S(z, z)`` and ``J^(1)`` a supremum over the Hardy space (the
maximal domain function).  That representation is not computable here and
is not implemented; every metric below comes from ``log S`` directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .domains import Annulus, Ball, FeffermanModel, as_point, clearance, rho_jet
from .errors import NumericalError, PreconditionError
from .kernels import annulus_series, kernel_diagonal_model, model_jets, szego_annulus, szego_ball
from .weierstrass import WpParameters, weierstrass_p, weierstrass_p_prime

COND_LIMIT = 1e12


@dataclass(frozen=True)
class HermitianForm:
    """Metric coefficients at a point together with their holomorphic derivatives."""

    g: np.ndarray
    dg: np.ndarray | None = None

    @property
    def eigenvalues(self):
        return np.linalg.eigvalsh(self.g)

    def length2(self, v):
        v = np.atleast_1d(np.asarray(v, dtype=complex))
        return float(np.real(v @ self.g @ np.conj(v)))

    def length(self, v):
        return math.sqrt(self.length2(v))


@dataclass(frozen=True)
class LeviQuantities:
    """Boundary-asymptotic quantities built from ``L_g^{-1} (grad rho)^t``.

    Attributes
    ----------
    q_vector : ndarray
        ``L_g^{-1} (grad rho)^t / rho^2``.
    q_scalar : float
        ``conj(grad rho) . L_g^{-1} . (grad rho)^t / rho^2``.
    calQ : float
        ``conj(grad rho) . L_rho^{-1} . (grad rho)^t``.
    h_b, h_bj, h_abj : ndarray
        Derivatives of ``log h``: first, mixed second (Levi matrix) and
        third ``[a, b, j]``.
    """

    rho: float
    q_vector: np.ndarray
    q_scalar: float
    calQ: float
    h_b: np.ndarray
    h_bj: np.ndarray
    h_abj: np.ndarray
    L_g: np.ndarray

    @property
    def deficit(self):
        """``q_scalar - 1/n``."""
        return self.q_scalar - 1.0 / len(self.q_vector)


def hermitian_solve(a, b, check=True):
    """Solve ``a x = b`` for Hermitian positive definite ``a`` via Cholesky."""
    a = np.asarray(a, dtype=complex)
    if check:
        ev = np.linalg.eigvalsh(a)
        if ev[0] <= 0:
            raise NumericalError("matrix is not positive definite")
        if ev[-1] / ev[0] > COND_LIMIT:
            raise NumericalError(f"matrix condition number {ev[-1] / ev[0]:.3g} exceeds {COND_LIMIT:g}")
    if a.shape == (1, 1):
        return np.asarray(b, dtype=complex) / a[0, 0].real
    factor = scipy.linalg.cho_factor(a, lower=True, check_finite=False)
    return scipy.linalg.cho_solve(factor, b, check_finite=False)


# -- closed forms -------------------------------------------------------------------

def metric_ball(z, n):
    """Szego metric of the unit ball, ``n (delta (1-|z|^2) + conj(z_j) z_k)/(1-|z|^2)^2``."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    if z.shape != (n,):
        raise PreconditionError(f"expected a point in C^{n}")
    u = 1.0 - float(np.vdot(z, z).real)
    if u <= 0:
        raise PreconditionError("|z| >= 1")
    zb = np.conj(z)
    eye = np.eye(n)
    g = n * (eye / u + np.outer(zb, z) / u**2)
    dg = n * (np.einsum("a,jk->ajk", zb, eye) / u**2
              + np.einsum("j,ak->ajk", zb, eye) / u**2
              + 2 * np.einsum("a,j,k->ajk", zb, zb, z) / u**3)
    return HermitianForm(g, dg)


def annulus_factor(s, r, tol=1e-14):
    """Conformal factor ``lambda^2`` and ``d lambda^2 / dt`` (``t = s^2``) via the series."""
    t = np.asarray(s, dtype=float) ** 2
    F, _, _ = annulus_series(t, r, tol, order=3)
    F0, F1, F2, F3 = F
    a1, a2, a3 = F1 / F0, F2 / F0, F3 / F0
    lam2 = a1 + t * (a2 - a1**2)
    dlam2 = 2 * (a2 - a1**2) + t * (a3 - 3 * a2 * a1 + 2 * a1**3)
    return lam2, dlam2


def annulus_factor_wp(s, r, tol=1e-14):
    """``lambda^2 = [wp(2 log s) - wp(2 log s + omega1 + omega3)] / s^2``."""
    params = WpParameters.for_annulus(r)
    x = 2 * math.log(s)
    shift = params.omega1 + params.omega3
    val = weierstrass_p(x, params, tol) - weierstrass_p(x + shift, params, tol)
    return val.real / s**2


def metric_annulus(z, r, method="series", tol=1e-14):
    """Szego metric ``lambda^2 |dz|^2`` of the annulus ``{r < |z| < 1}``.

    ``method='series'`` differentiates the logarithm of the diagonal Laurent
    series; ``method='wp'`` uses the Weierstrass form.
    """
    z = complex(np.asarray(z).ravel()[0]) if np.ndim(z) else complex(z)
    s = abs(z)
    if not r < s < 1:
        raise PreconditionError(f"|z| = {s} is outside the annulus ({r}, 1)")
    if method == "series":
        lam2, dlam2 = annulus_factor(s, r, tol)
        dg = dlam2 * z.conjugate()
    elif method == "wp":
        params = WpParameters.for_annulus(r)
        x = 2 * math.log(s)
        shift = params.omega1 + params.omega3
        p0 = (weierstrass_p(x, params, tol) - weierstrass_p(x + shift, params, tol)).real
        p1 = (weierstrass_p_prime(x, params, tol) - weierstrass_p_prime(x + shift, params, tol)).real
        lam2 = p0 / s**2
        # d/dz = (1/(2z)) d/d(log s)
        dg = (2 * p1 - 2 * p0) / s**2 / (2 * z)
    else:
        raise PreconditionError(f"unknown method {method!r}")
    return HermitianForm(np.array([[float(lam2)]], dtype=complex),
                         np.array([[[complex(dg)]]]))


def metric_model(model, z):
    """Metric of a Fefferman model assembled from exact jets of ``log S``."""
    jets = model_jets(model, z)
    g = jets.log_s.d2_mixed.copy()
    return HermitianForm(0.5 * (g + g.conj().T), jets.log_s.d3.copy())


def metric(domain, z):
    """Dispatch to the closed form appropriate for ``domain``."""
    if isinstance(domain, Ball):
        return metric_ball(z, domain.n)
    if isinstance(domain, Annulus):
        return metric_annulus(z, domain.r)
    if isinstance(domain, FeffermanModel):
        return metric_model(domain, z)
    raise PreconditionError(f"unsupported domain {domain!r}")


def log_kernel_diagonal(domain, z):
    """``log S(z, z)`` for any supported domain."""
    z = as_point(domain, z)
    if isinstance(domain, Ball):
        return math.log(szego_ball(z, z, domain.n).value)
    if isinstance(domain, Annulus):
        return math.log(szego_annulus(z[0], z[0], domain.r, tol=1e-16).value)
    return math.log(kernel_diagonal_model(domain, z).value)


# -- finite-difference oracle ----------------------------------------------------------

def _fd_hessian(f, x, h):
    m = x.size
    f0 = f(x)
    H = np.empty((m, m))
    e = np.eye(m) * h
    for i in range(m):
        H[i, i] = (f(x + e[i]) - 2 * f0 + f(x - e[i])) / h**2
        for j in range(i + 1, m):
            H[i, j] = H[j, i] = (f(x + e[i] + e[j]) - f(x + e[i] - e[j])
                                 - f(x - e[i] + e[j]) + f(x - e[i] - e[j])) / (4 * h**2)
    return H


def metric_fd_oracle(domain, z, step=None):
    """Mixed Hessian of ``log S(z, z)`` by central differences plus one Richardson step.

    The default step is ``eps**(1/6) * clearance``.  The result carries no
    ``dg``.
    """
    z = as_point(domain, z)
    n = domain.n
    clear = clearance(domain, z)
    if step is None:
        step = np.finfo(float).eps ** (1 / 6) * clear
    if not clear > 2 * step:
        raise PreconditionError(f"clearance {clear:.3g} does not exceed twice the step {step:.3g}")

    def f(x):
        return log_kernel_diagonal(domain, x[:n] + 1j * x[n:])

    x0 = np.concatenate([z.real, z.imag])
    H = (4 * _fd_hessian(f, x0, step / 2) - _fd_hessian(f, x0, step)) / 3
    xx, yy, xy, yx = H[:n, :n], H[n:, n:], H[:n, n:], H[n:, :n]
    g = 0.25 * (xx + yy + 1j * (xy - yx))
    return HermitianForm(g)


# -- Levi-matrix quantities -----------------------------------------------------------

def levi_quantities(model, z):
    """Quantities of the boundary asymptotics for a Fefferman model at ``z``."""
    if not isinstance(model, FeffermanModel):
        raise PreconditionError("levi_quantities needs a FeffermanModel")
    jets = model_jets(model, z)
    rho = jets.rho.real_value
    grad = jets.rho.d1
    L_g = jets.log_s.d2_mixed
    L_g = 0.5 * (L_g + L_g.conj().T)
    L_rho = jets.rho.d2_mixed
    L_rho = 0.5 * (L_rho + L_rho.conj().T)
    x = hermitian_solve(L_g, grad)
    q_scalar = float(np.vdot(grad, x).real) / rho**2
    calQ = float(np.vdot(grad, hermitian_solve(L_rho, grad)).real)
    return LeviQuantities(rho, x / rho**2, q_scalar, calQ, jets.frak_h.d1.copy(),
                          jets.frak_h.d2_mixed.copy(), jets.frak_h.d3.copy(), L_g)


# -- Caratheodory comparison ---------------------------------------------------------------

def caratheodory_ball(z, v, n=None):
    """Caratheodory length of ``v`` at ``z`` in the unit ball.

    ``sqrt(|v|^2/(1-|z|^2) + |<v, z>|^2/(1-|z|^2)^2)``; on the disk this is
    ``|v|/(1-|z|^2)``.
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    v = np.atleast_1d(np.asarray(v, dtype=complex))
    if n is not None and z.shape != (n,):
        raise PreconditionError(f"expected a point in C^{n}")
    u = 1.0 - float(np.vdot(z, z).real)
    if u <= 0:
        raise PreconditionError("|z| >= 1")
    pairing = abs(np.vdot(z, v))
    return math.sqrt(float(np.vdot(v, v).real) / u + pairing**2 / u**2)


def szego_length_ball(z, v, n):
    return metric_ball(z, n).length(v)


def rho_gradient(model, z):
    return rho_jet(model, z, order=1).d1
