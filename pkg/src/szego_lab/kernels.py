"""Szego kernels of the model domains."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .domains import FeffermanModel, as_point, rho_jet
from .errors import ModelValidityError, NumericalError, PreconditionError
from .jets import DerivativeJet

_MAX_TERMS = 200000


@dataclass(frozen=True)
class KernelValue:
    """A kernel evaluation with its certified truncation error."""

    value: complex | float
    truncation_error_bound: float = 0.0
    terms_used: int = 1


def szego_ball(z, w, n):
    """Szego kernel of the unit ball in C^n.

    ``S(z, w) = (n-1)!/(2 pi^n) * (1 - <z, w>)^(-n)`` with ``<z, w> = sum z_l conj(w_l)``.
    The value is returned as a float when ``z`` and ``w`` coincide.

    Examples
    --------
    >>> szego_ball([0.0], [0.0], 1).value == 1 / (2 * math.pi)
    True
    """
    if n < 1:
        raise PreconditionError("n must be >= 1")
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    w = np.atleast_1d(np.asarray(w, dtype=complex))
    if z.shape != (n,) or w.shape != (n,):
        raise PreconditionError(f"points must lie in C^{n}")
    if np.linalg.norm(z) >= 1 or np.linalg.norm(w) >= 1:
        raise PreconditionError("points must lie inside the unit ball")
    pairing = 1.0 - np.sum(z * np.conj(w))
    if pairing == 0:
        raise PreconditionError("degenerate pairing 1 - <z, w> = 0")
    value = math.factorial(n - 1) / (2 * math.pi**n) * pairing ** (-n)
    if np.array_equal(z, w):
        value = float(value.real)
    return KernelValue(value, 0.0, 1)


# -- annulus ---------------------------------------------------------------------

def _annulus_log_coeffs(r, ns):
    """``log(1/(1 + r^(2n+1)))`` computed without overflow."""
    return -np.logaddexp(0.0, (2 * ns + 1) * math.log(r))


def _falling(ns, k):
    out = np.ones_like(ns, dtype=float)
    for i in range(k):
        out = out * (ns - i)
    return out


def _tail_bound(x, k, N, offset):
    """Bound for ``sum_{m > N} (m + offset)^k x^m`` (zero when ``x = 0``)."""
    m = N + 1
    ratio = x * ((m + 1 + offset) / (m + offset)) ** k
    with np.errstate(divide="ignore", invalid="ignore"):
        first = (m + offset) ** k * x**m
        return np.where(ratio < 1, first / (1 - ratio), np.inf)


def _annulus_bound(absa, r, order, N):
    """Tail bound of the order-``order`` derivative series, both directions."""
    absa = np.asarray(absa, dtype=float)
    pos = _tail_bound(absa, order, N, 0) * absa ** (-order)
    neg = _tail_bound(r * r / absa, order, N, order - 1) * absa ** (-order) / r
    return pos + neg


def _choose_terms(absa, r, tol, order):
    absa = np.atleast_1d(absa)
    if np.any(absa >= 1) or np.any(absa <= r * r):
        raise PreconditionError(
            "annulus series diverges: need r^2 < |z conj(w)| < 1 "
            f"(got |z conj(w)| in [{absa.min():.6g}, {absa.max():.6g}], r^2 = {r * r:.6g})")
    N = order + 4
    while True:
        bound = max(float(np.max(_annulus_bound(absa, r, k, N))) for k in range(order + 1))
        if bound < tol:
            return N, bound
        N = int(N * 1.25) + 1
        if N > _MAX_TERMS:
            raise NumericalError("annulus series truncation did not reach tolerance")


def szego_annulus(z, w, r, tol=1e-13):
    """Szego kernel of ``{r < |z| < 1}`` from its Laurent series.

    The symmetric truncation ``|n| <= N`` is the smallest for which the
    geometric tail bound (scaled by ``1/2pi``) is below ``tol``.
    """
    z, w = complex(z), complex(w)
    if not 0 < r < 1:
        raise PreconditionError("r must lie in (0, 1)")
    if tol <= 0:
        raise PreconditionError("tol must be positive")
    a = z * w.conjugate()
    N, bound = _choose_terms(abs(a), r, tol * 2 * math.pi, 0)
    ns = np.arange(-N, N + 1, dtype=float)
    terms = np.exp(ns * np.log(a) + _annulus_log_coeffs(r, ns))
    # sum from the smallest terms upwards
    order = np.argsort(np.abs(terms))
    value = terms[order].sum() / (2 * math.pi)
    if z == w:
        value = float(value.real)
    return KernelValue(value, bound / (2 * math.pi), 2 * N + 1)


def annulus_series(t, r, tol=1e-15, order=3):
    """Derivatives in ``t`` of ``F(t) = sum_n t^n / (1 + r^(2n+1))``.

    The two geometric parts are summed in closed form,

        F(t) = 1/(1 - t) + r/(t - r^2) - C(t),
        C(t) = sum_{n>=0} r^(2n+1) t^n/(1 + r^(2n+1))
               + sum_{m>=1} r^(4m-2) t^(-m)/(1 + r^(2m-1)),

    so the remaining series ``C`` converges with ratio at most ``r^2``
    uniformly on ``r^2 < t < 1``.

    Parameters
    ----------
    t : float or ndarray
        Values of ``|z|^2`` in ``(r^2, 1)``.
    r : float
    tol : float
        Relative accuracy target for every returned derivative.
    order : int
        Highest derivative returned.

    Returns
    -------
    F : ndarray, shape (order + 1,) + t.shape
        ``F, F', F'', ...`` evaluated at ``t``.
    bound : float
        Largest relative tail bound over all returned derivatives.
    terms : int
        Number of correction terms used.
    """
    t = np.asarray(t, dtype=float)
    if np.any(t >= 1) or np.any(t <= r * r):
        raise PreconditionError("annulus series needs r^2 < |z|^2 < 1")
    singular = []
    for k in range(order + 1):
        fk = math.factorial(k)
        singular.append(fk / (1 - t) ** (k + 1) + r * (-1) ** k * fk / (t - r * r) ** (k + 1))
    singular = np.array(singular)
    tmin, tmax = float(np.min(t)), float(np.max(t))
    # |F^(k)| is at least half the singular part (the correction is smaller by r^2)
    floor = [float(np.min(np.abs(singular[k]))) / 2 for k in range(order + 1)]
    x_pos, x_neg = r * r * tmax, r**4 / tmin

    def rel_bound(N):
        worst = 0.0
        for k in range(order + 1):
            pos = float(_tail_bound(x_pos, k, N, 0)) * r * tmin ** (-k)
            neg = float(_tail_bound(x_neg, k, N, k - 1)) * r**-2 * tmin ** (-k)
            worst = max(worst, (pos + neg) / floor[k])
        return worst

    N = max(order + 4, int(math.log(tol) / math.log(max(x_pos, x_neg))))
    while (bound := rel_bound(N)) >= tol:
        N += max(1, N // 8)
        if N > _MAX_TERMS:
            raise NumericalError("annulus series truncation did not reach tolerance")
    ns = np.arange(0, N + 1, dtype=float)
    ms = np.arange(1, N + 1, dtype=float)
    c_pos = (2 * ns + 1) * math.log(r) - np.logaddexp(0.0, (2 * ns + 1) * math.log(r))
    c_neg = (4 * ms - 2) * math.log(r) - np.logaddexp(0.0, (2 * ms - 1) * math.log(r))
    logt = np.log(t)[..., None]
    out = []
    for k in range(order + 1):
        corr = np.sum(_falling(ns, k) * np.exp((ns - k) * logt + c_pos), axis=-1) \
            + np.sum(_falling(-ms, k) * np.exp((-ms - k) * logt + c_neg), axis=-1)
        out.append(singular[k] - corr)
    return np.array(out), bound, 2 * N + 1


# -- Fefferman models -------------------------------------------------------------

class ModelJets(NamedTuple):
    """Jets entering the Fefferman expansion at one point."""

    rho: DerivativeJet
    h: DerivativeJet          # Phi + Psi |rho|^n log|rho|
    frak_g: DerivativeJet     # -log|rho|
    frak_h: DerivativeJet     # log h
    log_s: DerivativeJet      # n * frak_g + frak_h


def model_jets(model, z):
    """Exact third-order jets of ``rho``, ``h``, ``-log|rho|``, ``log h`` and ``log S``."""
    z = as_point(model, z)
    rho = rho_jet(model, z)
    if rho.real_value >= 0:
        raise PreconditionError("point is not interior (rho >= 0)")
    n = model.n
    log_abs = (-rho).log()
    phi = model.phi.jet(z)
    psi = model.psi.jet(z)
    h = phi + psi * (log_abs * n).exp() * log_abs
    if h.real_value <= 0:
        raise ModelValidityError(
            f"kernel numerator Phi + Psi|rho|^n log|rho| = {h.real_value:.6g} is not positive")
    frak_h = h.log()
    frak_g = -log_abs
    return ModelJets(rho, h, frak_g, frak_h, frak_g * n + frak_h)


def kernel_diagonal_model(model, z):
    """Diagonal kernel ``(Phi + Psi |rho|^n log|rho|) / |rho|^n`` of a model."""
    if not isinstance(model, FeffermanModel):
        raise PreconditionError("kernel_diagonal_model needs a FeffermanModel")
    z = as_point(model, z)
    rho = float(model.rho(z).real)
    if rho >= 0:
        raise PreconditionError("point is not interior (rho >= 0)")
    n = model.n
    a = -rho
    num = float(model.phi(z).real) + float(model.psi(z).real) * a**n * math.log(a)
    if num <= 0:
        raise ModelValidityError(f"kernel numerator {num:.6g} is not positive")
    return KernelValue(num / a**n, 0.0, 1)
