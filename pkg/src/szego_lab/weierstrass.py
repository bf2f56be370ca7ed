"""Weierstrass elliptic function for rectangular lattices.

The lattice is generated by ``2*omega1`` (real) and ``2*omega3`` (purely
imaginary).  Values come from the Fourier expansion in the nome
``q = exp(i pi omega3/omega1)``, which converges geometrically once the
argument is reduced to the fundamental cell; the truncation point is chosen
from an explicit tail bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericalError, PreconditionError


class PoleError(PreconditionError):
    """The argument lies on the period lattice."""


@dataclass(frozen=True)
class WpParameters:
    """Half-periods of a rectangular lattice."""

    omega1: float
    omega3: complex = 1j * math.pi

    def __post_init__(self):
        if not self.omega1 > 0:
            raise PreconditionError("omega1 must be positive")
        if complex(self.omega3).real != 0 or complex(self.omega3).imag <= 0:
            raise PreconditionError("omega3 must be a positive imaginary number")

    @classmethod
    def for_annulus(cls, r):
        """Lattice with ``2 omega1 = -2 log r`` and ``2 omega3 = 2 pi i``."""
        if not 0 < r < 1:
            raise PreconditionError("annulus radius must lie in (0, 1)")
        return cls(-math.log(r), 1j * math.pi)

    @property
    def nome(self):
        return math.exp(-math.pi * complex(self.omega3).imag / self.omega1)


def _lambert_terms(q2, power, tol_scale):
    """Coefficients ``k^power q2^k / (1 - q2^k)`` until they drop below ``tol_scale``."""
    ks, vals = [], []
    k = 1
    while True:
        x = q2**k
        term = k**power * x / (1.0 - x)
        ks.append(k)
        vals.append(term)
        if term < tol_scale or k > 10000:
            break
        k += 1
    return np.array(ks, dtype=float), np.array(vals)


def _reduce(u, params):
    """Shift ``u`` into the cell ``|Re u| <= omega1, |Im u| <= |omega3|``."""
    w1 = params.omega1
    w3 = complex(params.omega3).imag
    x = (u.real + w1) % (2 * w1) - w1
    y = (u.imag + w3) % (2 * w3) - w3
    return complex(x, y)


def _series_terms(params, tol):
    q = params.nome
    a = math.pi / params.omega1
    # |Im u| <= |omega3| after reduction, so term k is bounded by k q^k / (1 - q^2).
    if q >= 1:
        raise NumericalError("nome must be < 1")
    K = 1
    while True:
        bound = 2 * a**3 * (K + 1) ** 2 * q ** (K + 1) / ((1 - q * ((K + 2) / (K + 1)) ** 2) * (1 - q**2))
        if bound < tol and q * ((K + 2) / (K + 1)) ** 2 < 1:
            break
        K += 1
        if K > 100000:
            raise NumericalError("Weierstrass series failed to converge")
    k = np.arange(1, K + 1, dtype=float)
    q2k = q ** (2 * k)
    return k, q2k / (1 - q2k)


def eta1(params, tol=1e-16):
    """Quasi-period ``zeta(omega1)``."""
    q = params.nome
    k, lam = _lambert_terms(q * q, 1, tol)
    return math.pi**2 / (12 * params.omega1) * (1 - 24 * lam.sum())


def weierstrass_p(u, params, tol=1e-14):
    """Weierstrass ``wp(u)`` for the lattice of ``params``.

    Parameters
    ----------
    u : complex
        Argument, not on the lattice.
    params : WpParameters
    tol : float
        Absolute accuracy target for the truncated Fourier series.

    Raises
    ------
    PoleError
        If ``u`` is (numerically) a lattice point.
    """
    ur = _reduce(complex(u), params)
    if abs(ur) < 1e-300 or abs(ur) < 1e-14 * params.omega1:
        raise PoleError(f"wp has a pole at {u}")
    w1 = params.omega1
    a = math.pi / w1
    k, lam = _series_terms(params, tol)
    s = np.sin(0.5 * a * ur)
    val = -eta1(params) / w1 + (0.5 * a) ** 2 / s**2 \
        - 2 * a**2 * np.sum(k * lam * np.cos(k * a * ur))
    return complex(val)


def weierstrass_p_prime(u, params, tol=1e-14):
    """Derivative ``wp'(u)`` from the termwise-differentiated series."""
    ur = _reduce(complex(u), params)
    if abs(ur) < 1e-14 * params.omega1:
        raise PoleError(f"wp' has a pole at {u}")
    a = math.pi / params.omega1
    k, lam = _series_terms(params, tol)
    s = np.sin(0.5 * a * ur)
    c = np.cos(0.5 * a * ur)
    val = -2 * (0.5 * a) ** 3 * c / s**3 + 2 * a**3 * np.sum(k**2 * lam * np.sin(k * a * ur))
    return complex(val)


def invariants(params, tol=1e-16):
    """Lattice invariants ``(g2, g3)`` from the Eisenstein series E4, E6."""
    q2 = params.nome**2
    _, l3 = _lambert_terms(q2, 3, tol)
    _, l5 = _lambert_terms(q2, 5, tol)
    e4 = 1 + 240 * l3.sum()
    e6 = 1 - 504 * l5.sum()
    w1 = params.omega1
    return math.pi**4 / (12 * w1**4) * e4, math.pi**6 / (216 * w1**6) * e6
