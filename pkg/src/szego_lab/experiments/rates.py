"""Power-law and power-times-log fits of boundary-approach samples.

Given samples ``(delta, value)`` with ``delta = |rho|`` the two models are

* pure power: ``log|value| = p log(delta) + c``
* power with a logarithmic factor:
  ``log|value| - log|log(delta)| = p log(delta) + c``

Both are ordinary least-squares fits in the transformed variables; the model
with the smaller residual sum of squares is selected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..domains import FeffermanModel
from ..errors import PreconditionError
from ..metric import levi_quantities

MIN_SAMPLES = 8
MIN_DECADES = 2.0


@dataclass(frozen=True)
class RateFit:
    """Fitted decay exponent.

    ``exponent`` is ``inf`` when every value vanished exactly.  The residual
    sums of squares of both models are kept so that callers can compare them
    directly.  ``r_squared`` refers to the selected model and is computed
    against the variance of ``log|value|``.
    """

    exponent: float
    log_factor: bool
    r_squared: float
    sample_range: tuple
    residual_power: float = 0.0
    residual_log: float = 0.0
    intercept: float = 0.0

    @property
    def accepted(self):
        return self.r_squared >= 0.98

    def as_dict(self):
        return {"exponent": self.exponent, "log_factor": self.log_factor,
                "r_squared": self.r_squared, "sample_range": list(self.sample_range),
                "residual_power": self.residual_power, "residual_log": self.residual_log,
                "intercept": self.intercept}


def _lstsq(x, y):
    A = np.column_stack([x, np.ones_like(x)])
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    res = y - A @ coef
    return coef, float(res @ res)


def rate_fit(samples):
    """Fit ``value ~ delta^p`` or ``value ~ delta^p |log delta|``.

    Parameters
    ----------
    samples : sequence of (delta, value)
        At least 8 samples with ``0 < delta < 1`` spanning two decades.

    Returns
    -------
    RateFit

    Examples
    --------
    >>> d = np.logspace(-5, -2, 10)
    >>> fit = rate_fit(list(zip(d, 3 * d)))
    >>> round(fit.exponent, 12), fit.log_factor
    (1.0, False)
    """
    arr = np.asarray(samples, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise PreconditionError("samples must be (delta, value) pairs")
    if len(arr) < MIN_SAMPLES:
        raise PreconditionError(f"need at least {MIN_SAMPLES} samples, got {len(arr)}")
    delta, value = arr[:, 0], arr[:, 1]
    if np.any(delta <= 0) or np.any(delta >= 1):
        raise PreconditionError("delta must lie in (0, 1)")
    span = math.log10(delta.max() / delta.min())
    if span < MIN_DECADES - 1e-12:
        raise PreconditionError(f"delta spans only {span:.2f} decades (need {MIN_DECADES})")
    rng = (float(delta.min()), float(delta.max()))
    if np.all(value == 0):
        return RateFit(math.inf, False, 1.0, rng)
    if np.any(value == 0):
        raise PreconditionError("some but not all values vanish; a power law cannot fit")
    x = np.log(delta)
    y = np.log(np.abs(value))
    (p0, c0), ss0 = _lstsq(x, y)
    (p1, c1), ss1 = _lstsq(x, y - np.log(np.abs(x)))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    use_log = ss1 < ss0
    p, c, ss = (p1, c1, ss1) if use_log else (p0, c0, ss0)
    r2 = 1.0 - ss / ss_tot if ss_tot > 0 else 1.0
    return RateFit(float(p), bool(use_log), float(min(max(r2, 0.0), 1.0)), rng,
                   float(ss0), float(ss1), float(c))


# -- boundary-approach samples --------------------------------------------------

def approach_point(model, delta, direction=None):
    """Point ``sqrt(1 - delta) * direction`` (unit ``direction``).

    For the ball-shaped models ``rho = |z|^2 - 1`` this point has
    ``rho = -delta``.
    """
    n = model.n
    if direction is None:
        direction = np.ones(n, dtype=complex) / math.sqrt(n)
    direction = np.asarray(direction, dtype=complex)
    return math.sqrt(1 - delta) * direction / np.linalg.norm(direction)


def deficit_samples(model, deltas, direction=None):
    """Samples of ``conj(grad rho) L_g^{-1} (grad rho)^t / rho^2 - 1/n``."""
    if not isinstance(model, FeffermanModel):
        raise PreconditionError("deficit_samples needs a FeffermanModel")
    out = []
    for d in deltas:
        lq = levi_quantities(model, approach_point(model, d, direction))
        out.append((float(-lq.rho), lq.deficit))
    return out


def deficit_closed_form(model, deltas, direction=None):
    """The closed form ``-|rho|/(n(|rho| + calQ))`` exact when ``log h`` is constant."""
    out = []
    for d in deltas:
        lq = levi_quantities(model, approach_point(model, d, direction))
        out.append((float(-lq.rho), -abs(lq.rho) / (model.n * (abs(lq.rho) + lq.calQ))))
    return out


def deficit_remainder_samples(model, deltas, direction=None):
    """Deficit minus its closed-form part; isolates the contribution of ``log h``."""
    a = deficit_samples(model, deltas, direction)
    b = deficit_closed_form(model, deltas, direction)
    return [(d, v - w) for (d, v), (_, w) in zip(a, b)]


def levi_h_samples(model, deltas, direction=None):
    """Samples of ``max_{b,j} |h_{b jbar}|`` with ``h = log(Phi + Psi |rho|^n log|rho|)``."""
    out = []
    for d in deltas:
        lq = levi_quantities(model, approach_point(model, d, direction))
        out.append((float(-lq.rho), float(np.max(np.abs(lq.h_bj)))))
    return out


def q_vector_samples(model, deltas, direction=None):
    """Samples of ``max_j |[L_g^{-1} (grad rho)^t]_j| / rho^2`` (bounded near the boundary)."""
    out = []
    for d in deltas:
        lq = levi_quantities(model, approach_point(model, d, direction))
        out.append((float(-lq.rho), float(np.max(np.abs(lq.q_vector)))))
    return out


SAMPLERS = {
    "deficit": deficit_samples,
    "deficit-remainder": deficit_remainder_samples,
    "levi-h": levi_h_samples,
    "q-vector": q_vector_samples,
}
