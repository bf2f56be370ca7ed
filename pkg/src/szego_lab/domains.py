"""Domain models and their defining functions.

Three kinds of domain are supported:

* :class:`Ball` -- the unit ball in C^n with ``rho = |z|^2 - 1``.
* :class:`Annulus` -- ``{r < |z| < 1}`` in C.  Its metric comes from the
  exact kernel; ``rho`` is only used for containment and boundary guards.
* :class:`FeffermanModel` -- a domain ``{rho < 0}`` in C^n (n >= 2) whose
  diagonal Szego kernel is prescribed by ``(Phi + Psi |rho|^n log|rho|)/|rho|^n``
  with ``rho``, ``Phi``, ``Psi`` given as :class:`~szego_lab.recipes.Recipe`
  expressions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import ModelValidityError, PreconditionError
from .jets import MAX_ORDER, DerivativeJet, coordinate_jets
from .recipes import Recipe

DEFAULT_BOX_MARGIN = 0.01
DEFAULT_EPS0 = 0.2


@dataclass(frozen=True)
class Ball:
    n: int = 1
    label: str = "ball"
    kind: str = field(default="ball", init=False)

    def __post_init__(self):
        if self.n < 1:
            raise PreconditionError("ball dimension must be >= 1")


@dataclass(frozen=True)
class Annulus:
    r: float = 0.5
    label: str = "annulus"
    kind: str = field(default="annulus", init=False)
    n: int = field(default=1, init=False)

    def __post_init__(self):
        if not 0.0 < self.r < 1.0:
            raise PreconditionError(f"annulus inner radius must lie in (0, 1), got {self.r}")


@dataclass(frozen=True)
class FeffermanModel:
    """Domain ``{rho < 0}`` with a prescribed Fefferman-type diagonal kernel.

    Parameters
    ----------
    n : int
        Complex dimension, at least 2.
    rho, phi, psi : str or Recipe
        Defining function and the two smooth coefficients of the kernel.
    eps0 : float
        Width of the collar ``{-eps0 < rho < 0}`` on which ``phi > 0`` is
        required (checked by sampling at construction).
    box, box_margin : float
        The ambient box is ``max(|Re z_j|, |Im z_j|) <= box + box_margin``.
    """

    n: int
    rho: Recipe
    phi: Recipe
    psi: Recipe
    label: str = "model"
    eps0: float = DEFAULT_EPS0
    box: float = 1.0
    box_margin: float = DEFAULT_BOX_MARGIN
    kind: str = field(default="model", init=False)

    def __post_init__(self):
        if self.n < 2:
            raise PreconditionError("Fefferman models require n >= 2")
        for name in ("rho", "phi", "psi"):
            val = getattr(self, name)
            if not isinstance(val, Recipe):
                object.__setattr__(self, name, Recipe(val, self.n))
            elif val.n != self.n:
                raise PreconditionError(f"recipe {name} has dimension {val.n}, expected {self.n}")
        if self.eps0 <= 0:
            raise PreconditionError("collar width eps0 must be positive")
        self._check_collar()

    def _check_collar(self, samples=4000, seed=0):
        rng = np.random.default_rng(seed)
        half = self.box + self.box_margin
        pts = rng.uniform(-half, half, (samples, self.n)) \
            + 1j * rng.uniform(-half, half, (samples, self.n))
        rho = np.real(self.rho(pts))
        collar = (rho < 0) & (rho > -self.eps0)
        if not collar.any():
            return
        phi = np.real(self.phi(pts[collar]))
        if np.any(phi <= 0):
            raise ModelValidityError(
                f"Phi is not positive on the collar -{self.eps0} < rho < 0 "
                f"(min sampled value {phi.min():.3g})")


DomainModel = Union[Ball, Annulus, FeffermanModel]


def ball_model(n=2, label=None, **kwargs):
    """The unit ball written as a Fefferman model (``Psi = 0``)."""
    return FeffermanModel(n, "norm2() - 1", "factorial(n - 1)/(2*pi**n)", "0",
                          label=label or f"ball-model-n{n}", **kwargs)


def synthetic_model(n=2, label=None, **kwargs):
    """Ball-shaped model with ``Phi = 1 + 0.1 Re z1`` and ``Psi = 1``."""
    return FeffermanModel(n, "norm2() - 1", "1 + 0.1*re(z1)", "1",
                          label=label or f"synthetic-n{n}", **kwargs)


def as_point(model, z):
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    if z.ndim != 1 or z.shape[0] != model.n:
        raise PreconditionError(f"expected a point in C^{model.n}, got shape {z.shape}")
    return z


def in_box(model, z):
    if isinstance(model, FeffermanModel):
        half = model.box + model.box_margin
    else:
        half = 1.0 + DEFAULT_BOX_MARGIN
    return bool(np.all(np.abs(z.real) <= half) and np.all(np.abs(z.imag) <= half))


def rho_value(model, z):
    """Real value of the defining function (containment form for the annulus)."""
    z = as_point(model, z)
    t = float(np.vdot(z, z).real)
    if isinstance(model, Ball):
        return t - 1.0
    if isinstance(model, Annulus):
        return max(t - 1.0, model.r**2 - t)
    return float(model.rho(z).real)


def rho_jet(model, z, order=MAX_ORDER):
    """Defining function and its Wirtinger derivatives through ``order``.

    For the annulus the smooth product ``(|z|^2 - 1)(|z|^2 - r^2)`` is used;
    the ``max`` form in :func:`rho_value` is for containment only.

    Examples
    --------
    >>> jet = rho_jet(Ball(2), [0.9, 0.0])
    >>> round(jet.real_value, 12), jet.d1.real.tolist()
    (-0.19, [0.9, 0.0])
    """
    if not 0 <= order <= MAX_ORDER:
        raise PreconditionError(f"derivative order {order} not supported (max {MAX_ORDER})")
    z = as_point(model, z)
    if not in_box(model, z):
        raise PreconditionError(f"point {z} lies outside the ambient box")
    n = model.n
    if isinstance(model, Ball):
        m = 2 * n
        c1 = np.concatenate([np.conj(z), z])
        c2 = np.zeros((m, m), dtype=complex)
        idx = np.arange(n)
        c2[idx, n + idx] = 1.0
        c2[n + idx, idx] = 1.0
        jet = DerivativeJet(np.vdot(z, z).real - 1.0, c1, c2, np.zeros((m, m, m)))
    elif isinstance(model, Annulus):
        zs, zbars = coordinate_jets(z)
        t = zs[0] * zbars[0]
        jet = (t - 1.0) * (t - model.r**2)
    else:
        jet = model.rho.jet(z)
    return jet.truncated(order) if order < MAX_ORDER else jet


def contains(model, z):
    """True iff ``z`` is an interior point of the domain."""
    try:
        z = as_point(model, z)
    except PreconditionError:
        return False
    if not np.all(np.isfinite(z)) or not in_box(model, z):
        return False
    return rho_value(model, z) < 0


def clearance(model, z):
    """Euclidean distance to the boundary (first-order estimate for models)."""
    z = as_point(model, z)
    s = float(np.linalg.norm(z))
    if isinstance(model, Ball):
        return 1.0 - s
    if isinstance(model, Annulus):
        return min(s - model.r, 1.0 - s)
    jet = rho_jet(model, z, order=1)
    grad = 2.0 * float(np.linalg.norm(jet.d1))
    half = model.box + model.box_margin
    box_gap = float(min(np.min(half - np.abs(z.real)), np.min(half - np.abs(z.imag))))
    if jet.real_value >= 0:
        return 0.0
    if grad == 0:
        return box_gap
    return min(-jet.real_value / grad, box_gap)


# -- serialization -------------------------------------------------------------

def domain_to_dict(model):
    if isinstance(model, Ball):
        return {"kind": "ball", "n": model.n, "label": model.label}
    if isinstance(model, Annulus):
        return {"kind": "annulus", "r": model.r, "label": model.label}
    return {"kind": "model", "n": model.n, "rho": model.rho.source,
            "phi": model.phi.source, "psi": model.psi.source,
            "eps0": model.eps0, "box": model.box, "box_margin": model.box_margin,
            "label": model.label}


_PRESETS = {"ball-model": ball_model, "synthetic": synthetic_model}


def load_domain(spec):
    """Build a domain from a dict (config tree) or a ``kind:key=val,...`` string.

    Examples
    --------
    >>> load_domain("annulus:r=0.5")
    Annulus(r=0.5, label='annulus', kind='annulus', n=1)
    >>> load_domain({"kind": "ball", "n": 2}).n
    2
    """
    if isinstance(spec, (Ball, Annulus, FeffermanModel)):
        return spec
    if isinstance(spec, str):
        kind, _, rest = spec.partition(":")
        params = {}
        for item in filter(None, rest.split(",")):
            key, eq, val = item.partition("=")
            if not eq:
                raise PreconditionError(f"malformed domain parameter {item!r}")
            params[key.strip()] = val.strip()
        spec = {"kind": kind.strip(), **params}
    spec = dict(spec)
    kind = spec.pop("kind", None)
    label = spec.pop("label", None)
    try:
        if kind == "ball":
            return Ball(int(spec.pop("n", 1)), label=label or "ball")
        if kind == "annulus":
            return Annulus(float(spec.pop("r")), label=label or "annulus")
        extra = {k: float(spec.pop(k)) for k in ("eps0", "box", "box_margin") if k in spec}
        if kind in _PRESETS:
            return _PRESETS[kind](int(spec.pop("n", 2)), label=label, **extra)
        if kind == "model":
            return FeffermanModel(int(spec.pop("n")), spec.pop("rho"), spec.pop("phi"),
                                  spec.pop("psi", "0"), label=label or "model", **extra)
    except KeyError as exc:
        raise PreconditionError(f"domain {kind!r} is missing parameter {exc}") from None
    raise PreconditionError(f"unknown domain kind {kind!r}")


def describe(model):
    if isinstance(model, Annulus):
        return f"annulus r={model.r:g}"
    if isinstance(model, Ball):
        return f"ball n={model.n}"
    return f"{model.label} n={model.n}"


def default_interior_point(model):
    if isinstance(model, Annulus):
        return np.array([math.sqrt(model.r)], dtype=complex)
    return np.zeros(model.n, dtype=complex)
