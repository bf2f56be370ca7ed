"""Boundary repulsion: sign of ``(rho o c)''`` for geodesics tangent to level sets.

A geodesic through ``z`` with ``(rho o c)'(0) = 0`` is tangent to the level
set of ``rho`` through ``z``.  If ``(rho o c)''(0) > 0`` there, the geodesic
bends back towards the interior.  The scan samples points on several level
sets, builds tangential directions from an orthonormal basis of the real
tangent space, and evaluates the second derivative by the closed formula.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.optimize

from ..domains import FeffermanModel, default_interior_point, in_box, rho_jet, rho_value
from ..errors import NumericalError, PreconditionError
from ..geodesics import (GeodesicState, rho_first_derivative, rho_second_derivative,
                         rho_second_derivative_fd)

log = logging.getLogger(__name__)

TANGENCY_TOL = 1e-10


@dataclass(frozen=True)
class RepulsionEntry:
    point: np.ndarray
    direction: np.ndarray
    rho_value: float
    second_derivative: float
    kind: str = "random"            # "complex", "reeb" or "random"
    fd_second_derivative: float | None = None


@dataclass
class RepulsionReport:
    """All evaluated (point, direction) pairs plus the summary statistics.

    ``empirical_epsilon`` is the largest tested ``|level|`` such that every
    tested level in ``[-empirical_epsilon, 0)`` gave only positive values
    (zero when the level closest to the boundary already fails).
    """

    grid: list
    levels: list
    min_second_derivative: float
    empirical_epsilon: float
    skipped: list = field(default_factory=list)

    def level_minimum(self, level):
        vals = [e.second_derivative for e in self.grid if e.rho_value == level]
        return min(vals) if vals else math.nan

    def min_by_kind(self, kind):
        vals = [e.second_derivative for e in self.grid if e.kind == kind]
        return min(vals) if vals else math.nan


def tangential_second_derivative(model, z, v):
    """``(rho o c)''(0)`` for the geodesic through ``z`` with velocity ``v``.

    Raises
    ------
    PreconditionError
        If ``v`` is not tangent to the level set, i.e.
        ``|(rho o c)'(0)| >= 1e-10``.
    """
    s = GeodesicState.of(z, v)
    first = rho_first_derivative(model, s)
    if abs(first) >= TANGENCY_TOL:
        raise PreconditionError(f"direction is not tangential: (rho o c)'(0) = {first:.3g}")
    return rho_second_derivative(model, s)


def tangent_basis(grad):
    """Orthonormal basis (as complex vectors) of ``{v : Re(grad . v) = 0}``.

    The first ``2(n-1)`` vectors span the complex tangent space
    ``{grad . v = 0}`` (each basis vector and ``i`` times it); the last one is
    the Reeb direction ``i conj(grad)/|grad|``.
    """
    grad = np.asarray(grad, dtype=complex)
    norm = np.linalg.norm(grad)
    if norm == 0:
        raise PreconditionError("gradient of rho vanishes; the level set is singular here")
    n = len(grad)
    u = np.conj(grad) / norm
    # complex orthonormal basis of the orthogonal complement of u
    q, _ = np.linalg.qr(np.column_stack([u, np.eye(n, dtype=complex)]))
    comp = [q[:, k] for k in range(1, n)]
    basis = []
    for c in comp:
        c = c - np.vdot(u, c) * u
        c = c / np.linalg.norm(c)
        basis.extend([c, 1j * c])
    basis.append(1j * u)
    return basis


def tangential_directions(grad, count, rng):
    """``count`` unit tangential directions with their kind labels.

    The basis vectors and their negatives come first; remaining slots are
    random unit combinations of the basis drawn from ``rng``.
    """
    basis = tangent_basis(grad)
    kinds = ["complex"] * (len(basis) - 1) + ["reeb"]
    out = []
    for b, kind in zip(basis, kinds):
        out.append((b, kind))
        out.append((-b, kind))
    out = out[:count]
    B = np.array(basis)
    while len(out) < count:
        c = rng.normal(size=len(basis))
        v = c @ B
        out.append((v / np.linalg.norm(v), "random"))
    return out


def level_point(model, level, direction, center=None):
    """Point ``center + tau * direction`` on ``{rho = level}`` (smallest such ``tau``)."""
    center = default_interior_point(model) if center is None else np.asarray(center, dtype=complex)
    direction = np.asarray(direction, dtype=complex)
    direction = direction / np.linalg.norm(direction)
    if rho_value(model, center) >= level:
        raise PreconditionError("level set does not surround the centre point")

    def f(tau):
        return rho_value(model, center + tau * direction) - level

    # march outwards until rho crosses the level or the ambient box is left
    tau, step = 0.0, 0.05
    while True:
        nxt = tau + step
        p = center + nxt * direction
        if not in_box(model, p):
            raise PreconditionError("level set not reached inside the ambient box")
        if f(nxt) > 0:
            break
        tau = nxt
    root = scipy.optimize.brentq(f, tau, nxt, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    return center + root * direction


def _unit_complex(rng, n):
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    return v / np.linalg.norm(v)


def boundary_repulsion_scan(model, rho_levels, directions_per_point=16, points_per_level=8,
                            seed=0, check_fd=False, directions=None):
    """Scan ``(rho o c)''`` over tangential geodesics on several level sets.

    Parameters
    ----------
    model : FeffermanModel
    rho_levels : sequence of float
        Levels in ``(-eps0, 0)``.
    directions_per_point : int
        Number of tangential directions at each point (16 by default).
    points_per_level : int
        The first point lies on the ``z_1`` axis; the others are along
        seeded random rays from the centre.
    seed : int
    check_fd : bool
        Also evaluate the trace-based finite difference for every entry.
    directions : sequence, optional
        Explicit velocities to use at every point instead of the generated
        ones.  They must be tangential.

    Returns
    -------
    RepulsionReport
    """
    if not isinstance(model, FeffermanModel):
        raise PreconditionError("boundary_repulsion_scan needs a FeffermanModel")
    levels = [float(x) for x in rho_levels]
    if not levels:
        raise PreconditionError("no levels given")
    for lv in levels:
        if not -model.eps0 < lv < 0:
            raise PreconditionError(f"level {lv} is outside the collar (-{model.eps0}, 0)")
    if directions_per_point < 1 or points_per_level < 1:
        raise PreconditionError("need at least one point and one direction")
    rng = np.random.default_rng(seed)
    n = model.n
    rays = [np.eye(n, dtype=complex)[0]] + [_unit_complex(rng, n) for _ in range(points_per_level - 1)]
    grid, skipped = [], []
    for lv in levels:
        for ray in rays:
            try:
                z = level_point(model, lv, ray)
            except (PreconditionError, ValueError) as exc:
                log.warning("skipping ray %s at level %g: %s", ray, lv, exc)
                skipped.append({"level": lv, "ray": ray, "reason": str(exc)})
                continue
            grad = rho_jet(model, z, order=1).d1
            if np.linalg.norm(grad) == 0:
                log.warning("skipping point %s: grad rho = 0", z)
                skipped.append({"level": lv, "ray": ray, "reason": "grad rho = 0"})
                continue
            if directions is None:
                dirs = tangential_directions(grad, directions_per_point, rng)
            else:
                dirs = [(np.asarray(d, dtype=complex), "given") for d in directions]
            for v, kind in dirs:
                val = tangential_second_derivative(model, z, v)
                fd = None
                if check_fd:
                    fd = rho_second_derivative_fd(model, GeodesicState.of(z, v))
                grid.append(RepulsionEntry(z, v, lv, val, kind, fd))
    if not grid:
        raise NumericalError("no level-set point could be constructed")
    return RepulsionReport(grid, levels, min(e.second_derivative for e in grid),
                           empirical_epsilon(grid, levels), skipped)


def empirical_epsilon(grid, levels):
    """Largest ``|level|`` below which every tested level was all-positive."""
    eps = 0.0
    for lv in sorted(levels, key=abs):
        vals = [e.second_derivative for e in grid if e.rho_value == lv]
        if not vals or min(vals) <= 0:
            break
        eps = abs(lv)
    return eps
