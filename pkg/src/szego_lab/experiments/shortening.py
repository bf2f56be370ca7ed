"""Closed geodesics: the critical circle of the annulus and Birkhoff curve shortening.

On the annulus the loop is handled in the logarithmic chart ``w = log z``,
where the metric reads ``mu^2(Re w) |dw|^2`` with ``mu^2 = |z|^2 lambda^2``.
A loop of winding ``m`` becomes a periodic sequence ``w_0, ..., w_{N-1}``
closed up by ``w_N = w_0 + 2 pi i m``.  On the ball and on Fefferman models
the identity chart is used (those domains are simply connected, so every
loop contracts).

The discrete energy of a polygon is ``sum_k |w_{k+1} - w_k|^2_{g(mid_k)}``
with the metric frozen at the chord midpoint.  One iteration replaces the
even-indexed vertices, then the odd-indexed ones, by the second-order
geodesic midpoint ``m + Gamma(m)[d, d]/8`` of their neighbours
(``m`` the chord midpoint, ``d`` the chord).  Updates are over-relaxed and
each vertex update is accepted only when it does not increase the energy of
its two edges, so the loop energy never increases.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.optimize

from ..domains import Annulus, as_point, contains
from ..errors import NumericalError, PreconditionError
from ..geodesics import christoffel, integrate_geodesic
from ..metric import annulus_factor, metric


def circle_length(s, r):
    """Metric length ``2 pi s lambda(s)`` of the circle ``|z| = s`` in the annulus."""
    lam2, _ = annulus_factor(s, r)
    return 2 * math.pi * s * math.sqrt(float(lam2))


def _circle_length_slope(s, r):
    """Sign-carrying multiple of ``d/ds (s lambda(s))``: ``lambda^2 + t d(lambda^2)/dt``."""
    lam2, dlam2 = annulus_factor(s, r)
    return float(lam2 + s * s * dlam2)


def circle_geodesic_radius(r, tol=1e-10):
    """Radius of the shortest circle ``|z| = s`` in the annulus ``{r < |z| < 1}``.

    The circle length ``2 pi s lambda(s)`` is minimised over ``(r, 1)`` by
    golden-section search.  Because the length is flat at its minimum, a
    golden-section bracket cannot shrink below about ``sqrt(eps)``; the
    stationarity condition ``d/ds (s lambda) = 0`` is therefore solved inside
    the final bracket to pin the radius down to rounding level.  The
    minimiser is the closed geodesic of winding class one; the symmetry
    ``s -> r/s`` places it at ``sqrt(r)``.

    Examples
    --------
    >>> round(circle_geodesic_radius(0.25), 12)
    0.5
    """
    if not 0 < r < 1:
        raise PreconditionError("r must lie in (0, 1)")
    if tol <= 0:
        raise PreconditionError("tol must be positive")
    width = 1 - r
    bracket = (r + 0.01 * width, 0.5 * (1 + r), 1 - 0.01 * width)
    res = scipy.optimize.minimize_scalar(circle_length, bracket=bracket, args=(r,),
                                         method="golden", tol=tol)
    s = float(res.x)
    pad = max(1e-6, 100 * tol) * s
    lo, hi = max(s - pad, r + 1e-3 * width), min(s + pad, 1 - 1e-3 * width)
    if _circle_length_slope(lo, r) < 0 < _circle_length_slope(hi, r):
        s = scipy.optimize.brentq(_circle_length_slope, lo, hi, args=(r,), xtol=1e-16,
                                  rtol=4 * np.finfo(float).eps)
    return float(s)


def closure_defect(domain, state, period, tol=1e-12):
    """Mismatch between the geodesic run forward and backward for half a period.

    A closed geodesic of the given period through ``state`` is traced from
    both ends to the antipodal point.  Meeting in the middle keeps the
    amplification of rounding errors to ``exp(kappa * period / 2)`` instead
    of ``exp(kappa * period)`` for a geodesic with Lyapunov exponent
    ``kappa``.  Returns ``(position gap, relative velocity gap)``.
    """
    fwd = integrate_geodesic(domain, state, 0.5 * period, tol=tol, t_eval=[0.5 * period])
    bwd = integrate_geodesic(domain, state, -0.5 * period, tol=tol, t_eval=[0.5 * period])
    if fwd.termination != "horizon" or bwd.termination != "horizon":
        raise NumericalError("closure check left the domain")
    dz = float(np.linalg.norm(fwd.z[-1] - bwd.z[-1]))
    dv = float(np.linalg.norm(fwd.v[-1] - bwd.v[-1]) / np.linalg.norm(fwd.v[-1]))
    return dz, dv


# -- loops -------------------------------------------------------------------------

def winding_number(points):
    """Winding number about 0 of the closed polygon through ``points``."""
    z = np.asarray(points, dtype=complex).ravel()
    if np.any(z == 0):
        raise PreconditionError("polygon passes through the origin")
    steps = np.angle(np.roll(z, -1) / z)
    return int(round(steps.sum() / (2 * math.pi)))


@dataclass
class LoopPath:
    """Closed polygon; the last vertex connects back to the first.

    ``points`` has shape ``(N,)`` for planar domains and ``(N, n)`` otherwise.
    ``winding`` is the homotopy class about the origin (annulus only).
    """

    points: np.ndarray
    winding: int = 0

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=complex)
        if self.points.ndim not in (1, 2) or len(self.points) < 4:
            raise PreconditionError("a loop needs at least 4 vertices")

    def __len__(self):
        return len(self.points)

    def radii(self):
        return np.abs(self.points) if self.points.ndim == 1 else np.linalg.norm(self.points, axis=1)

    def validate(self, domain):
        pts = self.points.reshape(len(self), -1)
        bad = [k for k, p in enumerate(pts) if not contains(domain, p)]
        if bad:
            raise PreconditionError(f"loop vertices {bad[:5]} are not interior")
        if isinstance(domain, Annulus):
            w = winding_number(self.points)
            if w != self.winding:
                raise PreconditionError(f"declared winding {self.winding} but the polygon winds {w} times")
        elif self.winding != 0:
            raise PreconditionError("only annulus loops carry a nonzero winding")


def ellipse_loop(center_radius, amplitude, vertices=64, winding=1, phase=0.0):
    """Loop ``z(theta) = (c + a cos(theta)) exp(i m theta)`` with ``m = winding``.

    For ``winding = 0`` the loop is a small circle of radius ``a`` centred at
    ``c`` instead.
    """
    theta = 2 * math.pi * np.arange(vertices) / vertices + phase
    if winding == 0:
        return LoopPath(center_radius + amplitude * np.exp(1j * theta), 0)
    theta_base = 2 * math.pi * np.arange(vertices) / vertices
    pts = (center_radius + amplitude * np.cos(theta_base + phase)) * np.exp(1j * winding * theta_base)
    return LoopPath(pts, winding)


def random_loop(r, rng, vertices=64, winding=1, modes=3, margin=0.2):
    """Random smooth loop of the given winding inside the annulus ``{r < |z| < 1}``.

    The radius is ``s0 * exp(sum_k a_k cos(k theta + phi_k))`` with ``s0``
    drawn from the middle of the annulus and amplitudes small enough to keep
    the loop a distance ``margin * (1 - r)`` from both boundary circles.
    """
    lo, hi = math.log(r), 0.0
    pad = margin * (hi - lo)
    base = rng.uniform(lo + 2 * pad, hi - 2 * pad)
    amps = rng.uniform(0, 1, modes)
    amps *= pad / max(amps.sum(), 1e-12)
    phases = rng.uniform(0, 2 * math.pi, modes)
    theta = 2 * math.pi * np.arange(vertices) / vertices
    logr = base + sum(a * np.cos((k + 1) * theta + p) for k, (a, p) in enumerate(zip(amps, phases)))
    wobble = 0.3 * rng.uniform(-1, 1) / max(vertices, 1) * np.sin(theta)
    return LoopPath(np.exp(logr) * np.exp(1j * (winding * theta + wobble)), winding)


# -- charts --------------------------------------------------------------------------

class _LogChart:
    """``w = log z`` on the annulus; conformal factor ``mu^2(x)``, ``x = Re w``."""

    def __init__(self, annulus):
        self.r = annulus.r

    def mu2_gamma(self, x):
        s = np.exp(x)
        lam2, dlam2 = annulus_factor(s, self.r)
        t = s * s
        # Gamma = d/dw log mu^2 = (1/2) d/dx log(t lambda^2)
        return t * lam2, 1.0 + t * dlam2 / lam2

    def edge_energy(self, p, q):
        mu2, _ = self.mu2_gamma(0.5 * (p + q).real)
        return mu2 * np.abs(q - p) ** 2

    def edge_length(self, p, q):
        mu2, _ = self.mu2_gamma(0.5 * (p + q).real)
        return np.sqrt(mu2) * np.abs(q - p)

    def midpoint(self, p, q):
        m, d = 0.5 * (p + q), q - p
        _, gamma = self.mu2_gamma(m.real)
        return m + gamma * d * d / 8

    def inside(self, w):
        return (w.real > math.log(self.r)) & (w.real < 0)

    def to_points(self, w):
        return np.exp(w)


class _IdentityChart:
    def __init__(self, domain):
        self.domain = domain

    def edge_energy(self, p, q):
        out = np.empty(len(p))
        for k, (a, b) in enumerate(zip(p, q)):
            d = b - a
            out[k] = metric(self.domain, 0.5 * (a + b)).length2(d)
        return out

    def edge_length(self, p, q):
        return np.sqrt(self.edge_energy(p, q))

    def midpoint(self, p, q):
        out = np.empty_like(p)
        for k, (a, b) in enumerate(zip(p, q)):
            m, d = 0.5 * (a + b), b - a
            gam = christoffel(self.domain, m)
            out[k] = m + np.einsum("ljk,j,k->l", gam, d, d) / 8
        return out

    def inside(self, w):
        return np.array([contains(self.domain, x) for x in w])

    def to_points(self, w):
        return w


def _chart_for(domain):
    return _LogChart(domain) if isinstance(domain, Annulus) else _IdentityChart(domain)


# -- shortening ------------------------------------------------------------------------

@dataclass
class ShorteningResult:
    """Outcome of :func:`birkhoff_shorten`.

    ``status`` is ``"converged"``, ``"max_iter"`` (the best loop is
    returned) or ``"degenerate"`` (the loop contracted, so there is no closed
    geodesic in its class).  ``energies`` and ``lengths`` hold one entry per
    iteration at each resolution; ``levels`` records, per resolution, the
    vertex count, iteration count and the shift against the previous level.
    """

    loop: LoopPath
    status: str
    iterations: int
    energies: list = field(default_factory=list)
    lengths: list = field(default_factory=list)
    levels: list = field(default_factory=list)
    history: list = field(default_factory=list, repr=False)

    @property
    def converged(self):
        return self.status == "converged"

    @property
    def energy_monotone(self):
        """True when the energy never increased within a resolution level."""
        for seq in self.energies:
            e = np.asarray(seq)
            if np.any(np.diff(e) > 1e-14 * np.abs(e[:-1])):
                return False
        return True


def _neighbours(W, idx, shift):
    N = len(W)
    prev = W[(idx - 1) % N].copy()
    nxt = W[(idx + 1) % N].copy()
    prev[idx == 0] -= shift
    nxt[idx == N - 1] += shift
    return prev, nxt


def _loop_energy(chart, W, shift):
    nxt = np.roll(W, -1, axis=0)
    nxt[-1] = nxt[-1] + shift
    return float(np.sum(chart.edge_energy(W, nxt)))


def _loop_length(chart, W, shift):
    nxt = np.roll(W, -1, axis=0)
    nxt[-1] = nxt[-1] + shift
    return float(np.sum(chart.edge_length(W, nxt)))


def _relax(chart, W, shift, tol, max_iter, omega, degenerate_length, keep_history):
    N = len(W)
    energies = [_loop_energy(chart, W, shift)]
    lengths = [_loop_length(chart, W, shift)]
    history = [chart.to_points(W.copy())] if keep_history else []
    status = "max_iter"
    it = 0
    for it in range(1, max_iter + 1):
        moved = 0.0
        for parity in (0, 1):
            idx = np.arange(parity, N, 2)
            prev, nxt = _neighbours(W, idx, shift)
            cur = W[idx]
            old = chart.edge_energy(prev, cur) + chart.edge_energy(cur, nxt)
            step = chart.midpoint(prev, nxt) - cur
            alpha = np.full(len(idx), omega)
            done = np.zeros(len(idx), dtype=bool)
            new = cur.copy()
            for _ in range(40):
                todo = ~done
                if not todo.any():
                    break
                a = alpha[todo].reshape((-1,) + (1,) * (cur.ndim - 1))
                trial = cur[todo] + a * step[todo]
                ok = chart.inside(trial)
                e_new = np.full(len(trial), np.inf)
                if ok.any():
                    e_new[ok] = (chart.edge_energy(prev[todo][ok], trial[ok])
                                 + chart.edge_energy(trial[ok], nxt[todo][ok]))
                accept = e_new <= old[todo]
                sel = np.flatnonzero(todo)
                new[sel[accept]] = trial[accept]
                done[sel[accept]] = True
                alpha[todo] *= 0.5
            move = np.abs(new - cur) if cur.ndim == 1 else np.linalg.norm(new - cur, axis=1)
            moved = max(moved, float(move.max()))
            W[idx] = new
        energies.append(_loop_energy(chart, W, shift))
        lengths.append(_loop_length(chart, W, shift))
        if keep_history:
            history.append(chart.to_points(W.copy()))
        if degenerate_length is not None and lengths[-1] < degenerate_length:
            status = "degenerate"
            break
        if moved < tol:
            status = "converged"
            break
    return status, it, energies, lengths, history


def _refine(chart, W, shift):
    """Double the vertex count by inserting geodesic midpoints."""
    N = len(W)
    idx = np.arange(N)
    _, nxt = _neighbours(W, idx, shift)
    mids = chart.midpoint(W, nxt)
    out = np.empty((2 * N,) + W.shape[1:], dtype=complex)
    out[0::2] = W
    out[1::2] = mids
    return out


def _polyline_distance(points, W, shift):
    """Largest distance from ``points`` to the closed polyline through ``W`` (chart coords)."""
    nxt = np.roll(W, -1, axis=0)
    nxt[-1] = nxt[-1] + shift
    a = W.reshape(len(W), -1)
    b = nxt.reshape(len(W), -1)
    d = b - a
    dd = np.maximum(np.sum(np.abs(d) ** 2, axis=1), 1e-300)
    worst = 0.0
    for p in points.reshape(len(points), -1):
        s = np.clip(np.real(np.sum(np.conj(d) * (p - a), axis=1)) / dd, 0, 1)
        dist = np.linalg.norm(a + s[:, None] * d - p, axis=1)
        worst = max(worst, float(dist.min()))
    return worst


def birkhoff_shorten(domain, loop, max_iter=5000, tol=1e-9, omega=None, max_refinements=2,
                     degenerate_ratio=1e-3, keep_history=False):
    """Shorten ``loop`` towards a closed geodesic in its homotopy class.

    Parameters
    ----------
    domain : Annulus, Ball or FeffermanModel
    loop : LoopPath
        Closed polygon with an even number of vertices.
    max_iter : int
        Iteration cap per resolution level.
    tol : float
        Convergence threshold on the largest vertex movement (chart
        coordinates) in one iteration.
    omega : float, optional
        Over-relaxation factor in ``[1, 2)``; defaults to ``2/(1 + 2 pi/N)``.
    max_refinements : int
        Number of vertex-count doublings after the first convergence.
        Refinement stops early once the old vertices lie within ``tol/10``
        of the refined polyline (see :attr:`ShorteningResult.levels`).
    degenerate_ratio : float
        The loop is declared degenerate when its length drops below this
        fraction of the initial length.
    keep_history : bool
        Store every iterate (for plotting).

    Returns
    -------
    ShorteningResult
    """
    if tol <= 0 or max_iter < 1:
        raise PreconditionError("tol must be positive and max_iter >= 1")
    loop.validate(domain)
    if len(loop) % 2:
        raise PreconditionError("alternating updates need an even number of vertices")
    if loop.points.ndim == 2:
        for p in loop.points:
            as_point(domain, p)
    chart = _chart_for(domain)
    if isinstance(domain, Annulus):
        W = np.log(np.abs(loop.points)) + 1j * np.unwrap(np.angle(loop.points))
        # the validated winding makes the unwrapped lift close up after one more step
        shift = 2j * math.pi * loop.winding
    else:
        W = loop.points.copy()
        shift = np.zeros(W.shape[1:], dtype=complex) if W.ndim == 2 else 0j
    initial_length = _loop_length(chart, W, shift)
    degenerate_length = degenerate_ratio * initial_length if loop.winding == 0 else None

    energies, lengths, levels, history = [], [], [], []
    total = 0
    status = "max_iter"
    for level in range(max_refinements + 1):
        N = len(W)
        w_omega = omega if omega is not None else 2.0 / (1.0 + 2 * math.pi / N)
        if not 1.0 <= w_omega < 2.0:
            raise PreconditionError("omega must lie in [1, 2)")
        previous = W.copy()
        status, its, e, ln, hist = _relax(chart, W, shift, tol, max_iter, w_omega,
                                          degenerate_length, keep_history)
        total += its
        energies.append(e)
        lengths.append(ln)
        history.extend(hist)
        moved = _polyline_distance(previous, W, shift) if level else None
        levels.append({"vertices": N, "iterations": its, "status": status,
                       "shift": moved, "length": ln[-1]})
        if status != "converged":
            break
        if level and moved < tol / 10:
            break
        if level < max_refinements:
            W = _refine(chart, W, shift)
    points = chart.to_points(W)
    return ShorteningResult(LoopPath(points, loop.winding), status, total, energies, lengths,
                            levels, history)
