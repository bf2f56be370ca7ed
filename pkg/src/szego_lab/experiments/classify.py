"""Finite-horizon classification of annulus geodesics.

Verdicts:

``closed``
    The trace returns to an earlier Poincare-section point (position angle
    and crossing angle, same crossing direction) within ``tol``, or comes back
    to its launch state within ``tol``.
``boundary-seeking``
    The clearance ``min(|z| - r, 1 - |z|)`` decreases monotonically over the
    final stretch of the trace and ends below ten times the boundary guard.
``spiral-candidate``
    Neither of the above: the trace stayed in a compact subannulus up to the
    horizon without closing.  This is only a candidate, since a finite
    computation cannot exclude closing later.

The horizon is measured in arclength so that the verdict does not depend on
the speed at which the geodesic was launched.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.optimize

from ..domains import Annulus
from ..errors import PreconditionError
from ..geodesics import BOUNDARY_GUARD

VERDICTS = ("closed", "spiral-candidate", "boundary-seeking")


@dataclass(frozen=True)
class SectionCrossing:
    arclength: float
    position_angle: float     # arg z at the crossing, in [0, 2 pi)
    crossing_angle: float     # angle of c' against the outward radial direction
    outward: bool

    @property
    def point(self):
        return np.array([self.position_angle, self.crossing_angle])


@dataclass
class Classification:
    verdict: str
    crossings: list = field(default_factory=list)
    min_clearance: float = math.nan
    final_clearance: float = math.nan
    closest_return: float = math.inf
    horizon: float = 0.0
    note: str = ""

    def as_dict(self):
        return {"verdict": self.verdict, "horizon": self.horizon,
                "min_clearance": self.min_clearance, "final_clearance": self.final_clearance,
                "closest_return": self.closest_return, "note": self.note,
                "crossings": [{"arclength": c.arclength, "position_angle": c.position_angle,
                               "crossing_angle": c.crossing_angle, "outward": c.outward}
                              for c in self.crossings]}


def _angle_gap(a, b):
    d = (a - b + math.pi) % (2 * math.pi) - math.pi
    return abs(d)


def _hermite(t0, t1, z0, z1, v0, v1):
    """Cubic Hermite interpolant of the trace on ``[t0, t1]`` (complex-valued)."""
    h = t1 - t0

    def z(t):
        s = (t - t0) / h
        h00 = 2 * s**3 - 3 * s**2 + 1
        h10 = s**3 - 2 * s**2 + s
        h01 = -2 * s**3 + 3 * s**2
        h11 = s**3 - s**2
        return h00 * z0 + h10 * h * v0 + h01 * z1 + h11 * h * v1

    def v(t):
        s = (t - t0) / h
        d00 = (6 * s**2 - 6 * s) / h
        d10 = 3 * s**2 - 4 * s + 1
        d01 = (-6 * s**2 + 6 * s) / h
        d11 = 3 * s**2 - 2 * s
        return d00 * z0 + d10 * v0 + d01 * z1 + d11 * v1

    return z, v


def _arclength(trace):
    speeds = np.asarray(trace.speeds, dtype=float)
    t = np.asarray(trace.t, dtype=float)
    seg = 0.5 * (speeds[1:] + speeds[:-1]) * np.abs(np.diff(t))
    return np.concatenate([[0.0], np.cumsum(seg)])


def section_crossings(trace, section_radius, upto=None):
    """Crossings of ``|z| = section_radius`` located on the Hermite interpolant."""
    t = np.asarray(trace.t, dtype=float)
    z = np.asarray(trace.z)[:, 0]
    v = np.asarray(trace.v)[:, 0]
    arc = _arclength(trace)
    speed0 = float(trace.speeds[0])
    f = np.abs(z) - section_radius
    out = []
    for i in range(len(t) - 1):
        if upto is not None and arc[i] > upto:
            break
        if f[i] == 0 or f[i] * f[i + 1] >= 0:
            continue
        zf, vf = _hermite(t[i], t[i + 1], z[i], z[i + 1], v[i], v[i + 1])
        tc = scipy.optimize.brentq(lambda s: abs(zf(s)) - section_radius, t[i], t[i + 1],
                                   xtol=1e-14)
        zc, vc = zf(tc), vf(tc)
        ang = float(np.angle(vc / zc))     # 0 = radially outward
        s_c = arc[i] + speed0 * abs(tc - t[i])
        out.append(SectionCrossing(float(s_c), float(np.angle(zc) % (2 * math.pi)), ang,
                                   bool(f[i] < 0)))
    return out


def _closest_section_return(crossings):
    best = math.inf
    for j in range(1, len(crossings)):
        for i in range(j):
            a, b = crossings[i], crossings[j]
            if a.outward != b.outward:
                continue
            gap = max(_angle_gap(a.position_angle, b.position_angle),
                      _angle_gap(a.crossing_angle, b.crossing_angle))
            best = min(best, gap)
    return best


def _closest_launch_return(trace, upto, min_arclength):
    """Smallest ``|z(t) - z(0)| + |unit(c'(t)) - unit(c'(0))|`` after leaving the start."""
    t = np.asarray(trace.t, dtype=float)
    z = np.asarray(trace.z)[:, 0]
    v = np.asarray(trace.v)[:, 0]
    arc = _arclength(trace)
    z0, u0 = z[0], v[0] / abs(v[0])

    def gap(zz, vv):
        return abs(zz - z0) + abs(vv / abs(vv) - u0)

    d = np.array([gap(a, b) for a, b in zip(z, v)])
    best = math.inf
    for i in range(1, len(t) - 1):
        if arc[i] < min_arclength or arc[i] > upto:
            continue
        if d[i] <= d[i - 1] and d[i] <= d[i + 1]:
            lo, hi = i - 1, i + 1
            zf0, vf0 = _hermite(t[lo], t[i], z[lo], z[i], v[lo], v[i])
            zf1, vf1 = _hermite(t[i], t[hi], z[i], z[hi], v[i], v[hi])
            r0 = scipy.optimize.minimize_scalar(lambda s: gap(zf0(s), vf0(s)), bounds=(t[lo], t[i]),
                                                method="bounded", options={"xatol": 1e-12})
            r1 = scipy.optimize.minimize_scalar(lambda s: gap(zf1(s), vf1(s)), bounds=(t[i], t[hi]),
                                                method="bounded", options={"xatol": 1e-12})
            best = min(best, float(r0.fun), float(r1.fun), float(d[i]))
    return best


def classify_geodesic(trace, section_radius, horizon, tol=1e-4, tail_fraction=0.1):
    """Classify an annulus geodesic trace as closed, boundary-seeking or spiral candidate.

    Parameters
    ----------
    trace : GeodesicTrace
        Trace on an :class:`~szego_lab.domains.Annulus`, recorded at every
        accepted step.
    section_radius : float
        Radius of the Poincare section circle.
    horizon : float
        Arclength up to which the trace is examined.  It may not exceed the
        arclength of the trace unless the trace ended at the boundary guard.
    tol : float
        Return tolerance in section coordinates (radians) and for the
        return-to-launch check.
    tail_fraction : float
        Fraction of the examined samples forming the "final stretch" for the
        monotone-clearance test.

    Returns
    -------
    Classification
    """
    domain = trace.domain
    if not isinstance(domain, Annulus):
        raise PreconditionError("classify_geodesic needs an annulus trace")
    if not domain.r < section_radius < 1:
        raise PreconditionError("section radius must lie inside the annulus")
    if horizon <= 0 or tol <= 0:
        raise PreconditionError("horizon and tol must be positive")
    if len(trace) < 3:
        raise PreconditionError("trace has fewer than three samples")
    arc = _arclength(trace)
    total = float(arc[-1])
    ended_at_guard = trace.termination == "boundary_guard"
    if horizon > total * (1 + 1e-9) and not ended_at_guard:
        raise PreconditionError(f"horizon {horizon:g} exceeds the trace arclength {total:g}")
    horizon_used = min(horizon, total)
    keep = arc <= horizon_used * (1 + 1e-12)
    z = np.asarray(trace.z)[keep, 0]
    s = np.abs(z)
    clear = np.minimum(s - domain.r, 1 - s)

    crossings = section_crossings(trace, section_radius, upto=horizon_used)
    section_gap = _closest_section_return(crossings)
    # the launch point is not revisited before the geodesic has left its neighbourhood
    launch_gap = _closest_launch_return(trace, horizon_used, min_arclength=10 * tol * max(total, 1))
    result = Classification("spiral-candidate", crossings, float(clear.min()), float(clear[-1]),
                            float(min(section_gap, launch_gap)), float(horizon_used))
    if section_gap < tol or launch_gap < tol:
        result.verdict = "closed"
        result.note = "section return" if section_gap < tol else "return to launch state"
        return result
    tail = max(3, int(math.ceil(tail_fraction * len(clear))))
    tail_clear = clear[-tail:]
    monotone = bool(np.all(np.diff(tail_clear) <= 0))
    if monotone and tail_clear[-1] < 10 * BOUNDARY_GUARD:
        result.verdict = "boundary-seeking"
        result.note = "clearance decreases monotonically to the guard"
        if not crossings:
            result.note += " (no section crossings)"
        return result
    if not crossings:
        result.note = "no section crossings; classified by clearance alone"
    return result
