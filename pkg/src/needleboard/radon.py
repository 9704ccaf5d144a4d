"""Projections onto directions and exact per-direction probe maximization.

For a direction with unit vector u, chords are full lines along u-perp at
signed offset t (measured from the origin: the chord through t*u).  The
offset profile of the board's line integrals is piecewise linear with
breakpoints exactly at lattice-point projections p.u, so per-direction
maximization reduces to scanning breakpoints.

At the two axis directions (theta = 0, pi/2) chords can lie on gridlines
and the profile steps at integer offsets instead of staying continuous;
scans there also probe interval midpoints so no one-sided value is missed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .board import Coloring
from .geom import Segment, cell_crossings, integrate

_HALF_PI = math.pi / 2
_AXIS_SNAP = 1e-12  # angles this close to 0 or pi/2 are treated as exact
_DEDUP = 1e-12  # breakpoint collision tolerance (absolute)


@dataclass(frozen=True)
class Direction:
    """Angle theta normalized to [0, pi); u = (cos, sin), uperp = (-sin, cos)."""

    theta: float

    def __post_init__(self) -> None:
        t = math.fmod(float(self.theta), math.pi)
        if t < 0.0:
            t += math.pi
        if t < _AXIS_SNAP or math.pi - t < _AXIS_SNAP:
            t = 0.0
        elif abs(t - _HALF_PI) < _AXIS_SNAP:
            t = _HALF_PI
        object.__setattr__(self, "theta", t)

    @property
    def u(self) -> tuple[float, float]:
        if self.theta == 0.0:
            return (1.0, 0.0)
        if self.theta == _HALF_PI:
            return (0.0, 1.0)
        return (math.cos(self.theta), math.sin(self.theta))

    @property
    def uperp(self) -> tuple[float, float]:
        ux, uy = self.u
        return (-uy, ux)

    def is_axis(self) -> bool:
        return self.theta == 0.0 or self.theta == _HALF_PI


@dataclass(frozen=True)
class Chord:
    """The full line {t*u + s*uperp : s real}, understood clipped to the board."""

    direction: Direction
    t: float


@dataclass(frozen=True)
class Projection:
    """Exact offset profile of one direction: breakpoints and values there."""

    direction: Direction
    breakpoints: np.ndarray
    values: np.ndarray

    def __post_init__(self) -> None:
        for name in ("breakpoints", "values"):
            arr = np.asarray(getattr(self, name), dtype=np.float64)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)


def chord_segment(n: int, ch: Chord) -> Segment:
    """Clip the chord's line to [0, n]^2 (degenerate Segment if it misses)."""
    ux, uy = ch.direction.u
    vx, vy = ch.direction.uperp
    px, py = ch.t * ux, ch.t * uy
    lo, hi = -math.inf, math.inf
    for p0, d in ((px, vx), (py, vy)):
        if d == 0.0:
            if not 0.0 <= p0 <= n:
                return Segment((px, py), (px, py))
        else:
            r0, r1 = (0.0 - p0) / d, (n - p0) / d
            if r0 > r1:
                r0, r1 = r1, r0
            lo, hi = max(lo, r0), min(hi, r1)
    if hi < lo:
        return Segment((px, py), (px, py))
    return Segment((px + lo * vx, py + lo * vy), (px + hi * vx, py + hi * vy))


def breakpoint_offsets(n: int, direction: Direction) -> np.ndarray:
    """Sorted, deduplicated projections p.u of all lattice points p in {0..n}^2."""
    ux, uy = direction.u
    k = np.arange(n + 1, dtype=np.float64)
    t = (ux * k[:, None] + uy * k[None, :]).ravel()
    t.sort()
    keep = np.empty(t.size, dtype=bool)
    keep[0] = True
    np.greater(np.diff(t), _DEDUP, out=keep[1:])
    return t[keep]


def _scan_offsets(n: int, direction: Direction) -> np.ndarray:
    # Offsets probed by per-direction maximization: breakpoints, plus interval
    # midpoints at axis directions where the profile may step.
    ts = breakpoint_offsets(n, direction)
    if direction.is_axis() and ts.size > 1:
        ts = np.sort(np.concatenate([ts, (ts[:-1] + ts[1:]) / 2]))
    return ts


def project(c: Coloring, direction: Direction) -> Projection:
    """Exact piecewise-linear offset profile t -> integral over the chord at t."""
    ts = breakpoint_offsets(c.n, direction)
    vals = np.array([integrate(c, chord_segment(c.n, Chord(direction, t))) for t in ts.tolist()])
    return Projection(direction, ts, vals)


def max_chord_in_direction(c: Coloring, direction: Direction) -> tuple[float, float]:
    """Exact maximizer of |chord integral| over offsets: (t*, v*).

    The profile is piecewise linear in t, so |profile| attains its maximum at
    a breakpoint; ties break toward smaller t.
    """
    ts = _scan_offsets(c.n, direction).tolist()
    best_t, best_v = ts[0], -1.0
    for t in ts:
        v = abs(integrate(c, chord_segment(c.n, Chord(direction, t))))
        if v > best_v:
            best_t, best_v = t, v
    return float(best_t), float(best_v)


def _prefix_range(c: Coloring, seg: Segment) -> tuple[float, Segment]:
    # Best |integral| over sub-segments of one chord: max prefix minus min
    # prefix of the signed crossing lengths; witness spans the two arg prefixes.
    cl = cell_crossings(seg, c.n)
    if len(cl) == 0:
        return 0.0, Segment(seg.a, seg.a)
    cells = c.cells
    pos = [cl.entries[0].t_in]
    prefix = [0.0]
    acc = 0.0
    for e in cl:
        acc += cells[e.i, e.j] * e.length
        prefix.append(acc)
        pos.append(e.t_out)
    arr = np.asarray(prefix)
    imax = int(np.argmax(arr))
    imin = int(np.argmin(arr))
    v = float(arr[imax] - arr[imin])
    s_lo, s_hi = sorted((pos[imin], pos[imax]))
    return v, Segment(seg.point_at(s_lo), seg.point_at(s_hi))


def max_segment_in_direction(c: Coloring, direction: Direction) -> tuple[Segment, float]:
    """Exact maximizer of |sub-segment integral| over all chords of a direction.

    Per offset, each prefix sum is linear in t between breakpoints and the
    prefix range (max minus min) is convex there, so breakpoint offsets are
    exact.  Ties break toward smaller offset, then smaller crossing index.
    """
    best_v = -1.0
    best_seg = Segment((0.0, 0.0), (0.0, 0.0))
    for t in _scan_offsets(c.n, direction).tolist():
        seg = chord_segment(c.n, Chord(direction, t))
        v, witness = _prefix_range(c, seg)
        if v > best_v:
            best_v, best_seg = v, witness
    return best_seg, float(best_v)
