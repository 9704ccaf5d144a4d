"""Global maximization of chord and sub-segment discrepancy over directions.

Two routes exist on purpose.  best_chord / best_segment sweep a dense angle
grid with a vectorized per-direction evaluation (every critical offset at
once), refine the winner by golden-section in the angle, and then recompute
the winning direction through the scalar radon path so the reported witness
is exact.  brute_force enumerates the lattice-pair direction set entirely
through the scalar path and serves as the small-n oracle; it never shares
the vectorized code.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .board import Coloring
from .geom import Segment
from .radon import (
    Chord,
    Direction,
    breakpoint_offsets,
    max_chord_in_direction,
    max_segment_in_direction,
)

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0

_BRUTE_LIMIT = 16  # lattice-pair enumeration cost guard
_ANGLE_CAP = 200_000


@dataclass(frozen=True)
class SearchStrategy:
    """How a report was produced: scan width, refinement rounds, oracle flag."""

    angles: int
    refine: int
    oracle: bool


@dataclass(frozen=True)
class DiscrepancyReport:
    n: int
    best_chord: tuple[Chord, float]
    best_segment: tuple[Segment, float]
    strategy: SearchStrategy
    ratio_sqrt_n: float
    ratio_sqrt_n_log_n: float | None  # None for n = 1 (log 1 = 0)


def default_angles(n: int) -> int:
    """Scan width resolving the ~1/n^2-spaced lattice direction classes."""
    return min(8 * n * n, _ANGLE_CAP)


def _scan_direction(c: Coloring, direction: Direction) -> tuple[float, float]:
    # Exact (chord_max, segment_max) for one direction, all critical offsets
    # evaluated at once.  Axis directions go through the scalar path: their
    # offset set includes interval midpoints and the event algebra below
    # would divide by zero.
    if direction.is_axis():
        _, vc = max_chord_in_direction(c, direction)
        _, vs = max_segment_in_direction(c, direction)
        return vc, vs
    n = c.n
    ux, uy = direction.u  # uy > 0 off-axis since theta in (0, pi)
    ts = breakpoint_offsets(n, direction)
    tx = ts[:, None] * ux
    ty = ts[:, None] * uy
    # chord point at arclength s is (tx - s uy, ty + s ux); clip both
    # coordinates to [0, n] for the in-board arclength window
    x_lo = (tx - n) / uy
    x_hi = tx / uy
    if ux > 0:
        y_lo = -ty / ux
        y_hi = (n - ty) / ux
    else:
        y_lo = (n - ty) / ux
        y_hi = -ty / ux
    s_lo = np.maximum(x_lo, y_lo)
    s_hi = np.maximum(np.minimum(x_hi, y_hi), s_lo)
    k = np.arange(n + 1, dtype=np.float64)[None, :]
    ev = np.concatenate([(tx - k) / uy, (k - ty) / ux], axis=1)
    np.clip(ev, s_lo, s_hi, out=ev)
    ev.sort(axis=1)
    mids = (ev[:, :-1] + ev[:, 1:]) / 2.0
    lengths = np.diff(ev, axis=1)
    ix = np.clip((tx - mids * uy).astype(np.int64), 0, n - 1)
    iy = np.clip((ty + mids * ux).astype(np.int64), 0, n - 1)
    prefix = np.cumsum(c.cells[ix, iy] * lengths, axis=1)
    chord_best = float(np.max(np.abs(prefix[:, -1])))
    pmax = np.maximum(prefix.max(axis=1), 0.0)
    pmin = np.minimum(prefix.min(axis=1), 0.0)
    seg_best = float(np.max(pmax - pmin))
    return chord_best, seg_best


def _candidate_angles(n: int, angles: int) -> list[float]:
    # Uniform grid, augmented with the primitive lattice directions while
    # their enumeration is cheap (the oracle's range).  Peak values sit at
    # kinks on those directions, which golden-section alone approaches only
    # linearly; including them makes the scan resolve every combinatorial
    # direction class at small n.
    grid = {k * math.pi / angles for k in range(angles)}
    if n <= _BRUTE_LIMIT:
        grid.update(d.theta for d in _lattice_directions(n))
    return sorted(grid)


def _scan_stage(c: Coloring, thetas: list[float], threads: int):
    if threads <= 1:
        return [_scan_direction(c, Direction(t)) for t in thetas]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda t: _scan_direction(c, Direction(t)), thetas))


def _refine_angle(value_at, theta0: float, window: float, rounds: int,
                  best_theta: float, best_val: float) -> tuple[float, float]:
    # Golden-section rounds around the incumbent; the incumbent is only
    # replaced by a strictly larger value, so refinement never loses it.
    if rounds <= 0:
        return best_theta, best_val
    a = theta0 - window
    b = theta0 + window
    x1 = b - _INVPHI * (b - a)
    x2 = a + _INVPHI * (b - a)
    f1 = value_at(x1)
    f2 = value_at(x2)
    for th, fv in ((x1, f1), (x2, f2)):
        if fv > best_val:
            best_theta, best_val = th, fv
    for _ in range(rounds):
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + _INVPHI * (b - a)
            f2 = value_at(x2)
            th, fv = x2, f2
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - _INVPHI * (b - a)
            f1 = value_at(x1)
            th, fv = x1, f1
        if fv > best_val:
            best_theta, best_val = th, fv
    return best_theta, best_val


def _search(c: Coloring, angles: int | None, refine: int, threads: int, which: int):
    if angles is None:
        angles = default_angles(c.n)
    if angles < 1:
        raise ValueError(f"angle count must be at least 1, got {angles}")
    thetas = _candidate_angles(c.n, angles)
    pairs = _scan_stage(c, thetas, threads)
    vals = [p[which] for p in pairs]
    k = int(np.argmax(vals))  # first max: ties across directions go to smaller theta
    best_theta, best_val = thetas[k], vals[k]
    best_theta, _ = _refine_angle(
        lambda th: _scan_direction(c, Direction(th))[which],
        thetas[k], math.pi / angles, refine, best_theta, best_val,
    )
    return Direction(best_theta)


def best_chord(c: Coloring, angles: int | None = None, refine: int = 3,
               threads: int = 1) -> tuple[Chord, float]:
    """Maximize |integral over a full chord| by dense angle scan + refinement.

    Scans theta_k = k pi / angles, golden-refines around the incumbent in a
    +-pi/angles window, and reports the winning direction recomputed through
    the scalar per-offset path.  Deterministic for fixed inputs.
    """
    d = _search(c, angles, refine, threads, 0)
    t, v = max_chord_in_direction(c, d)
    return Chord(d, t), v


def best_segment(c: Coloring, angles: int | None = None, refine: int = 3,
                 threads: int = 1) -> tuple[Segment, float]:
    """Maximize |integral over any sub-segment|; same strategy as best_chord."""
    d = _search(c, angles, refine, threads, 1)
    return max_segment_in_direction(c, d)


def _ratios(n: int, seg_val: float) -> tuple[float, float | None]:
    r1 = seg_val / math.sqrt(n)
    r2 = seg_val / math.sqrt(n * math.log(n)) if n > 1 else None
    return r1, r2


def scan_report(c: Coloring, angles: int | None = None, refine: int = 3,
                threads: int = 1) -> DiscrepancyReport:
    """DiscrepancyReport from the dense-scan strategy (chords and segments)."""
    ch, vc = best_chord(c, angles, refine, threads)
    seg, vs = best_segment(c, angles, refine, threads)
    r1, r2 = _ratios(c.n, vs)
    used = angles if angles is not None else default_angles(c.n)
    return DiscrepancyReport(
        c.n, (ch, vc), (seg, vs), SearchStrategy(used, refine, False), r1, r2
    )


def _lattice_directions(n: int) -> list[Direction]:
    # One direction per primitive lattice vector (dx, dy), dy >= 0; the
    # chord runs along (dx, dy), so the offset axis is its normal.
    out = []
    for dy in range(0, n + 1):
        for dx in range(-n, n + 1):
            if dy == 0:
                if dx != 1:
                    continue
            elif math.gcd(abs(dx), dy) != 1:
                continue
            out.append(Direction(math.atan2(-dx, dy)))
    out.sort(key=lambda d: d.theta)
    return out


def brute_force(c: Coloring) -> DiscrepancyReport:
    """Exact oracle over every lattice-pair direction; scalar path only.

    Enumerates each direction spanned by two distinct points of the
    (n+1) x (n+1) lattice (axes included), maximizing chords and segments
    exactly per direction.  Ground truth for small boards.
    """
    if c.n > _BRUTE_LIMIT:
        raise ValueError(f"brute_force is limited to n <= {_BRUTE_LIMIT}, got {c.n}")
    dirs = _lattice_directions(c.n)
    bc: tuple[Chord, float] | None = None
    bs: tuple[Segment, float] | None = None
    for d in dirs:
        t, vc = max_chord_in_direction(c, d)
        if bc is None or vc > bc[1]:
            bc = (Chord(d, t), vc)
        seg, vs = max_segment_in_direction(c, d)
        if bs is None or vs > bs[1]:
            bs = (seg, vs)
    r1, r2 = _ratios(c.n, bs[1])
    return DiscrepancyReport(
        c.n, bc, bs, SearchStrategy(len(dirs), 0, True), r1, r2
    )
