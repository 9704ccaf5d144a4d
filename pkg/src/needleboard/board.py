"""Signed checkerboards: data model, deterministic generators, text I/O.

A board of side n covers [0, n]^2 with unit cells.  Cell (i, j) is the
half-open square [i, i+1) x [j, j+1) -- column index i along x, row index
j along y -- and carries a real value z_ij.  Generators produce +-1 boards;
the container accepts arbitrary reals so downstream analysis can probe
non-sign inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TextIO

import numpy as np

_MASK64 = (1 << 64) - 1
_MULT1 = 0xBF58476D1CE4E5B9
_MULT2 = 0x94D049BB133111EB

HEADER = "needleboard v1"


def mix64(x: int) -> int:
    """64-bit avalanche finalizer (splitmix64 style), arithmetic mod 2^64."""
    x &= _MASK64
    x ^= x >> 30
    x = (x * _MULT1) & _MASK64
    x ^= x >> 27
    x = (x * _MULT2) & _MASK64
    x ^= x >> 31
    return x


def _mix64_u64(x: np.ndarray) -> np.ndarray:
    # Vectorized twin of mix64; numpy uint64 arithmetic wraps mod 2^64.
    x = x ^ (x >> np.uint64(30))
    x = x * np.uint64(_MULT1)
    x = x ^ (x >> np.uint64(27))
    x = x * np.uint64(_MULT2)
    x = x ^ (x >> np.uint64(31))
    return x


@dataclass(frozen=True)
class Coloring:
    """Immutable n x n board of cell values, indexed cells[i, j]."""

    n: int
    cells: np.ndarray

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"board side must be a positive integer, got {self.n}")
        cells = np.array(self.cells, dtype=np.float64, copy=True)
        if cells.shape != (self.n, self.n):
            raise ValueError(f"cells must have shape ({self.n}, {self.n}), got {cells.shape}")
        cells.flags.writeable = False
        object.__setattr__(self, "cells", cells)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Coloring):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self.cells, other.cells))


def make_constant(n: int, v: float) -> Coloring:
    """Board with every cell equal to v."""
    return Coloring(n, np.full((n, n), float(v)))


def make_parity(n: int) -> Coloring:
    """Checkerboard: z_ij = +1 for even i+j, -1 for odd."""
    i = np.arange(n)
    return Coloring(n, np.where((i[:, None] + i[None, :]) % 2 == 0, 1.0, -1.0))


def make_stripes(n: int, axis: str) -> Coloring:
    """Stripes of constant sign: horizontal rows (-1)^j or vertical columns (-1)^i."""
    if axis not in ("horizontal", "vertical"):
        raise ValueError(f"axis must be 'horizontal' or 'vertical', got {axis!r}")
    sign = np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
    cells = np.tile(sign, (n, 1)) if axis == "horizontal" else np.tile(sign[:, None], (1, n))
    return Coloring(n, cells)


def random_cell_values(seed: int, i: np.ndarray, j: np.ndarray) -> np.ndarray:
    """Values make_random(n, seed) would assign at cells (i, j), computed directly.

    Counter-based: each cell's sign is a pure function of (seed, i, j), so any
    subset of cells can be generated without materializing the board.
    """
    ctr = (np.asarray(i, dtype=np.uint64) << np.uint64(32)) + np.asarray(j, dtype=np.uint64) + np.uint64(1)
    h = _mix64_u64(np.uint64(seed & _MASK64) ^ _mix64_u64(ctr))
    return np.where((h >> np.uint64(63)) == 0, 1.0, -1.0)


def make_random(n: int, seed: int) -> Coloring:
    """Deterministic +-1 board: sign of cell (i, j) from mixing (seed, i, j)."""
    i, j = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    return Coloring(n, random_cell_values(seed, i, j))


def sum_squares(c: Coloring) -> float:
    """Sum of squared cell values (the board's total squared mass)."""
    return float(np.sum(c.cells * c.cells))


class BoardFormatError(ValueError):
    """Malformed board text; message names the offending line."""


def write_text(c: Coloring, stream: TextIO) -> None:
    """Serialize a +-1 board: header, side, then rows top-to-bottom.

    File row r (0-based) holds board row j = n-1-r; '+' is +1, '-' is -1.
    Only sign boards are representable.
    """
    cells = c.cells
    if not np.all(np.abs(cells) == 1.0):
        bad = np.argwhere(np.abs(cells) != 1.0)[0]
        raise ValueError(
            f"cell ({bad[0]}, {bad[1]}) = {cells[bad[0], bad[1]]!r} is not +-1; "
            "text format encodes sign boards only"
        )
    stream.write(f"{HEADER}\n{c.n}\n")
    for r in range(c.n):
        j = c.n - 1 - r
        stream.write("".join("+" if cells[i, j] > 0 else "-" for i in range(c.n)) + "\n")


def read_text(stream: TextIO) -> Coloring:
    """Parse the text format written by write_text; errors carry line numbers."""
    text = stream.read()
    if "\r" in text:
        line = text[: text.index("\r")].count("\n") + 1
        raise BoardFormatError(f"line {line}: carriage return found; Unix newlines required")
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0] != HEADER:
        got = lines[0] if lines else "<empty>"
        raise BoardFormatError(f"line 1: expected header {HEADER!r}, got {got!r}")
    if len(lines) < 2:
        raise BoardFormatError("line 2: missing board side")
    if not lines[1].isdigit():
        raise BoardFormatError(f"line 2: board side must be a decimal integer, got {lines[1]!r}")
    n = int(lines[1])
    if n < 1:
        raise BoardFormatError(f"line 2: board side must be >= 1, got {n}")
    if len(lines) != 2 + n:
        if len(lines) < 2 + n:
            raise BoardFormatError(f"line {len(lines) + 1}: expected {n} rows, found {len(lines) - 2}")
        raise BoardFormatError(f"line {3 + n}: unexpected content after {n} rows")
    cells = np.empty((n, n))
    for r, row in enumerate(lines[2:]):
        lineno = 3 + r
        if len(row) != n:
            raise BoardFormatError(f"line {lineno}: row has length {len(row)}, expected {n}")
        for i, ch in enumerate(row):
            if ch == "+":
                cells[i, n - 1 - r] = 1.0
            elif ch == "-":
                cells[i, n - 1 - r] = -1.0
            else:
                raise BoardFormatError(f"line {lineno}: illegal character {ch!r} at column {i + 1}")
    return Coloring(n, cells)
