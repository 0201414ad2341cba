"""Hexagonal cell lattice on a torus with a hierarchical 3-way partition.

Cell centers live on the triangular lattice spanned by ``e1 = (sqrt(3) r, 0)``
and ``e2 = (sqrt(3) r / 2, 3 r / 2)``, addressed by integer axial coordinates
``(a, b)``.  The map ``M = [[1, -1], [1, 2]]`` (in axial coordinates) is a
rotation by 30 degrees combined with a sqrt(3) dilation, so ``M^i Z^2`` is an
index-``3^i`` sublattice that is again hexagonal.  The torus of ``L = 3^m``
cells is ``Z^2 / M^m Z^2``.

Colouring at level ``i`` is the coset of ``M^{i+1} Z^2`` inside the coset of
``M^i Z^2`` that holds the cell.  The colour sequence over levels ``0..m-1``
is a base-3 expansion of the cell, which doubles as its canonical index.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import DepthError, InvalidOrderError, InvalidParameterError

SQRT3 = math.sqrt(3.0)

# axial coordinates -> cartesian, unit circumradius
_AXIAL_TO_XY = np.array([[SQRT3, SQRT3 / 2.0], [0.0, 1.5]])


class Point2D(NamedTuple):
    x: float
    y: float


@dataclass(frozen=True, order=True)
class CellCoord:
    a: int
    b: int


def _apply_m(a: int, b: int) -> tuple[int, int]:
    return a - b, a + 2 * b


def _apply_m_inv(a: int, b: int) -> tuple[int, int]:
    # exact only when (a - b) % 3 == 0
    return (2 * a + b) // 3, (b - a) // 3


def _digits(a: int, b: int, m: int) -> list[int]:
    out = []
    for _ in range(m):
        k = (a - b) % 3
        a -= k
        a, b = _apply_m_inv(a, b)
        out.append(k)
    return out


def _from_digits(digits: list[int]) -> tuple[int, int]:
    a = b = 0
    # M^i applied to (1, 0)
    ua, ub = 1, 0
    for d in digits:
        a += d * ua
        b += d * ub
        ua, ub = _apply_m(ua, ub)
    return a, b


def hexagon_contains(x, y, hole_ratio: float = 0.0):
    """Membership test for the pointy-top unit-circumradius hexagon minus a hole.

    Works elementwise on numpy arrays.
    """
    h = SQRT3 / 2.0
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    inside = (
        (np.abs(x) <= h)
        & (np.abs(0.5 * x + h * y) <= h)
        & (np.abs(-0.5 * x + h * y) <= h)
    )
    return inside & (x * x + y * y >= hole_ratio * hole_ratio)


def sample_offsets(n: int, rng: np.random.Generator, hole_ratio: float) -> np.ndarray:
    """Draw ``n`` points uniform over the unit hexagon minus the central hole.

    Rejection from the bounding box ``[-sqrt(3)/2, sqrt(3)/2] x [-1, 1]``.
    The number of generator draws depends only on ``n`` and the stream, so
    a given stream always yields the same points.
    """
    out = np.empty((n, 2))
    filled = 0
    h = SQRT3 / 2.0
    while filled < n:
        need = n - filled
        batch = int(need * 1.4) + 16
        pts = rng.random((batch, 2))
        x = (2.0 * pts[:, 0] - 1.0) * h
        y = 2.0 * pts[:, 1] - 1.0
        ok = hexagon_contains(x, y, hole_ratio)
        acc = np.flatnonzero(ok)[:need]
        out[filled:filled + acc.size, 0] = x[acc]
        out[filled:filled + acc.size, 1] = y[acc]
        filled += acc.size
    return out


@dataclass(frozen=True)
class CellGrid:
    """Torus of ``3**m`` hexagonal cells.

    Immutable; share freely between threads.
    """

    m: int
    cell_radius: float = 1.0
    hole_ratio: float = 0.14
    cells: tuple[CellCoord, ...] = field(init=False, repr=False)
    period: np.ndarray = field(init=False, repr=False, compare=False)
    period_inv: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not isinstance(self.m, (int, np.integer)) or self.m < 2:
            raise InvalidOrderError(f"partition order must be an integer >= 2, got {self.m!r}")
        if not self.cell_radius > 0 or not math.isfinite(self.cell_radius):
            raise InvalidParameterError(f"cell radius must be positive, got {self.cell_radius!r}")
        if not 0.0 <= self.hole_ratio < 1.0:
            raise InvalidParameterError(f"hole ratio must lie in [0, 1), got {self.hole_ratio!r}")
        cells = []
        for idx in range(3 ** self.m):
            digits = [(idx // 3 ** i) % 3 for i in range(self.m)]
            cells.append(CellCoord(*_from_digits(digits)))
        object.__setattr__(self, "cells", tuple(cells))

        pa, pb = 1, 0
        qa, qb = 0, 1
        for _ in range(self.m):
            pa, pb = _apply_m(pa, pb)
            qa, qb = _apply_m(qa, qb)
        period = _AXIAL_TO_XY @ np.array([[pa, qa], [pb, qb]], dtype=float)
        object.__setattr__(self, "period", period)
        object.__setattr__(self, "period_inv", np.linalg.inv(period))

    @property
    def L(self) -> int:
        return 3 ** self.m

    def __len__(self):
        return self.L

    def cell(self, a: int, b: int) -> CellCoord:
        """Canonical representative of axial coordinate ``(a, b)``."""
        return CellCoord(*_from_digits(_digits(a, b, self.m)))

    def index(self, c: CellCoord) -> int:
        return sum(d * 3 ** i for i, d in enumerate(_digits(c.a, c.b, self.m)))

    def color(self, c: CellCoord, level: int) -> int:
        if not 0 <= level < self.m:
            raise DepthError(f"level must lie in [0, {self.m - 1}], got {level}")
        return _digits(c.a, c.b, self.m)[level]

    def pilot_group(self, home: CellCoord, depth: int) -> list[CellCoord]:
        """Cells sharing a pilot with ``home`` at partition depth ``depth``.

        ``home`` comes first; the rest follow in index order.
        """
        if not 0 <= depth < self.m:
            raise DepthError(
                f"depth must lie in [0, {self.m - 1}] (depth {self.m} would monopolize a pilot)"
            )
        h = self.index(home)
        step = 3 ** depth
        low = h % step
        members = [self.cells[i] for i in range(low, self.L, step)]
        home_c = self.cells[h]
        return [home_c] + [c for c in members if c != home_c]

    def center(self, c: CellCoord) -> Point2D:
        x, y = _AXIAL_TO_XY @ np.array([c.a, c.b], dtype=float)
        return Point2D(float(x) * self.cell_radius, float(y) * self.cell_radius)

    def wrap(self, d: np.ndarray) -> np.ndarray:
        """Minimum-image version of displacement(s) ``d`` (unit radius, shape (..., 2))."""
        d = np.asarray(d, dtype=float)
        coef = d @ self.period_inv.T
        coef = coef - np.rint(coef)
        base = coef @ self.period.T
        shifts = np.array([(i, j) for i in (-1, 0, 1) for j in (-1, 0, 1)], dtype=float)
        images = base[..., None, :] + shifts @ self.period.T
        k = np.argmin(np.einsum("...ij,...ij->...i", images, images), axis=-1)
        return np.take_along_axis(images, k[..., None, None], axis=-2)[..., 0, :]

    def torus_distance(self, p: Point2D, q: Point2D) -> float:
        d = np.array([q[0] - p[0], q[1] - p[1]]) / self.cell_radius
        w = self.wrap(d)
        return float(math.hypot(w[0], w[1]) * self.cell_radius)

    def group_offsets(self, depth: int) -> np.ndarray:
        """Unit-radius displacements from the home BS (cell 0) to the other
        members of its depth-``depth`` pilot group, minimum-image wrapped."""
        members = self.pilot_group(self.cells[0], depth)[1:]
        ab = np.array([[c.a, c.b] for c in members], dtype=float).reshape(-1, 2)
        return self.wrap(ab @ _AXIAL_TO_XY.T)

    def sample_user_position(self, c: CellCoord, rng: np.random.Generator) -> Point2D:
        ox, oy = sample_offsets(1, rng, self.hole_ratio)[0]
        cx, cy = self.center(c)
        return Point2D(cx + ox * self.cell_radius, cy + oy * self.cell_radius)


def build_grid(m: int, cell_radius: float = 500.0, hole_ratio: float = 0.14) -> CellGrid:
    return CellGrid(m, cell_radius, hole_ratio)
