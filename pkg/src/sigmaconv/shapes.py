"""Shape primitives and scene rasterization.

A shape spec is either a single primitive or a list of signed primitives
``[(+1, p1), (-1, p2), ...]`` evaluated left to right as union/difference.
Rasterization marks the cells whose centers satisfy the (closed) primitive
predicate; the point-list primitive instead marks the one cell containing
each point.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .geometry import COMPACT, Grid, RegionMask

SQRT3_2 = math.sqrt(3.0) / 2.0


class EmptyPrimitiveWarning(UserWarning):
    """A positive primitive contributed no cells to the raster."""


class ResolutionWarning(UserWarning):
    """The grid is too coarse to resolve the requested construction."""


@dataclass(frozen=True)
class Disk:
    cx: float
    cy: float
    r: float

    def __post_init__(self) -> None:
        if not self.r > 0:
            raise ValueError("disk field 'r' must be positive")


@dataclass(frozen=True)
class Annulus:
    cx: float
    cy: float
    r_inner: float
    r_outer: float

    def __post_init__(self) -> None:
        if self.r_inner < 0:
            raise ValueError("annulus field 'r_inner' must be >= 0")
        if not self.r_outer > self.r_inner:
            raise ValueError("annulus field 'r_outer' must exceed r_inner")


@dataclass(frozen=True)
class Polygon:
    # closed polygon, vertices in order; membership by even-odd rule
    xs: tuple[float, ...]
    ys: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.xs) != len(self.ys):
            raise ValueError("polygon field 'vertices' has mismatched coordinates")
        if len(self.xs) < 3:
            raise ValueError("polygon field 'vertices' needs at least 3 points")


@dataclass(frozen=True)
class Segment:
    x0: float
    y0: float
    x1: float
    y1: float
    halfwidth: float | None = None  # None -> 0.75 * pixel at raster time

    def __post_init__(self) -> None:
        if self.halfwidth is not None and not self.halfwidth > 0:
            raise ValueError("segment field 'halfwidth' must be positive")


@dataclass(frozen=True)
class Points:
    pts: tuple[complex, ...]

    def __post_init__(self) -> None:
        if not self.pts:
            raise ValueError("points field 'pts' must be non-empty")


@dataclass(frozen=True)
class SierpinskiShape:
    # depth-k approximant of the Sierpinski triangle on the unit triangle
    # with vertices 0, 1, 1/2 + i*sqrt(3)/2
    depth: int

    def __post_init__(self) -> None:
        if self.depth < 0:
            raise ValueError("sierpinski field 'depth' must be >= 0")


@dataclass(frozen=True)
class BoxShape:
    x0: float
    y0: float
    x1: float
    y1: float

    def __post_init__(self) -> None:
        if not (self.x1 >= self.x0 and self.y1 >= self.y0):
            raise ValueError("box field 'corners' must be ordered x0<=x1, y0<=y1")


@dataclass(frozen=True)
class FullPlane:
    pass


Primitive = (Disk | Annulus | Polygon | Segment | Points | SierpinskiShape
             | BoxShape | FullPlane)
ShapeSpec = Primitive | list[tuple[int, Primitive]]


def _segment_distance(z: np.ndarray, p: complex, q: complex) -> np.ndarray:
    d = q - p
    if d == 0:
        return np.abs(z - p)
    t = ((z - p) * np.conj(d)).real / abs(d) ** 2
    t = np.clip(t, 0.0, 1.0)
    return np.abs(z - (p + t * d))


def _polygon_even_odd(z: np.ndarray, xs: tuple[float, ...],
                      ys: tuple[float, ...]) -> np.ndarray:
    x, y = z.real, z.imag
    inside = np.zeros(z.shape, dtype=bool)
    n = len(xs)
    for k in range(n):
        x0, y0 = xs[k], ys[k]
        x1, y1 = xs[(k + 1) % n], ys[(k + 1) % n]
        crosses = (y0 > y) != (y1 > y)
        with np.errstate(divide="ignore", invalid="ignore"):
            xc = x0 + (y - y0) * (x1 - x0) / (y1 - y0)
        inside ^= crosses & (x < np.where(crosses, xc, np.inf))
    return inside


def sierpinski_membership(z: np.ndarray, depth: int) -> np.ndarray:
    """True where z lies in the depth-k approximant (inverted-triangle
    interiors removed at each of the first ``depth`` subdivision levels)."""
    v = z.imag / SQRT3_2
    u = z.real - 0.5 * v
    inside = (u >= 0) & (v >= 0) & (u + v <= 1)
    u = u.copy()
    v = v.copy()
    for _ in range(depth):
        u *= 2.0
        v *= 2.0
        in_b = u >= 1.0
        u = np.where(in_b, u - 1.0, u)
        in_c = ~in_b & (v >= 1.0)
        v = np.where(in_c, v - 1.0, v)
        in_a = ~in_b & ~in_c & (u + v <= 1.0)
        inside &= in_b | in_c | in_a
    return inside


def inverted_triangle_holes(depth: int) -> list[tuple[int, tuple[complex, complex, complex]]]:
    """Vertices of every inverted (removed) triangle of the depth-k
    approximant, as (level, (p, q, r)) with level in 1..depth."""
    holes: list[tuple[int, tuple[complex, complex, complex]]] = []

    def recurse(a: complex, b: complex, c: complex, level: int) -> None:
        if level > depth:
            return
        ab, bc, ca = (a + b) / 2, (b + c) / 2, (c + a) / 2
        holes.append((level, (ab, bc, ca)))
        recurse(a, ab, ca, level + 1)
        recurse(ab, b, bc, level + 1)
        recurse(ca, bc, c, level + 1)

    recurse(0.0 + 0.0j, 1.0 + 0.0j, complex(0.5, SQRT3_2), 1)
    return holes


def _raster_primitive(prim: Primitive, grid: Grid) -> np.ndarray:
    z = grid.centers()
    if isinstance(prim, Disk):
        return np.abs(z - complex(prim.cx, prim.cy)) <= prim.r
    if isinstance(prim, Annulus):
        d = np.abs(z - complex(prim.cx, prim.cy))
        return (d >= prim.r_inner) & (d <= prim.r_outer)
    if isinstance(prim, Polygon):
        return _polygon_even_odd(z, prim.xs, prim.ys)
    if isinstance(prim, Segment):
        hw = prim.halfwidth if prim.halfwidth is not None else 0.75 * grid.pixel
        return _segment_distance(z, complex(prim.x0, prim.y0),
                                 complex(prim.x1, prim.y1)) <= hw
    if isinstance(prim, Points):
        bits = np.zeros(z.shape, dtype=bool)
        for p in prim.pts:
            i, j = grid.index_of(p)
            if grid.contains_index(i, j):
                bits[j, i] = True
        return bits
    if isinstance(prim, SierpinskiShape):
        if grid.pixel > 0.5 ** prim.depth:
            warnings.warn(
                f"pixel {grid.pixel:g} is coarser than the depth-{prim.depth} "
                f"triangle side {0.5 ** prim.depth:g}", ResolutionWarning,
                stacklevel=3)
        return sierpinski_membership(z, prim.depth)
    if isinstance(prim, BoxShape):
        return ((z.real >= prim.x0) & (z.real <= prim.x1)
                & (z.imag >= prim.y0) & (z.imag <= prim.y1))
    if isinstance(prim, FullPlane):
        return np.ones(z.shape, dtype=bool)
    raise ValueError(f"unknown primitive {prim!r}")


def rasterize_scene(spec: ShapeSpec, grid: Grid, kind: str = COMPACT) -> RegionMask:
    """Rasterize a shape spec onto a grid.

    Signed primitives are applied in order (union for +1, difference for -1).
    Compact-approx results are clipped one cell inside the frame.  A positive
    primitive that contributes no cells raises EmptyPrimitiveWarning.
    """
    if not isinstance(spec, list):
        spec = [(1, spec)]
    bits = np.zeros((grid.height, grid.width), dtype=bool)
    for sign, prim in spec:
        m = _raster_primitive(prim, grid)
        if sign >= 0:
            if not m.any():
                warnings.warn(f"primitive {prim!r} rasterized to an empty mask",
                              EmptyPrimitiveWarning, stacklevel=2)
            bits |= m
        else:
            bits &= ~m
    if kind == COMPACT:
        bits = bits & ~grid.frame()
    return RegionMask(grid, bits, kind)
