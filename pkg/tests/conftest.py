"""Shared test helpers: seeded random blob masks and small series builders."""

import math

import numpy as np

from sigmaconv import COMPACT, Grid, RegionMask, RootPolynomial, block_series


def random_polyomino(rng, grid, n_cells):
    """Connected random mask grown cell by cell from a seed (4-neighbor
    growth, frame ring left clear)."""
    h, w = grid.height, grid.width
    bits = np.zeros((h, w), dtype=bool)
    j0 = int(rng.integers(2, h - 2))
    i0 = int(rng.integers(2, w - 2))
    bits[j0, i0] = True
    frontier = [(j0, i0)]
    for _ in range(n_cells - 1):
        if not frontier:
            break
        idx = int(rng.integers(0, len(frontier)))
        j, i = frontier[idx]
        nbrs = [(j + dj, i + di)
                for dj, di in ((1, 0), (-1, 0), (0, 1), (0, -1))
                if 1 <= j + dj < h - 1 and 1 <= i + di < w - 1
                and not bits[j + dj, i + di]]
        if not nbrs:
            frontier.pop(idx)
            continue
        jj, ii = nbrs[int(rng.integers(0, len(nbrs)))]
        bits[jj, ii] = True
        frontier.append((jj, ii))
    return RegionMask(grid, bits, COMPACT)


def disk_growth_series(center, radius, count):
    """Series f_l = ((z - center)/radius)^l: every growth exponent equals
    log|z - center| - log radius, so its verdict map is a disk."""
    h = RootPolynomial((complex(center),), -math.log(radius))
    return block_series([h] * count, [count], 0.0,
                        f"disk growth series about {center}")


def flood_fill_hull(mask):
    """Reference polynomial hull: breadth-first flood over complement cells
    (8-connected) from the frame; complement cells the flood never reaches
    are bounded, so the hull adds them.  Pure Python on purpose: an
    independent route from the packaged implementation."""
    h, w = mask.grid.height, mask.grid.width
    solid = mask.bits
    seen = np.zeros((h, w), dtype=bool)
    queue = []
    for i in range(w):
        for j in (0, h - 1):
            if not solid[j, i] and not seen[j, i]:
                seen[j, i] = True
                queue.append((j, i))
    for j in range(h):
        for i in (0, w - 1):
            if not solid[j, i] and not seen[j, i]:
                seen[j, i] = True
                queue.append((j, i))
    while queue:
        j, i = queue.pop()
        for dj in (-1, 0, 1):
            for di in (-1, 0, 1):
                jj, ii = j + dj, i + di
                if 0 <= jj < h and 0 <= ii < w and not solid[jj, ii] \
                        and not seen[jj, ii]:
                    seen[jj, ii] = True
                    queue.append((jj, ii))
    filled = solid | ~seen
    return RegionMask(mask.grid, filled & ~mask.grid.frame(), COMPACT)
