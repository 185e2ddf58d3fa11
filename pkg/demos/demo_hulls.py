"""
Polynomial and holomorphic hulls on a raster
============================================

A compact set in the plane is polynomially convex when its complement has
no bounded pieces.  On a cell grid that is a flood fill: whatever the
outside flood cannot reach gets absorbed into the hull.  Restricting to a
smaller ambient domain changes the answer: a hole that touches the domain
boundary is no longer "inside" and survives.
"""

import numpy as np

from sigmaconv import (COMPACT, DOMAIN, Grid, full_domain, holomorphic_hull,
                       polynomial_hull, rasterize_scene, shapes)


def ascii_mask(mask, step=2):
    rows = []
    for j in range(mask.grid.height - 1, -1, -step):
        rows.append("".join("#" if mask.bits[j, i] else "."
                            for i in range(0, mask.grid.width, step)))
    return "\n".join(rows)


grid = Grid.from_box(-2.0, -2.0, 2.0, 2.0, 64, 64)

# A horseshoe: an annulus with a bite removed.  Its complement is still
# connected, so the horseshoe is already its own hull.
horseshoe = rasterize_scene(
    [(1, shapes.Annulus(0.0, 0.0, 0.55, 1.1)),
     (-1, shapes.BoxShape(-0.4, 0.6, 0.4, 2.0))],
    grid, kind=COMPACT)
print("horseshoe:", horseshoe.count(), "cells")
print(ascii_mask(horseshoe))
hull = polynomial_hull(horseshoe)
print("hull adds", hull.count() - horseshoe.count(),
      "cells (open mouth, nothing to trap)\n")

# Close the mouth and the flood can no longer reach the middle: the hull
# swallows the enclosed disk.
ring = rasterize_scene([(1, shapes.Annulus(0.0, 0.0, 0.55, 1.1))], grid,
                       kind=COMPACT)
ring_hull = polynomial_hull(ring)
print("closed ring:", ring.count(), "cells; hull:", ring_hull.count())
print(ascii_mask(ring_hull))

# Same ring, but the ambient domain is itself an annulus.  The ring's hole
# now meets the domain's complement, so the holomorphic hull keeps it.
omega = rasterize_scene([(1, shapes.Annulus(0.0, 0.0, 0.25, 1.6))], grid,
                        kind=DOMAIN)
restricted = holomorphic_hull(ring, omega)
print("\nholomorphic hull in an annular domain:",
      restricted.count(), "cells (hole preserved:",
      restricted.same_cells(ring), ")")

# In the full plane the two notions agree.
assert holomorphic_hull(ring, full_domain(grid)).same_cells(ring_hull)
print("in the full domain both hulls agree, as they must")
