"""
Ascending decompositions and the neighborhood trap
==================================================

A countable union of polynomially convex compacts can be exhausted by an
ascending chain: stage n keeps the first compact whole and pulls each
later one back from a 1/n-neighborhood of its predecessors, then hulls
the pieces.  The chain's shrinking closed neighborhoods trap the union
from outside, which is what the series construction feeds on.
"""

from pathlib import Path

from sigmaconv import (COMPACT, Grid, ascending_decomposition,
                       export_decomposition, neighborhood, polynomial_hull,
                       rasterize_scene, shapes, u_neighborhood_trap)

grid = Grid.from_box(-2.0, -2.0, 2.0, 2.0, 96, 96)


def disk(cx, cy, r):
    return polynomial_hull(rasterize_scene(
        [(1, shapes.Disk(cx, cy, r))], grid, kind=COMPACT))


# two disjoint disks and a third nested inside the first
K_list = [disk(-0.8, 0.0, 0.5), disk(0.9, 0.0, 0.4), disk(-0.8, 0.1, 0.2)]
dec = ascending_decomposition(K_list, 12)

print("stage   E_n cells   U_n cells   hull identity")
for n in range(1, 13):
    print(f"{n:>5}   {dec.E_list[n - 1].count():>9}   "
          f"{dec.U_list[n - 1].count():>9}   {dec.hull_identity[n - 1]}")

# The second piece is untouched once 1/n is below the gap; the nested
# third piece is eroded away entirely (it lies inside its predecessor).
print("\npiece cells at stage 12:",
      [dec.L[(12, j)].count() for j in (1, 2, 3)])

# Traps: intersecting the neighborhoods from stage m onward pins the
# union within 1/(3m) of itself (plus raster slack).
union = K_list[0].union(K_list[1]).union(K_list[2])
for m in (1, 3, 6, 12):
    trap = u_neighborhood_trap(dec, m)
    bound = neighborhood(union, 1.0 / (3.0 * m) + 2 * grid.pixel)
    print(f"trap from m={m:>2}: {trap.count():>5} cells, "
          f"within 1/(3m)+2px of the union: {trap.subset_of(bound)}")

out = Path("demo_out")
out.mkdir(exist_ok=True)
manifest = export_decomposition(dec, out / "decomposition")
print(f"\nexported {len(manifest['files'])} stage masks with checksums to "
      f"{out}/decomposition")
