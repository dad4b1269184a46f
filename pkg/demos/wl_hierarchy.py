"""Two triangles against a hexagon, across WL dimensions."""

from prismcanon import Multigraph, build_cfi, compare, make_cycle, wl1

two_triangles = Multigraph(build_cfi(make_cycle(3), "even").adjacency)
hexagon = make_cycle(6).to_weighted()

print("1-WL colors on the hexagon:", wl1(hexagon).num_colors)
for k in (1, 2, 3):
    print(f"k={k}: distinguishable = {compare(two_triangles, hexagon, k).distinguishable}")
