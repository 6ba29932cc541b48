# Linear saddle u1' = u1, u2' = -u2 on [-2, 2]^2 with a point at infinity.
#
# Points on the u2 axis flow into the origin; everything else leaves the
# box and lands on the infinity vertex.  So there are two ends, 0 and inf.
import os
import tempfile

import numpy as np

from exflow import analyze_pipeline, render_basins_ppm

r = analyze_pipeline("saddle")
g, p, b = r.graph, r.partition, r.basins
nx, ny = g.labels.dims
inf = g.labels.infinity

print("ends:", r.n_ends)
for row in r["basins"]["ends"]:
    kind = "infinity" if p.component_of[inf] == row["end"] else "origin"
    print(f"  end {row['end']} ({kind}): {row['resolved']} resolved cells, {row['recurrent']} recurrent")
print("unresolved:", r["basins"]["unresolved"], "of", g.n_cells)

# Columns holding origin-resolved cells: a thin strip around u1 = 0.
# Its width is set by bloat against the expansion e^tau per step.
origin = 1 - int(p.component_of[inf])
lab = b.resolved[: nx * ny].reshape(ny, nx)
cols = np.flatnonzero((lab == origin).any(axis=0))
print("origin strip columns:", cols.min(), "..", cols.max(), "(axis between", nx // 2 - 1, "and", nx // 2, ")")

# Reversed flow swaps the roles of the axes.
rr = analyze_pipeline("saddle", reversed=True)
rlab = rr.basins.resolved[: nx * ny].reshape(ny, nx)
rinf = int(rr.partition.component_of[inf])
print("reversed table is the transpose:", np.array_equal(rlab == 1 - rinf, (lab == origin).T))

out = os.path.join(tempfile.gettempdir(), "saddle_basins.ppm")
render_basins_ppm(r, b, out)
print("picture:", out)
