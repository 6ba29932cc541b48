# Gradient descent of the height on an upright torus, drawn on the flat
# square [0, 2pi)^2.  Four critical points: bottom, two saddles, top.
import math

from exflow import analyze_pipeline

names = {
    (1.5 * math.pi, 0.0): "bottom",
    (0.5 * math.pi, math.pi): "saddle",
    (1.5 * math.pi, math.pi): "saddle",
    (0.5 * math.pi, 0.0): "top",
}


def owner(r, u, v):
    cell = r.graph.labels.cell_of_point([(u + 1e-9, v + 1e-9)])[0]
    return int(r.partition.component_of[cell])


for reversed in (False, True):
    r = analyze_pipeline("torus-height", reversed=reversed)
    counts = r.basins.end_counts()
    print("reversed" if reversed else "forward", "- components:", len(r.partition))
    for (u, v), name in names.items():
        e = owner(r, u, v)
        print(f"  {name:6s} end {e}: {counts[e]:5d} resolved, {r.partition.components[e].size:3d} recurrent")
    print("  unresolved:", r["basins"]["unresolved"], r["basins"]["unresolved_by_set"])
    print("  morse edges:", r["morse_edges"])

# Forward, the top attracts nothing but itself; reversed, the bottom does.
# The unresolved cells hug the stable curves of the saddles: a cell within
# a few cells of such a curve can still reach the saddle's blob once the
# bloat collar is added at every step.
