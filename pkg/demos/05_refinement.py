# Three nested resolutions of the saddle.  The coarse graphs are projections
# of the finest one, so every recurrent component at a fine level sits
# inside one at the level above it and the end tree is well formed.
from exflow import GridSpec, OuterApproxConfig, analyze_pipeline

grid = GridSpec(((-2.0, 2.0), (-2.0, 2.0)), (32, 32), ("infinity", "infinity"))
r = analyze_pipeline("saddle", grid, OuterApproxConfig(0.5), levels=3)

prev = None
for lvl in r["levels"]:
    m = lvl["ei_measure"]
    ratio = "" if prev is None else f" ({m / prev:.3f} of previous)"
    print(f"{lvl['dims'][0]:4d}^2: EI measure {m:.4f}{ratio}, components {len(lvl['components'])}")
    prev = m

tree = r["end_tree"]
print("ends (component id per level):", tree["ends"])
print("dead branches:", tree["dead_branches"])
