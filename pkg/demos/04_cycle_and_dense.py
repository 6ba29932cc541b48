# Two systems with a single kind of recurrence each.
#
# limit-cycle: rho' = rho(1 - rho^2), theta' = 1.  The unit circle attracts,
# the origin repels, and the point at infinity is never reached from the box.
#
# irrational: u' = 1, v' = sqrt(2) on the torus.  Every orbit is dense.
from exflow import analyze_pipeline, cyclic_cells

r = analyze_pipeline("limit-cycle")
g, p = r.graph, r.partition
inf = g.labels.infinity
print("limit-cycle components:", [c.size for c in p.components])
for row in r["basins"]["ends"]:
    print("  end", row["end"], "resolved", row["resolved"], "recurrent", row["recurrent"])
for v in r["representability"]:
    print("  ", v)
print("  infinity end:", int(p.component_of[inf]), "(its basin is just itself)")

r = analyze_pipeline("irrational")
print("irrational: cyclic", cyclic_cells(r.graph).size, "of", r.graph.n_cells, "- ends:", r.n_ends)
print("  regular at infinity:", r.finest["regular_at_infinity"])
