# A five cell map, small enough to follow by hand.
#
#   0 -> 1 -> {2, 4},  2 <-> 3,  4 -> 4
#
# with cells 0-1-2-3 in a row (spatial adjacency).
import numpy as np

from exflow import (
    FlowGraph,
    assign_basins,
    bar_limit_space,
    cyclic_cells,
    eventual_image,
    inclusion_chain_report,
    inv_set,
    omega_limit_cell,
    recurrent_components,
    regular_at_infinity,
    reverse_graph,
)
from exflow.errors import SourceCellWithoutPredecessor

g = FlowGraph.from_edges(5, [(0, 1), (1, 2), (1, 4), (2, 3), (3, 2), (4, 4)], [(0, 1), (1, 2), (2, 3)])

# Iterating the map on all cells shrinks until it stops changing.
f = eventual_image(g)
print("images of all cells:", [level.tolist() for level in f.levels])
print("stabilizes after", f.k_star, "steps")

# Cells on a cycle are the combinatorial periodic set; here they fill the
# eventual image.
print("cyclic cells:", cyclic_cells(g).tolist())
print("omega limit of cell 0:", omega_limit_cell(g, 0).tolist())

# The bar-limit adds one spatial collar: cell 1 touches cell 2.
print("bar-limit:", bar_limit_space(g, f).tolist())
print("regular at infinity:", regular_at_infinity(g, f))
print("chain:", inclusion_chain_report(g, f).as_dict())

# Invariant part of {1, 2, 3}: cell 1 has no predecessor inside.
print("inv({1,2,3}):", inv_set(g, {1, 2, 3}).tolist())

# Two recurrent components, {2, 3} and {4}.  Cells 0 and 1 can reach
# both, so they stay unresolved instead of being guessed.
p = recurrent_components(g)
b = assign_basins(g, p)
print("components:", [c.tolist() for c in p.components])
print("resolved:", b.resolved.tolist(), "unresolved:", {k: sorted(v) for k, v in b.unresolved.items()})

# Reversal needs a predecessor for every cell; cell 0 has none.
try:
    reverse_graph(g)
except SourceCellWithoutPredecessor as exc:
    print("reverse:", exc)

# With a return edge 2 -> 0 it works, and reversing twice gives g back.
g2 = FlowGraph.from_edges(5, [(0, 1), (1, 2), (1, 4), (2, 3), (3, 2), (4, 4), (2, 0)], [(0, 1), (1, 2), (2, 3)])
r = reverse_graph(g2)
print("reversed successors of 2:", r.successors(2).tolist(), "involution:", reverse_graph(r) == g2)
print("same cyclic set:", np.array_equal(cyclic_cells(r), cyclic_cells(g2)))
