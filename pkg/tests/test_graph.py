import numpy as np
import pytest
from hypothesis import given, settings

import oracles
from conftest import small_graphs
from exflow import (
    FlowGraph,
    SourceCellWithoutPredecessor,
    ValidationError,
    big_omega,
    cyclic_cells,
    eventual_image,
    forward_reach,
    inv_set,
    is_absorbing,
    omega_limit_cell,
    reverse_graph,
    scc_condensation,
)
from exflow.graph import image


def as_set(a):
    return set(np.asarray(a).tolist())


class TestConstruction:
    def test_rejects_cell_without_successor(self):
        with pytest.raises(ValidationError, match="F-totality"):
            FlowGraph.from_edges(2, [(0, 1)])

    def test_rejects_self_adjacency(self):
        with pytest.raises(ValidationError, match="irreflexive"):
            FlowGraph.from_edges(1, [(0, 0)], [(0, 0)])

    def test_rejects_out_of_range(self):
        with pytest.raises(ValidationError):
            FlowGraph.from_edges(2, [(0, 1), (1, 2)])

    def test_adjacency_is_symmetrized(self, g1):
        assert as_set(g1.neighbors(1)) == {0, 2}
        assert g1.adj_edges().tolist() == [[0, 1], [1, 2], [2, 3]]

    def test_duplicate_edges_collapse(self):
        g = FlowGraph.from_edges(2, [(0, 1), (0, 1), (1, 0)])
        assert g.dyn_indices.size == 2

    def test_arrays_are_read_only(self, g1):
        with pytest.raises(ValueError):
            g1.dyn_indices[0] = 3


class TestScc:
    def test_g1(self, g1):
        cond = scc_condensation(g1)
        blocks = [m.tolist() for m in cond.scc_members]
        # brute-force mutual reachability
        n, succ = 5, oracles.succ_masks(5, [(0, 1), (1, 2), (1, 4), (2, 3), (3, 2), (4, 4)])
        assert blocks == oracles.sccs(succ) == [[0], [1], [2, 3], [4]]
        assert cond.cyclic_flag.tolist() == [False, False, True, True]

    def test_single_self_loop(self):
        cond = scc_condensation(FlowGraph.from_edges(1, [(0, 0)]))
        assert cond.n_sccs == 1 and cond.cyclic_flag.tolist() == [True]

    def test_path(self, path3):
        cond = scc_condensation(path3)
        assert [m.tolist() for m in cond.scc_members] == [[0], [1], [2]]
        assert cond.cyclic_flag.tolist() == [False, False, True]

    def test_topological_order(self, g1):
        cond = scc_condensation(g1)
        pos = {s: i for i, s in enumerate(cond.topo_order.tolist())}
        assert all(pos[a] < pos[b] for a, b in cond.dag_edges.tolist())

    def test_long_cycle_is_not_recursive(self):
        n = 20000
        g = FlowGraph.from_edges(n, [(v, (v + 1) % n) for v in range(n)])
        assert scc_condensation(g).n_sccs == 1


class TestCyclicAndReach:
    def test_cyclic_g1(self, g1):
        succ = oracles.succ_masks(5, [(0, 1), (1, 2), (1, 4), (2, 3), (3, 2), (4, 4)])
        assert as_set(cyclic_cells(g1)) == {2, 3, 4} == set(oracles.cells_of(oracles.cyclic(succ)))

    def test_all_self_loops(self, loops4):
        assert as_set(cyclic_cells(loops4)) == {0, 1, 2, 3}

    @given(small_graphs())
    def test_never_empty(self, graph):
        n, dyn, adj = graph
        assert cyclic_cells(FlowGraph.from_edges(n, dyn, adj)).size > 0

    def test_forward_reach(self, g1):
        assert as_set(forward_reach(g1, [0])) == {0, 1, 2, 3, 4}
        assert as_set(forward_reach(g1, [])) == set()
        assert as_set(forward_reach(g1, [4])) == {4}

    def test_image_and_mask_inputs(self, g1):
        m = np.zeros(5, dtype=bool)
        m[1] = True
        assert as_set(image(g1, m)) == {2, 4}
        assert as_set(image(g1, {1})) == {2, 4}


class TestFiltration:
    def test_g1(self, g1):
        f = eventual_image(g1)
        assert [as_set(level) for level in f.levels] == [{0, 1, 2, 3, 4}, {1, 2, 3, 4}, {2, 3, 4}]
        assert f.k_star == 2

    def test_all_self_loops(self, loops4):
        f = eventual_image(loops4)
        assert f.k_star == 0 and as_set(f.ei) == {0, 1, 2, 3}

    def test_path(self, path3):
        f = eventual_image(path3)
        assert f.k_star == 2 and as_set(f.ei) == {2}

    def test_absorbing(self, g1):
        assert is_absorbing(g1, {2, 3, 4})
        assert is_absorbing(g1, range(5))
        assert not is_absorbing(g1, {3, 4})


class TestOmega:
    def test_omega_limit_cell(self, g1):
        succ = oracles.succ_masks(5, [(0, 1), (1, 2), (1, 4), (2, 3), (3, 2), (4, 4)])
        assert as_set(omega_limit_cell(g1, 0)) == {2, 3, 4}
        assert oracles.cells_of(oracles.omega_limit(succ, 0)) == [2, 3, 4]
        assert as_set(omega_limit_cell(g1, 4)) == {4}

    def test_fixed_point(self, loops4):
        assert as_set(omega_limit_cell(loops4, 2)) == {2}

    def test_big_omega(self, g1, loops4, path3):
        assert as_set(big_omega(g1)) == {2, 3, 4}
        assert as_set(big_omega(loops4)) == {0, 1, 2, 3}
        assert as_set(big_omega(path3)) == {2}


class TestInv:
    def test_examples(self, g1):
        assert as_set(inv_set(g1, {1, 2, 3})) == {2, 3}
        assert as_set(inv_set(g1, set())) == set()
        assert as_set(inv_set(g1, {2, 3, 4})) == {2, 3, 4}

    def test_needs_predecessor_inside(self):
        # 0 -> 1 -> 1: cell 0 has a successor in a but no predecessor there
        g = FlowGraph.from_edges(2, [(0, 1), (1, 1)])
        assert as_set(inv_set(g, {0, 1})) == {1}


class TestReverse:
    def test_involution(self):
        dyn = [(0, 1), (1, 2), (1, 4), (2, 3), (3, 2), (4, 4), (2, 0)]
        g = FlowGraph.from_edges(5, dyn, [(0, 1), (1, 2), (2, 3)])
        r = reverse_graph(g)
        assert as_set(r.successors(2)) == {1, 3}
        assert reverse_graph(r) == g
        assert np.array_equal(r.adj_edges(), g.adj_edges())

    def test_two_cycle_is_symmetric(self):
        g = FlowGraph.from_edges(2, [(0, 1), (1, 0)])
        assert reverse_graph(g) == g

    def test_source_cell(self, g1):
        with pytest.raises(SourceCellWithoutPredecessor) as info:
            reverse_graph(g1)
        assert info.value.cells == [0]


@settings(max_examples=300, deadline=None)
@given(small_graphs())
def test_kernel_properties(graph):
    n, dyn, adj = graph
    g = FlowGraph.from_edges(n, dyn, adj)
    succ = oracles.succ_masks(n, dyn)
    f = eventual_image(g)
    ei = as_set(f.ei)
    cyc = as_set(cyclic_cells(g))

    assert ei == as_set(forward_reach(g, sorted(cyc)))
    assert as_set(big_omega(g)) == ei
    assert cyc <= ei
    assert [oracles.bits(level.tolist()) for level in f.levels] == oracles.iterated_images(succ)
    assert as_set(image(g, f.ei)) == ei
    sizes = f.sizes()
    assert all(a > b for a, b in zip(sizes, sizes[1:]))
    for v in range(n):
        assert oracles.bits(omega_limit_cell(g, v).tolist()) == oracles.omega_limit(succ, v)
    try:
        r = reverse_graph(g)
    except SourceCellWithoutPredecessor:
        pass
    else:
        assert reverse_graph(r) == g
        assert as_set(cyclic_cells(r)) == cyc
