import numpy as np
import pytest
from hypothesis import given, settings

import oracles
from conftest import small_graphs
from exflow import (
    ComponentCycle,
    FlowGraph,
    NestingViolation,
    assign_basins,
    build_end_tree,
    cyclic_cells,
    morse_like_graph,
    recurrent_components,
    representability_report,
    reverse_graph,
)
from exflow.errors import SourceCellWithoutPredecessor


def comps(p):
    return [c.tolist() for c in p.components]


class TestComponents:
    def test_g1(self, g1):
        p = recurrent_components(g1)
        assert comps(p) == [[2, 3], [4]]
        assert p.component_of.tolist() == [-1, -1, 0, 0, 1]

    def test_one_component(self, loops4):
        assert comps(recurrent_components(loops4)) == [[0, 1, 2, 3]]

    def test_two_disjoint_cycles(self):
        g = FlowGraph.from_edges(4, [(0, 1), (1, 0), (2, 3), (3, 2)], [(0, 1), (2, 3)])
        assert comps(recurrent_components(g)) == [[0, 1], [2, 3]]


def _partition(components, n):
    from exflow.ends import ComponentPartition

    of = np.full(n, -1)
    for i, c in enumerate(components):
        of[c] = i
    return ComponentPartition(0, [np.array(c) for c in components], of)


class TestEndTree:
    def test_single_level(self, g1):
        t = build_end_tree([recurrent_components(g1)], [])
        assert t.ends == [(0,), (1,)]
        assert t.dead_branches == []

    def test_split(self):
        coarse = _partition([[0, 1]], 2)
        fine = _partition([[0, 1], [2, 3]], 4)
        proj = np.array([0, 0, 1, 1])
        t = build_end_tree([coarse, fine], [proj])
        assert t.parent[1].tolist() == [0, 0]
        assert t.ends == [(0, 0), (0, 1)]

    def test_dead_branch(self):
        coarse = _partition([[0], [1]], 2)
        fine = _partition([[0, 1]], 4)
        t = build_end_tree([coarse, fine], [np.array([0, 0, 1, 1])])
        assert t.ends == [(0, 0)]
        assert t.dead_branches == [(1,)]

    def test_projection_outside_recurrent_set(self):
        coarse = _partition([[0]], 2)
        fine = _partition([[2]], 4)
        with pytest.raises(NestingViolation, match="outside"):
            build_end_tree([coarse, fine], [np.array([0, 0, 1, 1])])

    def test_projection_across_components(self):
        coarse = _partition([[0], [1]], 2)
        fine = _partition([[1, 2]], 4)
        with pytest.raises(NestingViolation, match="across"):
            build_end_tree([coarse, fine], [np.array([0, 0, 1, 1])])


class TestBasins:
    def test_g1(self, g1):
        b = assign_basins(g1, recurrent_components(g1))
        assert b.resolved.tolist() == [-1, -1, 0, 0, 1]
        assert b.unresolved == {0: frozenset({0, 1}), 1: frozenset({0, 1})}
        assert b.end_counts() == [2, 1]

    def test_one_component(self, loops4):
        b = assign_basins(loops4, recurrent_components(loops4))
        assert b.resolved.tolist() == [0, 0, 0, 0] and not b.unresolved

    def test_path(self, path3):
        b = assign_basins(path3, recurrent_components(path3))
        assert b.resolved.tolist() == [0, 0, 0]


class TestRepresentability:
    def test_g1(self, g1):
        p = recurrent_components(g1)
        verdicts = representability_report(g1, p, assign_basins(g1, p))
        assert [(v.omega_representable, v.e_representable, v.sound) for v in verdicts] == [
            (True, True, True),
            (True, True, True),
        ]

    def test_self_only_end(self):
        # 0 <-> 1 is fed by nothing; 3 drains into the fixed cell 2
        g = FlowGraph.from_edges(4, [(0, 1), (1, 0), (1, 2), (2, 2), (3, 2)], [(0, 1), (2, 3)])
        p = recurrent_components(g)
        verdicts = representability_report(g, p, assign_basins(g, p))
        assert comps(p) == [[0, 1], [2]]
        assert verdicts[0].omega_representable and verdicts[0].self_only
        assert not verdicts[1].self_only

    def test_single_component(self, loops4):
        p = recurrent_components(loops4)
        (v,) = representability_report(loops4, p, assign_basins(loops4, p))
        assert v.omega_representable and v.e_representable and v.sound


class TestMorse:
    def test_g1_has_no_edges(self, g1):
        assert morse_like_graph(g1, recurrent_components(g1)) == []

    def test_connecting_orbit(self):
        # saddle-like: fixed 0, orbit 0 -> 1 -> 2, fixed 2
        g = FlowGraph.from_edges(4, [(0, 0), (0, 1), (1, 2), (2, 2), (3, 1)], [(0, 3)])
        assert morse_like_graph(g, recurrent_components(g)) == [(0, 1)]

    def test_one_component(self, loops4):
        assert morse_like_graph(loops4, recurrent_components(loops4)) == []

    def test_cycle_between_components(self):
        g = FlowGraph.from_edges(2, [(0, 1), (1, 0)])
        with pytest.raises(ComponentCycle):
            morse_like_graph(g, recurrent_components(g))


@settings(max_examples=300, deadline=None)
@given(small_graphs())
def test_basin_properties(graph):
    n, dyn, adj = graph
    g = FlowGraph.from_edges(n, dyn, adj)
    p = recurrent_components(g)
    b = assign_basins(g, p)

    ref_comps, ref = oracles.basins(oracles.succ_masks(n, dyn), oracles.adj_masks(n, adj))
    assert [oracles.bits(c.tolist()) for c in p.components] == ref_comps
    for v in range(n):
        got = b.unresolved.get(v, int(b.resolved[v]))
        assert got == ref[v]

    resolved = set(np.flatnonzero(b.resolved >= 0).tolist())
    assert resolved.isdisjoint(b.unresolved) and resolved | set(b.unresolved) == set(range(n))
    assert all(len(s) >= 2 for s in b.unresolved.values())
    rec = p.recurrent
    assert np.array_equal(b.resolved[rec], p.component_of[rec])
    assert all(v.sound for v in representability_report(g, p, b))

    t1 = build_end_tree([p], [])
    t2 = build_end_tree([recurrent_components(FlowGraph.from_edges(n, dyn, adj))], [])
    assert t1.ends == t2.ends

    try:
        r = reverse_graph(g)
    except SourceCellWithoutPredecessor:
        return
    assert np.array_equal(recurrent_components(r).recurrent, rec)
    rb = assign_basins(r, recurrent_components(r))
    assert (rb.resolved >= 0).sum() + rb.n_unresolved == n
    assert np.array_equal(cyclic_cells(r), cyclic_cells(g))
