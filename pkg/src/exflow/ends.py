"""Recurrent components, the multi-resolution end tree and basin assignment.

On a cubical grid the path components and the components of an open cell
union coincide, so one construction serves both end spaces.  An *end* is a
branch of the component tree that survives to the finest level; each end
is identified with its leaf component.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import ComponentCycle, NestingViolation
from .graph import FlowGraph, backward_reach, cyclic_cells, scc_condensation

__all__ = [
    "ComponentPartition",
    "EndTree",
    "BasinMap",
    "EndVerdict",
    "recurrent_components",
    "build_end_tree",
    "assign_basins",
    "representability_report",
    "morse_like_graph",
]


@dataclass(frozen=True, eq=False)
class ComponentPartition:
    """Adjacency components of the cyclic cells at one subdivision level.

    ``component_of[v]`` is the component id of a recurrent cell and ``-1``
    for every other cell.
    """

    level: int
    components: list[np.ndarray]
    component_of: np.ndarray

    def __len__(self):
        return len(self.components)

    @property
    def recurrent(self) -> np.ndarray:
        return np.flatnonzero(self.component_of >= 0)


def _union_find_labels(n: int, a: list[int], b: list[int]) -> np.ndarray:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for x, y in zip(a, b):
        rx, ry = find(x), find(y)
        if rx != ry:
            # keep the smaller index as root so roots are component minima
            if rx < ry:
                parent[ry] = rx
            else:
                parent[rx] = ry
    return np.array([find(x) for x in range(n)], dtype=np.int64)


def recurrent_components(g: FlowGraph, level: int = 0) -> ComponentPartition:
    """Split the cyclic cells into adjacency-connected components.

    Components are numbered by their smallest cell.
    """
    cyc = cyclic_cells(g)
    local = np.full(g.n_cells, -1, dtype=np.int64)
    local[cyc] = np.arange(cyc.size)
    e = g.adj_edges()
    keep = (local[e[:, 0]] >= 0) & (local[e[:, 1]] >= 0)
    roots = _union_find_labels(cyc.size, local[e[keep, 0]].tolist(), local[e[keep, 1]].tolist())
    uniq, labels = np.unique(roots, return_inverse=True)
    component_of = np.full(g.n_cells, -1, dtype=np.int64)
    component_of[cyc] = labels
    comps = [cyc[labels == i] for i in range(uniq.size)]
    return ComponentPartition(level, comps, component_of)


@dataclass(frozen=True, eq=False)
class EndTree:
    """Component partitions per level with parent links between consecutive levels.

    ``parent[l]`` maps component ids of level ``l`` to component ids of level
    ``l - 1`` (``parent[0]`` is empty).  ``ends`` are the branches reaching the
    finest level, written root first; ``dead_branches`` end at a coarser level
    because no finer component projects into their last node.
    """

    nodes: list[ComponentPartition]
    parent: list[np.ndarray]
    ends: list[tuple[int, ...]]
    dead_branches: list[tuple[int, ...]]

    @property
    def depth(self) -> int:
        return len(self.nodes) - 1

    def as_dict(self) -> dict:
        return {
            "levels": [len(p) for p in self.nodes],
            "parents": [p.tolist() for p in self.parent],
            "ends": [list(b) for b in self.ends],
            "dead_branches": [list(b) for b in self.dead_branches],
        }


def build_end_tree(
    partitions: Sequence[ComponentPartition], projections: Sequence[np.ndarray]
) -> EndTree:
    """Link component partitions ordered coarse to fine.

    ``projections[l]`` maps every cell of level ``l + 1`` to the cell of level
    ``l`` containing it.
    """
    if len(projections) != len(partitions) - 1:
        raise ValueError("need exactly one projection per pair of consecutive levels")
    parents = [np.empty(0, dtype=np.int64)]
    for lvl, proj in enumerate(projections):
        coarse, fine = partitions[lvl], partitions[lvl + 1]
        proj = np.asarray(proj, dtype=np.int64)
        par = np.empty(len(fine), dtype=np.int64)
        for cid, cells in enumerate(fine.components):
            targets = np.unique(coarse.component_of[proj[cells]])
            if targets.size != 1 or targets[0] < 0:
                where = "outside the coarse recurrent set" if (targets < 0).any() else (
                    f"across coarse components {targets.tolist()}"
                )
                raise NestingViolation(
                    f"level {lvl + 1} component {cid} projects {where}"
                )
            par[cid] = targets[0]
        parents.append(par)

    ends, dead = [], []
    for lvl, part in enumerate(partitions):
        if lvl + 1 < len(partitions):
            has_child = np.zeros(len(part), dtype=bool)
            has_child[parents[lvl + 1]] = True
            leaves = np.flatnonzero(~has_child).tolist()
        else:
            leaves = list(range(len(part)))
        for leaf in leaves:
            branch = [leaf]
            for up in range(lvl, 0, -1):
                branch.append(int(parents[up][branch[-1]]))
            (ends if lvl == len(partitions) - 1 else dead).append(tuple(reversed(branch)))
    return EndTree(list(partitions), parents, ends, dead)


@dataclass(frozen=True, eq=False)
class BasinMap:
    """Cell to end assignment.

    ``resolved[v]`` is the end id of ``v`` or ``-1``; unresolved cells map to
    the set of ends they can reach in ``unresolved``.
    """

    resolved: np.ndarray
    unresolved: dict[int, frozenset]
    n_ends: int
    recurrent: np.ndarray = field(repr=False)

    def end_counts(self) -> list[int]:
        r = self.resolved[self.resolved >= 0]
        return np.bincount(r, minlength=self.n_ends).tolist()

    def basin(self, end: int) -> np.ndarray:
        return np.flatnonzero(self.resolved == end)

    @property
    def n_unresolved(self) -> int:
        return len(self.unresolved)


def _scc_reach_bits(g: FlowGraph, p: ComponentPartition) -> list[int]:
    """Bitset of components whose cells each SCC can reach (including its own)."""
    cond = scc_condensation(g)
    bits = [0] * cond.n_sccs
    for s in range(cond.n_sccs):
        for c in np.unique(p.component_of[cond.scc_members[s]]).tolist():
            if c >= 0:
                bits[s] |= 1 << c
    succ: list[list[int]] = [[] for _ in range(cond.n_sccs)]
    for a, b in cond.dag_edges.tolist():
        succ[a].append(b)
    for s in cond.topo_order[::-1].tolist():
        acc = bits[s]
        for t in succ[s]:
            acc |= bits[t]
        bits[s] = acc
    return bits


def _members(bits: int) -> frozenset:
    out, i = [], 0
    while bits:
        if bits & 1:
            out.append(i)
        bits >>= 1
        i += 1
    return frozenset(out)


def assign_basins(g: FlowGraph, p: ComponentPartition) -> BasinMap:
    """Recurrent cells keep their own component; any other cell is resolved
    iff exactly one component is dynamics-reachable from it."""
    cond = scc_condensation(g)
    bits = _scc_reach_bits(g, p)
    single = np.array(
        [x.bit_length() - 1 if x and not x & (x - 1) else -1 for x in bits], dtype=np.int64
    )
    resolved = p.component_of.copy()
    transient = np.flatnonzero(resolved < 0)
    resolved[transient] = single[cond.scc_of[transient]]
    unresolved = {
        v: _members(bits[s])
        for v, s in zip(
            np.flatnonzero(resolved < 0).tolist(),
            cond.scc_of[resolved < 0].tolist(),
        )
    }
    return BasinMap(resolved, unresolved, len(p), p.component_of >= 0)


@dataclass(frozen=True)
class EndVerdict:
    end: int
    omega_representable: bool
    e_representable: bool
    sound: bool
    self_only: bool

    def as_dict(self) -> dict:
        return {
            "end": self.end,
            "omega_representable": self.omega_representable,
            "e_representable": self.e_representable,
            "sound": self.sound,
            "self_only": self.self_only,
        }


def representability_report(
    g: FlowGraph, p: ComponentPartition, b: BasinMap
) -> list[EndVerdict]:
    """Per-end verdicts.

    ``omega_representable``: some cell resolves to the end.
    ``e_representable``: some cell resolved to the end reaches a recurrent
    cell of its component.
    ``sound``: every non-recurrent cell resolved to the end reaches no
    recurrent cell outside the end's component.  Checked with backward
    searches from each component, independently of the basin sweep.
    """
    reaches = [g.mask(backward_reach(g, cells)) for cells in p.components]
    out = []
    for a, cells in enumerate(p.components):
        basin = b.basin(a)
        transient = basin[~b.recurrent[basin]]
        sound = True
        for other, mask in enumerate(reaches):
            if other != a and mask[transient].any():
                sound = False
                break
        out.append(
            EndVerdict(
                end=a,
                omega_representable=basin.size > 0,
                e_representable=bool(reaches[a][basin].any()),
                sound=sound,
                self_only=bool(transient.size == 0),
            )
        )
    return out


def morse_like_graph(g: FlowGraph, p: ComponentPartition) -> list[tuple[int, int]]:
    """Edges ``A -> B`` between distinct components when a cell of ``A`` reaches ``B``.

    Raises :class:`ComponentCycle` if two components reach each other.
    """
    cond = scc_condensation(g)
    bits = _scc_reach_bits(g, p)
    k = len(p)
    edges = set()
    for a, cells in enumerate(p.components):
        acc = 0
        for s in np.unique(cond.scc_of[cells]).tolist():
            acc |= bits[s]
        for bnode in _members(acc & ~(1 << a)):
            edges.add((a, bnode))
    indeg = [0] * k
    out: list[list[int]] = [[] for _ in range(k)]
    for a, bnode in edges:
        out[a].append(bnode)
        indeg[bnode] += 1
    queue = [v for v in range(k) if indeg[v] == 0]
    seen = 0
    while queue:
        v = queue.pop()
        seen += 1
        for w in out[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                queue.append(w)
    if seen != k:
        stuck = sorted(v for v in range(k) if indeg[v] > 0)
        raise ComponentCycle(f"components {stuck} reach each other dynamically")
    return sorted(edges)


def end_of_cells(p: ComponentPartition, cells) -> Optional[int]:
    """Component id shared by ``cells``, or ``None`` if they are split or not recurrent."""
    ids = np.unique(p.component_of[np.asarray(cells, dtype=np.int64)])
    return int(ids[0]) if ids.size == 1 and ids[0] >= 0 else None
