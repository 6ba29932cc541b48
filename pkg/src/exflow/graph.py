"""Combinatorial kernel: the multivalued cell map and its reachability primitives.

A :class:`FlowGraph` is the one-step shadow of a flow on a finite set of
cells.  Dynamics edges ``v -> w`` say the time-tau image of cell ``v`` may
meet cell ``w``; adjacency edges record which cells touch in phase space.

Cell sets are accepted either as an iterable of cell ids or as a boolean
mask of length ``n_cells``.  Every function returns cell sets as sorted
``int64`` arrays so results are canonical and cheap to compare.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import SourceCellWithoutPredecessor, ValidationError

__all__ = [
    "FlowGraph",
    "GridLabels",
    "CondensationDag",
    "AbsorbingFiltration",
    "scc_condensation",
    "cyclic_cells",
    "forward_reach",
    "image",
    "eventual_image",
    "is_absorbing",
    "omega_limit_cell",
    "big_omega",
    "inv_set",
    "reverse_graph",
]


@dataclass(frozen=True)
class GridLabels:
    """Geometry attached to a graph built on a rectangular cubical grid.

    Cell ``iy * nx + ix`` is the box ``[x0 + ix*hx, x0 + (ix+1)*hx] x [...]``,
    i.e. cells are numbered row-major starting from the ``(lo, lo)`` corner.
    ``infinity`` is the id of the one-point-compactification vertex, if any.
    """

    dims: tuple[int, int]
    box: tuple[tuple[float, float], tuple[float, float]]
    boundary: tuple[str, str]
    infinity: Optional[int] = None

    @property
    def n_grid(self) -> int:
        return self.dims[0] * self.dims[1]

    @property
    def cell_area(self) -> float:
        (x0, x1), (y0, y1) = self.box
        return (x1 - x0) / self.dims[0] * (y1 - y0) / self.dims[1]

    def coords(self, cells) -> np.ndarray:
        """Grid ``(ix, iy)`` pairs for grid cells (the infinity vertex is not allowed)."""
        cells = np.asarray(cells, dtype=np.int64)
        nx = self.dims[0]
        return np.stack([cells % nx, cells // nx], axis=-1)

    def cell_of_point(self, pts) -> np.ndarray:
        """Cell id containing each point, or ``infinity`` (``-1`` without one) if outside."""
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        idx = []
        inside = np.ones(len(pts), dtype=bool)
        for axis in range(2):
            lo, hi = self.box[axis]
            n = self.dims[axis]
            i = np.floor((pts[:, axis] - lo) / (hi - lo) * n).astype(np.int64)
            if self.boundary[axis] == "periodic":
                i %= n
            else:
                inside &= (i >= 0) & (i < n)
            idx.append(i)
        out = idx[1] * self.dims[0] + idx[0]
        out[~inside] = -1 if self.infinity is None else self.infinity
        return out


def _csr(n: int, src: np.ndarray, dst: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    src = np.asarray(src, dtype=np.int64)
    dst = np.asarray(dst, dtype=np.int64)
    if src.size:
        key = np.unique(src * n + dst)
        src, dst = key // n, key % n
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(indptr, src + 1, 1)
    np.cumsum(indptr, out=indptr)
    return indptr, dst


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class FlowGraph:
    """Finite multivalued cell map plus spatial adjacency.

    Build instances with :meth:`from_edges`; the CSR arrays are read-only.
    """

    n_cells: int
    dyn_indptr: np.ndarray
    dyn_indices: np.ndarray
    adj_indptr: np.ndarray
    adj_indices: np.ndarray
    labels: Optional[GridLabels] = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @classmethod
    def from_edges(
        cls,
        n_cells: int,
        dyn: Iterable[Sequence[int]] | np.ndarray,
        adj: Iterable[Sequence[int]] | np.ndarray = (),
        labels: Optional[GridLabels] = None,
        validate: bool = True,
    ) -> "FlowGraph":
        n = int(n_cells)
        dyn = np.asarray(list(dyn) if not isinstance(dyn, np.ndarray) else dyn, dtype=np.int64)
        adj = np.asarray(list(adj) if not isinstance(adj, np.ndarray) else adj, dtype=np.int64)
        dyn = dyn.reshape(-1, 2)
        adj = adj.reshape(-1, 2)
        if validate:
            if n < 1:
                raise ValidationError("n_cells must be positive")
            for name, e in (("dyn", dyn), ("adj", adj)):
                if e.size and (e.min() < 0 or e.max() >= n):
                    raise ValidationError(f"{name} edge endpoint outside 0..{n - 1}")
            if adj.size and np.any(adj[:, 0] == adj[:, 1]):
                raise ValidationError("adjacency must be irreflexive")
        adj = adj[adj[:, 0] != adj[:, 1]]
        both = np.concatenate([adj, adj[:, ::-1]])
        dptr, didx = _csr(n, dyn[:, 0], dyn[:, 1])
        aptr, aidx = _csr(n, both[:, 0], both[:, 1])
        g = cls(n, _frozen(dptr), _frozen(didx), _frozen(aptr), _frozen(aidx), labels)
        if validate:
            missing = np.flatnonzero(np.diff(dptr) == 0)
            if missing.size:
                raise ValidationError(
                    f"F-totality: cells without dynamics successor: {missing[:10].tolist()}"
                )
        return g

    @property
    def all_cells(self) -> np.ndarray:
        return np.arange(self.n_cells, dtype=np.int64)

    def successors(self, v: int) -> np.ndarray:
        return self.dyn_indices[self.dyn_indptr[v] : self.dyn_indptr[v + 1]]

    def neighbors(self, v: int) -> np.ndarray:
        return self.adj_indices[self.adj_indptr[v] : self.adj_indptr[v + 1]]

    @property
    def dyn_src(self) -> np.ndarray:
        """Source cell of every dynamics edge, aligned with ``dyn_indices``."""
        if "dyn_src" not in self._cache:
            self._cache["dyn_src"] = _frozen(np.repeat(self.all_cells, np.diff(self.dyn_indptr)))
        return self._cache["dyn_src"]

    @property
    def adj_src(self) -> np.ndarray:
        if "adj_src" not in self._cache:
            self._cache["adj_src"] = _frozen(np.repeat(self.all_cells, np.diff(self.adj_indptr)))
        return self._cache["adj_src"]

    def dyn_edges(self) -> np.ndarray:
        return np.stack([self.dyn_src, self.dyn_indices], axis=1)

    def adj_edges(self) -> np.ndarray:
        """Adjacency as ``(a, b)`` pairs with ``a < b``."""
        e = np.stack([self.adj_src, self.adj_indices], axis=1)
        return e[e[:, 0] < e[:, 1]]

    def mask(self, cells) -> np.ndarray:
        """Boolean mask for a cell set given as ids or as a mask."""
        if isinstance(cells, (set, frozenset)):
            cells = sorted(cells)
        a = np.asarray(cells)
        if a.dtype == bool:
            if a.shape != (self.n_cells,):
                raise ValidationError("cell mask has the wrong length")
            return a.copy()
        m = np.zeros(self.n_cells, dtype=bool)
        if a.size:
            m[a.astype(np.int64).ravel()] = True
        return m

    def transposed_csr(self) -> tuple[np.ndarray, np.ndarray]:
        if "transpose" not in self._cache:
            self._cache["transpose"] = _csr(self.n_cells, self.dyn_indices, self.dyn_src)
        return self._cache["transpose"]

    def __eq__(self, other):
        if not isinstance(other, FlowGraph):
            return NotImplemented
        return (
            self.n_cells == other.n_cells
            and np.array_equal(self.dyn_indptr, other.dyn_indptr)
            and np.array_equal(self.dyn_indices, other.dyn_indices)
            and np.array_equal(self.adj_indptr, other.adj_indptr)
            and np.array_equal(self.adj_indices, other.adj_indices)
        )

    __hash__ = None


@dataclass(frozen=True, eq=False)
class CondensationDag:
    """Strongly connected components of the dynamics and the DAG between them.

    SCC ids are ordered by smallest member cell.  ``topo_order`` lists SCC ids
    so that every DAG edge points from an earlier to a later entry.
    """

    scc_of: np.ndarray
    scc_members: list[np.ndarray]
    dag_edges: np.ndarray
    cyclic_flag: np.ndarray
    topo_order: np.ndarray

    @property
    def n_sccs(self) -> int:
        return len(self.scc_members)


@dataclass(frozen=True, eq=False)
class AbsorbingFiltration:
    """Iterated images ``Im_0 = all cells ⊇ Im_1 ⊇ ... ⊇ Im_k* = EI``.

    Each level is an absorbing set; together they form a cofinal base of
    the combinatorial externology.
    """

    levels: tuple[np.ndarray, ...]
    k_star: int

    @property
    def ei(self) -> np.ndarray:
        return self.levels[-1]

    def sizes(self) -> list[int]:
        return [int(level.size) for level in self.levels]


def _tarjan(n: int, indptr: np.ndarray, indices: np.ndarray) -> np.ndarray:
    """Iterative Tarjan.  Returns a component label per cell; labels are
    assigned sinks first, i.e. in reverse topological order."""
    ptr = indptr.tolist()
    nbr = indices.tolist()
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    comp = [-1] * n
    stack: list[int] = []
    counter = 0
    n_comp = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, ptr[root])]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, i = work[-1]
            end = ptr[v + 1]
            descended = False
            while i < end:
                w = nbr[i]
                i += 1
                if index[w] == -1:
                    work[-1] = (v, i)
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, ptr[w]))
                    descended = True
                    break
                if on_stack[w] and index[w] < low[v]:
                    low[v] = index[w]
            if descended:
                continue
            work.pop()
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = n_comp
                    if w == v:
                        break
                n_comp += 1
            if work:
                u = work[-1][0]
                if low[v] < low[u]:
                    low[u] = low[v]
    return np.asarray(comp, dtype=np.int64)


def scc_condensation(g: FlowGraph) -> CondensationDag:
    """Condense the dynamics into its SCC DAG (cached on the graph)."""
    if "scc" in g._cache:
        return g._cache["scc"]
    raw = _tarjan(g.n_cells, g.dyn_indptr, g.dyn_indices)
    n_comp = int(raw.max()) + 1
    # canonical relabelling: order components by their smallest cell
    first = np.full(n_comp, g.n_cells, dtype=np.int64)
    np.minimum.at(first, raw, g.all_cells)
    order = np.argsort(first, kind="stable")
    relabel = np.empty(n_comp, dtype=np.int64)
    relabel[order] = np.arange(n_comp)
    scc_of = relabel[raw]

    sort = np.argsort(scc_of, kind="stable")
    bounds = np.searchsorted(scc_of[sort], np.arange(n_comp + 1))
    members = [_frozen(sort[bounds[i] : bounds[i + 1]]) for i in range(n_comp)]

    e = g.dyn_edges()
    cs, cd = scc_of[e[:, 0]], scc_of[e[:, 1]]
    self_loop = e[:, 0] == e[:, 1]
    cyclic = np.diff(bounds) > 1
    cyclic[cs[self_loop]] = True
    between = cs != cd
    dag = np.unique(np.stack([cs[between], cd[between]], axis=1), axis=0).reshape(-1, 2)
    # Tarjan labels come out sinks-first; reversing gives a topological order
    topo = relabel[np.arange(n_comp)[::-1]]
    cond = CondensationDag(_frozen(scc_of), members, _frozen(dag), _frozen(cyclic), _frozen(topo))
    g._cache["scc"] = cond
    return cond


def cyclic_cells(g: FlowGraph) -> np.ndarray:
    """Cells lying on a dynamics cycle (the combinatorial periodic set)."""
    cond = scc_condensation(g)
    return np.flatnonzero(cond.cyclic_flag[cond.scc_of])


def _step(src: np.ndarray, dst: np.ndarray, m: np.ndarray) -> np.ndarray:
    out = np.zeros(m.size, dtype=bool)
    out[dst[m[src]]] = True
    return out


def _reach_mask(src, dst, seed: np.ndarray) -> np.ndarray:
    seen = seed.copy()
    frontier = seed
    while frontier.any():
        nxt = _step(src, dst, frontier)
        frontier = nxt & ~seen
        seen |= nxt
    return seen


def forward_reach(g: FlowGraph, cells) -> np.ndarray:
    """Smallest superset of ``cells`` closed under the dynamics."""
    return np.flatnonzero(_reach_mask(g.dyn_src, g.dyn_indices, g.mask(cells)))


def backward_reach(g: FlowGraph, cells) -> np.ndarray:
    """Cells from which some cell of ``cells`` is dynamics-reachable."""
    return np.flatnonzero(_reach_mask(g.dyn_indices, g.dyn_src, g.mask(cells)))


def image(g: FlowGraph, cells) -> np.ndarray:
    """One-step image ``F(cells)``."""
    return np.flatnonzero(_step(g.dyn_src, g.dyn_indices, g.mask(cells)))


def eventual_image(g: FlowGraph) -> AbsorbingFiltration:
    """Iterate ``Im_{k+1} = F(Im_k)`` from all cells until it stabilizes."""
    if "filtration" in g._cache:
        return g._cache["filtration"]
    current = np.ones(g.n_cells, dtype=bool)
    levels = [_frozen(g.all_cells)]
    while True:
        nxt = _step(g.dyn_src, g.dyn_indices, current)
        if np.array_equal(nxt, current):
            break
        current = nxt
        levels.append(_frozen(np.flatnonzero(current)))
    filt = AbsorbingFiltration(tuple(levels), len(levels) - 1)
    g._cache["filtration"] = filt
    return filt


def is_absorbing(g: FlowGraph, cells) -> bool:
    """True iff every forward orbit eventually stays inside ``cells``.

    Decided through the equivalence "absorbing iff it contains the eventual image".
    """
    return bool(g.mask(cells)[eventual_image(g).ei].all())


def omega_limit_cell(g: FlowGraph, v: int) -> np.ndarray:
    """Cells reachable from ``v`` by arbitrarily long dynamics paths."""
    cyc = np.zeros(g.n_cells, dtype=bool)
    cyc[cyclic_cells(g)] = True
    reach = _reach_mask(g.dyn_src, g.dyn_indices, g.mask([v]))
    return forward_reach(g, reach & cyc)


def big_omega(g: FlowGraph) -> np.ndarray:
    """Union of :func:`omega_limit_cell` over every cell.

    ``omega(v)`` is the forward closure of the cyclic SCCs reachable from
    ``v``.  Every cyclic SCC is reachable from its own cells, so the union
    over all ``v`` is the forward closure of all cyclic cells.
    """
    cond = scc_condensation(g)
    return forward_reach(g, cond.cyclic_flag[cond.scc_of])


def inv_set(g: FlowGraph, cells) -> np.ndarray:
    """Largest subset of ``cells`` in which every cell keeps a successor and a predecessor.

    These are exactly the cells of ``cells`` on a bi-infinite dynamics path
    that never leaves ``cells``.
    """
    alive = g.mask(cells)
    tptr, tidx = g.transposed_csr()
    src, dst = g.dyn_src, g.dyn_indices
    inside = alive[src] & alive[dst]
    out_deg = np.bincount(src[inside], minlength=g.n_cells)
    in_deg = np.bincount(dst[inside], minlength=g.n_cells)
    queue = np.flatnonzero(alive & ((out_deg == 0) | (in_deg == 0))).tolist()
    alive[queue] = False
    dptr, didx = g.dyn_indptr, g.dyn_indices
    while queue:
        v = queue.pop()
        for w in didx[dptr[v] : dptr[v + 1]].tolist():
            if alive[w]:
                in_deg[w] -= 1
                if in_deg[w] == 0:
                    alive[w] = False
                    queue.append(w)
        for u in tidx[tptr[v] : tptr[v + 1]].tolist():
            if alive[u]:
                out_deg[u] -= 1
                if out_deg[u] == 0:
                    alive[u] = False
                    queue.append(u)
    return np.flatnonzero(alive)


def reverse_graph(g: FlowGraph) -> FlowGraph:
    """Transpose the dynamics; adjacency and labels are kept."""
    orphans = np.flatnonzero(np.bincount(g.dyn_indices, minlength=g.n_cells) == 0)
    if orphans.size:
        raise SourceCellWithoutPredecessor(orphans.tolist())
    e = g.dyn_edges()
    return FlowGraph.from_edges(g.n_cells, e[:, ::-1], g.adj_edges(), labels=g.labels)
