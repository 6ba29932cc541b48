"""From a planar vector field to a :class:`~exflow.graph.FlowGraph`.

The time-tau map is integrated with fixed-step RK4 on a lattice of sample
points per cell (corners, edge midpoints and center by default).  The image
of a cell is the bounding box of its sampled images, inflated by ``bloat``
cells.  Periodic axes wrap; on ``infinity`` axes samples that leave the box
are routed to a single extra vertex that only maps to itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Mapping, Optional

import numpy as np

from .errors import NonFiniteState, UnknownSystem, ValidationError
from .graph import FlowGraph, GridLabels

__all__ = [
    "VectorField",
    "GridSpec",
    "OuterApproxConfig",
    "integrate_tau",
    "build_flow_graph",
    "project_graph",
    "builtin_system",
    "BUILTINS",
]

PERIODIC = "periodic"
INFINITY = "infinity"


@dataclass(frozen=True)
class VectorField:
    """Autonomous planar field ``x' = rhs(x, params)``; ``rhs`` is vectorized over rows."""

    name: str
    params: Mapping[str, float]
    rhs: Callable[[np.ndarray, Mapping[str, float]], np.ndarray] = field(repr=False)
    dimension: int = 2
    sign: float = 1.0

    def eval(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        v = self.rhs(np.atleast_2d(x), self.params)
        return self.sign * (v.reshape(x.shape) if x.ndim == 1 else v)

    def negated(self) -> "VectorField":
        return replace(self, sign=-self.sign)


@dataclass(frozen=True)
class GridSpec:
    """Rectangular grid on ``box``; ``dims`` doubles ``level`` times.

    ``boundary`` holds one policy per axis, ``"periodic"`` or ``"infinity"``.
    """

    box: tuple[tuple[float, float], tuple[float, float]]
    dims: tuple[int, int]
    boundary: tuple[str, str]
    level: int = 0

    def __post_init__(self):
        for lo, hi in self.box:
            if not lo < hi:
                raise ValidationError(f"grid box needs lo < hi, got [{lo}, {hi}]")
        if min(self.dims) < 8:
            raise ValidationError("grid needs at least 8 cells per axis")
        for b in self.boundary:
            if b not in (PERIODIC, INFINITY):
                raise ValidationError(f"unknown boundary policy {b!r}")

    @property
    def cell_dims(self) -> tuple[int, int]:
        return (self.dims[0] << self.level, self.dims[1] << self.level)

    @property
    def has_infinity(self) -> bool:
        return INFINITY in self.boundary

    def at_level(self, level: int) -> "GridSpec":
        return replace(self, level=level)


@dataclass(frozen=True)
class OuterApproxConfig:
    tau: float
    rk_steps: int = 8
    bloat: int = 1
    samples_per_axis: int = 3

    def __post_init__(self):
        if not self.tau > 0:
            raise ValidationError("tau must be positive")
        if self.rk_steps < 4:
            raise ValidationError("rk_steps must be at least 4")
        if self.bloat < 0:
            raise ValidationError("bloat must be non-negative")
        if self.samples_per_axis < 2:
            raise ValidationError("need at least the cell corners as samples")


def integrate_tau(vf: VectorField, cfg: OuterApproxConfig, x) -> np.ndarray:
    """Classical RK4 over time ``cfg.tau`` with ``cfg.rk_steps`` equal steps.

    ``x`` is a point or an ``(n, 2)`` array of points.
    """
    y = np.array(x, dtype=float)
    single = y.ndim == 1
    y = np.atleast_2d(y)
    h = cfg.tau / cfg.rk_steps
    f = vf.eval
    with np.errstate(all="ignore"):
        for _ in range(cfg.rk_steps):
            k1 = f(y)
            k2 = f(y + 0.5 * h * k1)
            k3 = f(y + 0.5 * h * k2)
            k4 = f(y + h * k3)
            y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    bad = ~np.isfinite(y).all(axis=1)
    if bad.any():
        raise NonFiniteState(f"non-finite state after integrating {int(bad.sum())} point(s)")
    return y[0] if single else y


def _sample_points(grid: GridSpec, s: int) -> np.ndarray:
    nx, ny = grid.cell_dims
    (x0, x1), (y0, y1) = grid.box
    hx, hy = (x1 - x0) / nx, (y1 - y0) / ny
    t = np.linspace(0.0, 1.0, s)
    ox, oy = np.meshgrid(t, t, indexing="xy")
    iy, ix = np.divmod(np.arange(nx * ny), nx)
    px = x0 + (ix[:, None] + ox.ravel()[None, :]) * hx
    py = y0 + (iy[:, None] + oy.ravel()[None, :]) * hy
    return np.stack([px, py], axis=-1)


def _grid_adjacency(nx: int, ny: int, boundary) -> np.ndarray:
    iy, ix = np.divmod(np.arange(nx * ny), nx)
    c = np.arange(nx * ny)
    pairs = []
    right = ix < nx - 1
    pairs.append(np.stack([c[right], c[right] + 1], axis=1))
    if boundary[0] == PERIODIC:
        edge = ix == nx - 1
        pairs.append(np.stack([c[edge], c[edge] - (nx - 1)], axis=1))
    up = iy < ny - 1
    pairs.append(np.stack([c[up], c[up] + nx], axis=1))
    if boundary[1] == PERIODIC:
        edge = iy == ny - 1
        pairs.append(np.stack([c[edge], ix[edge]], axis=1))
    return np.concatenate(pairs)


def build_flow_graph(
    vf: VectorField, grid: GridSpec, cfg: OuterApproxConfig
) -> FlowGraph:
    """Outer approximation of the time-tau map on the cells of ``grid``."""
    nx, ny = grid.cell_dims
    n_grid = nx * ny
    s = cfg.samples_per_axis
    pts = _sample_points(grid, s)
    flat = pts.reshape(-1, 2)
    try:
        img = integrate_tau(vf, cfg, flat)
    except NonFiniteState:
        with np.errstate(all="ignore"):
            bad = [
                c for c in range(n_grid)
                if not _finite_image(vf, cfg, pts[c])
            ]
        raise NonFiniteState("non-finite state in cell image", cell=bad[0] if bad else None)
    img = img.reshape(n_grid, s * s, 2)

    lo_idx, hi_idx = [], []
    escaped = np.zeros(n_grid, dtype=bool)
    for axis, n in enumerate((nx, ny)):
        lo, hi = grid.box[axis]
        u = (img[..., axis] - lo) / (hi - lo) * n
        umin, umax = u.min(axis=1), u.max(axis=1)
        # keep far-away images representable as int64
        if grid.boundary[axis] == PERIODIC:
            shift = np.floor(umin / n) * n
            umin, umax = umin - shift, np.minimum(umax - shift, 2.0 * n)
        else:
            pad = n + cfg.bloat + 2.0
            umin, umax = np.clip(umin, -pad, 2 * pad), np.clip(umax, -pad, 2 * pad)
        # cells whose interior meets [umin, umax]; a degenerate box on a grid
        # line still gets the cell above it
        i0 = np.floor(umin).astype(np.int64)
        i1 = np.maximum(np.ceil(umax).astype(np.int64) - 1, i0)
        i0 -= cfg.bloat
        i1 += cfg.bloat
        if grid.boundary[axis] == PERIODIC:
            full = i1 - i0 + 1 >= n
            i0 = np.where(full, 0, i0)
            i1 = np.where(full, n - 1, i1)
        else:
            escaped |= (umin < 0) | (umax > n)
            inside = (i1 >= 0) & (i0 <= n - 1)
            i0 = np.where(inside, np.maximum(i0, 0), 0)
            i1 = np.where(inside, np.minimum(i1, n - 1), -1)
        lo_idx.append(i0)
        hi_idx.append(i1)

    wx = np.maximum(hi_idx[0] - lo_idx[0] + 1, 0)
    wy = np.maximum(hi_idx[1] - lo_idx[1] + 1, 0)
    cnt = wx * wy
    src = np.repeat(np.arange(n_grid), cnt)
    k = np.arange(int(cnt.sum())) - np.repeat(np.cumsum(cnt) - cnt, cnt)
    rwx = np.repeat(wx, cnt)
    gx = np.repeat(lo_idx[0], cnt) + k % rwx
    gy = np.repeat(lo_idx[1], cnt) + k // rwx
    if grid.boundary[0] == PERIODIC:
        gx %= nx
    if grid.boundary[1] == PERIODIC:
        gy %= ny
    dyn = [np.stack([src, gy * nx + gx], axis=1)]
    adj = [_grid_adjacency(nx, ny, grid.boundary)]

    infinity = None
    n_cells = n_grid
    if grid.has_infinity:
        infinity = n_grid
        n_cells += 1
        esc = np.flatnonzero(escaped)
        dyn.append(np.stack([esc, np.full(esc.size, infinity)], axis=1))
        dyn.append(np.array([[infinity, infinity]]))
        iy, ix = np.divmod(esc, nx)
        on_edge = np.zeros(esc.size, dtype=bool)
        if grid.boundary[0] == INFINITY:
            on_edge |= (ix == 0) | (ix == nx - 1)
        if grid.boundary[1] == INFINITY:
            on_edge |= (iy == 0) | (iy == ny - 1)
        edge_cells = esc[on_edge]
        adj.append(np.stack([edge_cells, np.full(edge_cells.size, infinity)], axis=1))

    labels = GridLabels((nx, ny), grid.box, grid.boundary, infinity)
    return FlowGraph.from_edges(n_cells, np.concatenate(dyn), np.concatenate(adj), labels=labels)


def _finite_image(vf, cfg, pts) -> bool:
    try:
        integrate_tau(vf, cfg, pts)
    except NonFiniteState:
        return False
    return True


def project_graph(g: FlowGraph) -> tuple[FlowGraph, np.ndarray]:
    """Coarsen a grid graph by merging 2x2 blocks of cells.

    Returns the coarse graph and the fine-to-coarse cell map.  Dynamics and
    infinity adjacency are pushed forward; face adjacency is rebuilt on the
    coarse grid.
    """
    lab = g.labels
    if lab is None:
        raise ValidationError("only grid graphs can be coarsened")
    nx, ny = lab.dims
    if nx % 2 or ny % 2 or min(nx, ny) < 16:
        raise ValidationError(f"cannot halve a {nx}x{ny} grid")
    cx, cy = nx // 2, ny // 2
    fine = np.arange(lab.n_grid)
    iy, ix = np.divmod(fine, nx)
    proj = np.empty(g.n_cells, dtype=np.int64)
    proj[fine] = (iy // 2) * cx + ix // 2
    infinity = None
    if lab.infinity is not None:
        infinity = cx * cy
        proj[lab.infinity] = infinity
    e = g.dyn_edges()
    dyn = proj[e]
    adj = [_grid_adjacency(cx, cy, lab.boundary)]
    if lab.infinity is not None:
        touching = g.neighbors(lab.infinity)
        adj.append(np.stack([proj[touching], np.full(touching.size, infinity)], axis=1))
    labels = GridLabels((cx, cy), lab.box, lab.boundary, infinity)
    coarse = FlowGraph.from_edges(
        cx * cy + (infinity is not None), dyn, np.concatenate(adj), labels=labels
    )
    return coarse, proj


# --- builtin systems -------------------------------------------------------


def _saddle(x, p):
    return np.stack([p["lambda1"] * x[:, 0], p["lambda2"] * x[:, 1]], axis=1)


def _torus_height(x, p):
    u, v = x[:, 0], x[:, 1]
    R, r = p["R"], p["r"]
    return np.stack([-(R + r * np.cos(v)) * np.cos(u), r * np.sin(v) * np.sin(u)], axis=1)


def _limit_cycle(x, p):
    a, b = x[:, 0], x[:, 1]
    q = 1.0 - a * a - b * b
    return np.stack([a * q - b, b * q + a], axis=1)


def _irrational(x, p):
    return np.stack([np.ones(len(x)), np.full(len(x), p["a"])], axis=1)


@dataclass(frozen=True)
class Builtin:
    rhs: Callable
    params: Mapping[str, float]
    box: tuple[tuple[float, float], tuple[float, float]]
    dims: tuple[int, int]
    boundary: tuple[str, str]
    tau: float
    summary: str


TWO_PI = 2.0 * math.pi

BUILTINS: dict[str, Builtin] = {
    "saddle": Builtin(
        _saddle, {"lambda1": 1.0, "lambda2": -1.0},
        ((-2.0, 2.0), (-2.0, 2.0)), (128, 128), (INFINITY, INFINITY), 0.5,
        "linear saddle u1'=lambda1*u1, u2'=lambda2*u2 on the plane plus a point at infinity",
    ),
    "torus-height": Builtin(
        _torus_height, {"R": 2.0, "r": 1.0},
        ((0.0, TWO_PI), (0.0, TWO_PI)), (128, 128), (PERIODIC, PERIODIC), 0.3,
        "negative gradient of the height of an upright torus (four critical points)",
    ),
    "limit-cycle": Builtin(
        _limit_cycle, {},
        ((-2.0, 2.0), (-2.0, 2.0)), (128, 128), (INFINITY, INFINITY), 0.5,
        "attracting unit circle around a repelling origin, point at infinity unreachable",
    ),
    "irrational": Builtin(
        _irrational, {"a": math.sqrt(2.0)},
        ((0.0, TWO_PI), (0.0, TWO_PI)), (64, 64), (PERIODIC, PERIODIC), 0.5,
        "linear flow u'=1, v'=a on the torus; every orbit is dense for irrational a",
    ),
}


def builtin_system(
    name: str, overrides: Optional[Mapping[str, float]] = None
) -> tuple[VectorField, GridSpec]:
    """Configured field and default grid for a builtin system."""
    try:
        spec = BUILTINS[name]
    except KeyError:
        raise UnknownSystem(f"unknown system {name!r}; known: {', '.join(sorted(BUILTINS))}")
    params = dict(spec.params)
    for key, value in (overrides or {}).items():
        if key not in params:
            raise ValidationError(f"system {name!r} has no parameter {key!r}")
        params[key] = float(value)
    vf = VectorField(name, params, spec.rhs)
    return vf, GridSpec(spec.box, spec.dims, spec.boundary)
