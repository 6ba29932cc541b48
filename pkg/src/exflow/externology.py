"""Limit and bar-limit spaces of the image filtration, plus regularity at infinity."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import (
    AbsorbingFiltration,
    FlowGraph,
    _step,
    big_omega,
    cyclic_cells,
    eventual_image,
)

__all__ = [
    "AbsorbingFiltration",
    "ChainReport",
    "limit_space",
    "spatial_closure",
    "bar_limit_space",
    "regular_at_infinity",
    "inclusion_chain_report",
]


def limit_space(f: AbsorbingFiltration) -> np.ndarray:
    """Intersection of all levels, i.e. the eventual image."""
    return f.ei


def _closure_mask(g: FlowGraph, m: np.ndarray) -> np.ndarray:
    return m | _step(g.adj_src, g.adj_indices, m)


def spatial_closure(g: FlowGraph, cells) -> np.ndarray:
    """``cells`` plus every adjacent cell (one collar, not iterated)."""
    return np.flatnonzero(_closure_mask(g, g.mask(cells)))


def bar_limit_space(g: FlowGraph, f: AbsorbingFiltration) -> np.ndarray:
    """Intersection of the closures of all filtration levels."""
    acc = np.ones(g.n_cells, dtype=bool)
    for level in f.levels:
        acc &= _closure_mask(g, g.mask(level))
    return np.flatnonzero(acc)


def regular_at_infinity(g: FlowGraph, f: AbsorbingFiltration) -> bool:
    """For every level ``Im_k`` some level ``Im_j`` has its closure inside ``Im_k``."""
    masks = [g.mask(level) for level in f.levels]
    # deepest levels first: their closures are the smallest candidates
    closures = [_closure_mask(g, m) for m in reversed(masks)]
    for target in masks:
        if not any(not (c & ~target).any() for c in closures):
            return False
    return True


@dataclass(frozen=True)
class ChainReport:
    """Verdicts for ``cyclic ⊆ EI``, ``EI = big_omega`` and ``big_omega ⊆ bar_limit``."""

    sizes: tuple[int, int, int, int]
    cyclic_in_ei: bool
    ei_eq_omega: bool
    omega_in_bar: bool

    @property
    def all_hold(self) -> bool:
        return self.cyclic_in_ei and self.ei_eq_omega and self.omega_in_bar

    def as_dict(self) -> dict:
        return {
            "sizes": {
                "cyclic": self.sizes[0],
                "ei": self.sizes[1],
                "big_omega": self.sizes[2],
                "bar_limit": self.sizes[3],
            },
            "cyclic_subset_ei": self.cyclic_in_ei,
            "ei_equals_big_omega": self.ei_eq_omega,
            "big_omega_subset_bar_limit": self.omega_in_bar,
        }


def inclusion_chain_report(g: FlowGraph, f: AbsorbingFiltration | None = None) -> ChainReport:
    f = eventual_image(g) if f is None else f
    cyc = g.mask(cyclic_cells(g))
    ei = g.mask(limit_space(f))
    omega = g.mask(big_omega(g))
    bar = g.mask(bar_limit_space(g, f))
    return ChainReport(
        sizes=(int(cyc.sum()), int(ei.sum()), int(omega.sum()), int(bar.sum())),
        cyclic_in_ei=not (cyc & ~ei).any(),
        ei_eq_omega=bool(np.array_equal(ei, omega)),
        omega_in_bar=not (omega & ~bar).any(),
    )
