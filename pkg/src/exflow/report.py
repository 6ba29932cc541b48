"""Pipeline orchestration, JSON reports, PPM basin pictures and graph files."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional, Union

import numpy as np

from .ends import (
    BasinMap,
    ComponentPartition,
    assign_basins,
    build_end_tree,
    morse_like_graph,
    recurrent_components,
    representability_report,
)
from .errors import ExflowError, ParseError, StageError, ValidationError
from .externology import inclusion_chain_report, regular_at_infinity
from .graph import FlowGraph, cyclic_cells, eventual_image, reverse_graph
from .ingest import (
    BUILTINS,
    GridSpec,
    OuterApproxConfig,
    VectorField,
    build_flow_graph,
    builtin_system,
    project_graph,
)

__all__ = [
    "SCHEMA_VERSION",
    "AnalysisReport",
    "analyze_pipeline",
    "analyze_graph",
    "write_report_json",
    "read_report_json",
    "render_basins_ppm",
    "load_graph_json",
    "dump_graph_json",
    "check_consistency",
    "PALETTE",
]

SCHEMA_VERSION = "1"

UNRESOLVED_RGB = (128, 128, 128)
RECURRENT_RGB = (0, 0, 0)
PALETTE = [
    (230, 25, 75),
    (60, 180, 75),
    (0, 130, 200),
    (245, 130, 48),
    (145, 30, 180),
    (70, 240, 240),
    (240, 50, 230),
    (210, 245, 60),
    (250, 190, 212),
    (0, 128, 128),
    (220, 190, 255),
    (170, 110, 40),
    (255, 250, 200),
    (128, 0, 0),
    (170, 255, 195),
    (128, 128, 0),
]


def end_color(end: int) -> tuple[int, int, int]:
    """Fixed color per end id; ids past the base palette get darkened repeats."""
    r, g, b = PALETTE[end % len(PALETTE)]
    shade = 1.0 - 0.25 * ((end // len(PALETTE)) % 3)
    return (int(r * shade) or 1, int(g * shade) or 1, int(b * shade) or 1)


@dataclass(eq=False)
class AnalysisReport:
    """Serializable analysis results.

    ``data`` holds the JSON document.  ``graph``, ``partition`` and ``basins``
    keep the finest-level objects for rendering and are never serialized;
    neither is ``timing``.
    """

    data: dict
    timing: dict = field(default_factory=dict)
    graph: Optional[FlowGraph] = field(default=None, repr=False)
    partition: Optional[ComponentPartition] = field(default=None, repr=False)
    basins: Optional[BasinMap] = field(default=None, repr=False)

    def __eq__(self, other):
        if not isinstance(other, AnalysisReport):
            return NotImplemented
        return self.data == other.data

    def __getitem__(self, key):
        return self.data[key]

    @property
    def n_ends(self) -> int:
        return len(self.data["end_tree"]["ends"])

    @property
    def finest(self) -> dict:
        return self.data["levels"][-1]

    def to_dict(self, include_timing: bool = False) -> dict:
        d = dict(self.data)
        if include_timing:
            d["timing"] = dict(self.timing)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "AnalysisReport":
        d = dict(d)
        timing = d.pop("timing", {})
        return cls(d, timing)


def _component_rows(g: FlowGraph, p: ComponentPartition) -> list[dict]:
    lab = g.labels
    rows = []
    for cid, cells in enumerate(p.components):
        row = {"id": cid, "cell_count": int(cells.size), "representative": int(cells[0])}
        if lab is not None:
            grid_cells = cells[cells < lab.n_grid]
            if grid_cells.size:
                xy = lab.coords(grid_cells)
                row["bbox"] = [xy.min(axis=0).tolist(), xy.max(axis=0).tolist()]
            else:
                row["bbox"] = None
            row["infinity"] = bool(lab.infinity is not None and lab.infinity in cells)
        rows.append(row)
    return rows


def _level_summary(g: FlowGraph, level: int, p: ComponentPartition) -> dict:
    f = eventual_image(g)
    lab = g.labels
    ei = f.ei
    if lab is not None:
        measure = float(np.count_nonzero(ei < lab.n_grid) * lab.cell_area)
    else:
        measure = float(ei.size)
    chain = inclusion_chain_report(g, f)
    return {
        "level": level,
        "dims": list(lab.dims) if lab is not None else None,
        "n_cells": g.n_cells,
        "filtration_sizes": f.sizes(),
        "k_star": f.k_star,
        "ei_size": int(ei.size),
        "ei_measure": measure,
        "cyclic_size": int(cyclic_cells(g).size),
        "components": _component_rows(g, p),
        "regular_at_infinity": regular_at_infinity(g, f),
        "inclusion_chain": chain.as_dict(),
    }


class _Stages:
    """Runs named stages, records wall time and tags failures."""

    def __init__(self):
        self.timing: dict[str, float] = {}

    def __call__(self, name, fn, *args, **kwargs):
        t0 = time.perf_counter()
        try:
            return fn(*args, **kwargs)
        except StageError:
            raise
        except (ExflowError, ValueError, ArithmeticError) as exc:
            raise StageError(name, exc) from exc
        finally:
            self.timing[name] = self.timing.get(name, 0.0) + time.perf_counter() - t0


def _analyze(graphs: list[FlowGraph], projections: list[np.ndarray], system: dict, stages) -> AnalysisReport:
    partitions = []
    level_rows = []
    for lvl, g in enumerate(graphs):
        p = stages("components", recurrent_components, g, lvl)
        partitions.append(p)
        level_rows.append(stages("limits", _level_summary, g, lvl, p))
    tree = stages("end_tree", build_end_tree, partitions, projections)
    g, p = graphs[-1], partitions[-1]
    basins = stages("basins", assign_basins, g, p)
    verdicts = stages("representability", representability_report, g, p, basins)
    edges = stages("morse", morse_like_graph, g, p)

    recurrent_counts = [int(c.size) for c in p.components]
    ends = [
        {"end": a, "resolved": n, "recurrent": recurrent_counts[a]}
        for a, n in enumerate(basins.end_counts())
    ]
    by_set: dict[str, int] = {}
    for s in basins.unresolved.values():
        key = ",".join(str(i) for i in sorted(s))
        by_set[key] = by_set.get(key, 0) + 1
    data = {
        "schema_version": SCHEMA_VERSION,
        "system": system,
        "levels": level_rows,
        "end_tree": tree.as_dict(),
        "basins": {
            "n_cells": g.n_cells,
            "ends": ends,
            "unresolved": basins.n_unresolved,
            "unresolved_by_set": dict(sorted(by_set.items())),
        },
        "representability": [v.as_dict() for v in verdicts],
        "morse_edges": [list(e) for e in edges],
    }
    report = AnalysisReport(data, stages.timing, g, p, basins)
    check_consistency(report)
    return report


def analyze_pipeline(
    system: Union[str, VectorField],
    grid: Optional[GridSpec] = None,
    cfg: Optional[OuterApproxConfig] = None,
    levels: int = 1,
    reversed: bool = False,
    params: Optional[dict] = None,
) -> AnalysisReport:
    """Build the graph hierarchy for an ODE system and analyze every level.

    ``grid`` gives the coarsest dims; the finest level has ``levels - 1``
    doublings and coarser levels are projections of it.  ``reversed``
    integrates the negated field.
    """
    stages = _Stages()
    t0 = time.perf_counter()
    if isinstance(system, str):
        vf, default_grid = stages("ingest", builtin_system, system, params)
        grid = grid or default_grid
        cfg = cfg or OuterApproxConfig(tau=BUILTINS[system].tau)
    else:
        vf = system
        if grid is None or cfg is None:
            raise ValidationError("custom vector fields need an explicit grid and config")
    if levels < 1:
        raise ValidationError("levels must be at least 1")
    if reversed:
        vf = vf.negated()
    finest = grid.at_level(grid.level + levels - 1)
    g = stages("ingest", build_flow_graph, vf, finest, cfg)
    graphs, projections = [g], []
    for _ in range(levels - 1):
        coarse, proj = stages("ingest", project_graph, graphs[0])
        graphs.insert(0, coarse)
        projections.insert(0, proj)
    descriptor = {
        "name": vf.name,
        "params": {k: float(v) for k, v in sorted(vf.params.items())},
        "grid": {
            "box": [list(map(float, b)) for b in grid.box],
            "dims": list(grid.dims),
            "boundary": list(grid.boundary),
            "finest_dims": list(finest.cell_dims),
        },
        "tau": float(cfg.tau),
        "bloat": int(cfg.bloat),
        "rk_steps": int(cfg.rk_steps),
        "samples_per_axis": int(cfg.samples_per_axis),
        "levels": int(levels),
        "reversed": bool(reversed),
    }
    report = _analyze(graphs, projections, descriptor, stages)
    report.timing["total"] = time.perf_counter() - t0
    return report


def analyze_graph(g: FlowGraph, name: str = "graph", reversed: bool = False) -> AnalysisReport:
    """Single-level analysis of a user supplied graph."""
    stages = _Stages()
    t0 = time.perf_counter()
    if reversed:
        g = stages("ingest", reverse_graph, g)
    descriptor = {"name": name, "n_cells": g.n_cells, "levels": 1, "reversed": bool(reversed)}
    report = _analyze([g], [], descriptor, stages)
    report.timing["total"] = time.perf_counter() - t0
    return report


def check_consistency(report: AnalysisReport) -> None:
    """Raise :class:`ValidationError` if the report's counts do not add up."""
    d = report.data
    if d.get("schema_version") != SCHEMA_VERSION:
        raise ValidationError("report without schema version")
    b = d["basins"]
    total = sum(e["resolved"] for e in b["ends"]) + b["unresolved"]
    if total != b["n_cells"]:
        raise ValidationError(f"basin counts sum to {total}, expected {b['n_cells']}")
    if sum(b["unresolved_by_set"].values()) != b["unresolved"]:
        raise ValidationError("unresolved breakdown does not match the unresolved count")
    fin = d["levels"][-1]
    if fin["n_cells"] != b["n_cells"]:
        raise ValidationError("finest level and basin table disagree on the cell count")
    if len(b["ends"]) != len(fin["components"]) or len(d["end_tree"]["ends"]) != len(fin["components"]):
        raise ValidationError("end counts disagree between tree, basins and components")
    for lvl in d["levels"]:
        if sum(c["cell_count"] for c in lvl["components"]) != lvl["cyclic_size"]:
            raise ValidationError(f"level {lvl['level']}: components do not cover the cyclic set")
        sizes = lvl["filtration_sizes"]
        if sizes[0] != lvl["n_cells"] or sizes[-1] != lvl["ei_size"]:
            raise ValidationError(f"level {lvl['level']}: filtration endpoints are wrong")


def _dumps(report: AnalysisReport, include_timing: bool) -> str:
    return json.dumps(report.to_dict(include_timing), sort_keys=True, indent=1, ensure_ascii=False) + "\n"


def write_report_json(r: AnalysisReport, path, include_timing: bool = False) -> None:
    """Write ``r`` as UTF-8 JSON with sorted keys.

    Timing is left out unless asked for, so repeated runs are byte-identical.
    """
    path = Path(path)
    try:
        path.write_text(_dumps(r, include_timing), encoding="utf-8")
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write report: {exc.strerror}", str(path)) from exc


def read_report_json(path) -> AnalysisReport:
    with open(path, encoding="utf-8") as fh:
        return AnalysisReport.from_dict(json.load(fh))


def render_basins_ppm(r: AnalysisReport, basins: Optional[BasinMap], path) -> None:
    """Binary P6 image with one pixel per grid cell, rows starting at the low corner.

    Resolved cells get their end color, unresolved cells are gray and
    recurrent cells are black.  The infinity vertex has no pixel.
    """
    basins = basins if basins is not None else r.basins
    dims = r.finest["dims"]
    if basins is None or dims is None:
        raise ValidationError("rendering needs a grid report together with its basin map")
    nx, ny = dims
    n = nx * ny
    rgb = np.empty((n, 3), dtype=np.uint8)
    rgb[:] = UNRESOLVED_RGB
    res = basins.resolved[:n]
    for end in np.unique(res[res >= 0]).tolist():
        rgb[res == end] = end_color(end)
    rgb[basins.recurrent[:n]] = RECURRENT_RGB
    header = f"P6\n{nx} {ny}\n255\n".encode("ascii")
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(rgb.reshape(ny, nx, 3).tobytes())


def _int_pairs(value: Any, key: str) -> list[list[int]]:
    if not isinstance(value, list):
        raise ValidationError(f"{key!r} must be a list of [a, b] pairs")
    for pair in value:
        if (
            not isinstance(pair, list)
            or len(pair) != 2
            or not all(isinstance(x, int) and not isinstance(x, bool) for x in pair)
        ):
            raise ValidationError(f"{key!r} entries must be pairs of integers, got {pair!r}")
    return value


def load_graph_json(path) -> FlowGraph:
    """Read ``{"n": int, "dyn": [[src, dst], ...], "adj": [[a, b], ...]}``."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno) from exc
    if not isinstance(doc, dict):
        raise ValidationError("graph file must hold a JSON object")
    n = doc.get("n")
    if not isinstance(n, int) or isinstance(n, bool):
        raise ValidationError("'n' must be an integer")
    dyn = _int_pairs(doc.get("dyn"), "dyn")
    adj = _int_pairs(doc.get("adj", []), "adj")
    return FlowGraph.from_edges(n, dyn, adj)


def dump_graph_json(g: FlowGraph, path) -> None:
    doc = {
        "n": g.n_cells,
        "dyn": g.dyn_edges().tolist(),
        "adj": g.adj_edges().tolist(),
    }
    Path(path).write_text(json.dumps(doc) + "\n", encoding="utf-8")
