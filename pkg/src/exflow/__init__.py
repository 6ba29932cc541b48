"""Finite-resolution limit spaces, end trees and basin decompositions of flows.

The kernel works on a :class:`FlowGraph`, a multivalued map on cells.  Such
graphs come from a planar vector field (:func:`build_flow_graph`) or from a
JSON file (:func:`load_graph_json`).
"""

from .ends import (
    BasinMap,
    ComponentPartition,
    EndTree,
    assign_basins,
    build_end_tree,
    morse_like_graph,
    recurrent_components,
    representability_report,
)
from .errors import (
    ComponentCycle,
    ExflowError,
    NestingViolation,
    NonFiniteState,
    ParseError,
    SourceCellWithoutPredecessor,
    StageError,
    UnknownSystem,
    ValidationError,
)
from .externology import (
    bar_limit_space,
    inclusion_chain_report,
    limit_space,
    regular_at_infinity,
    spatial_closure,
)
from .graph import (
    AbsorbingFiltration,
    CondensationDag,
    FlowGraph,
    GridLabels,
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
from .ingest import (
    GridSpec,
    OuterApproxConfig,
    VectorField,
    build_flow_graph,
    builtin_system,
    integrate_tau,
    project_graph,
)
from .report import (
    AnalysisReport,
    analyze_graph,
    analyze_pipeline,
    load_graph_json,
    render_basins_ppm,
    write_report_json,
)

__version__ = "0.1.0"
