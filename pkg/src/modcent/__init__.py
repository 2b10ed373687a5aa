"""Betweenness centrality on modular weighted graphs.

Three routes to the same question ("how much shortest-path traffic does a
node carry?"):

* :mod:`modcent.exact` runs plain Brandes accumulation over the full graph.
* :mod:`modcent.modular` decomposes the work by module: a local pass per
  module plus a cross-module pass over the skeleton of boundary vertices,
  and reports local, external and global scores separately.
* :mod:`modcent.coarse` collapses each module to one node and distributes
  the module-level scores back onto boundary nodes; cheap, approximate.

:mod:`modcent.generate` builds random modular graphs for benchmarks and the
CLI in :mod:`modcent.cli` ties everything together.
"""

from .graph import (
    CentralityVector,
    DanglingNodeId,
    DuplicateEdge,
    Edge,
    Graph,
    GraphError,
    GraphSyntaxError,
    ModulePartition,
    NonContiguousModules,
    NonPositiveWeight,
    SelfLoop,
    build_graph,
    classify_edges,
    load_graph,
    parse_graph_file,
    quotient_graph,
    save_graph,
    serialize_graph,
)
from .exact import GraphTooLarge, SsspState, brandes_bc, brute_force_bc, sssp_dijkstra
from .modular import (
    EgressChoice,
    GlobalCentralityReport,
    ModuleSummary,
    PreconditionViolated,
    cross_module_dependencies,
    egress_paths,
    global_centrality,
    local_centrality,
    validate_precondition,
)
from .coarse import (
    CoarseReport,
    QuotientRoutes,
    coarse_global,
    module_graph_bc,
    node_ec_unweighted,
    node_ec_weighted,
    quotient_routes,
)
from .generate import GenConfig, InvalidConfig, generate, resolve_module_count

__version__ = "0.1.0"

__all__ = [
    "CentralityVector", "DanglingNodeId", "DuplicateEdge", "Edge", "Graph",
    "GraphError", "GraphSyntaxError", "ModulePartition", "NonContiguousModules",
    "NonPositiveWeight", "SelfLoop", "build_graph", "classify_edges",
    "load_graph", "parse_graph_file", "quotient_graph", "save_graph",
    "serialize_graph",
    "GraphTooLarge", "SsspState", "brandes_bc", "brute_force_bc", "sssp_dijkstra",
    "EgressChoice", "GlobalCentralityReport", "ModuleSummary",
    "PreconditionViolated", "cross_module_dependencies", "egress_paths",
    "global_centrality", "local_centrality", "validate_precondition",
    "CoarseReport", "QuotientRoutes", "coarse_global", "module_graph_bc",
    "node_ec_unweighted", "node_ec_weighted", "quotient_routes",
    "GenConfig", "InvalidConfig", "generate", "resolve_module_count",
    "__version__",
]
