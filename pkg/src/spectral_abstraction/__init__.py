"""Spectral decomposition of weighted networks into cluster hierarchies.

The toolkit covers graph construction and Laplacian matrices,
deterministic eigendecomposition, Fiedler and k-way spectral
partitioning, graph p-Laplacian cuts, multi-level quotient
hierarchies, and a Laplacian eigenmode model predicting functional
connectivity from structure.
"""

import os as _os


def _cap_thread_pools() -> None:
    # honored only if applied before numpy initializes its BLAS backend,
    # which is why it runs at package import time
    cap = _os.environ.get("SPECTRAL_ABSTRACTION_THREADS")
    if not cap:
        return
    try:
        value = max(1, int(cap))
    except ValueError:
        return
    for var in (
        "OPENBLAS_NUM_THREADS",
        "OMP_NUM_THREADS",
        "MKL_NUM_THREADS",
        "NUMEXPR_NUM_THREADS",
    ):
        _os.environ[var] = str(value)


_cap_thread_pools()

from . import errors
from .graphs import (
    Graph,
    LaplacianKind,
    LaplacianMatrix,
    adjacency_matrix,
    connected_components,
    degree_matrix,
    degrees,
    edge_arrays,
    graph_from_edges,
    induced_subgraph,
    laplacian,
    quotient_graph,
    sbm_generate,
)
from .spectral import (
    CONNECTIVITY_TOL,
    DENSE_SOLVER_MAX_N,
    Embedding,
    Spectrum,
    algebraic_connectivity,
    eigendecompose,
    fiedler_vector,
    graph_spectrum,
    partial_eigendecompose,
    rayleigh_quotient,
    spectral_embedding,
)
from .partition import (
    METRICS,
    SELECTIONS,
    ClusterProfile,
    ConnectivityProfile,
    CutMetrics,
    Partition,
    connectivity_profile,
    cut_metrics,
    kway_embedding_cluster,
    recursive_bipartition,
    sign_bipartition,
    threshold_partition,
)
from .nonlinear import (
    CouplingSystem,
    PLaplacianParams,
    jacobian_graph,
    p_laplacian_apply,
    p_recursive_bipartition,
    p_spectral_bipartition,
)
from .hierarchy import (
    Hierarchy,
    HierarchyLevel,
    LevelSpec,
    build_hierarchy,
    flatten,
)
from .structfunc import (
    FcModel,
    fit_fc,
    predict_fc,
    spectra_similarity,
)

__version__ = "0.1.0"

__all__ = [
    "errors",
    "METRICS",
    "SELECTIONS",
    "Graph",
    "LaplacianKind",
    "LaplacianMatrix",
    "adjacency_matrix",
    "connected_components",
    "degree_matrix",
    "degrees",
    "edge_arrays",
    "graph_from_edges",
    "induced_subgraph",
    "laplacian",
    "quotient_graph",
    "sbm_generate",
    "CONNECTIVITY_TOL",
    "DENSE_SOLVER_MAX_N",
    "Embedding",
    "Spectrum",
    "algebraic_connectivity",
    "eigendecompose",
    "fiedler_vector",
    "graph_spectrum",
    "partial_eigendecompose",
    "rayleigh_quotient",
    "spectral_embedding",
    "ClusterProfile",
    "ConnectivityProfile",
    "CutMetrics",
    "Partition",
    "connectivity_profile",
    "cut_metrics",
    "kway_embedding_cluster",
    "recursive_bipartition",
    "sign_bipartition",
    "threshold_partition",
    "CouplingSystem",
    "PLaplacianParams",
    "jacobian_graph",
    "p_laplacian_apply",
    "p_recursive_bipartition",
    "p_spectral_bipartition",
    "Hierarchy",
    "HierarchyLevel",
    "LevelSpec",
    "build_hierarchy",
    "flatten",
    "FcModel",
    "fit_fc",
    "predict_fc",
    "spectra_similarity",
    "__version__",
]
