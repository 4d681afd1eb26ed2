"""Hypergraph Weisfeiler-Lehman isomorphism test and WL subtree / hyperedge kernels."""

from hgwl.core import (
    DegreeProfile,
    Hypergraph,
    ValidationError,
    build_hypergraph,
    clique_expansion,
    degrees,
    hyperedge_vertex_neighbors,
    permute,
    vertex_hyperedge_neighbors,
)
from hgwl.kernels import (
    FeatureVector,
    KernelMatrix,
    cross_kernel,
    hyperedge_features,
    kernel_matrix,
    kernel_value,
    normalize,
    project_test,
    subtree_features,
)
from hgwl.oracle import OracleLimit, brute_force_isomorphic
from hgwl.refine import (
    HwlSequence,
    Interners,
    IsoVerdict,
    LabelInterner,
    LabelState,
    Outcome,
    graph_wl_sequence,
    graph_wl_test,
    hwl_isomorphism_test,
    initial_label_state,
    refine_round,
    wl_sequence,
)

__version__ = "0.1.0"
