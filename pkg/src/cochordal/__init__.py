"""Homogeneous (co-chordal) graphs and zero patterns of modified Cholesky factors."""

__version__ = "0.1.0"

from .cholesky import (
    LdlFactors,
    cauchy_binet_expand,
    determinant,
    inverse,
    invert_unit_lower_pathsum,
    invert_unit_lower_substitution,
    ldl_decompose,
    submatrix_determinant,
)
from .graph import Graph, build_graph, closed_neighborhood, connected_components, induced_subgraph, maximal_cliques
from .matrix import Matrix
from .preservation import (
    SparsityPattern,
    VerificationReport,
    Witness,
    clique_determinant_check,
    construct_L_witness,
    construct_sigma_witness,
    in_L,
    in_P,
    pattern_of,
    sample_L,
    sample_sigma,
    verify_theorem1,
)
from .structure import (
    ConflictTriple,
    HasseForest,
    VertexOrdering,
    build_hasse_forest,
    find_conflict_triple,
    find_hasse_elimination_ordering,
    find_perfect_elimination_ordering,
    is_hasse_elimination_ordering,
    is_homogeneous,
    is_perfect_elimination_ordering,
    random_homogeneous_graph,
)
