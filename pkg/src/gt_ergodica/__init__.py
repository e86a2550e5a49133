"""Exact q-weighted path counting on the graph of nonincreasing integer
vectors, boundary measures indexed by nondecreasing parameter sequences,
and the tail-equivalence dynamics of those measures."""

from .errors import ContractViolationError, DomainError, GTError, ParseError
from .gt_graph import (
    EMPTY,
    PathPrefix,
    Signature,
    count_paths,
    enumerate_paths,
    format_path,
    format_signature,
    has_path,
    interlaces,
    parse_path,
    parse_signature,
    paths_from_root,
    predecessors,
    successors_within,
    weyl_dim,
)
from .q_weights import (
    QContext,
    QValue,
    edge_weight,
    path_weight,
    qdim,
    qdim_between,
    weight_ratio_exponent,
)
from .theta_measures import (
    AffineTail,
    ClassificationRecord,
    ConstantTail,
    MeasureApprox,
    ThetaSpec,
    atom_mass,
    classify,
    conditional_transition,
    cylinder_mass,
    dim_growth_evidence,
    format_theta,
    lambda_of,
    level_marginal,
    parse_theta,
    q_centrality_check,
    sample_path,
    support_at_level,
    theta_value,
)
from .path_dynamics import (
    LevelPermutation,
    SegmentShift,
    apply,
    block_transposition,
    compose_same_level,
    pushforward_mass_check,
    random_level_permutation,
    rn_exponent,
    rn_on_cylinder,
    rn_value_lattice_check,
)
from .ratio_set import (
    ChainPartition,
    RectYoungDiagram,
    chain_partition_paths,
    chain_partition_young,
    kappa_decompose,
    kappa_reassemble,
    ratio_certificate,
    ratio_set_summary,
    segment_paths,
    young_interval,
)

__version__ = "0.1.0"
