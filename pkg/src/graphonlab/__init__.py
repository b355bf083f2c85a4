"""Block-graphon laboratory: alignment distances, hard instances, KL and
Fano machinery, baseline estimators and minimax-rate experiments."""

__version__ = "0.1.0"

from .core import (
    BinarySymMatrix,
    BlockMatrix,
    HardInstanceParams,
    blow_up,
    make_block_matrix,
    normalized_l2,
    planted_partition,
    q_matrix,
)
from .rng import RngSeed
from .sampler import SampledGraph, empirical_edge_density, sample_graph, sample_labels
from .align import (
    AlignResult,
    apply_perms,
    delta2_upper_via_blowup,
    delta_hat2_exact,
    delta_hathat2_exact,
    delta_hathat2_heuristic,
    permuted_hamming_min,
)
from .transport import DoublyStochastic, birkhoff_decompose, coupling_distance_sq, coupling_min_lower
from .infotheory import contiguity_report, exact_graph_distribution, exact_kl, fano_bound, kl_upper_bound
from .packing import chernoff_collision_bound, packing_to_graphons, sample_packing_set
from .estimators import block_least_squares, density_estimator, empirical_risk, trivial_estimator
from .bench import RateQuery, lower_rate, run_experiment, upper_rate
