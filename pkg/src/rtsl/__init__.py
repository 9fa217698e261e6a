"""Spectral experiments for random radial trees.

Half-line Jacobi matrices whose off-diagonals are square roots of random
branching numbers, their transfer-matrix cocycles and Lyapunov exponents,
the exact block decomposition of the tree Laplacian, and spectrum /
localization diagnostics built on top.  Everything is seeded and
deterministic; the CLI writes CSV tables with figures rendered alongside.
"""

__version__ = "0.1.0"

from .randomness import (
    BranchingDistribution,
    BranchingSequence,
    parse_dist,
    sample_sequence,
    shift,
    substream,
)
from .tree import RadialTree, TreeFunction, adjacency_matrix, apply_laplacian, build_tree, random_tree
from .decomposition import (
    MultiplicityTable,
    SphericalBasisFunction,
    lift,
    multiplicities,
    spectral_multiset_check,
    spherical_basis,
    verify_block_action,
)
from .jacobi import (
    PolynomialSequence,
    TruncatedJacobi,
    char_poly_seq,
    eigenvector_inverse_iteration,
    green_entry,
    green_entry_poly,
    jacobi_apply,
    sturm_count,
    tridiag_eigenvalues,
)
from .linalg import mat2, mat2_inverse, sl2_norm, symmetric_eigenvalues_dense
from .cocycle import (
    CocycleProduct,
    atom_transfer_matrix,
    cocycle_from_char_poly,
    cocycle_product,
    furstenberg_witness,
    invariant_direction_check,
    solve_recursion,
    transfer_matrix,
)
from .lyapunov import (
    LyapunovEstimate,
    estimate_lyapunov,
    lyapunov_curve,
    punctured_energy_grid,
    zero_energy_exact,
)
from .experiments import (
    DecayReport,
    WeylVector,
    decay_rate_fit,
    engineered_sequence,
    localization_report,
    spectrum_histogram,
    tree_decay_check,
    weyl_residual,
)
