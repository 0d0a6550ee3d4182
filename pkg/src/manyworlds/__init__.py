"""Desk-scale simulator of objective branching in unitary quantum mechanics.

The library is organized in four layers: dense Hilbert-space arithmetic
(`hilbert`), the bi-orthogonal preferred-basis decomposition (`schmidt`),
the branch tree with its entropy ledger (`branching`), and seeded
statistical experiments (`experiments`). Reports and the command-line front
end live in `reporting` and `cli`.
"""

__version__ = "0.1.0"

from .branching import (
    DEFAULT_MAX_LEAVES,
    BranchNode,
    BranchTree,
    EntropyLedger,
    LedgerRecord,
    PointerOverflowError,
    branch_entropy,
    build_chain_tree,
    interact_and_branch,
    premeasurement_unitary,
    rescaled_entropy_trace,
    run_chain_protocol,
    total_entropy,
)
from .experiments import (
    ComplexityReport,
    OverlapReport,
    WorldCountConfig,
    WorldCountReport,
    ZenoReport,
    evolution_walk,
    overlap_statistics,
    polarizer_chain,
    random_projection_chain,
    world_count,
)
from .hilbert import (
    DIM_CAP,
    EPS_EIG,
    EPS_HERM,
    EPS_NORM,
    EPS_RANK,
    BipartiteSplit,
    CapacityError,
    DegenerateStateError,
    DensityMatrix,
    ShapeError,
    StateVector,
    UnitaryOperator,
    apply_unitary,
    basis_state,
    density_of,
    eig_hermitian,
    haar_random_state,
    haar_random_unitary,
    make_state,
    partial_trace,
    tensor,
)
from .schmidt import (
    DecompositionError,
    SchmidtDecomposition,
    entanglement_entropy,
    reconstruct,
    schmidt_decompose,
    schmidt_rank,
    spectra_gap,
)

__all__ = [
    "__version__",
    "BipartiteSplit",
    "BranchNode",
    "BranchTree",
    "CapacityError",
    "ComplexityReport",
    "DecompositionError",
    "DegenerateStateError",
    "DensityMatrix",
    "DEFAULT_MAX_LEAVES",
    "DIM_CAP",
    "EntropyLedger",
    "EPS_EIG",
    "EPS_HERM",
    "EPS_NORM",
    "EPS_RANK",
    "LedgerRecord",
    "OverlapReport",
    "PointerOverflowError",
    "SchmidtDecomposition",
    "ShapeError",
    "StateVector",
    "UnitaryOperator",
    "WorldCountConfig",
    "WorldCountReport",
    "ZenoReport",
    "apply_unitary",
    "basis_state",
    "branch_entropy",
    "build_chain_tree",
    "density_of",
    "eig_hermitian",
    "entanglement_entropy",
    "evolution_walk",
    "haar_random_state",
    "haar_random_unitary",
    "interact_and_branch",
    "make_state",
    "overlap_statistics",
    "partial_trace",
    "polarizer_chain",
    "premeasurement_unitary",
    "random_projection_chain",
    "reconstruct",
    "rescaled_entropy_trace",
    "run_chain_protocol",
    "schmidt_decompose",
    "schmidt_rank",
    "spectra_gap",
    "tensor",
    "total_entropy",
    "world_count",
]
