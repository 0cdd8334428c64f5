"""symlab: a desk-scale laboratory for symmetries of hermitian matrix sets.

Relations (Loewner order, adjacency, commutativity, orthogonality), quantum
products and means, coexistence of effects as a semidefinite feasibility
problem, the canonical symmetry constructions, and estimators that recover
symmetry parameters from black-box oracles.

The estimator classes live in :mod:`symlab.reconstruct` (imported lazily to
keep the base import light); the command line front end is ``symlab``.
"""

from .core import (
    DEFAULT_TOL,
    SpectralDecomposition,
    ToleranceContext,
    as_hermitian,
    eig_hermitian,
    identity,
    inv_hermitian,
    is_hermitian,
    is_pd,
    is_projection_matrix,
    is_psd,
    random_effect,
    random_hermitian,
    random_projection,
    random_unitary,
    rank_tol,
    rng_for,
    spectral_apply,
    spectral_norm,
    sqrt_psd,
)
from .order import (
    IntervalChainVerdict,
    comparability_cone_witness,
    comparable,
    interval_chain_check,
    is_adjacent,
    loewner_le,
    max_scalar_below,
)
from .effects import (
    CoexistenceDecision,
    NO,
    UNKNOWN,
    YES,
    as_effect,
    coexistent,
    geometric_mean,
    is_effect,
    is_scalar,
    jordan_product,
    orthocomplement,
    sequential_product,
    triple_product,
)
from .commutant import (
    JointBlockStructure,
    bicommutant_rank_one_test,
    commutant_equal,
    commute,
    joint_blocks,
    second_commutant_projections,
)
from .projective import (
    Ray,
    RayMapFit,
    SemilinearOperator,
    collinear,
    cosp_check,
    gleason_fit,
    optimal_wigner_reconstruct,
    orthogonal,
    projector_of,
    random_ray,
    same_ray,
    semilinear_reconstruct,
    tomography_family,
    transition_probability,
)
from .zoo import (
    CONTRACTS,
    Congruence,
    IntervalCongruence,
    IntervalInvert,
    IntervalShift,
    SpectralReparam,
    SymmetryReport,
    TauAutomorphism,
    Transpose,
    UnitarySimilarity,
    apply,
    interval_map,
    tau_automorphism,
    tau_map,
    tau_map_chain,
    verify_symmetry,
)
from . import errors

__version__ = "0.1.0"
