"""Quantum averaging sets: construction and verification of designs.

Complex-projective, unitary, simplex and channel t-designs with exact
Weingarten averages, random-channel sampling and effective environment
dimension estimation from tomography counts.
"""

from .channels import (
    ChoiState,
    QuantumChannel,
    WeightedChannelSet,
    average_choi,
    average_choi_unistochastic,
    average_tcopy_choi,
    channel_from_stinespring,
    choi_of_channel,
    choi_tcopy,
    clifford_induced_channels,
    contraction_target,
    design_distance,
    kraus_from_choi,
    maximally_depolarizing,
    qubit_channel_design,
    r2_channels,
    unistochastic_channel,
    unistochastic_design_distance,
    unistochastic_design_qubit,
    unitary_channel,
)
from .envdim import (
    CountsRecord,
    KStarFit,
    TomographyDataset,
    emission_channel,
    emission_mixture_channel,
    fit_dataset,
    fit_kstar,
    ideal_prep_projectors,
    model_choi_emission,
    model_choi_uniform,
    pair_choi_from_twoqubit,
    reconstruct_channel,
    reconstruct_states,
    reconstruct_states_from_probs,
    simulate_counts,
)
from .linalg import (
    DEFAULT_TOL,
    dagger,
    hs_inner,
    hs_norm,
    kron,
    partial_trace,
    permutation_operator,
    permute_subsystems,
    unvec_row,
    vec_row,
)
from .projective import (
    WeightedStateSet,
    is_projective_design,
    isocoherence_cost,
    isocoherent_mub,
    merge_states,
    mub_family,
    mub_prep_unitaries,
    octahedron_states,
    sic_fiducial_d2,
    sic_fiducial_d3,
    state_reconstruct,
    states_of_bases,
    welch_bound,
    welch_sum,
    wh_orbit,
)
from .random_channels import (
    empirical_tcopy_mean,
    ginibre,
    gue,
    haar_unitary,
    make_rng,
    max_z_score,
    sample_choi_channel,
    sample_kraus_channel,
    sample_stinespring_channel,
    wishart,
)
from .simplex import (
    SimplexDesign,
    Triangulation,
    affine_transport,
    decohere,
    flat_simplex_moment,
    generalized_simpson,
    is_simplex_design,
    mesh_average,
    merge_points,
    simplex_design_residual,
    simplex_measure,
)
from .unitary import (
    UnitarySet,
    clifford_group,
    is_unitary_design,
    pauli_group,
    unitary_design_bound,
    unitary_design_residual,
    unitary_design_sum,
)
from .weingarten import weingarten, weingarten_table

__version__ = "0.1.0"
