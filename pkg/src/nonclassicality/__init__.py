"""Nonclassicality of single-mode bosonic states under thermal-loss noise."""

from .bochner import BochnerReport, build_bochner_matrix, certify, scan_pair_radius
from .channel import (
    ChannelParams,
    apply_channel_charfn,
    apply_channel_dm,
    compose,
    diffusion_residual,
    output_s_distribution,
    output_s_param,
    thermal_threshold,
)
from .errors import NumericalError, ValidationError
from .grid import PhaseSpaceGrid
from .homodyne import (
    CountDistribution,
    SeriesResult,
    count_distribution,
    modified_series,
    reconstruct_with_shot_noise,
    sample_counts,
    wall_series,
)
from .states import (
    CharFn,
    Coherent,
    DensityMatrix,
    Fock,
    Mixture,
    Thermal,
    build_density_matrix,
    char_fn,
    char_fn_from_dm,
    displacement_matrix,
    parse_state_spec,
    s_distribution,
)
from .witness import (
    CompensatedGaussianWitness,
    DiscreteWitness,
    GaussianWitness,
    compensate_gaussian,
    compensated_witness_mean,
    discrete_witness_value,
    evolved_discrete_witness_min,
    gaussian_witness_mean,
    gaussian_witness_value,
    uncompensated_noisy_mean,
)

__version__ = "0.1.0"

__all__ = [
    "apply_channel_charfn",
    "apply_channel_dm",
    "BochnerReport",
    "build_bochner_matrix",
    "build_density_matrix",
    "certify",
    "ChannelParams",
    "char_fn",
    "char_fn_from_dm",
    "CharFn",
    "Coherent",
    "compensate_gaussian",
    "compensated_witness_mean",
    "CompensatedGaussianWitness",
    "compose",
    "count_distribution",
    "CountDistribution",
    "DensityMatrix",
    "diffusion_residual",
    "discrete_witness_value",
    "DiscreteWitness",
    "displacement_matrix",
    "evolved_discrete_witness_min",
    "Fock",
    "gaussian_witness_mean",
    "gaussian_witness_value",
    "GaussianWitness",
    "Mixture",
    "modified_series",
    "NumericalError",
    "output_s_distribution",
    "output_s_param",
    "parse_state_spec",
    "PhaseSpaceGrid",
    "reconstruct_with_shot_noise",
    "s_distribution",
    "sample_counts",
    "scan_pair_radius",
    "SeriesResult",
    "Thermal",
    "thermal_threshold",
    "uncompensated_noisy_mean",
    "ValidationError",
    "wall_series",
]
