"""Riemann-Hilbert inverse scattering for the modified Camassa-Holm equation on a constant background."""
from .spectral_plane import (
    SpectralDomainError,
    SpectralPoint,
    k_of_mu,
    lambda_of_mu,
    phase_p,
    phase_p0,
    phase_p_hat,
    symmetry_orbit,
)
from .soliton_rh import (
    ReflectionlessData,
    RHEvaluation,
    SolitonParams,
    full_M,
    one_soliton_eval,
    reflectionless_solve,
    solve_reflectionless,
    z_of,
)
from .reconstruction import ParametricSolution, R_of_z, classify, recover_fields, resample_to_x, soliton_profile
from .direct_scattering import (
    FieldProfile,
    SpectralData,
    compute_spectral_data,
    find_zeros_a,
    jost_solve,
    norming_constants,
    profile_from_u,
    scattering_ab,
    singularity_constant,
)

__version__ = "0.1.0"
