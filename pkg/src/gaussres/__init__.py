"""
Separation estimation for two Gaussian point sources behind a lossy
diffraction-limited imaging system: quantum Fisher information of the
image-plane Gaussian state, with an independent fidelity-based check.
"""

from .channel import ImagingChannel, build_matrices, propagate, propagate_derivatives, transmissions
from .oracle import (
    OracleConfig,
    OracleUncertainError,
    gaussian_fidelity,
    oracle_qfi,
    qfi_finite_difference,
)
from .psf import (
    GaussianPsf,
    ModeGeometry,
    QuadratureError,
    beta,
    d_delta,
    delta_k_squared,
    eta_squared,
    mode_geometry,
    overlap_delta,
    quadrature_oracle,
)
from .qfi import (
    DivergentTermError,
    QfiBreakdown,
    basis_set,
    qfi,
    qfi_coherent_closed_form,
    qfi_from_moments,
    qfi_small_d_limit,
    qfi_upper_bound,
)
from .sources import (
    SourceSpec,
    Variant,
    degree_of_mutual_coherence,
    make_coherent,
    make_correlated_thermal,
    make_displaced_thermal,
    make_squeezed_pair,
    to_symmetric_modes,
)
from .symplectic import (
    GaussianState,
    UnphysicalStateError,
    WilliamsonDecomposition,
    is_physical,
    omega,
    ppt_min_symplectic_eigenvalue,
    random_physical_cov,
    random_symplectic,
    symplectic_eigenvalues,
    williamson,
)

__version__ = "0.1.0"
