"""Numerics for the two-dimensional Bogoliubov free-energy functional in the dilute limit.

Modules
-------
quadrature
    Adaptive radial quadrature, the angular convolution kernel and fixed grids.
scattering
    Zero-energy scattering solution, scattering length and Fourier profiles.
logft
    The Fourier transform of ``ln|x|`` as a distribution.
bogoliubov
    Quasi-free minimiser family, the simplified and canonical functionals and
    their error terms.
asymptotics
    Closed-form constants of the small-``b`` expansion and ideal-gas references.
cli
    Table-producing command-line driver (``python -m bogoliubov2d``).
"""

from .asymptotics import (
    ExpansionResult,
    c_nu_of_d,
    c_of_d,
    critical_temperature_2d,
    ground_state_expansion,
    i_greater,
    i_less_exact,
    ideal_gas_2d,
    ideal_gas_3d,
    minimize_cnu,
)
from .bogoliubov import (
    MinimizerState,
    ThermoPoint,
    error_diagnostics,
    fcan_energy,
    fs_energy,
    fsim_energy,
    minimize_fsim,
    minimizer_profiles,
    rho_gamma,
    solve_rho0,
)
from .errors import *  # noqa: F401,F403
from .logft import c0_check, delta_cancellation_check, log_ft, p_scaling_residual
from .quadrature import DEFAULT_SPEC, QuadSpec, integrate_radial_2d
from .scattering import IdealizedProfile, PotentialSpec, ScatteringSolution, solve_scattering

__version__ = "0.1.0"
