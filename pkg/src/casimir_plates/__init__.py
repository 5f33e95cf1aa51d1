"""Casimir pressure between perfectly reflecting parallel plates.

Two independent routes are provided: a cutoff-regularised sum over the
standing-wave modes of the cavity (:mod:`.standing_wave`) and the
finite-temperature Matsubara/Green's-function formula (:mod:`.lifshitz`).
Both rest on the quadrature and series kernels in :mod:`.numerics`.
"""

from .constants import CONSTANTS_VERSION, PhysicalConstants, constants_codata
from .lifshitz import (
    SMALL_T_SLOPE,
    ForceResult,
    GreenComponents,
    force_pspace,
    force_qspace,
    green_components,
    hargreaves_R,
    matsubara_zeta,
    ratio_from_SI,
    ratio_R,
    ratio_R_oracle,
    reduced_temperature,
    stress_bracket,
    zero_T_force,
)
from .numerics import (
    DEFAULT_TOLERANCE,
    ConvergenceError,
    QuadratureError,
    SeriesError,
    Tolerance,
    integrate_interval,
    integrate_semi_infinite,
    sum_series,
)
from .standing_wave import (
    CavityGeometry,
    CutoffParam,
    CutoffRangeError,
    ModeSpec,
    asymptotic_pressure,
    casimir_pressure,
    regulated_finite_part,
    regulated_pressure,
    sigma_zz_assembled,
    sigma_zz_closed,
)

__version__ = "0.1.0"

__all__ = [
    "CONSTANTS_VERSION", "PhysicalConstants", "constants_codata",
    "SMALL_T_SLOPE", "ForceResult", "GreenComponents", "force_pspace", "force_qspace",
    "green_components", "hargreaves_R", "matsubara_zeta", "ratio_from_SI", "ratio_R",
    "ratio_R_oracle", "reduced_temperature", "stress_bracket", "zero_T_force",
    "DEFAULT_TOLERANCE", "ConvergenceError", "QuadratureError", "SeriesError", "Tolerance",
    "integrate_interval", "integrate_semi_infinite", "sum_series",
    "CavityGeometry", "CutoffParam", "CutoffRangeError", "ModeSpec", "asymptotic_pressure",
    "casimir_pressure", "regulated_finite_part", "regulated_pressure",
    "sigma_zz_assembled", "sigma_zz_closed",
]
