"""Non-retarded Casimir energy and force between a Drude sphere and a plane.

The sphere's multipolar surface plasmons couple to their images in the
plane; the interaction energy is the shift of their zero-point energy.
"""
from .analysis import (
    asymptotic_delta, convergence_scan, dissimilar_difference, loglog_slope, make_grid,
    sweep, truncation_difference,
)
from .coupling import Geometry, a_tensor_element, coupling_coefficient, coupling_matrix, coupling_ratio
from .dipolar import dipolar_modes_constant_fc, dipolar_modes_drude
from .errors import (
    ConsistencyError, DomainError, MaterialsError, ModeCollapseError, NonRealModeError,
    NumericalError, PoleError, SpherePlaneError,
)
from .materials import (
    DrudeLossless, Material, PerfectConductor, StaticDielectric, contrast_factor,
    drude_epsilon, load_materials, spectral_u,
)
from .planes import plate_energy_per_area, plate_modes, proximity_force
from .spectral import (
    EnergyResult, build_block, compute_modes, dissimilar_energy, dissimilar_modes,
    eigen_block, energy_and_force, force, mode_frequencies, zero_point_energy,
)

__version__ = "0.1.0"
