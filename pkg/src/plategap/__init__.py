"""Weighted spectra and torsional gap of non-homogeneous partially hinged plates."""
from .basis import LONGITUDINAL, TORSIONAL, SpectralBasis
from .config import ConfigError, PlateConfig, load_config, validate_config
from .fields import (
    AdmissibilityError,
    DensityField,
    Family,
    ForceKind,
    ForceSpec,
    MassWarning,
    check_admissible,
    custom_force,
    resonant_force,
    sign_force,
)
from .gap import (
    GapProfile,
    estimate_tail,
    force_coefficients,
    gap_profile,
    ginf_vs_j,
    solution_field,
)
from .quadrature import AreaGrid, PanelGrid, build_panels, integrate, sublevel_area
from .spectrum import (
    Spectrum,
    assemble_mass,
    assemble_stiffness,
    compute_spectrum,
    convergence_check,
    label_and_normalize,
    solve_spectrum,
)
from .weights import (
    WEIGHT_NAMES,
    make_edge_blocks,
    make_homogeneous,
    make_levelset_star,
    make_midline_strip,
    make_weight,
    make_xstripes,
)

__version__ = "0.1.0"
