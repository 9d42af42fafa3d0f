"""Quantum polarization degrees for two-mode fields."""
from .channel import block_diagonalize, photon_distribution, rescale_unbounded
from .degrees import (
    MEASURES, MaxCurvePoint, chernoff_infimum, curve_to_csv, degree_bures,
    degree_chernoff, degree_hs, max_curve, max_curve_verify, max_value, nbar_grid,
    sup_over_unpolarized,
)
from .errors import InvalidState, OutsideRegion, ParseError, Unsupported
from .qmeasures import (
    CoherentParams, degree_d, degree_p, degree_q, dispersion_q, max_curve_q,
    q_function, su2_coherent,
)
from .states import (
    Block, BlockDensity, FockIndex, TwoModeState, UnpolarizedSpec, load_state,
    make_block, make_pure, pure_to_block, save_state, unpolarized_state,
)
from .stokes import degree_stokes, moments, stokes_matrices
from .su2 import EulerAngles, align, min_overlap_search, rotation_matrix, transform
from .unpolarized import (
    is_stokes_unpolarized, sail_region, symmetric_family, three_photon_solve,
    two_photon_family,
)

__version__ = "0.1.0"
