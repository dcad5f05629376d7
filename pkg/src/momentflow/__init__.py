"""Time evolution of truncated moment sequences.

Moment sequences evolve in closed form under the heat, transport, and
combined flows; backward heat evolution locates the distance to the moment
cone boundary, and interior 1-D sequences recover a Gaussian-mixture
representing measure.  Every computation has an independent oracle.
"""

__version__ = "0.1.0"

from .core import (
    ATOM_MERGE_TOL,
    AtomicMeasure,
    GaussianMixture,
    MomentSequence,
    QuadratureError,
    enumerate_multiindices,
    linear_combination,
    oracle_moments_atomic,
    oracle_moments_gaussian_mixture,
    oracle_moments_quadrature,
    riesz_apply,
    stieltjes_sequence,
)
from .exppoly import (
    ExpPoly,
    Term,
    canonicalize,
    evaluate,
    integrate_with_rate,
    linear_combine,
    shift_rate,
)
from .flows import (
    FlowParams,
    MomentFlow,
    PastHorizonError,
    combined_flow,
    evaluate_flow,
    evolve_gaussian_mixture,
    heat_dual_poly,
    heat_flow,
    heat_flow_1d_closed,
    transport_atomic,
    transport_dual_poly,
    transport_flow,
)
from .hankel import (
    HankelMatrix,
    PsdReport,
    build_hankel,
    classify_psd,
    kernel_polynomial,
)
from .boundary import (
    BoundaryReport,
    BracketingError,
    NotInteriorError,
    boundary_project,
    distance_upper_bound,
    heat_distance_1d,
)
from .recovery import (
    ComplexRootsError,
    NonPositiveWeightError,
    RecoveryError,
    RecoveryResult,
    atoms_from_kernel,
    augment_odd,
    recover_gaussian_mixture,
    weights_from_atoms,
)

__all__ = [
    "ATOM_MERGE_TOL",
    "AtomicMeasure",
    "BoundaryReport",
    "BracketingError",
    "ComplexRootsError",
    "ExpPoly",
    "FlowParams",
    "GaussianMixture",
    "HankelMatrix",
    "MomentFlow",
    "MomentSequence",
    "NonPositiveWeightError",
    "NotInteriorError",
    "PastHorizonError",
    "PsdReport",
    "QuadratureError",
    "RecoveryError",
    "RecoveryResult",
    "Term",
    "atoms_from_kernel",
    "augment_odd",
    "boundary_project",
    "build_hankel",
    "canonicalize",
    "classify_psd",
    "combined_flow",
    "distance_upper_bound",
    "enumerate_multiindices",
    "evaluate",
    "evaluate_flow",
    "evolve_gaussian_mixture",
    "heat_distance_1d",
    "heat_dual_poly",
    "heat_flow",
    "heat_flow_1d_closed",
    "integrate_with_rate",
    "kernel_polynomial",
    "linear_combination",
    "linear_combine",
    "oracle_moments_atomic",
    "oracle_moments_gaussian_mixture",
    "oracle_moments_quadrature",
    "recover_gaussian_mixture",
    "riesz_apply",
    "shift_rate",
    "stieltjes_sequence",
    "transport_atomic",
    "transport_dual_poly",
    "transport_flow",
    "weights_from_atoms",
]
