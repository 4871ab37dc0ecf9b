"""Convolution on discrete groups with bilinear pairings.

Signals are finitely supported functions on Z, Z/n, scaled integer
lattices, or dihedral groups; convolution pairs their values through a
bilinear map against an invariant weight.  On top of the core sit exact
law checks, a smoothing (mollifier) toolkit with quantitative bounds,
derivative validation against finite differences, and a transform-based
fast path for the scalar case.
"""
from ._backend import backend_name
from .calculus import (
    JacobianField,
    SmoothnessReport,
    cont_diff_check,
    conv_dderiv,
    conv_fderiv,
    fd_axis,
    fd_jacobian,
    fd_jacobian_field,
    interior_window,
)
from .convolution import (
    ConvRequest,
    IdentityReport,
    convolve,
    convolve_at,
    exists_at,
    fubini_swap_check,
    integral_identity_check,
    output_candidates,
)
from .errors import (
    CsvFormatError,
    DimensionMismatchError,
    GconvError,
    MeasureFlagError,
    SpaceMismatchError,
)
from .fastpath import DenseSignal, bench, fast_convolve, fft, naive_convolve
from .functions import (
    SampledFunction,
    SymbolicFunction,
    delta,
    dumps_csv,
    lin_comb,
    loads_csv,
    max_deviation,
    read_csv,
    write_csv,
)
from .groups import (
    CountingMeasure,
    Cyclic,
    Dihedral,
    GridVolume,
    GroupSpace,
    Integers,
    Lattice,
    Measure,
    WeightedMeasure,
    parse_group,
    parse_measure,
)
from .mollify import (
    BallBoundReport,
    BumpSpec,
    ConvergenceReport,
    bump,
    ball_points,
    continuity_modulus,
    conv_dist_bound,
    convergence_study,
    estimate_lipschitz,
    mollify,
)
from .pairings import (
    Lifted,
    Mul,
    Pairing,
    ScalarSmul,
    Tensor3,
    TransposeOf,
    assoc_compatible,
    lift,
    transpose,
)

__version__ = "0.1.0"

__all__ = [
    "BallBoundReport",
    "BumpSpec",
    "ConvRequest",
    "ConvergenceReport",
    "CountingMeasure",
    "CsvFormatError",
    "Cyclic",
    "DenseSignal",
    "Dihedral",
    "DimensionMismatchError",
    "GconvError",
    "GridVolume",
    "GroupSpace",
    "IdentityReport",
    "Integers",
    "JacobianField",
    "Lattice",
    "Lifted",
    "Measure",
    "MeasureFlagError",
    "Mul",
    "Pairing",
    "SampledFunction",
    "ScalarSmul",
    "SmoothnessReport",
    "SpaceMismatchError",
    "SymbolicFunction",
    "Tensor3",
    "TransposeOf",
    "WeightedMeasure",
    "assoc_compatible",
    "backend_name",
    "ball_points",
    "bench",
    "bump",
    "cont_diff_check",
    "continuity_modulus",
    "conv_dderiv",
    "conv_dist_bound",
    "conv_fderiv",
    "convergence_study",
    "convolve",
    "convolve_at",
    "delta",
    "dumps_csv",
    "exists_at",
    "fast_convolve",
    "fd_axis",
    "fd_jacobian",
    "fd_jacobian_field",
    "fft",
    "fubini_swap_check",
    "integral_identity_check",
    "interior_window",
    "lift",
    "lin_comb",
    "loads_csv",
    "max_deviation",
    "mollify",
    "naive_convolve",
    "output_candidates",
    "parse_group",
    "parse_measure",
    "read_csv",
    "transpose",
    "write_csv",
]
