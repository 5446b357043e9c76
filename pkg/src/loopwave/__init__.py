"""Loop-group parametrization of wavelet filter banks.

Laurent-polynomial loops on the circle correspond one-to-one with
quadrature-mirror filter systems; the package converts between the two,
verifies and completes filters, builds truncated models of the associated
isometry families, classifies irreducibility by monomial-corner detection,
and synthesizes scaling functions and wavelets by the cascade algorithm.
"""

from .laurent import LaurentPoly, MatrixLaurent
from .loopgroup import (
    FilterSystem,
    Loop,
    act,
    base_system,
    certify_loop,
    filters_to_loop,
    loop_to_filters,
    random_paraunitary,
    transition,
)
from .qmf import (
    QmfReport,
    SampledSystem,
    certify,
    complete,
    low_pass_check,
    verify_measure_invariance,
    verify_qmf,
    verify_scalar_qmf,
)
from .cuntz_rep import (
    Band,
    CuntzReport,
    TruncatedRep,
    adjoint_apply,
    build_rep,
    commutant_diagnostic,
    reconstruct,
    transition_operator_matrix,
    verify_cuntz,
)
from .irreducibility import (
    CornerWitness,
    Verdict,
    classify,
    detect_corner,
    equivalent,
    graded_kernels,
)
from .wavelet import (
    GridFunction,
    ScalingFunctionSamples,
    WaveletSamples,
    cascade,
    check_intertwine,
    orthonormality_check,
    synthesize_W,
    wavelets,
)
from .standard_filters import (
    daubechies4_lowpass,
    daubechies4_system,
    haar_system,
    stretched_box_lowpass,
)

__version__ = "0.1.0"

__all__ = [
    "LaurentPoly",
    "MatrixLaurent",
    "FilterSystem",
    "Loop",
    "act",
    "base_system",
    "certify_loop",
    "filters_to_loop",
    "loop_to_filters",
    "random_paraunitary",
    "transition",
    "QmfReport",
    "SampledSystem",
    "certify",
    "complete",
    "low_pass_check",
    "verify_measure_invariance",
    "verify_qmf",
    "verify_scalar_qmf",
    "Band",
    "CuntzReport",
    "TruncatedRep",
    "adjoint_apply",
    "build_rep",
    "commutant_diagnostic",
    "reconstruct",
    "transition_operator_matrix",
    "verify_cuntz",
    "CornerWitness",
    "Verdict",
    "classify",
    "detect_corner",
    "equivalent",
    "graded_kernels",
    "GridFunction",
    "ScalingFunctionSamples",
    "WaveletSamples",
    "cascade",
    "check_intertwine",
    "orthonormality_check",
    "synthesize_W",
    "wavelets",
    "daubechies4_lowpass",
    "daubechies4_system",
    "haar_system",
    "stretched_box_lowpass",
    "__version__",
]
