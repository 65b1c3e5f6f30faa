"""Frames and frame operators in finite-dimensional Krein spaces."""

__version__ = "0.1.0"

from .krein import (
    KreinSpace,
    Subspace,
    SubspaceClass,
    SubspaceKind,
    FundamentalDecomposition,
    AngularOperator,
    indefinite_inner,
    krein_adjoint,
    classify_subspace,
    orthogonal_companion,
    orthonormalize_definite,
    fundamental_decomposition_from,
    angular_operator,
    oblique_projection,
    selfadjoint_projection,
    same_subspace,
)
from .frames import (
    Frame,
    JFrameReport,
    HilbertBounds,
    build_frame,
    is_jframe,
    hilbert_frame_bounds,
    frame_bounds_on_definite_subspace,
)
from .jframe import (
    JFrameOperatorBundle,
    BlockRepCork,
    BlockRepEdinburgh,
    JFrameBounds,
    jframe_operator,
    block_rep_cork,
    block_rep_edinburgh,
    s_pm_block_reps,
    inverse_block_reps,
    jframe_bounds,
    dual_frame,
    verify_operator_conditions,
)
from .spectral import (
    SpectrumData,
    EnclosureRegion,
    MembershipReport,
    spectrum,
    schur_complement_1,
    schur_complement_2,
    enclosure_cork,
    enclosure_edinburgh,
    enclosure_imag_strip,
    enclosure_from_bounds,
    check_membership,
)
from .sqrtpolar import (
    SqrtResult,
    ContourSpec,
    PolarResult,
    SynthesisResult,
    principal_sqrt_triangular,
    riesz_dunford_sqrt,
    default_contour,
    polar_decompose,
    connect_two_frames,
    synthesize_from_operator,
    random_j_unitary,
)
from .generate import GenConfig, random_jframe, reconstruction_residual
from .report import analyze_frame

__all__ = [name for name in dir() if not name.startswith("_")]
