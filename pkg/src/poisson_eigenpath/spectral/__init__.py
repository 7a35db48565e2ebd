"""Okna spektralne, rzuty, operacja twiddle i jej ograniczenia normowe."""

from .bounds import BoundCheck, NormBoundSuite, norm_bound_suite
from .projectors import (
    finite_difference_projector,
    projector_derivative,
    projector_residuals,
    projector_second_derivative,
)
from .twiddle import (
    ResolventBlowup,
    quad_points_for,
    twiddle_contour,
    twiddle_derivative,
    twiddle_spectral,
    twiddle_sylvester,
)
from .windows import (
    BoundaryEigenvalue,
    EmptyWindow,
    GapTooSmall,
    InvalidWindow,
    ProjectorPair,
    SpectralWindow,
    WindowCountChanged,
    WindowFunction,
    WindowKind,
    contour_around,
    continue_windows,
    default_contour,
    interval_around,
    projector_from_decomposition,
    ranked_interval_window,
    window_projector,
)

__all__ = [
    "BoundCheck",
    "BoundaryEigenvalue",
    "EmptyWindow",
    "GapTooSmall",
    "InvalidWindow",
    "NormBoundSuite",
    "ProjectorPair",
    "ResolventBlowup",
    "SpectralWindow",
    "WindowCountChanged",
    "WindowFunction",
    "WindowKind",
    "contour_around",
    "continue_windows",
    "default_contour",
    "finite_difference_projector",
    "interval_around",
    "norm_bound_suite",
    "projector_derivative",
    "projector_from_decomposition",
    "projector_residuals",
    "projector_second_derivative",
    "quad_points_for",
    "ranked_interval_window",
    "twiddle_contour",
    "twiddle_derivative",
    "twiddle_spectral",
    "twiddle_sylvester",
    "window_projector",
]
