"""q-numerical radius of matrices and 2x2 operator matrices."""

import json

from ._core import (
    QnrError,
    __version__,
    bound_registry,
    generate_sectorial,
    make_offdiag,
    numerical_radius,
    offdiag_hermitian_closed_form,
    operator_norm,
    q_radius,
    q_radius_bruteforce_2x2,
    q_radius_hermitian,
    sector_angle,
    spectral_radius,
    threshold_crossover,
    transcendental_radius,
)
from . import _core


def evaluate_bound(bound_id, a, b=None, c=None, d=None, q=0.5, t=None, alpha=None,
                   gamma=None, restarts=0, seed=42):
    """Evaluate one registry entry; returns a list of clause reports (dicts)."""
    return json.loads(_core._evaluate_bound(bound_id, a, b, c, d, q, t, alpha, gamma,
                                            restarts, seed))


def fuzz_summary(bounds="all", trials=10, seed=42):
    """Per-bound pass/fail/indeterminate/skipped counts over random sectorial samples."""
    return json.loads(_core._fuzz_summary(bounds, trials, seed))


__all__ = [
    "QnrError", "__version__", "bound_registry", "evaluate_bound", "fuzz_summary",
    "generate_sectorial", "make_offdiag", "numerical_radius", "offdiag_hermitian_closed_form",
    "operator_norm", "q_radius", "q_radius_bruteforce_2x2", "q_radius_hermitian",
    "sector_angle", "spectral_radius", "threshold_crossover", "transcendental_radius",
]
