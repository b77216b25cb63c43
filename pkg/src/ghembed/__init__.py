"""Exact Gromov-Hausdorff distances on finite metric spaces and bead-space embeddings."""

from .bead import BeadSpace, GapSequence, bead_gap, block_union_distortion, build_bead, gap_sequence
from .box import BoxPoint, box_linf_distance, embed_box_point
from .gh import (
    Correspondence,
    GHResult,
    NotACorrespondence,
    distortion,
    gh_bounds,
    gh_bruteforce,
    gh_exact,
)
from .metric import (
    FiniteMetricSpace,
    MetricError,
    SearchTooLarge,
    diameter,
    find_isometry,
    is_isometric,
    one_point,
    scale,
    two_point,
    validate_metric,
)

__all__ = [
    "BeadSpace",
    "BoxPoint",
    "Correspondence",
    "FiniteMetricSpace",
    "GHResult",
    "GapSequence",
    "MetricError",
    "NotACorrespondence",
    "SearchTooLarge",
    "bead_gap",
    "block_union_distortion",
    "box_linf_distance",
    "build_bead",
    "diameter",
    "distortion",
    "embed_box_point",
    "find_isometry",
    "gap_sequence",
    "gh_bounds",
    "gh_bruteforce",
    "gh_exact",
    "is_isometric",
    "one_point",
    "scale",
    "two_point",
    "validate_metric",
]

__version__ = "0.1.0"
