"""Lattice reduction, closest/shortest vector search and lattice geometry."""
from .basis import CvpResult, LatticeBasis
from .decoding import (
    CVP_DIM_CAP,
    SVP_DIM_CAP,
    babai_nearest_plane,
    box_sphere_decode,
    cvp_sphere_decode,
    svp_shortest,
)
from .geometry import (
    covering_radius_exact_2d,
    covering_radius_upper_bound,
    dual_basis,
    effective_radius,
)
from .reduction import is_lll_reduced, lll_reduce

__all__ = [
    "CVP_DIM_CAP",
    "SVP_DIM_CAP",
    "CvpResult",
    "LatticeBasis",
    "babai_nearest_plane",
    "box_sphere_decode",
    "covering_radius_exact_2d",
    "covering_radius_upper_bound",
    "cvp_sphere_decode",
    "dual_basis",
    "effective_radius",
    "is_lll_reduced",
    "lll_reduce",
    "svp_shortest",
]
