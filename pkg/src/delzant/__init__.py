"""Exact computations with Delzant polytopes and unimodular fans."""

from .errors import DelzantError
from .polytope import (
    AffineUnimodularMap,
    Polytope,
    Segment,
    agl_congruent,
    build_from_halfspaces,
    build_from_vertices,
    intersect,
    minkowski_combine,
    normal_fan,
    rational_length,
    support_value,
    volume,
)
from .fan import (
    Cone,
    Fan,
    NotPolytopal,
    SecondaryCone,
    blow_up,
    common_refinement,
    config_cone,
    fan_properties,
    find_blow_downs,
    realize_polytopal,
    refines,
    secondary_cone,
    stellar_subdivision,
    stratum_info,
)
from .desingularize import RefinementTrace, desingularize, hilbert_basis_2d, simplicialize
from .metrics import hausdorff_distance, support_uniform_norm_estimate, symmetric_difference_distance
from .moduli import (
    MinkowskiPath,
    PolygonClassification,
    check_lower_bound,
    check_polygon_area_bound,
    classify_delzant_polygon,
    corner_chop,
    dh_measure,
    is_delzant,
    minkowski_path,
    path_complexity,
    toric_summary,
)

__version__ = "0.1.0"
