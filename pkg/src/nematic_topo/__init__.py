"""Homotopy classification of nematic director fields on polyhedral domains.

The package decides whether two boundary director fields are homotopic by
computing integer invariant chains over the cells of a truncated domain:
winding numbers of comparison loops on cleaved edges, lifted sphere degrees
of comparison cylinders on cleaved faces, and their periodic analogues on
the post-display geometry.
"""

from .classify import (
    ClassificationReport,
    catalog,
    classify_pair,
    classify_post_pair,
)
from .complex import (
    Polyhedron,
    TruncationSpec,
    build_truncated,
    cube,
    l_prism,
    patch_area,
    tetrahedron,
    triangulate_cleaved_face,
    validate_polyhedron,
)
from .field import (
    DirectorField,
    Resolution,
    check_tangency,
    sample_edge,
    sample_patch,
)
from .invariant import (
    BoundaryLift,
    InvariantChain,
    boundary_degree,
    build_edge_homotopy,
    build_pair_lifts,
    edge_chain,
    edge_invariant,
    face_chain,
    face_invariant,
    face_sum_residuals,
    patch_parity_residuals,
    sphere_degree,
    winding_crossing_oracle,
    winding_half_turns,
)
from .lift import LiftSeed, lift_path, lift_patch, periodicity_class
from .post import PostDomain, build_post_domain
from .postinvariant import (
    BaseAlignment,
    PostPairLift,
    align_basepoints,
    filling_difference_degree,
    prism_edge_chain,
    prism_face_chain,
)
from . import generators

__all__ = [
    "BaseAlignment",
    "BoundaryLift",
    "ClassificationReport",
    "align_basepoints",
    "prism_edge_chain",
    "prism_face_chain",
    "DirectorField",
    "InvariantChain",
    "LiftSeed",
    "Polyhedron",
    "PostDomain",
    "PostPairLift",
    "Resolution",
    "TruncationSpec",
    "boundary_degree",
    "build_edge_homotopy",
    "build_pair_lifts",
    "build_post_domain",
    "build_truncated",
    "catalog",
    "check_tangency",
    "classify_pair",
    "classify_post_pair",
    "cube",
    "edge_chain",
    "edge_invariant",
    "face_chain",
    "face_invariant",
    "face_sum_residuals",
    "filling_difference_degree",
    "generators",
    "l_prism",
    "lift_path",
    "lift_patch",
    "patch_area",
    "patch_parity_residuals",
    "periodicity_class",
    "sample_edge",
    "sample_patch",
    "sphere_degree",
    "tetrahedron",
    "triangulate_cleaved_face",
    "validate_polyhedron",
    "winding_crossing_oracle",
    "winding_half_turns",
]

__version__ = "0.1.0"
