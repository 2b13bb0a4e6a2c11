"""Exact lattice-polytope decompositions: dilate enumeration, empty
triangulations, constructive splitting of lattice points of ``mK`` and
solidity checks."""

from .decomposition import (
    AMBIENT,
    EFFECTIVE,
    BelowThreshold,
    Decomposition,
    DecompositionBatch,
    EmptinessViolated,
    IdentityReport,
    NotInDilate,
    decompose,
    decompose_all,
    head_dilation_for,
    peel_vertex,
    sumset_rhs,
    verify_ambient_identity,
    verify_empty_simplex_identity,
    verify_reduced_identity,
)
from .exact import DimensionMismatch, Rat, UnderdeterminedSystem, int_det, rat_solve, snf_divisors
from .polytope import (
    ConvexCoeffs,
    InvalidWitness,
    LatticePolytope,
    PointSet,
    affine_dim,
    caratheodory_reduce,
    extreme_points,
    is_empty_polytope,
    is_projectively_faithful,
    k_fold_sumset,
    lattice_points,
    member,
    member_by_subsets,
    minkowski_sum,
)
from .solidity import (
    HoleReport,
    NotFaithful,
    NotInCone,
    SharpnessParams,
    SharpnessReport,
    SolidityReport,
    Verdict,
    VertexCone,
    cone_holes,
    cone_member,
    equality_profile,
    is_atom,
    is_solid,
    locally_solid_check,
    sharpness_simplex,
    verify_sharpness,
)
from .triangulation import (
    BarycentricCoords,
    DegenerateSimplex,
    OutsideError,
    Simplex,
    Triangulation,
    barycentric,
    empty_triangulation,
    locate,
    normalized_volume,
    vertex_volume,
)

__all__ = [
    "AMBIENT",
    "EFFECTIVE",
    "BelowThreshold",
    "Decomposition",
    "DecompositionBatch",
    "EmptinessViolated",
    "IdentityReport",
    "NotInDilate",
    "decompose",
    "decompose_all",
    "head_dilation_for",
    "peel_vertex",
    "sumset_rhs",
    "verify_ambient_identity",
    "verify_empty_simplex_identity",
    "verify_reduced_identity",
    "DimensionMismatch",
    "Rat",
    "UnderdeterminedSystem",
    "int_det",
    "rat_solve",
    "snf_divisors",
    "ConvexCoeffs",
    "InvalidWitness",
    "LatticePolytope",
    "PointSet",
    "affine_dim",
    "caratheodory_reduce",
    "extreme_points",
    "is_empty_polytope",
    "is_projectively_faithful",
    "k_fold_sumset",
    "lattice_points",
    "member",
    "member_by_subsets",
    "minkowski_sum",
    "HoleReport",
    "NotFaithful",
    "NotInCone",
    "SharpnessParams",
    "SharpnessReport",
    "SolidityReport",
    "Verdict",
    "VertexCone",
    "cone_holes",
    "cone_member",
    "equality_profile",
    "is_atom",
    "is_solid",
    "locally_solid_check",
    "sharpness_simplex",
    "verify_sharpness",
    "BarycentricCoords",
    "DegenerateSimplex",
    "OutsideError",
    "Simplex",
    "Triangulation",
    "barycentric",
    "empty_triangulation",
    "locate",
    "normalized_volume",
    "vertex_volume",
]

__version__ = "0.1.0"
