"""Independence models represented by their elementary triplets."""
from .closure import (
    HAVE_COMPILED,
    close_elementary,
    close_triplets_oracle,
    elementary_model,
    enumerate_model,
    expand_e,
    kernel_name,
)
from .core import (
    AxiomLevel,
    ElementaryModel,
    ElementaryTriplet,
    Triplet,
    Universe,
    canonicalize,
    dominates,
    validate,
)
from .errors import ElemCIError
from .graphmap import (
    Dag,
    all_pa,
    build_mim,
    d_separated,
    has_perfect_map,
    induced_elementary_model,
    verify_factorization,
)
from .query import dominant_triplets, grid_dag, is_member, is_submodel, maximal_grids, nonsymmetric
from .setops import intersect, union_max_subset, union_min_superset, union_with_context

__version__ = "0.1.0"

__all__ = [
    "AxiomLevel",
    "Dag",
    "ElemCIError",
    "ElementaryModel",
    "ElementaryTriplet",
    "HAVE_COMPILED",
    "Triplet",
    "Universe",
    "all_pa",
    "build_mim",
    "canonicalize",
    "close_elementary",
    "close_triplets_oracle",
    "d_separated",
    "dominant_triplets",
    "dominates",
    "elementary_model",
    "enumerate_model",
    "expand_e",
    "grid_dag",
    "has_perfect_map",
    "induced_elementary_model",
    "intersect",
    "is_member",
    "is_submodel",
    "kernel_name",
    "maximal_grids",
    "nonsymmetric",
    "union_max_subset",
    "union_min_superset",
    "union_with_context",
    "validate",
    "verify_factorization",
]
