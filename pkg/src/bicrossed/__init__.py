"""Matched pairs, bicrossed products and the classification of complements
for finite-dimensional associative algebras, in exact arithmetic."""

from .scalar import QQ, FieldSpec, Residue
from .linalg import Matrix, Subspace
from .algebra import Algebra, Bilinear, Factorization, Violation
from .matched_pair import MatchedPair, bicrossed_product, canonical_matched_pair, check_matched_pair
from .deformation import DeformationMap, deform, enumerate_deformation_maps, is_deformation_map
from .classify import are_equivalent, are_isomorphic, classify_complements, invariant_fingerprint

__version__ = "0.1.0"
