"""Executable checks for the dynamic-LIS lower-bound constructions.

Builds the matrix-to-point-set embeddings, checks their chain weights against
a brute-force oracle, and runs the (max,+)-product and OMv reductions on top of
a dynamic weighted LIS structure.
"""

from lislab.model import (
    BitVector,
    Matrix,
    WeightedPoint,
    boolean_matvec,
    dominates,
    maxplus_product,
)
from lislab.embedding import (
    Embedding,
    PointLabel,
    build_embedding,
    expand_unweighted,
    special_point,
    swap_b_column,
    validate_structure,
)
from lislab.chains import (
    closed_form_c,
    max_weight_chain,
    max_weight_chain_between,
    max_weight_chain_in_xrange,
)
from lislab.dynlis import DynamicSequence
from lislab.reductions import (
    ReductionError,
    ReductionReport,
    maxplus_via_lis,
    omv_apply,
    omv_init,
    tile_matrix,
)

__version__ = "0.1.0"

__all__ = [
    "BitVector",
    "DynamicSequence",
    "Embedding",
    "Matrix",
    "PointLabel",
    "ReductionError",
    "ReductionReport",
    "WeightedPoint",
    "boolean_matvec",
    "build_embedding",
    "closed_form_c",
    "dominates",
    "expand_unweighted",
    "max_weight_chain",
    "max_weight_chain_between",
    "max_weight_chain_in_xrange",
    "maxplus_product",
    "maxplus_via_lis",
    "omv_apply",
    "omv_init",
    "special_point",
    "swap_b_column",
    "tile_matrix",
    "validate_structure",
]
