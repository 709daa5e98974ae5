"""Quasi-cyclic LDPC codes from generalized quadrangles and finite geometries."""

from .codec import SpaDecoder, awgn_llr, spa_decode
from .codegen import PrepMatrix, derive_generator, encode, encode_matrix, verify_orthogonality
from .ff import GaloisField, build_field
from .geom import build_quadrangle, validate_quadrangle
from .qc import QcBlockMatrix, SparseBinaryMatrix, dualize, expand, gf2_rank, girth
from .spaces import build_space

__all__ = [
    "GaloisField", "build_field", "build_quadrangle", "validate_quadrangle", "build_space",
    "QcBlockMatrix", "SparseBinaryMatrix", "dualize", "expand", "gf2_rank", "girth",
    "PrepMatrix", "derive_generator", "encode", "encode_matrix", "verify_orthogonality",
    "SpaDecoder", "awgn_llr", "spa_decode",
]
__version__ = "0.1.0"
