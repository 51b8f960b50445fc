"""Linear type-p most-perfect magic squares of order p**r: construction,
verification, and exhaustive search over Z_p."""

from .codec import ConstructionParams, GridLocation
from .construction import build_delta, build_L, build_Lr, build_Ltilde, build_M
from .search import SearchResult, SearchSpace, census, census_partition, find_delta
from .square import Square, build_square, deserialize, entry_at, serialize
from .verifier import PropertyReport, verify_full, verify_reduced
from .zp import ZpMatrix, ZpVector, determinant, invert, is_nonsingular, mat_vec_mul

__version__ = "0.1.0"


def generate(p: int, r: int) -> Square:
    """The constructed type-p most-perfect square of order p**r."""
    params = ConstructionParams(p, r)
    return build_square(build_M(params), params)
