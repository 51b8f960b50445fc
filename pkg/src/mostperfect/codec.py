"""Base-p digit codecs between integers and Z_p^{2r} vectors.

Symbols ``0 <= s < n**2`` map to their 2r base-p digits, most significant
first.  Grid locations map to the r digits of the row followed by the r
digits of the column, also most significant first.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .zp import DimensionError, ModulusError, ZpVector, check_prime

__all__ = [
    "ParamsError",
    "ConstructionParams",
    "GridLocation",
    "to_digits",
    "from_digits",
    "symbol_to_vector",
    "vector_to_symbol",
    "location_to_vector",
    "vector_to_location",
]


class ParamsError(ValueError):
    pass


@dataclass(frozen=True)
class ConstructionParams:
    p: int
    r: int
    n: int = field(init=False)
    dim: int = field(init=False)

    def __post_init__(self) -> None:
        try:
            check_prime(self.p)
        except ModulusError as exc:
            raise ParamsError(str(exc)) from None
        if not isinstance(self.r, int) or isinstance(self.r, bool):
            raise ParamsError(f"r must be an integer, got {self.r!r}")
        if self.r == 1:
            raise ParamsError(
                "r must be >= 2: order-p squares (r = 1) are pandiagonal squares of prime "
                "order, built by de la Loubere's method rather than this construction")
        if self.r < 2:
            raise ParamsError(f"r must be >= 2, got {self.r}")
        object.__setattr__(self, "n", self.p ** self.r)
        object.__setattr__(self, "dim", 2 * self.r)


@dataclass(frozen=True)
class GridLocation:
    row: int
    col: int


def to_digits(value: int, base: int, width: int) -> list[int]:
    """Most-significant-first digits of ``value``, zero padded to ``width``."""
    if not 0 <= value < base ** width:
        raise ValueError(f"{value} does not fit in {width} base-{base} digits")
    out = [0] * width
    for i in range(width - 1, -1, -1):
        value, out[i] = divmod(value, base)
    return out


def from_digits(digits: Sequence[int], base: int) -> int:
    value = 0
    for d in digits:
        value = value * base + d
    return value


def _check_order(order: Sequence[int] | None, dim: int) -> Sequence[int] | None:
    if order is None:
        return None
    if sorted(order) != list(range(dim)):
        raise ParamsError(f"basis order must be a permutation of 0..{dim - 1}")
    return order


def symbol_to_vector(symbol: int, params: ConstructionParams,
                     order: Sequence[int] | None = None) -> ZpVector:
    """Coordinates of ``symbol`` in the basis p^(2r-1), ..., p, 1.

    ``order`` optionally reorders that basis: coordinate ``j`` of the result
    is digit ``order[j]`` of the plain expansion.
    """
    if not 0 <= symbol < params.n ** 2:
        raise ValueError(f"symbol {symbol} outside 0..{params.n ** 2 - 1}")
    digits = to_digits(symbol, params.p, params.dim)
    order = _check_order(order, params.dim)
    if order is not None:
        digits = [digits[k] for k in order]
    return ZpVector(digits, params.p)


def vector_to_symbol(v: ZpVector, params: ConstructionParams,
                     order: Sequence[int] | None = None) -> int:
    if len(v) != params.dim:
        raise DimensionError(f"expected length {params.dim}, got {len(v)}")
    if v.p != params.p:
        raise ModulusError(f"moduli differ: {v.p} vs {params.p}")
    digits = list(v)
    order = _check_order(order, params.dim)
    if order is not None:
        plain = [0] * params.dim
        for j, k in enumerate(order):
            plain[k] = digits[j]
        digits = plain
    return from_digits(digits, params.p)


def location_to_vector(loc: GridLocation, params: ConstructionParams) -> ZpVector:
    n = params.n
    if not (0 <= loc.row < n and 0 <= loc.col < n):
        raise ValueError(f"location ({loc.row}, {loc.col}) outside a {n}x{n} grid")
    digits = to_digits(loc.row, params.p, params.r) + to_digits(loc.col, params.p, params.r)
    return ZpVector(digits, params.p)


def vector_to_location(v: ZpVector, params: ConstructionParams) -> GridLocation:
    if len(v) != params.dim:
        raise DimensionError(f"expected length {params.dim}, got {len(v)}")
    if v.p != params.p:
        raise ModulusError(f"moduli differ: {v.p} vs {params.p}")
    r = params.r
    return GridLocation(from_digits(v.entries[:r], params.p), from_digits(v.entries[r:], params.p))
