"""Squares produced by linear maps over Z_p, plus their text/CSV/JSON forms."""

from __future__ import annotations

import csv
import io
import json
from typing import Sequence

import numpy as np

from .codec import (ConstructionParams, GridLocation, location_to_vector,
                    symbol_to_vector, vector_to_location, vector_to_symbol)
from .zp import SingularMatrixError, ZpMatrix, invert, is_nonsingular, mat_vec_mul

__all__ = [
    "SquareError",
    "SquareFormatError",
    "MalformedSquareError",
    "NaturalityError",
    "DuplicateSymbolError",
    "SymbolRangeError",
    "FORMATS",
    "Square",
    "digit_table",
    "build_square",
    "build_square_reference",
    "linear_entry",
    "entry_at",
    "serialize",
    "deserialize",
]

FORMATS = ("grid", "csv", "json")


class SquareError(ValueError):
    pass


class SquareFormatError(SquareError):
    """Input could not be parsed into a square."""


class MalformedSquareError(SquareFormatError):
    pass


class NaturalityError(SquareFormatError):
    pass


class DuplicateSymbolError(NaturalityError):
    pass


class SymbolRangeError(NaturalityError):
    pass


class Square:
    """An immutable n x n grid of integers, indexed with wraparound.

    ``p`` and ``r`` record provenance for constructed squares and are None
    for imported ones.  Naturality is not enforced here (the verifier must
    be able to reject non-natural grids); ``deserialize`` enforces it.
    """

    __slots__ = ("grid", "p", "r")

    def __init__(self, grid, p: int | None = None, r: int | None = None) -> None:
        arr = np.array(grid, dtype=np.int64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
            raise MalformedSquareError(f"grid must be a non-empty n x n array, got shape {arr.shape}")
        if (p is None) != (r is None):
            raise SquareError("p and r must be given together")
        if p is not None and p ** r != arr.shape[0]:
            raise SquareError(f"grid order {arr.shape[0]} does not equal p**r = {p ** r}")
        arr.setflags(write=False)
        self.grid = arr
        self.p = p
        self.r = r

    @property
    def n(self) -> int:
        return self.grid.shape[0]

    def __getitem__(self, rc: tuple[int, int]) -> int:
        return entry_at(self, *rc)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Square):
            return NotImplemented
        return (self.p, self.r) == (other.p, other.r) and np.array_equal(self.grid, other.grid)

    def __hash__(self) -> int:
        return hash((self.p, self.r, self.grid.tobytes()))

    def __repr__(self) -> str:
        return f"Square(n={self.n}, p={self.p}, r={self.r})"

    def tolist(self) -> list[list[int]]:
        return self.grid.tolist()

    def transpose(self) -> Square:
        return Square(self.grid.T, self.p, self.r)

    def is_natural(self) -> bool:
        flat = np.sort(self.grid, axis=None)
        return bool(np.array_equal(flat, np.arange(self.n * self.n)))


def entry_at(sq: Square, row: int, col: int) -> int:
    n = sq.n
    return int(sq.grid[row % n, col % n])


def digit_table(params: ConstructionParams, order: Sequence[int] | None = None) -> np.ndarray:
    """(n**2, 2r) array: row s holds the digit vector of symbol s."""
    p, d = params.p, params.dim
    symbols = np.arange(params.n ** 2, dtype=np.int64)
    powers = p ** np.arange(d - 1, -1, -1, dtype=np.int64)
    digits = (symbols[:, None] // powers[None, :]) % p
    if order is not None:
        digits = digits[:, list(order)]
    return digits


def _check_map(m: ZpMatrix, params: ConstructionParams) -> None:
    if m.p != params.p or m.shape != (params.dim, params.dim):
        raise SquareError(f"need a {params.dim}x{params.dim} matrix over Z_{params.p}, "
                          f"got {m.rows}x{m.cols} over Z_{m.p}")
    if not is_nonsingular(m):
        raise SingularMatrixError("a singular map cannot produce a natural square")


def build_square(m: ZpMatrix, params: ConstructionParams,
                 order: Sequence[int] | None = None, *, check: bool = True,
                 digits: np.ndarray | None = None) -> Square:
    """Place each symbol s at location M @ digits(s).

    ``digits`` may pass a precomputed ``digit_table`` (the search loop does).
    """
    if check:
        _check_map(m, params)
    p, r, n = params.p, params.r, params.n
    if digits is None:
        digits = digit_table(params, order)
    mat = np.array(m.entries, dtype=np.int64).reshape(params.dim, params.dim)
    loc = (digits @ mat.T) % p
    weights = p ** np.arange(r - 1, -1, -1, dtype=np.int64)
    rows = loc[:, :r] @ weights
    cols = loc[:, r:] @ weights
    grid = np.empty((n, n), dtype=np.int64)
    grid[rows, cols] = np.arange(n * n, dtype=np.int64)
    return Square(grid, params.p, params.r)


def build_square_reference(m: ZpMatrix, params: ConstructionParams,
                           order: Sequence[int] | None = None) -> Square:
    """Slow symbol-by-symbol construction through the codec; test oracle."""
    _check_map(m, params)
    n = params.n
    grid = [[-1] * n for _ in range(n)]
    for s in range(n * n):
        loc = vector_to_location(mat_vec_mul(m, symbol_to_vector(s, params, order)), params)
        grid[loc.row][loc.col] = s
    return Square(grid, params.p, params.r)


def linear_entry(m: ZpMatrix, params: ConstructionParams, row: int, col: int,
                 order: Sequence[int] | None = None, inverse: ZpMatrix | None = None) -> int:
    """Symbol at (row, col) of the square of ``m``, via M^-1 @ location."""
    inv = inverse if inverse is not None else invert(m)
    n = params.n
    v = location_to_vector(GridLocation(row % n, col % n), params)
    return vector_to_symbol(mat_vec_mul(inv, v), params, order)


# -- serialization -------------------------------------------------------------

def _validate_natural(grid: np.ndarray) -> None:
    n = grid.shape[0]
    bad = (grid < 0) | (grid >= n * n)
    if bad.any():
        i, j = map(int, np.argwhere(bad)[0])
        raise SymbolRangeError(f"symbol {int(grid[i, j])} at ({i}, {j}) outside 0..{n * n - 1}")
    counts = np.bincount(grid.ravel(), minlength=n * n)
    if (counts > 1).any():
        dup = int(np.flatnonzero(counts > 1)[0])
        raise DuplicateSymbolError(f"symbol {dup} appears {int(counts[dup])} times")


def serialize(sq: Square, fmt: str = "grid", offset: int = 0) -> bytes:
    """Render a square.  ``offset`` shifts displayed symbols (e.g. 1 for 1-based)."""
    rows = (sq.grid + offset).tolist()
    if fmt == "json":
        obj = {"p": sq.p, "r": sq.r, "n": sq.n, "grid": rows}
        if offset:
            obj["offset"] = offset
        body = json.dumps(obj, separators=(", ", ": "))
        return (body + "\n").encode()
    if fmt == "csv":
        return "".join(",".join(map(str, row)) + "\n" for row in rows).encode()
    if fmt == "grid":
        width = max(len(str(x)) for row in rows for x in row)
        return "".join(" ".join(f"{x:>{width}}" for x in row) + "\n" for row in rows).encode()
    raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")


def _sniff(text: str) -> str:
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return "json"
    if "," in stripped:
        return "csv"
    return "grid"


def _parse_rows(rows: list[list[str]]) -> list[list[int]]:
    try:
        return [[int(tok) for tok in row] for row in rows]
    except ValueError as exc:
        raise MalformedSquareError(f"non-integer entry: {exc}") from None


def deserialize(data: bytes | str, fmt: str | None = None, offset: int = 0) -> Square:
    """Parse a square, validating shape and naturality.

    JSON input carries its own ``offset`` key (default 0); for text formats
    the ``offset`` argument says what was added at render time.
    """
    text = data.decode() if isinstance(data, (bytes, bytearray)) else data
    fmt = fmt or _sniff(text)
    p = r = None
    if fmt == "json":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MalformedSquareError(f"invalid JSON: {exc}") from None
        if not isinstance(obj, dict) or not isinstance(obj.get("grid"), list):
            raise MalformedSquareError("JSON square needs a 'grid' list")
        grid = obj["grid"]
        if not all(isinstance(row, list) and all(isinstance(x, int) and not isinstance(x, bool)
                                                 for x in row) for row in grid):
            raise MalformedSquareError("grid must be a list of integer lists")
        p, r = obj.get("p"), obj.get("r")
        offset = obj.get("offset", 0)
        if "n" in obj and obj["n"] != len(grid):
            raise MalformedSquareError(f"declared n={obj['n']} but grid has {len(grid)} rows")
    elif fmt == "csv":
        rows = [row for row in csv.reader(io.StringIO(text)) if row]
        grid = _parse_rows([[tok.strip() for tok in row] for row in rows])
    elif fmt == "grid":
        grid = _parse_rows([ln.split() for ln in text.splitlines() if ln.strip()])
    else:
        raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")
    n = len(grid)
    if n == 0 or any(len(row) != n for row in grid):
        raise MalformedSquareError("grid is not square")
    arr = np.array(grid, dtype=np.int64) - offset
    _validate_natural(arr)
    try:
        return Square(arr, p, r)
    except SquareError as exc:
        raise MalformedSquareError(str(exc)) from None
