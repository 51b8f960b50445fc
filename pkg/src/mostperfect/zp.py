"""Exact linear algebra over the prime field Z_p.

Vectors and matrices are immutable and store canonical residues ``0..p-1``
as plain ints.  Negative inputs are reduced on construction, so a ``-1``
written in a formula is stored as ``p - 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

__all__ = [
    "ZpError",
    "DimensionError",
    "ModulusError",
    "SingularMatrixError",
    "is_prime",
    "check_prime",
    "Residue",
    "ZpVector",
    "ZpMatrix",
    "mat_vec_mul",
    "mat_mul",
    "is_nonsingular",
    "rank",
    "determinant",
    "invert",
    "solve",
    "format_matrix",
    "format_vector",
    "parse_matrix_text",
]


class ZpError(ValueError):
    """Base class for Z_p algebra errors."""


class DimensionError(ZpError):
    pass


class ModulusError(ZpError):
    pass


class SingularMatrixError(ZpError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def check_prime(p: int) -> int:
    if not isinstance(p, int) or isinstance(p, bool) or not is_prime(p):
        raise ModulusError(f"p must be prime, got {p!r}")
    return p


@dataclass(frozen=True)
class Residue:
    """An element of Z_p held in canonical form."""

    value: int
    modulus: int

    def __post_init__(self) -> None:
        check_prime(self.modulus)
        object.__setattr__(self, "value", self.value % self.modulus)

    def __int__(self) -> int:
        return self.value

    def __bool__(self) -> bool:
        return self.value != 0

    def _coerce(self, other) -> int:
        if isinstance(other, Residue):
            if other.modulus != self.modulus:
                raise ModulusError(f"moduli differ: {self.modulus} vs {other.modulus}")
            return other.value
        return int(other)

    def __add__(self, other) -> Residue:
        return Residue(self.value + self._coerce(other), self.modulus)

    __radd__ = __add__

    def __sub__(self, other) -> Residue:
        return Residue(self.value - self._coerce(other), self.modulus)

    def __rsub__(self, other) -> Residue:
        return Residue(self._coerce(other) - self.value, self.modulus)

    def __neg__(self) -> Residue:
        return Residue(-self.value, self.modulus)

    def __mul__(self, other) -> Residue:
        return Residue(self.value * self._coerce(other), self.modulus)

    __rmul__ = __mul__

    def inverse(self) -> Residue:
        if self.value == 0:
            raise ZeroDivisionError("0 has no inverse in Z_p")
        return Residue(pow(self.value, -1, self.modulus), self.modulus)

    def __eq__(self, other) -> bool:
        if isinstance(other, Residue):
            return self.value == other.value and self.modulus == other.modulus
        if isinstance(other, int):
            return self.value == other % self.modulus
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.value, self.modulus))


@dataclass(frozen=True)
class ZpVector:
    entries: tuple[int, ...]
    p: int

    def __init__(self, entries: Iterable[int], p: int) -> None:
        check_prime(p)
        values = tuple(int(x) % p for x in entries)
        if not values:
            raise DimensionError("vector must have positive length")
        object.__setattr__(self, "entries", values)
        object.__setattr__(self, "p", p)

    @classmethod
    def zero(cls, d: int, p: int) -> ZpVector:
        return cls([0] * d, p)

    @classmethod
    def unit(cls, j: int, d: int, p: int) -> ZpVector:
        """Elementary vector with a 1 at 0-based position ``j``."""
        if not 0 <= j < d:
            raise DimensionError(f"unit index {j} out of range for length {d}")
        return cls([1 if i == j else 0 for i in range(d)], p)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i: int) -> int:
        return self.entries[i]

    def residue(self, i: int) -> Residue:
        return Residue(self.entries[i], self.p)

    def _check(self, other: ZpVector) -> None:
        if other.p != self.p:
            raise ModulusError(f"moduli differ: {self.p} vs {other.p}")
        if len(other) != len(self):
            raise DimensionError(f"lengths differ: {len(self)} vs {len(other)}")

    def __add__(self, other: ZpVector) -> ZpVector:
        self._check(other)
        return ZpVector((a + b for a, b in zip(self, other)), self.p)

    def __sub__(self, other: ZpVector) -> ZpVector:
        self._check(other)
        return ZpVector((a - b for a, b in zip(self, other)), self.p)

    def __neg__(self) -> ZpVector:
        return ZpVector((-a for a in self), self.p)

    def scale(self, c: int) -> ZpVector:
        return ZpVector((c * a for a in self), self.p)

    def is_zero(self) -> bool:
        return not any(self.entries)

    def all_nonzero(self) -> bool:
        return all(self.entries)

    def __repr__(self) -> str:
        return f"ZpVector({list(self.entries)}, p={self.p})"


@dataclass(frozen=True)
class ZpMatrix:
    """Dense matrix over Z_p, row-major."""

    rows: int
    cols: int
    entries: tuple[int, ...]
    p: int

    def __init__(self, rows: int, cols: int, entries: Iterable[int], p: int) -> None:
        check_prime(p)
        values = tuple(int(x) % p for x in entries)
        if rows <= 0 or cols <= 0:
            raise DimensionError(f"bad shape {rows}x{cols}")
        if len(values) != rows * cols:
            raise DimensionError(f"expected {rows * cols} entries, got {len(values)}")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", values)
        object.__setattr__(self, "p", p)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], p: int) -> ZpMatrix:
        if not rows or not rows[0]:
            raise DimensionError("matrix must be non-empty")
        width = len(rows[0])
        if any(len(row) != width for row in rows):
            raise DimensionError("ragged rows")
        return cls(len(rows), width, (x for row in rows for x in row), p)

    @classmethod
    def from_columns(cls, columns: Sequence[ZpVector | Sequence[int]], p: int) -> ZpMatrix:
        height = len(columns[0])
        if any(len(c) != height for c in columns):
            raise DimensionError("columns differ in length")
        return cls(height, len(columns),
                   (columns[j][i] for i in range(height) for j in range(len(columns))), p)

    @classmethod
    def identity(cls, d: int, p: int) -> ZpMatrix:
        return cls(d, d, (1 if i == j else 0 for i in range(d) for j in range(d)), p)

    @classmethod
    def zeros(cls, rows: int, cols: int, p: int) -> ZpMatrix:
        return cls(rows, cols, [0] * (rows * cols), p)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(ij)
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> ZpVector:
        return ZpVector(self.entries[j::self.cols], self.p)

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> ZpMatrix:
        return ZpMatrix(self.cols, self.rows,
                        (self[i, j] for j in range(self.cols) for i in range(self.rows)), self.p)

    def with_column(self, j: int, column: ZpVector | Sequence[int]) -> ZpMatrix:
        cols = [self.column(k) for k in range(self.cols)]
        cols[j] = column
        return ZpMatrix.from_columns(cols, self.p)

    def __matmul__(self, other):
        if isinstance(other, ZpVector):
            return mat_vec_mul(self, other)
        if isinstance(other, ZpMatrix):
            return mat_mul(self, other)
        return NotImplemented

    def __repr__(self) -> str:
        return f"ZpMatrix({self.to_rows()}, p={self.p})"


def mat_vec_mul(m: ZpMatrix, v: ZpVector) -> ZpVector:
    if m.p != v.p:
        raise ModulusError(f"moduli differ: {m.p} vs {v.p}")
    if m.cols != len(v):
        raise DimensionError(f"cannot multiply {m.rows}x{m.cols} matrix by length-{len(v)} vector")
    ve = v.entries
    return ZpVector((sum(a * b for a, b in zip(m.row(i), ve)) for i in range(m.rows)), m.p)


def mat_mul(a: ZpMatrix, b: ZpMatrix) -> ZpMatrix:
    if a.p != b.p:
        raise ModulusError(f"moduli differ: {a.p} vs {b.p}")
    if a.cols != b.rows:
        raise DimensionError(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    bcols = [b.entries[j::b.cols] for j in range(b.cols)]
    return ZpMatrix(a.rows, b.cols,
                    (sum(x * y for x, y in zip(a.row(i), bc)) for i in range(a.rows) for bc in bcols),
                    a.p)


def _require_square(m: ZpMatrix) -> None:
    if not m.is_square:
        raise DimensionError(f"expected a square matrix, got {m.rows}x{m.cols}")


def _eliminate(m: ZpMatrix) -> tuple[int, int]:
    """Forward elimination; returns (rank, determinant mod p)."""
    p = m.p
    a = m.to_rows()
    nrows, ncols = m.rows, m.cols
    det = 1
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, nrows) if a[i][c]), None)
        if pivot is None:
            det = 0
            continue
        if pivot != r:
            a[r], a[pivot] = a[pivot], a[r]
            det = -det
        pv = a[r][c]
        det = det * pv % p
        inv = pow(pv, -1, p)
        row_r = a[r]
        for i in range(r + 1, nrows):
            f = a[i][c]
            if f:
                f = f * inv % p
                a[i] = [(x - f * y) % p for x, y in zip(a[i], row_r)]
        r += 1
        if r == nrows:
            break
    if r < ncols:
        det = 0
    return r, det % p


def rank(m: ZpMatrix) -> int:
    return _eliminate(m)[0]


def is_nonsingular(m: ZpMatrix) -> bool:
    _require_square(m)
    return _eliminate(m)[0] == m.rows


def determinant(m: ZpMatrix) -> Residue:
    _require_square(m)
    return Residue(_eliminate(m)[1], m.p)


def invert(m: ZpMatrix) -> ZpMatrix:
    """Gauss-Jordan inverse over Z_p; raises SingularMatrixError."""
    _require_square(m)
    p, d = m.p, m.rows
    a = [list(m.row(i)) + [1 if i == j else 0 for j in range(d)] for i in range(d)]
    for c in range(d):
        pivot = next((i for i in range(c, d) if a[i][c]), None)
        if pivot is None:
            raise SingularMatrixError("matrix is singular over Z_%d" % p)
        a[c], a[pivot] = a[pivot], a[c]
        inv = pow(a[c][c], -1, p)
        a[c] = [x * inv % p for x in a[c]]
        row_c = a[c]
        for i in range(d):
            f = a[i][c]
            if i != c and f:
                a[i] = [(x - f * y) % p for x, y in zip(a[i], row_c)]
    return ZpMatrix(d, d, (x for row in a for x in row[d:]), p)


def solve(m: ZpMatrix, b: ZpVector) -> ZpVector:
    """Unique solution of m x = b for nonsingular m."""
    return mat_vec_mul(invert(m), b)


# -- text format -------------------------------------------------------------
#
# Matrix: header "p d1 d2", then d1 lines of d2 space-separated digits.
# Vector: header "p d", then one line of d digits.

def format_matrix(m: ZpMatrix) -> str:
    lines = [f"{m.p} {m.rows} {m.cols}"]
    lines += [" ".join(str(x) for x in m.row(i)) for i in range(m.rows)]
    return "\n".join(lines) + "\n"


def format_vector(v: ZpVector) -> str:
    return f"{v.p} {len(v)}\n" + " ".join(str(x) for x in v) + "\n"


def parse_matrix_text(text: str) -> ZpMatrix | ZpVector:
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ZpError("empty matrix text")
    try:
        header = [int(x) for x in lines[0]]
        body = [[int(x) for x in ln] for ln in lines[1:]]
    except ValueError as exc:
        raise ZpError(f"non-integer token in matrix text: {exc}") from None
    if len(header) == 2:
        p, d = header
        if len(body) != 1 or len(body[0]) != d:
            raise ZpError(f"vector text expects one line of {d} digits")
        digits = body[0]
    elif len(header) == 3:
        p, rows, cols = header
        if len(body) != rows or any(len(ln) != cols for ln in body):
            raise ZpError(f"matrix text expects {rows} lines of {cols} digits")
        digits = [x for ln in body for x in ln]
    else:
        raise ZpError("header must be 'p d' or 'p d1 d2'")
    check_prime(p)
    if any(not 0 <= x < p for x in digits):
        raise ZpError(f"digits must lie in 0..{p - 1}")
    if len(header) == 2:
        return ZpVector(digits, p)
    return ZpMatrix(rows, cols, digits, p)
