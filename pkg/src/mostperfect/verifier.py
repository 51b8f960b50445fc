"""Property checks for type-p most-perfect squares.

Every check sweeps all anchors of the square with wraparound and compares
exact integer sums; there are no algebraic shortcuts.  Each ``*_sums``
helper returns an array of sums indexed by anchor so failures can be
reported with a witness.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from .square import Square

__all__ = [
    "VerificationError",
    "MagicConstants",
    "Witness",
    "PropertyReport",
    "magic_constants",
    "check_natural",
    "line_sums",
    "check_lines",
    "complementary_sums",
    "check_complementary",
    "off_diagonal_complementary_sums",
    "check_off_diagonal_complementary",
    "block_sums",
    "check_p_by_p",
    "check_p_by_p_at",
    "window_corners",
    "check_lemma1_window",
    "window_corner_sweep",
    "verify_full",
    "verify_reduced",
]


class VerificationError(ValueError):
    """Raised when a check's precondition on (n, p) does not hold."""


def _half(x: int) -> int | Fraction:
    return x // 2 if x % 2 == 0 else Fraction(x, 2)


@dataclass(frozen=True)
class MagicConstants:
    n: int
    p: int

    @property
    def line_sum(self) -> int | Fraction:
        return _half(self.n * (self.n ** 2 - 1))

    @property
    def complementary_sum(self) -> int | Fraction:
        return _half(self.p * (self.n ** 2 - 1))

    @property
    def block_sum(self) -> int | Fraction:
        return _half(self.p ** 2 * (self.n ** 2 - 1))


def magic_constants(n: int, p: int) -> MagicConstants:
    return MagicConstants(n, p)


def _require_divides(sq: Square, p: int) -> int:
    if not isinstance(p, (int, np.integer)) or p < 2:
        raise VerificationError(f"type p must be an integer >= 2, got {p!r}")
    if sq.n % p:
        raise VerificationError(f"p={p} does not divide the order n={sq.n}")
    return sq.n // p


def _first_mismatch(sums: np.ndarray, expected) -> tuple[tuple[int, ...], int] | None:
    # expected may be a Fraction; compare doubled values to stay in integers
    twice = int(2 * expected)
    bad = 2 * sums != twice
    if not bad.any():
        return None
    idx = tuple(int(k) for k in np.argwhere(bad)[0])
    return idx, int(sums[idx])


def check_natural(sq: Square) -> bool:
    return sq.is_natural()


def _natural_witness(sq: Square) -> tuple[tuple[int, int], int] | None:
    n = sq.n
    seen = set()
    for (i, j), x in np.ndenumerate(sq.grid):
        x = int(x)
        if not 0 <= x < n * n or x in seen:
            return (int(i), int(j)), x
        seen.add(x)
    return None


def line_sums(sq: Square) -> dict[str, np.ndarray]:
    """Sums of rows, columns, and broken diagonals.

    ``main[k]`` runs from (0, k) stepping (+1, +1); ``off[k]`` runs from
    (0, k) stepping (+1, -1).
    """
    g, n = sq.grid, sq.n
    i = np.arange(n)[:, None]
    j = np.arange(n)[None, :]
    return {
        "rows": g.sum(axis=1),
        "cols": g.sum(axis=0),
        "main": g[i, (i + j) % n].sum(axis=0),
        "off": g[i, (j - i) % n].sum(axis=0),
    }


def check_lines(sq: Square) -> dict[str, bool]:
    target = magic_constants(sq.n, 1).line_sum
    return {k: _first_mismatch(v, target) is None for k, v in line_sums(sq).items()}


def _stepped_sums(g: np.ndarray, count: int, drow: int, dcol: int) -> np.ndarray:
    """out[i, j] = sum_k g[i + k*drow, j + k*dcol] for k < count (wraparound)."""
    out = np.zeros_like(g)
    for k in range(count):
        out += np.roll(g, (-k * drow, -k * dcol), axis=(0, 1))
    return out


def complementary_sums(sq: Square, p: int) -> np.ndarray:
    step = _require_divides(sq, p)
    return _stepped_sums(sq.grid, p, step, step)


def check_complementary(sq: Square, p: int, anchors: str = "all") -> bool:
    """Every p-term sum spaced n/p apart on a broken main diagonal is p(n^2-1)/2.

    ``anchors="cosets"`` checks one anchor per diagonal coset (rows below
    n/p) instead of all n^2; the outcome must agree.
    """
    sums = complementary_sums(sq, p)
    if anchors == "cosets":
        sums = sums[: sq.n // p]
    elif anchors != "all":
        raise ValueError(f"anchors must be 'all' or 'cosets', got {anchors!r}")
    return _first_mismatch(sums, magic_constants(sq.n, p).complementary_sum) is None


def off_diagonal_complementary_sums(sq: Square, p: int) -> np.ndarray:
    step = _require_divides(sq, p)
    return _stepped_sums(sq.grid, p, step, -step)


def check_off_diagonal_complementary(sq: Square, p: int) -> bool:
    sums = off_diagonal_complementary_sums(sq, p)
    return _first_mismatch(sums, magic_constants(sq.n, p).complementary_sum) is None


def block_sums(sq: Square, p: int) -> np.ndarray:
    """out[i, j] = sum of the p x p window whose top-left cell is (i, j)."""
    _require_divides(sq, p)
    rows = _stepped_sums(sq.grid, p, 1, 0)
    return _stepped_sums(rows, p, 0, 1)


def check_p_by_p(sq: Square, p: int) -> bool:
    return _first_mismatch(block_sums(sq, p), magic_constants(sq.n, p).block_sum) is None


def check_p_by_p_at(sq: Square, p: int, row: int = 0, col: int = 0) -> bool:
    """Single-anchor p x p test; a cheap necessary condition."""
    _require_divides(sq, p)
    n = sq.n
    row, col = row % n, col % n
    if row + p <= n and col + p <= n:
        total = int(sq.grid[row:row + p, col:col + p].sum())
    else:
        rows = [(row + a) % n for a in range(p)]
        cols = [(col + b) % n for b in range(p)]
        total = int(sq.grid[np.ix_(rows, cols)].sum())
    return 2 * total == int(2 * magic_constants(n, p).block_sum)


def window_corners(sq: Square, p: int, anchor: tuple[int, int], m: int,
                   n_blocks: int) -> tuple[int, int, int, int]:
    """Corners (a, b, c, d) of the (m*p+1) x (n_blocks*p+1) window at ``anchor``.

    a top-left, b top-right, c bottom-left, d bottom-right.
    """
    for name, v in (("p", p), ("m", m), ("n_blocks", n_blocks)):
        if not isinstance(v, (int, np.integer)) or v < 1:
            raise VerificationError(f"{name} must be a positive integer, got {v!r}")
    i, j = anchor
    h, w = m * p, n_blocks * p
    return sq[i, j], sq[i, j + w], sq[i + h, j], sq[i + h, j + w]


def check_lemma1_window(sq: Square, p: int, anchor: tuple[int, int], m: int,
                        n_blocks: int) -> bool:
    """Corner identity a + d == b + c.

    Guaranteed when the square has the p x p property; on other squares it
    is just evaluated.
    """
    a, b, c, d = window_corners(sq, p, anchor, m, n_blocks)
    return a + d == b + c


def window_corner_sweep(sq: Square, p: int, m: int, n_blocks: int) -> np.ndarray:
    """Boolean array over all n^2 anchors of the corner identity."""
    window_corners(sq, p, (0, 0), m, n_blocks)
    g = sq.grid
    h, w = m * p, n_blocks * p
    b = np.roll(g, -w, axis=1)
    c = np.roll(g, -h, axis=0)
    d = np.roll(g, (-h, -w), axis=(0, 1))
    return g + d == b + c


@dataclass(frozen=True)
class Witness:
    check: str
    index: tuple[int, ...]
    observed: int
    expected: int | float | None


@dataclass(frozen=True)
class PropertyReport:
    n: int
    type_p: int
    natural: bool
    rows_magic: bool
    cols_magic: bool
    main_pandiagonal: bool
    off_pandiagonal: bool
    complementary: bool
    off_diagonal_complementary: bool
    p_by_p: bool
    witness: Witness | None = None
    constants: MagicConstants = field(init=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "constants", MagicConstants(self.n, self.type_p))

    @property
    def is_type_p_mps(self) -> bool:
        return (self.natural and self.rows_magic and self.cols_magic and self.main_pandiagonal
                and self.off_pandiagonal and self.complementary and self.p_by_p)

    def flags(self) -> dict[str, bool]:
        return {name: getattr(self, name) for name in _FLAG_ORDER}

    def to_dict(self) -> dict:
        def num(x):
            return x if isinstance(x, int) else float(x)

        return {
            "n": self.n,
            "p": self.type_p,
            **self.flags(),
            "is_type_p_mps": self.is_type_p_mps,
            "line_sum": num(self.constants.line_sum),
            "complementary_sum": num(self.constants.complementary_sum),
            "block_sum": num(self.constants.block_sum),
            "witness": None if self.witness is None else {
                **asdict(self.witness), "index": list(self.witness.index)},
        }


_FLAG_ORDER = ("natural", "rows_magic", "cols_magic", "main_pandiagonal", "off_pandiagonal",
               "complementary", "p_by_p", "off_diagonal_complementary")


def verify_full(sq: Square, p: int) -> PropertyReport:
    """Run every check; the witness is the first failure in flag order."""
    _require_divides(sq, p)
    const = magic_constants(sq.n, p)
    lines = line_sums(sq)
    sums = {
        "rows_magic": (lines["rows"], const.line_sum),
        "cols_magic": (lines["cols"], const.line_sum),
        "main_pandiagonal": (lines["main"], const.line_sum),
        "off_pandiagonal": (lines["off"], const.line_sum),
        "complementary": (complementary_sums(sq, p), const.complementary_sum),
        "p_by_p": (block_sums(sq, p), const.block_sum),
        "off_diagonal_complementary": (off_diagonal_complementary_sums(sq, p),
                                       const.complementary_sum),
    }
    flags = {}
    witness = None
    nat = _natural_witness(sq) if not check_natural(sq) else None
    flags["natural"] = nat is None
    if nat is not None:
        witness = Witness("natural", nat[0], nat[1], None)
    for name in _FLAG_ORDER[1:]:
        values, expected = sums[name]
        miss = _first_mismatch(values, expected)
        flags[name] = miss is None
        if miss is not None and witness is None:
            exp = expected if isinstance(expected, int) else float(expected)
            witness = Witness(name, miss[0], miss[1], exp)
    return PropertyReport(n=sq.n, type_p=int(p), witness=witness, **flags)


def verify_reduced(sq: Square, p: int) -> bool:
    """Natural + complementary + p x p; sufficient when p^2 divides n."""
    _require_divides(sq, p)
    if sq.n % (p * p):
        raise VerificationError(f"reduced check needs p^2 | n; p={p}, n={sq.n}")
    return check_natural(sq) and check_complementary(sq, p) and check_p_by_p(sq, p)
