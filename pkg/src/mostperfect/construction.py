"""Matrices of the linear most-perfect construction for order p**r, r >= 2.

Formulas are written with 1-based indices; ``_col`` and friends convert to
0-based storage.
"""

from __future__ import annotations

from .codec import ConstructionParams
from .zp import ZpMatrix, ZpVector

__all__ = ["build_Lr", "build_L", "build_Ltilde", "build_M", "build_delta", "shift_vector"]


def build_Lr(params: ConstructionParams) -> ZpMatrix:
    """Staircase matrix: entry (i, j) is 1 iff i + j > r."""
    r = params.r
    return ZpMatrix(r, r, (1 if i + j > r else 0
                           for i in range(1, r + 1) for j in range(1, r + 1)), params.p)


def build_L(params: ConstructionParams) -> ZpMatrix:
    r = params.r
    lr = build_Lr(params)
    rows = []
    for i in range(r):
        rows.append([0] * r + list(lr.row(i)))
    for i in range(r):
        rows.append(list(lr.row(i)) + [0] * r)
    return ZpMatrix.from_rows(rows, params.p)


def shift_vector(params: ConstructionParams) -> ZpVector:
    """e_1 + e_{r+1}: one step along the main diagonal in both halves."""
    return ZpVector.unit(0, params.dim, params.p) + ZpVector.unit(params.r, params.dim, params.p)


def build_Ltilde(params: ConstructionParams) -> ZpMatrix:
    """Each column of L minus e_1 + e_{r+1}."""
    L = build_L(params)
    shift = shift_vector(params)
    return ZpMatrix.from_columns([L.column(j) - shift for j in range(params.dim)], params.p)


def _alternating_tail(lt: ZpMatrix, last: int) -> ZpVector:
    """sum_{j=2}^{r-1} (-1)^(j+1) * column (last - j) of lt, 1-based."""
    r, p = lt.rows // 2, lt.p
    acc = ZpVector.zero(lt.rows, p)
    for j in range(2, r):
        sign = 1 if (j + 1) % 2 == 0 else -1
        acc = acc + lt.column(last - j - 1).scale(sign)
    return acc


def build_M(params: ConstructionParams) -> ZpMatrix:
    """L~ with columns r and 2r replaced by their alternating-sum modifications.

    For r = 2 the sums are empty and M equals L~.
    """
    r = params.r
    lt = build_Ltilde(params)
    cols = [lt.column(j) for j in range(params.dim)]
    cols[r - 1] = cols[r - 1] + _alternating_tail(lt, r)
    cols[2 * r - 1] = cols[2 * r - 1] + _alternating_tail(lt, 2 * r)
    return ZpMatrix.from_columns(cols, params.p)


def build_delta(params: ConstructionParams) -> ZpVector:
    """sum_{j=1}^{r} (-1)^(r+j) (e_j + e_{r+j}); satisfies M @ delta == e_1 + e_{r+1}."""
    r, p = params.r, params.p
    entries = [0] * params.dim
    for j in range(1, r + 1):
        sign = 1 if (r + j) % 2 == 0 else -1
        entries[j - 1] += sign
        entries[r + j - 1] += sign
    return ZpVector(entries, p)
