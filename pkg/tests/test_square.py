import json
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mostperfect.codec import ConstructionParams
from mostperfect.construction import build_M
from mostperfect.square import (DuplicateSymbolError, MalformedSquareError, Square, SquareError,
                                SymbolRangeError, build_square, build_square_reference, deserialize,
                                entry_at, linear_entry, serialize)
from mostperfect.zp import SingularMatrixError, ZpMatrix, invert, is_nonsingular

from .conftest import M_P2_R3, M_P3_R2, GOLDEN8, GOLDEN9


def test_golden8(p2r3):
    sq = build_square(M_P2_R3, p2r3)
    assert sq.tolist() == GOLDEN8
    assert sq.tolist()[0] == [0, 31, 48, 47, 56, 39, 8, 23]


def test_golden9(p3r2):
    sq = build_square(M_P3_R2, p3r2)
    assert sq.tolist() == GOLDEN9
    assert sq.tolist()[0] == [0, 16, 23, 63, 79, 59, 45, 34, 41]


@pytest.mark.parametrize("p, r", [(2, 2), (3, 2), (2, 3), (5, 2)])
def test_identity_square_is_row_major(p, r):
    pr = ConstructionParams(p, r)
    sq = build_square(ZpMatrix.identity(pr.dim, p), pr)
    n = pr.n
    assert sq.tolist() == [[i * n + j for j in range(n)] for i in range(n)]


def test_singular_rejected(p3r2):
    with pytest.raises(SingularMatrixError):
        build_square(ZpMatrix.zeros(4, 4, 3), p3r2)
    with pytest.raises(SquareError):
        build_square(ZpMatrix.identity(4, 2), p3r2)


def test_entry_at(golden8):
    assert entry_at(golden8, 3, 5) == 26
    assert entry_at(golden8, 0, 0) == 0
    assert entry_at(golden8, 8, 8) == entry_at(golden8, 0, 0)
    assert golden8[-1, -1] == 45


def test_linear_entry_matches_scatter(p3r2):
    sq = build_square(M_P3_R2, p3r2)
    inv = invert(M_P3_R2)
    for i in range(9):
        for j in range(9):
            assert linear_entry(M_P3_R2, p3r2, i, j, inverse=inv) == sq[i, j]


def random_nonsingular(rng, p, d):
    while True:
        m = ZpMatrix(d, d, [rng.randrange(p) for _ in range(d * d)], p)
        if is_nonsingular(m):
            return m


@settings(max_examples=40, deadline=None)
@given(st.data(), st.sampled_from([(2, 2), (3, 2), (2, 3)]))
def test_fast_build_matches_reference(data, pr):
    params = ConstructionParams(*pr)
    m = random_nonsingular(random.Random(data.draw(st.integers(0, 2**32))), params.p, params.dim)
    order = data.draw(st.permutations(range(params.dim)))
    fast = build_square(m, params, order)
    assert fast == build_square_reference(m, params, order)
    assert fast.is_natural()


def test_transpose_swaps_location_blocks(p3r2):
    r = p3r2.r
    rows = M_P3_R2.to_rows()
    swapped = ZpMatrix.from_rows(rows[r:] + rows[:r], 3)
    assert build_square(swapped, p3r2) == build_square(M_P3_R2, p3r2).transpose()


def test_square_is_immutable(golden8):
    with pytest.raises(ValueError):
        golden8.grid[0, 0] = 5


def test_square_shape_checks():
    with pytest.raises(MalformedSquareError):
        Square([[0, 1, 2], [3, 4, 5]])
    with pytest.raises(SquareError):
        Square([[0, 1], [2, 3]], p=3, r=2)


# -- serialization ---------------------------------------------------------------

@pytest.mark.parametrize("fmt", ["grid", "csv", "json"])
@pytest.mark.parametrize("offset", [0, 1])
def test_round_trip(fmt, offset, golden9, golden8):
    for sq in (golden8, golden9):
        data = serialize(sq, fmt, offset)
        back = deserialize(data, fmt if fmt != "json" else None, offset if fmt != "json" else 0)
        if fmt != "json":
            back = Square(back.grid, sq.p, sq.r)
        assert back == sq


@pytest.mark.parametrize("fmt", ["grid", "csv", "json"])
def test_format_sniffing(fmt, golden8):
    assert np.array_equal(deserialize(serialize(golden8, fmt)).grid, golden8.grid)


def test_grid_text_layout(golden8):
    lines = serialize(golden8, "grid").decode().splitlines()
    assert lines[0] == " 0 31 48 47 56 39  8 23"
    assert len({len(ln) for ln in lines}) == 1


def test_csv_layout(golden8):
    assert serialize(golden8, "csv").decode().splitlines()[1] == "59,36,11,20,3,28,51,44"


def test_json_schema(golden9):
    obj = json.loads(serialize(golden9, "json"))
    assert set(obj) == {"p", "r", "n", "grid"}
    assert (obj["p"], obj["r"], obj["n"]) == (3, 2, 9)
    assert obj["grid"] == GOLDEN9


def test_json_imported_square():
    sq = deserialize(b'{"n":2,"grid":[[0,1],[2,3]]}')
    assert sq.n == 2 and sq.p is None and sq.r is None
    obj = json.loads(serialize(sq, "json"))
    assert obj["p"] is None and obj["r"] is None


def test_serialize_is_deterministic(golden8):
    for fmt in ("grid", "csv", "json"):
        assert serialize(golden8, fmt) == serialize(Square(GOLDEN8, 2, 3), fmt)


@pytest.mark.parametrize("data, error", [
    (b"0 1\n1 3\n", DuplicateSymbolError),
    (b"0 1\n2 4\n", SymbolRangeError),
    (b"0 1\n2 -3\n", SymbolRangeError),
    (b"0 1 2\n3 4 5\n", MalformedSquareError),
    (b"0 1\n2\n", MalformedSquareError),
    (b"0 a\n2 3\n", MalformedSquareError),
    (b"", MalformedSquareError),
    (b'{"n": 3, "grid": [[0,1],[2,3]]}', MalformedSquareError),
    (b'{"grid": [[0,1],[2,3]', MalformedSquareError),
    (b'{"grid": [[0,1.5],[2,3]]}', MalformedSquareError),
    (b'{"p": 3, "r": 2, "grid": [[0,1],[2,3]]}', MalformedSquareError),
])
def test_deserialize_errors(data, error):
    with pytest.raises(error):
        deserialize(data)


def test_error_classes_are_distinct():
    assert not issubclass(DuplicateSymbolError, SymbolRangeError)
    assert not issubclass(MalformedSquareError, DuplicateSymbolError)


def test_truncated_file_rejected():
    text = serialize(Square(GOLDEN8), "grid").decode().splitlines()
    with pytest.raises(MalformedSquareError):
        deserialize("\n".join(text[:-1]))


def test_constructed_order_343_is_natural():
    pr = ConstructionParams(7, 3)
    assert build_square(build_M(pr), pr).is_natural()
