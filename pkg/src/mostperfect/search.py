"""Census of linear type-p most-perfect squares over enumerated matrices.

Candidates form a deterministic sequence indexed from 0, so a census can be
split into contiguous shards, checkpointed, resumed, and merged.

exhaustive-all
    every d x d matrix over Z_p (d = 2r), in ascending order of its
    row-major entries read as a base-p integer.
exhaustive-nonsingular
    the same order restricted to invertible matrices, unranked directly so
    singular matrices are never generated.
random-sample
    ``count`` matrices whose entries are successive splitmix64 outputs
    (reduced mod p) from ``seed``; candidate i uses outputs i*d^2 .. i*d^2+d^2-1.
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import prod
from pathlib import Path
from typing import Callable, Iterator, Sequence

from .codec import ConstructionParams, to_digits
from .construction import shift_vector
from .square import build_square, digit_table
from .verifier import check_p_by_p_at, verify_full
from .zp import ZpMatrix, ZpVector, format_matrix, invert, is_nonsingular, mat_vec_mul, parse_matrix_text

__all__ = [
    "MODES",
    "RNG_ALGORITHM",
    "DEFAULT_BUDGET",
    "SearchError",
    "BudgetExceeded",
    "SearchSpace",
    "SearchResult",
    "gl_order",
    "splitmix64",
    "candidate",
    "iter_candidates",
    "shard_bounds",
    "census",
    "census_partition",
    "census_parallel",
    "merge_results",
    "find_delta",
]

MODES = ("exhaustive-all", "exhaustive-nonsingular", "random-sample")
RNG_ALGORITHM = "splitmix64"
DEFAULT_BUDGET = 10_000_000

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15

ColumnConstraint = Callable[[int, ZpVector], bool]


class SearchError(ValueError):
    pass


class BudgetExceeded(SearchError):
    pass


def gl_order(d: int, p: int) -> int:
    """|GL(d, Z_p)| = prod_{i<d} (p^d - p^i)."""
    return prod(p ** d - p ** i for i in range(d))


def splitmix64(seed: int, t: int) -> int:
    """The t-th (0-based) output of a splitmix64 generator seeded with ``seed``."""
    z = (seed + (t + 1) * _GOLDEN) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


@dataclass(frozen=True)
class SearchSpace:
    """What to enumerate.

    ``column_constraints`` are predicates ``f(j, column) -> bool`` on the
    0-based column index and column vector; a candidate failing any of them
    is counted as pruned and not examined further.  ``budget`` caps the
    number of candidates a single census call may visit.
    """

    params: ConstructionParams
    mode: str = "exhaustive-all"
    count: int | None = None
    seed: int = 0
    column_constraints: tuple[ColumnConstraint, ...] = ()
    budget: int = DEFAULT_BUDGET
    max_representatives: int = 16

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise SearchError(f"unknown mode {self.mode!r}; expected one of {MODES}")
        if self.mode == "random-sample":
            if self.count is None or self.count < 0:
                raise SearchError("random-sample mode needs a non-negative count")
        elif self.count is not None:
            raise SearchError("count only applies to random-sample mode")
        if not 0 <= self.seed <= _MASK64:
            raise SearchError("seed must fit in 64 unsigned bits")

    @property
    def dim(self) -> int:
        return self.params.dim

    def size(self) -> int:
        p, d = self.params.p, self.dim
        if self.mode == "exhaustive-all":
            return p ** (d * d)
        if self.mode == "exhaustive-nonsingular":
            return gl_order(d, p)
        return self.count

    def describe(self) -> dict:
        return {"p": self.params.p, "r": self.params.r, "mode": self.mode,
                "count": self.count, "seed": self.seed, "rng": RNG_ALGORITHM}


# -- candidate sequences --------------------------------------------------------

class _GLUnranker:
    """k-th invertible matrix in ascending row-major order.

    Rows are chosen top to bottom; after i rows there are
    prod_{k>i} (p^d - p^k) ways to finish, independent of the choice, and
    row i is the c-th vector (ascending) outside the span of the rows above.
    Spans are cached per prefix, so sequential indices are cheap.
    """

    def __init__(self, d: int, p: int) -> None:
        self.d, self.p = d, p
        self.vectors = [tuple(to_digits(x, p, d)) for x in range(p ** d)]
        self.index = {v: x for x, v in enumerate(self.vectors)}
        self.completions = [prod(p ** d - p ** k for k in range(i + 1, d)) for i in range(d)]
        self._choices: list[int] = []
        self._rows: list[int] = []
        # _levels[i]: (span of rows[:i], vectors outside it in ascending order)
        self._levels = [self._level([0])]

    def _level(self, span: list[int]) -> tuple[list[int], list[int]]:
        members = set(span)
        return span, [x for x in range(len(self.vectors)) if x not in members]

    def __call__(self, k: int) -> list[tuple[int, ...]]:
        p, d = self.p, self.d
        choices = []
        for i in range(d):
            c, k = divmod(k, self.completions[i])
            choices.append(c)
        keep = 0
        while keep < len(self._choices) and self._choices[keep] == choices[keep]:
            keep += 1
        del self._choices[keep:], self._rows[keep:], self._levels[keep + 1:]
        for i in range(keep, d):
            span, outside = self._levels[i]
            row = outside[choices[i]]
            self._choices.append(choices[i])
            self._rows.append(row)
            if i + 1 < d:
                rv = self.vectors[row]
                grown = [self.index[tuple((a + c * b) % p for a, b in zip(self.vectors[s], rv))]
                         for s in span for c in range(p)]
                self._levels.append(self._level(grown))
        return [self.vectors[x] for x in self._rows]


def candidate(space: SearchSpace, index: int, _unrank: _GLUnranker | None = None) -> ZpMatrix:
    p, d = space.params.p, space.dim
    if not 0 <= index < space.size():
        raise SearchError(f"candidate index {index} outside 0..{space.size() - 1}")
    if space.mode == "exhaustive-all":
        return ZpMatrix(d, d, to_digits(index, p, d * d), p)
    if space.mode == "exhaustive-nonsingular":
        rows = (_unrank or _GLUnranker(d, p))(index)
        return ZpMatrix.from_rows(rows, p)
    base = index * d * d
    return ZpMatrix(d, d, (splitmix64(space.seed, base + t) % p for t in range(d * d)), p)


def iter_candidates(space: SearchSpace, start: int = 0,
                    stop: int | None = None) -> Iterator[tuple[int, ZpMatrix]]:
    stop = space.size() if stop is None else stop
    unrank = _GLUnranker(space.dim, space.params.p) if space.mode == "exhaustive-nonsingular" else None
    for index in range(start, stop):
        yield index, candidate(space, index, unrank)


def shard_bounds(total: int, shard_index: int, shard_count: int) -> tuple[int, int]:
    """Contiguous block [start, stop) of shard ``shard_index``; sizes differ by at most 1."""
    if shard_count < 1 or not 0 <= shard_index < shard_count:
        raise SearchError(f"bad shard spec {shard_index}/{shard_count}")
    return total * shard_index // shard_count, total * (shard_index + 1) // shard_count


# -- results -------------------------------------------------------------------

@dataclass
class SearchResult:
    p: int
    r: int
    mode: str
    tested: int = 0
    nonsingular: int = 0
    pruned: int = 0
    mps_count: int = 0
    representatives: list[tuple[int, ZpMatrix]] = field(default_factory=list)
    wall_time: float = 0.0
    shards: list[tuple[int, int]] = field(default_factory=list)

    def counts(self) -> dict[str, int]:
        return {"tested": self.tested, "nonsingular": self.nonsingular,
                "pruned": self.pruned, "mps_count": self.mps_count}

    def same_census(self, other: SearchResult) -> bool:
        """Equal counts and representatives; wall time and shard labels ignored."""
        return ((self.p, self.r, self.mode) == (other.p, other.r, other.mode)
                and self.counts() == other.counts()
                and self.representatives == other.representatives)

    def to_dict(self) -> dict:
        return {
            "p": self.p, "r": self.r, "mode": self.mode,
            **self.counts(),
            "representatives": [{"index": i, "matrix": format_matrix(m)}
                                for i, m in self.representatives],
            "wall_time": round(self.wall_time, 6),
            "shards": [list(s) for s in self.shards],
        }

    @classmethod
    def from_dict(cls, obj: dict) -> SearchResult:
        reps = [(int(x["index"]), parse_matrix_text(x["matrix"])) for x in obj.get("representatives", [])]
        return cls(p=obj["p"], r=obj["r"], mode=obj["mode"], tested=obj["tested"],
                   nonsingular=obj["nonsingular"], pruned=obj.get("pruned", 0),
                   mps_count=obj["mps_count"], representatives=reps,
                   wall_time=obj.get("wall_time", 0.0),
                   shards=[tuple(s) for s in obj.get("shards", [])])


def merge_results(results: Sequence[SearchResult], max_representatives: int | None = None) -> SearchResult:
    """Combine shard results; representatives are re-sorted by candidate index."""
    if not results:
        raise SearchError("nothing to merge")
    head = results[0]
    if any((r.p, r.r, r.mode) != (head.p, head.r, head.mode) for r in results):
        raise SearchError("cannot merge results from different search spaces")
    reps = sorted((rep for r in results for rep in r.representatives), key=lambda t: t[0])
    if max_representatives is not None:
        reps = reps[:max_representatives]
    return SearchResult(
        p=head.p, r=head.r, mode=head.mode,
        tested=sum(r.tested for r in results),
        nonsingular=sum(r.nonsingular for r in results),
        pruned=sum(r.pruned for r in results),
        mps_count=sum(r.mps_count for r in results),
        representatives=reps,
        wall_time=sum(r.wall_time for r in results),
        shards=sorted(s for r in results for s in r.shards),
    )


# -- census --------------------------------------------------------------------

def _passes_constraints(m: ZpMatrix, constraints: Sequence[ColumnConstraint]) -> bool:
    if not constraints:
        return True
    return all(f(j, m.column(j)) for j in range(m.cols) for f in constraints)


def _check_budget(space: SearchSpace, visits: int) -> None:
    if visits > space.budget:
        raise BudgetExceeded(
            f"{visits} candidates exceeds the budget of {space.budget}; "
            "split the search into shards or raise the budget")


def _load_checkpoint(path: Path, space: SearchSpace, shard_index: int, shard_count: int):
    obj = json.loads(path.read_text())
    if (obj.get("shard_index"), obj.get("shard_count")) != (shard_index, shard_count):
        raise SearchError(f"checkpoint {path} belongs to shard "
                          f"{obj.get('shard_index')}/{obj.get('shard_count')}")
    if obj.get("space") not in (None, space.describe()):
        raise SearchError(f"checkpoint {path} was written for a different search space")
    return obj


def _write_checkpoint(path: Path, space: SearchSpace, shard_index: int, shard_count: int,
                      next_index: int, result: SearchResult) -> None:
    obj = {
        "shard_index": shard_index,
        "shard_count": shard_count,
        "next_candidate_index": next_index,
        "partial_counts": result.counts(),
        "representatives": [{"index": i, "matrix": format_matrix(m)} for i, m in result.representatives],
        "space": space.describe(),
    }
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(json.dumps(obj, sort_keys=True) + "\n")
    os.replace(tmp, path)


def census_partition(space: SearchSpace, shard_index: int = 0, shard_count: int = 1, *,
                     checkpoint: str | os.PathLike | None = None, checkpoint_every: int = 100_000,
                     progress: Callable[[int, int, SearchResult], None] | None = None,
                     progress_every: int = 100_000) -> SearchResult:
    """Census of one contiguous shard of the candidate sequence.

    Each candidate is rejected at the first failing stage: column
    constraints, nonsingularity, p x p sum at a single anchor, then the full
    property report.
    """
    params = space.params
    p = params.p
    start, stop = shard_bounds(space.size(), shard_index, shard_count)
    _check_budget(space, stop - start)

    result = SearchResult(p=p, r=params.r, mode=space.mode, shards=[(shard_index, shard_count)])
    next_index = start
    ckpt = Path(checkpoint) if checkpoint is not None else None
    if ckpt is not None and ckpt.exists():
        saved = _load_checkpoint(ckpt, space, shard_index, shard_count)
        next_index = saved["next_candidate_index"]
        for k, v in saved["partial_counts"].items():
            setattr(result, k, v)
        result.representatives = [(int(x["index"]), parse_matrix_text(x["matrix"]))
                                  for x in saved.get("representatives", [])]

    digits = digit_table(params)
    known_nonsingular = space.mode == "exhaustive-nonsingular"
    t0 = time.perf_counter()
    for index, m in iter_candidates(space, next_index, stop):
        result.tested += 1
        if not _passes_constraints(m, space.column_constraints):
            result.pruned += 1
        elif known_nonsingular or is_nonsingular(m):
            result.nonsingular += 1
            sq = build_square(m, params, check=False, digits=digits)
            if check_p_by_p_at(sq, p) and verify_full(sq, p).is_type_p_mps:
                result.mps_count += 1
                if len(result.representatives) < space.max_representatives:
                    result.representatives.append((index, m))
        done = index + 1
        if ckpt is not None and (done - start) % checkpoint_every == 0:
            _write_checkpoint(ckpt, space, shard_index, shard_count, done, result)
        if progress is not None and (done - start) % progress_every == 0:
            progress(done - start, stop - start, result)
    result.wall_time = time.perf_counter() - t0
    if ckpt is not None:
        _write_checkpoint(ckpt, space, shard_index, shard_count, stop, result)
    return result


def census(space: SearchSpace, **kwargs) -> SearchResult:
    return census_partition(space, 0, 1, **kwargs)


def _run_shard(args) -> SearchResult:
    space, i, k = args
    return census_partition(space, i, k)


def census_parallel(space: SearchSpace, workers: int) -> SearchResult:
    """Split the census across worker processes and merge.

    Column constraints must be picklable (module-level functions).
    """
    if workers < 1:
        raise SearchError("workers must be >= 1")
    _check_budget(space, space.size())
    if workers == 1:
        return census(space)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_run_shard, [(space, i, workers) for i in range(workers)]))
    merged = merge_results(parts, space.max_representatives)
    merged.shards = [(0, 1)]
    return merged


def find_delta(m: ZpMatrix, params: ConstructionParams) -> ZpVector | None:
    """The solution x of m x = e_1 + e_{r+1}, if every component is nonzero.

    Raises SingularMatrixError for singular ``m``.
    """
    x = mat_vec_mul(invert(m), shift_vector(params))
    return x if x.all_nonzero() else None
