"""End-to-end reductions driven through :class:`DynamicSequence`.

``maxplus_via_lis`` recovers a (max,+)-product from weighted range queries
using only weight updates after the build. ``omv_init``/``omv_apply`` answer
online Boolean matrix-vector products from unweighted range queries over
tiled, expanded embeddings.
"""

from __future__ import annotations

import math
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from lislab.chains import a_ap_offset
from lislab.dynlis import DynamicSequence
from lislab.embedding import A as A_label
from lislab.embedding import Ap as Ap_label
from lislab.embedding import Embedding, build_embedding, expand_unweighted, swap_b_column
from lislab.model import BitVector, Matrix, boolean_matvec, maxplus_product


class ReductionError(RuntimeError):
    """An extracted value fell outside its possible range."""


@dataclass
class ReductionReport:
    problem: str
    size: int
    M: int
    seeds: list = field(default_factory=list)
    counts: dict = field(default_factory=lambda: {"inserts": 0, "deletes": 0,
                                                  "updates": 0, "queries": 0})
    post_build: dict = field(default_factory=dict)
    extracted: list = field(default_factory=list)
    agree: Optional[bool] = None
    timings_ms: dict = field(default_factory=lambda: {"build": 0.0, "update": 0.0,
                                                      "query": 0.0})
    expanded_points: list = field(default_factory=list)

    def to_json(self) -> dict:
        size_key = "n" if self.problem == "maxplus" else "m"
        return {
            "problem": self.problem,
            size_key: self.size,
            "M": self.M,
            "seeds": list(self.seeds),
            "counts": dict(self.counts),
            "post_build": dict(self.post_build),
            "extracted": self.extracted,
            "agree": self.agree,
            "timings_ms": {k: round(v, 3) for k, v in self.timings_ms.items()},
        }


@contextmanager
def _timed(report: ReductionReport, phase: str):
    t0 = time.perf_counter()
    try:
        yield
    finally:
        report.timings_ms[phase] += (time.perf_counter() - t0) * 1000.0


def _add_counts(report: ReductionReport, stats: dict):
    for k, v in stats.items():
        report.counts[k] += v


# -- (max,+)-product -------------------------------------------------------


def maxplus_via_lis(A: Matrix, B: Matrix, M: Optional[int] = None,
                    check_oracle: bool = True) -> tuple:
    """Compute ``C[j][k] = max_i A[j][i] + B[i][k]`` through range LIS queries.

    The embedding of ``A`` is loaded once with zero middle weights. Each
    column ``k`` then costs ``n`` weight updates (the middle points take
    ``B[., k]``) and ``n`` range queries, one per row ``j`` over
    ``[x(A(j)), x(Ap(j))]``.
    """
    if A.n != B.n:
        raise ValueError(f"dimension mismatch: {A.n} vs {B.n}")
    if M is None:
        M = max(A.M, B.M)
    n = A.n
    report = ReductionReport("maxplus", n, M)

    with _timed(report, "build"):
        emb = build_embedding(A, [0] * n, M)
        seq = DynamicSequence()
        handles = {p.label: seq.insert(p) for p in emb.points}
    build_stats = seq.stats.as_dict()

    C = [[0] * n for _ in range(n)]
    ranges = [(emb.index[A_label(j)].x, emb.index[Ap_label(j)].x) for j in range(n)]
    for k in range(n):
        with _timed(report, "update"):
            for label, old, new in swap_b_column(emb, B.column(k)):
                seq.update_weight(handles[label], new)
        with _timed(report, "query"):
            for j, (xlo, xhi) in enumerate(ranges):
                answer = seq.query_range(xlo, xhi)
                value = answer - a_ap_offset(n, j, M)
                if not 0 <= value <= 2 * M:
                    raise ReductionError(
                        f"C[{j}][{k}] extracted as {value} from answer {answer}, outside 0..{2 * M}")
                C[j][k] = value
                report.extracted.append({"j": j, "k": k, "answer": answer, "value": value})

    _add_counts(report, seq.stats.as_dict())
    report.post_build = {k: v - build_stats[k] for k, v in seq.stats.as_dict().items()}
    result = Matrix(n, 2 * M, C)
    if check_oracle:
        report.agree = result.entries == maxplus_product(A, B).entries
    return result, report


# -- tiling ----------------------------------------------------------------


@dataclass
class Tiling:
    m: int
    r: int
    padded: Matrix
    tiles: dict

    @property
    def padding(self) -> int:
        return self.padded.n - self.m

    def reassemble(self) -> list:
        R = self.padded.n
        out = [[0] * R for _ in range(R)]
        for (ti, tl), tile in self.tiles.items():
            for a in range(self.r):
                for c in range(self.r):
                    out[ti * self.r + a][tl * self.r + c] = tile.entries[a][c]
        return out


def tile_side(m: int) -> int:
    return math.isqrt(m - 1) + 1 if m > 1 else 1


def tile_matrix(A: Matrix, r: Optional[int] = None) -> Tiling:
    """Zero-pad ``A`` to side ``r*r`` and cut it into ``r x r`` tiles.

    ``r`` defaults to ``ceil(sqrt(m))``; the padded side must cover ``m``.
    """
    m = A.n
    if r is None:
        r = tile_side(m)
    if r < 1:
        raise ValueError("tile side must be at least 1")
    R = r * r
    if R < m:
        raise ValueError(f"tile side {r} too small for m={m}")
    rows = [[A.entries[a][c] if a < m and c < m else 0 for c in range(R)] for a in range(R)]
    padded = Matrix(R, A.M, rows)
    tiles = {}
    for ti in range(r):
        for tl in range(r):
            tiles[ti, tl] = Matrix(r, A.M, [row[tl * r:(tl + 1) * r]
                                            for row in rows[ti * r:(ti + 1) * r]])
    return Tiling(m, r, padded, tiles)


# -- OMv -------------------------------------------------------------------


@dataclass
class _Tile:
    emb: Embedding
    seq: DynamicSequence
    scale: int
    b_handles: dict  # middle index -> handle of its single replica, when weight is 1
    ranges: list


@dataclass
class OMvSession:
    m: int
    tiling: Tiling
    tiles: dict
    report: ReductionReport
    vectors_seen: int = 0
    last_tile_values: dict = field(default_factory=dict)

    @property
    def r(self) -> int:
        return self.tiling.r

    def total_stats(self) -> dict:
        total = {"inserts": 0, "deletes": 0, "updates": 0, "queries": 0}
        for tile in self.tiles.values():
            for k, v in tile.seq.stats.as_dict().items():
                total[k] += v
        return total


def omv_init(A: Matrix) -> OMvSession:
    """Preprocess a Boolean matrix into one unweighted sequence per tile."""
    if not A.is_boolean:
        raise ValueError("OMv needs a Boolean (0/1) matrix")
    A = Matrix(A.n, 1, A.entries)
    tiling = tile_matrix(A)
    r = tiling.r
    report = ReductionReport("omv", A.n, 1)
    tiles = {}
    with _timed(report, "build"):
        for key, sub in tiling.tiles.items():
            emb = build_embedding(sub, [0] * r, 1)
            # middle weights never exceed 1, so the widest point is fixed by the grid
            scale = 1 + max(p.w for p in emb.index.values())
            seq = DynamicSequence()
            for p in expand_unweighted(emb.points, scale):
                seq.insert(p)
            ranges = [(emb.index[A_label(j)].x * scale,
                       emb.index[Ap_label(j)].x * scale + scale - 1) for j in range(r)]
            tiles[key] = _Tile(emb, seq, scale, {}, ranges)
            report.expanded_points.append(len(seq))
    session = OMvSession(A.n, tiling, tiles, report)
    report.counts = session.total_stats()
    return session


def _set_middle_bits(tile: _Tile, bits) -> None:
    deltas = swap_b_column(tile.emb, bits)
    for label, old, new in deltas:
        if old == new:
            continue
        i = label.i
        if new == 1:
            p = tile.emb.index[label]
            rep = expand_unweighted([p], tile.scale)[0]
            tile.b_handles[i] = tile.seq.insert(rep)
        else:
            tile.seq.delete(tile.b_handles.pop(i))


def omv_apply(session: OMvSession, v: BitVector) -> BitVector:
    """Return ``A v`` for the next online vector."""
    if not isinstance(v, BitVector):
        v = BitVector(tuple(v))
    if len(v) != session.m:
        raise ValueError(f"vector has length {len(v)}, expected {session.m}")
    r = session.r
    R = r * r
    bits = list(v.bits) + [0] * (R - session.m)
    sub = [bits[l * r:(l + 1) * r] for l in range(r)]
    report = session.report
    before = session.total_stats()

    with _timed(report, "update"):
        for (ti, tl), tile in session.tiles.items():
            _set_middle_bits(tile, sub[tl])

    values = {}
    with _timed(report, "query"):
        for (ti, tl), tile in session.tiles.items():
            for j, (xlo, xhi) in enumerate(tile.ranges):
                answer = tile.seq.query_range(xlo, xhi)
                value = answer - a_ap_offset(r, j, 1)
                if not 0 <= value <= 2:
                    raise ReductionError(
                        f"tile ({ti},{tl}) row {j} extracted {value} from answer {answer}")
                values[ti, tl, j] = value

    u = []
    for ti in range(r):
        for j in range(r):
            best = max(values[ti, tl, j] for tl in range(r))
            u.append(max(0, best - 1))

    after = session.total_stats()
    report.counts = after
    report.post_build = {k: report.post_build.get(k, 0) + after[k] - before[k] for k in after}
    session.last_tile_values = values
    session.vectors_seen += 1
    out = BitVector(tuple(u[:session.m]))
    report.extracted.append(out.to_text())
    return out


def omv_run_online(A: Matrix, supplier: Callable[[], Optional[BitVector]],
                   emit: Callable[[BitVector], None], check_oracle: bool = True) -> ReductionReport:
    """Pull vectors from ``supplier`` until it returns ``None``.

    Each product is handed to ``emit`` before the next vector is requested.
    """
    session = omv_init(A)
    agree = True
    while True:
        v = supplier()
        if v is None:
            break
        u = omv_apply(session, v)
        if check_oracle and u != boolean_matvec(A, v):
            agree = False
        emit(u)
    session.report.agree = agree if check_oracle else None
    return session.report


class AccessMonitor:
    """One-at-a-time vector supplier that logs reads and emits in order."""

    def __init__(self, vectors: Iterable):
        self._it = iter(vectors)
        self.log = []
        self._read = 0
        self._emitted = 0

    def supply(self):
        if self._read != self._emitted:
            raise RuntimeError(f"vector {self._read} requested before output {self._read - 1}")
        try:
            v = next(self._it)
        except StopIteration:
            return None
        self.log.append(("read", self._read))
        self._read += 1
        return v

    def emit(self, u):
        self.log.append(("emit", self._emitted))
        self._emitted += 1

    @property
    def online(self) -> bool:
        expected = []
        for k in range(self._read):
            expected += [("read", k), ("emit", k)]
        return self.log == expected
