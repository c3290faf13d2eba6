"""Brute-force heaviest-chain oracle and the closed-form chain weights.

The oracle is the plain quadratic DP over x-sorted points. It is the trust
anchor for everything else in the package, so it stays deliberately simple.
"""

from __future__ import annotations

import random
from dataclasses import asdict, dataclass
from typing import Callable, Iterator, Optional, Sequence

from lislab.embedding import A, Ap, B, Embedding, L, Lp, build_embedding
from lislab.model import Matrix, WeightedPoint, dominates

CASES = ("l_b_eq", "l_b_lt", "lp_b_eq", "lp_b_lt", "a_b", "b_ap", "a_ap")


def max_weight_chain(points: Sequence[WeightedPoint]) -> int:
    pts = sorted(points, key=lambda p: p.x)
    best = []
    for q_idx, q in enumerate(pts):
        prev = max((best[p_idx] for p_idx in range(q_idx) if dominates(pts[p_idx], q)), default=0)
        best.append(prev + q.w)
    return max(best, default=0)


def best_chain_between(points: Sequence[WeightedPoint], start: WeightedPoint,
                       end: WeightedPoint) -> Optional[tuple]:
    """Heaviest chain from ``start`` to ``end`` as ``(weight, [points])``.

    Returns ``None`` when no such chain exists.
    """
    pts = list(points)
    if start not in pts or end not in pts:
        raise ValueError("chain endpoints must belong to the point set")
    if start == end:
        return start.w, [start]
    if not dominates(start, end):
        return None
    inner = sorted((p for p in pts if dominates(start, p) and dominates(p, end)),
                   key=lambda p: p.x)
    inner.append(end)
    best = []
    parent = []
    for q_idx, q in enumerate(inner):
        b, par = start.w, -1
        for p_idx in range(q_idx):
            if best[p_idx] > b and dominates(inner[p_idx], q):
                b, par = best[p_idx], p_idx
        best.append(b + q.w)
        parent.append(par)
    path = []
    k = len(inner) - 1
    while k >= 0:
        path.append(inner[k])
        k = parent[k]
    path.append(start)
    path.reverse()
    return best[-1], path


def max_weight_chain_between(points: Sequence[WeightedPoint], start: WeightedPoint,
                             end: WeightedPoint) -> Optional[int]:
    """Weight of the heaviest chain starting at ``start`` and ending at ``end``.

    ``None`` means no chain connects them, which is different from weight 0.
    """
    found = best_chain_between(points, start, end)
    return None if found is None else found[0]


def max_weight_chain_in_xrange(points: Sequence[WeightedPoint], xlo: int, xhi: int) -> int:
    if xlo > xhi:
        raise ValueError(f"empty range: xlo={xlo} > xhi={xhi}")
    return max_weight_chain([p for p in points if xlo <= p.x <= xhi])


# -- closed forms ----------------------------------------------------------


def _tri3(n: int, j: int) -> int:
    """``1.5 (n-j)(n-j+1)`` in exact integers."""
    prod = 3 * (n - j) * (n - j + 1)
    assert prod % 2 == 0
    return prod // 2


def closed_form_c(emb: Embedding, case: str, i: int = 0, i2: int = 0, j: int = 0) -> int:
    """Predicted heaviest-chain weight for one of the closed-form cases.

    ``case`` selects the pair of endpoints:

    ========== =============================== ==========
    case       endpoints                       indices
    ========== =============================== ==========
    l_b_eq     L(i, j)  -> B(i2), i == i2      i, i2, j
    l_b_lt     L(i, j)  -> B(i2), i < i2       i, i2, j
    lp_b_eq    Lp(i, j) -> B(i2), i == i2      i, i2, j
    lp_b_lt    Lp(i, j) -> B(i2), i < i2       i, i2, j
    a_b        A(j)     -> B(i)                i, j
    b_ap       B(i)     -> Ap(j)               i, j
    a_ap       A(j)     -> Ap(j)               j
    ========== =============================== ==========

    Only ``a_ap`` is defined for multipliers ``M > 1``.
    """
    n, M = emb.n, emb.M
    a = emb.A.entries
    b = emb.b
    if case not in CASES:
        raise ValueError(f"unknown case {case!r}")
    if M != 1 and case != "a_ap":
        raise ValueError(f"case {case!r} is only defined for M == 1")
    for v in (i, i2, j):
        if not 0 <= v < n:
            raise ValueError(f"index {v} out of range for n={n}")

    if case == "l_b_eq":
        if i != i2:
            raise ValueError("l_b_eq needs i == i2")
        return _tri3(n, j) + b[i2]
    if case == "l_b_lt":
        if not i < i2:
            raise ValueError("l_b_lt needs i < i2")
        return (3 * n - 3 * j) * (i2 - i) + _tri3(n, j) + a[j][i2] + b[i2]
    if case == "lp_b_eq":
        if i != i2:
            raise ValueError("lp_b_eq needs i == i2")
        return _tri3(n, j) + a[j][i] + b[i2]
    if case == "lp_b_lt":
        if not i < i2:
            raise ValueError("lp_b_lt needs i < i2")
        a_next = a[j + 1][i2] if j + 1 < n else 0  # row n of A is taken as zero
        return (3 * n - 3 * j - 3) * (i2 - i) + _tri3(n, j) + a[j][i] + a_next + b[i2]
    if case == "a_b":
        return (3 * n - 3 * j) * i + _tri3(n, j) + 1 + a[j][i] + b[i]
    if case == "b_ap":
        return (3 * n - 3 * j) * (n - i - 1) + _tri3(n, j) + 1 + b[i]
    return a_ap_offset(n, j, M) + max(a[j][k] + b[k] for k in range(n))


def a_ap_offset(n: int, j: int, M: int = 1) -> int:
    """Fixed part of the ``A(j) -> Ap(j)`` chain weight, independent of the matrices."""
    return M * (3 * n - 3 * j) * (n - 1) + 3 * M * (n - j) * (n - j + 1) + 2


def case_endpoints(case: str, i: int, i2: int, j: int) -> tuple:
    return {
        "l_b_eq": (L(i, j), B(i2)),
        "l_b_lt": (L(i, j), B(i2)),
        "lp_b_eq": (Lp(i, j), B(i2)),
        "lp_b_lt": (Lp(i, j), B(i2)),
        "a_b": (A(j), B(i)),
        "b_ap": (B(i), Ap(j)),
        "a_ap": (A(j), Ap(j)),
    }[case]


def valid_tuples(n: int, M: int = 1) -> Iterator[tuple]:
    """Every ``(case, i, i2, j)`` for which a closed form is defined."""
    if M == 1:
        for j in range(n):
            for i in range(n):
                yield "l_b_eq", i, i, j
                yield "lp_b_eq", i, i, j
                for i2 in range(i + 1, n):
                    yield "l_b_lt", i, i2, j
                    yield "lp_b_lt", i, i2, j
        for j in range(n):
            for i in range(n):
                yield "a_b", i, 0, j
                yield "b_ap", i, 0, j
    for j in range(n):
        yield "a_ap", 0, 0, j


# -- verification sweep ----------------------------------------------------


@dataclass
class CheckRecord:
    case: str
    n: int
    M: int
    seed: int
    i: int
    i2: int
    j: int
    predicted: int
    oracle: Optional[int]

    @property
    def ok(self) -> bool:
        return self.predicted == self.oracle

    def to_dict(self) -> dict:
        d = asdict(self)
        d["ok"] = self.ok
        return d


def random_instance(n: int, M: int, seed: int) -> Embedding:
    rng = random.Random(f"lemma:{n}:{M}:{seed}")
    mat = Matrix.random(n, M, rng)
    b = [rng.randint(0, M) for _ in range(n)]
    return build_embedding(mat, b, M)


def sweep_embedding(emb: Embedding, seed: int = 0) -> list:
    """Check every defined closed form of ``emb`` against the oracle."""
    pts = list(emb.index.values())
    records = []
    for case, i, i2, j in valid_tuples(emb.n, emb.M):
        start, end = case_endpoints(case, i, i2, j)
        oracle = max_weight_chain_between(pts, emb.index[start], emb.index[end])
        predicted = closed_form_c(emb, case, i, i2, j)
        records.append(CheckRecord(case, emb.n, emb.M, seed, i, i2, j, predicted, oracle))
    return records


def sweep(ns: Sequence[int], seeds: Sequence[int], M: int = 1,
          mutate: Optional[Callable[[Embedding], None]] = None) -> list:
    """Formula-vs-oracle sweep over random instances.

    ``mutate`` may alter each embedding before checking (fault injection).
    """
    records = []
    for n in ns:
        for seed in seeds:
            emb = random_instance(n, M, seed)
            if mutate is not None:
                mutate(emb)
            records.extend(sweep_embedding(emb, seed))
    return records
