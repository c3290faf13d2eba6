"""Verification suites shared by the ``verify`` command and the test-suite."""

from __future__ import annotations

import random
from typing import Callable, Optional, Sequence

from lislab import chains
from lislab.chains import (
    max_weight_chain,
    max_weight_chain_between,
    max_weight_chain_in_xrange,
    random_instance,
)
from lislab.dynlis import DynamicSequence, random_script
from lislab.embedding import A, Ap, B, Embedding, Lp, expand_unweighted, validate_structure
from lislab.model import WeightedPoint


def structure_suite(ns: Sequence[int], seeds: Sequence[int], Ms=(1, 5)) -> list:
    records = []
    for n in ns:
        for M in Ms:
            for seed in seeds:
                rep = validate_structure(random_instance(n, M, seed))
                records.append({
                    "suite": "structure", "n": n, "M": M, "seed": seed, "ok": rep.ok,
                    "failures": [c.name for c in rep.failures()],
                })
    return records


def lemma_suite(ns, seeds, M=1, mutate: Optional[Callable[[Embedding], None]] = None) -> list:
    return [dict(r.to_dict(), suite="lemma" if M == 1 else "weighted-lemma")
            for r in chains.sweep(ns, seeds, M, mutate)]


def range_suite(ns, seeds, Ms=(1, 5)) -> list:
    """Range answer over ``[x(A(j)), x(Ap(j))]`` equals the endpoint-pinned chain,
    and the best chain can be routed through some middle point."""
    records = []
    for n in ns:
        for M in Ms:
            for seed in seeds:
                emb = random_instance(n, M, seed)
                pts = list(emb.index.values())
                for j in range(n):
                    a, ap = emb.index[A(j)], emb.index[Ap(j)]
                    pinned = max_weight_chain_between(pts, a, ap)
                    ranged = max_weight_chain_in_xrange(pts, a.x, ap.x)
                    via_b = max(_through(pts, a, emb.index[B(i)], ap) for i in range(n))
                    records.append({
                        "suite": "range", "n": n, "M": M, "seed": seed, "j": j,
                        "pinned": pinned, "range": ranged, "through_b": via_b,
                        "ok": pinned == ranged == via_b,
                    })
    return records


def _through(pts, start, mid, end):
    left = max_weight_chain_between(pts, start, mid)
    right = max_weight_chain_between(pts, mid, end)
    if left is None or right is None:
        return -1
    return left + right - mid.w


def random_weighted_set(rng: random.Random, max_points: int = 12, max_weight: int = 6) -> list:
    k = rng.randint(0, max_points)
    xs = rng.sample(range(4 * max_points), k)
    ys = rng.sample(range(4 * max_points), k)
    return [WeightedPoint(x, y, rng.randint(0, max_weight)) for x, y in zip(xs, ys)]


def expansion_suite(count: int, seed: int = 0) -> list:
    rng = random.Random(f"expand:{seed}")
    records = []
    for t in range(count):
        pts = random_weighted_set(rng)
        weighted = max_weight_chain(pts)
        unweighted = max_weight_chain(expand_unweighted(pts))
        records.append({"suite": "expansion", "case": t, "weighted": weighted,
                        "unweighted": unweighted, "ok": weighted == unweighted})
    return records


def fuzz_script(seed: int, steps: int = 1000, universe: int = 300) -> dict:
    """Replay a random op script, recomputing every answer with the oracle.

    Every range query is also answered through the sentinel route.
    """
    rng = random.Random(f"fuzz:{seed}")
    ops = random_script(rng, steps, universe)
    seq = DynamicSequence(seed=seed)
    live = {}
    mismatches = []
    queries = 0
    for step, op in enumerate(ops):
        a = op.args
        if op.op == "I":
            h = seq.insert(WeightedPoint(*a))
            live[h] = WeightedPoint(*a)
            continue
        if op.op == "D":
            seq.delete(a[0])
            del live[a[0]]
            continue
        if op.op == "U":
            seq.update_weight(a[0], a[1])
            p = live[a[0]]
            live[a[0]] = WeightedPoint(p.x, p.y, a[1])
            continue
        queries += 1
        pts = list(live.values())
        if op.op == "QG":
            got, want = seq.query_global(), max_weight_chain(pts)
            sent = None
        else:
            lo, hi = a
            want = max_weight_chain_in_xrange(pts, lo, hi)
            got = seq.query_range(lo, hi)
            sent = seq.query_range_via_sentinels(lo, hi)
        if got != want or (sent is not None and sent != want):
            mismatches.append({"step": step, "op": op.op, "args": list(a),
                               "got": got, "sentinel": sent, "oracle": want})
    return {"suite": "fuzz", "seed": seed, "steps": steps, "queries": queries,
            "mismatches": mismatches, "ok": not mismatches}


def perturb_turn_weight(emb: Embedding) -> None:
    """Fault injection: add 1 to the weight of ``Lp(0, 0)``."""
    lbl = Lp(0, 0)
    p = emb.index[lbl]
    emb.index[lbl] = WeightedPoint(p.x, p.y, p.w + 1, lbl)
