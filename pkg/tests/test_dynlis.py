import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lislab.chains import max_weight_chain, max_weight_chain_in_xrange
from lislab.dynlis import (
    DynamicSequence,
    ScriptError,
    format_script,
    heaviest_increasing,
    parse_script,
    random_script,
    run_script,
)
from lislab.embedding import A, Ap, B, build_embedding, swap_b_column
from lislab.chains import random_instance, closed_form_c
from lislab.model import Matrix, WeightedPoint
from lislab.verify import fuzz_script


def random_points(rng, k, span=None):
    span = span or 4 * k
    xs = rng.sample(range(span), k)
    ys = rng.sample(range(span), k)
    return [WeightedPoint(x, y, rng.randint(0, 9)) for x, y in zip(xs, ys)]


def random_queries(rng, lo, hi, count):
    out = []
    for _ in range(count):
        a = rng.randint(lo, hi)
        out.append((a, rng.randint(a, hi)))
    return out


def test_empty():
    seq = DynamicSequence()
    assert seq.query_global() == 0
    assert seq.query_range(-5, 5) == 0
    assert seq.query_range_via_sentinels(-5, 5) == 0


def test_singleton():
    seq = DynamicSequence()
    seq.insert(WeightedPoint(3, 4, 7))
    assert seq.query_global() == 7


def test_insert_then_delete_restores_answers():
    rng = random.Random(1)
    pts = random_points(rng, 40)
    seq = DynamicSequence(pts)
    queries = random_queries(rng, -2, 170, 50)
    before = [seq.query_range(a, b) for a, b in queries]
    h = seq.insert(WeightedPoint(1000, 1000, 5))
    seq.delete(h)
    assert [seq.query_range(a, b) for a, b in queries] == before
    assert seq.points() == sorted(pts, key=lambda p: p.x)


def test_embedding_inserted_in_random_order():
    emb = random_instance(4, 1, 3)
    pts = list(emb.index.values())
    random.Random(5).shuffle(pts)
    seq = DynamicSequence(pts)
    assert len(seq) == 60
    assert seq.query_global() == max_weight_chain(pts)


def test_collisions_rejected():
    seq = DynamicSequence([WeightedPoint(1, 1, 1)])
    with pytest.raises(ValueError):
        seq.insert(WeightedPoint(1, 2, 1))
    with pytest.raises(ValueError):
        seq.insert(WeightedPoint(2, 1, 1))


def test_stale_handle_rejected():
    seq = DynamicSequence()
    h = seq.insert(WeightedPoint(1, 1, 1))
    seq.delete(h)
    with pytest.raises(KeyError):
        seq.delete(h)
    with pytest.raises(KeyError):
        seq.update_weight(h, 3)


def test_delete_sole_element():
    seq = DynamicSequence()
    h = seq.insert(WeightedPoint(1, 1, 4))
    assert seq.delete(h) == WeightedPoint(1, 1, 4)
    assert seq.query_global() == 0


def test_delete_non_lis_point():
    pts = [WeightedPoint(1, 1, 5), WeightedPoint(2, 2, 5), WeightedPoint(3, 0, 1)]
    seq = DynamicSequence(pts)
    assert seq.query_global() == 10
    seq.delete(2)
    assert seq.query_global() == 10


def test_delete_middle_family():
    emb = random_instance(4, 1, 6)
    seq = DynamicSequence()
    handles = {p.label: seq.insert(p) for p in emb.points}
    for i in range(4):
        seq.delete(handles[B(i)])
    rest = [p for lbl, p in emb.index.items() if lbl.family != "B"]
    assert len(seq) == 3 * 16 + 2 * 4
    assert seq.query_global() == max_weight_chain(rest)
    for j in range(4):
        lo, hi = emb[A(j)].x, emb[Ap(j)].x
        assert seq.query_range(lo, hi) == max_weight_chain_in_xrange(rest, lo, hi)


def test_update_same_weight_is_noop():
    rng = random.Random(2)
    seq = DynamicSequence(random_points(rng, 30))
    before = seq.query_global()
    for h in seq.handles():
        seq.update_weight(h, seq.get(h).w)
    assert seq.query_global() == before


def test_all_zero_weights():
    rng = random.Random(3)
    seq = DynamicSequence(random_points(rng, 30))
    for h in seq.handles():
        seq.update_weight(h, 0)
    assert seq.query_global() == 0


def test_update_rejects_negative():
    seq = DynamicSequence([WeightedPoint(0, 0, 1)])
    with pytest.raises(ValueError):
        seq.update_weight(0, -1)


def test_replayed_swap_matches_rebuild():
    rng = random.Random(4)
    mat = Matrix.random(4, 3, rng)
    emb = build_embedding(mat, [rng.randint(0, 3) for _ in range(4)], 3)
    seq = DynamicSequence()
    handles = {p.label: seq.insert(p) for p in emb.points}
    new_b = [rng.randint(0, 3) for _ in range(4)]
    for label, _, new in swap_b_column(emb, new_b):
        seq.update_weight(handles[label], new)
    fresh = DynamicSequence(build_embedding(mat, new_b, 3).points)
    queries = [(emb[A(j)].x, emb[Ap(j)].x) for j in range(4)] + random_queries(rng, 0, 80, 30)
    assert [seq.query_range(*q) for q in queries] == [fresh.query_range(*q) for q in queries]
    assert seq.query_global() == fresh.query_global()


def test_antichain_unit_weights():
    seq = DynamicSequence([WeightedPoint(i, -i, 1) for i in range(10)])
    assert seq.query_global() == 1


def test_random_ops_200_points():
    rng = random.Random(200)
    pool = random_points(rng, 400, 1000)
    seq = DynamicSequence()
    live = {}
    for p in pool[:200]:
        live[seq.insert(p)] = p
    spare = pool[200:]
    for _ in range(500):
        r = rng.random()
        if r < 0.3 and spare:
            p = spare.pop()
            live[seq.insert(p)] = p
        elif r < 0.6 and live:
            h = rng.choice(sorted(live))
            seq.delete(h)
            del live[h]
        elif live:
            h = rng.choice(sorted(live))
            w = rng.randint(0, 9)
            seq.update_weight(h, w)
            p = live[h]
            live[h] = WeightedPoint(p.x, p.y, w)
    assert seq.query_global() == max_weight_chain(list(live.values()))


def test_range_examples():
    rng = random.Random(6)
    pts = random_points(rng, 50)
    seq = DynamicSequence(pts)
    assert seq.query_range(-10, 1000) == seq.query_global()
    assert seq.query_range(500, 600) == 0
    with pytest.raises(ValueError):
        seq.query_range(3, 2)


def test_range_on_embedding_equals_closed_form():
    emb = random_instance(5, 1, 12)
    seq = DynamicSequence(emb.points)
    for j in range(5):
        assert seq.query_range(emb[A(j)].x, emb[Ap(j)].x) == closed_form_c(emb, "a_ap", j=j)


def test_sentinels_agree_on_100_ranges():
    rng = random.Random(7)
    seq = DynamicSequence(random_points(rng, 100))
    for lo, hi in random_queries(rng, -3, 403, 100):
        assert seq.query_range_via_sentinels(lo, hi) == seq.query_range(lo, hi)
    assert len(seq) == 100


def test_sentinels_on_embedding_without_coordinate_gaps():
    emb = random_instance(4, 2, 1)
    seq = DynamicSequence(emb.points)
    for j in range(4):
        lo, hi = emb[A(j)].x, emb[Ap(j)].x
        assert seq.query_range_via_sentinels(lo, hi) == seq.query_range(lo, hi)


def test_sentinel_full_range():
    rng = random.Random(8)
    seq = DynamicSequence(random_points(rng, 30))
    assert seq.query_range_via_sentinels(-1, 10_000) == seq.query_global()


def test_rank_addressing():
    rng = random.Random(9)
    pts = random_points(rng, 25)
    seq = DynamicSequence(pts)
    xs = sorted(p.x for p in pts)
    for r, x in enumerate(xs):
        assert seq.get(seq.find_rank(r)).x == x
        assert seq.rank_of_x(x) == r
    with pytest.raises(IndexError):
        seq.find_rank(25)
    assert seq.query_rank_range(3, 10) == seq.query_range(xs[3], xs[10])


def test_handles_survive_unrelated_changes():
    rng = random.Random(10)
    pts = random_points(rng, 30, 200)
    seq = DynamicSequence(pts[:20])
    kept = {h: seq.get(h) for h in seq.handles()[::3]}
    for p in pts[20:]:
        seq.insert(p)
    for h in list(seq.handles()):
        if h not in kept and rng.random() < 0.5:
            seq.delete(h)
    for h, p in kept.items():
        assert seq.get(h) == p


def test_iteration_in_x_order():
    rng = random.Random(11)
    seq = DynamicSequence(random_points(rng, 60))
    xs = [p.x for p in seq]
    assert xs == sorted(xs)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000), st.integers(0, 20))
def test_weight_monotonicity(seed, bump):
    rng = random.Random(seed)
    seq = DynamicSequence(random_points(rng, 15))
    queries = random_queries(rng, -1, 61, 10)
    h = rng.choice(seq.handles())
    base = [seq.query_range(*q) for q in queries]
    old = seq.get(h).w
    seq.update_weight(h, old + bump)
    up = [seq.query_range(*q) for q in queries]
    assert all(u >= b for u, b in zip(up, base))
    seq.update_weight(h, 0)
    down = [seq.query_range(*q) for q in queries]
    assert all(d <= b for d, b in zip(down, base))


def test_heaviest_increasing_strict():
    assert heaviest_increasing([(1, 2), (1, 3)]) == 3
    assert heaviest_increasing([(1, 2), (2, 3), (0, 10)]) == 10


def test_stats_counted():
    seq = DynamicSequence()
    h = seq.insert(WeightedPoint(0, 0, 1))
    seq.update_weight(h, 2)
    seq.query_global()
    seq.query_range(0, 1)
    seq.delete(h)
    assert seq.stats.as_dict() == {"inserts": 1, "deletes": 1, "updates": 1, "queries": 2}


SCRIPT = """\
I 1 1 5
I 2 2 7
I 3 0 9
QG → 12
QR 2 3 → 9
QS 1 2 -> 12
U 2 1
QG → 12
D 1
QG → 5
"""


def test_script_replay():
    results = run_script(parse_script(SCRIPT))
    assert all(r.ok for r in results)
    assert [r.answer for r in results if r.op.op == "I"] == [0, 1, 2]


def test_script_mismatch_reported():
    results = run_script(parse_script("I 1 1 3\nQG → 4\n"))
    assert not results[-1].ok


def test_script_round_trip():
    ops = parse_script(SCRIPT)
    again = parse_script(format_script(ops))
    assert [(o.op, o.args, o.expected) for o in again] == \
        [(o.op, o.args, o.expected) for o in ops]


@pytest.mark.parametrize("bad", ["X 1", "I 1 2", "QG 3", "QR a b", "QG → 1 → 2"])
def test_script_parse_errors(bad):
    with pytest.raises(ScriptError):
        parse_script(bad)


def test_random_script_is_valid():
    ops = random_script(random.Random(0), 300)
    run_script(ops)


@pytest.mark.parametrize("seed", range(3))
def test_fuzz_short(seed):
    result = fuzz_script(seed, 400)
    assert result["ok"], result["mismatches"][:3]
    assert result["queries"] > 0
