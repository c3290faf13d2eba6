import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lislab.chains import (
    best_chain_between,
    case_endpoints,
    closed_form_c,
    max_weight_chain,
    max_weight_chain_between,
    max_weight_chain_in_xrange,
    random_instance,
    sweep,
    valid_tuples,
)
from lislab.embedding import A, Ap, B, L, build_embedding
from lislab.model import Matrix, WeightedPoint, dominates
from _oracles import chain_by_enumeration


def P(x, y, w):
    return WeightedPoint(x, y, w)


def test_empty():
    assert max_weight_chain([]) == 0


def test_three_points():
    pts = [P(1, 1, 5), P(2, 2, 7), P(3, 0, 9)]
    assert chain_by_enumeration(pts) == 12
    assert max_weight_chain(pts) == 12


def test_singleton():
    assert max_weight_chain([P(4, -2, 6)]) == 6


point_sets = st.integers(0, 10).flatmap(lambda k: st.tuples(
    st.lists(st.integers(-20, 20), min_size=k, max_size=k, unique=True),
    st.lists(st.integers(-20, 20), min_size=k, max_size=k),
    st.lists(st.integers(0, 9), min_size=k, max_size=k),
)).map(lambda t: [WeightedPoint(*p) for p in zip(*t)])


@settings(max_examples=200, deadline=None)
@given(point_sets)
def test_dp_matches_enumeration(pts):
    assert max_weight_chain(pts) == chain_by_enumeration(pts)


def test_between_same_point():
    p = P(3, 3, 4)
    assert max_weight_chain_between([p, P(1, 5, 1)], p, p) == 4


def test_between_no_chain_is_none():
    p, q = P(1, 5, 1), P(2, 1, 1)
    assert max_weight_chain_between([p, q], p, q) is None


def test_between_rejects_absent_endpoint():
    p = P(1, 1, 1)
    with pytest.raises(ValueError):
        max_weight_chain_between([p], p, P(2, 2, 2))


@settings(max_examples=100, deadline=None)
@given(point_sets)
def test_between_matches_enumeration_in_interval(pts):
    if len(pts) < 2:
        return
    s = min(pts, key=lambda p: (p.x, p.y))
    e = max(pts, key=lambda p: (p.x, p.y))
    got = max_weight_chain_between(pts, s, e)
    if not dominates(s, e):
        assert got is None
        return
    inner = [p for p in pts if dominates(s, p) and dominates(p, e)]
    assert got == s.w + e.w + chain_by_enumeration(inner)


def test_best_chain_path_is_a_chain():
    emb = random_instance(4, 1, 2)
    pts = list(emb.index.values())
    weight, path = best_chain_between(pts, emb[A(1)], emb[Ap(1)])
    assert path[0] == emb[A(1)] and path[-1] == emb[Ap(1)]
    assert all(dominates(p, q) for p, q in zip(path, path[1:]))
    assert sum(p.w for p in path) == weight


def test_xrange_empty():
    assert max_weight_chain_in_xrange([P(1, 1, 3)], 5, 9) == 0


def test_xrange_rejects_inverted():
    with pytest.raises(ValueError):
        max_weight_chain_in_xrange([], 3, 2)


@pytest.mark.parametrize("n", range(1, 7))
def test_xrange_full_for_j0(n):
    emb = random_instance(n, 1, n)
    pts = list(emb.index.values())
    a, ap = emb[A(0)], emb[Ap(0)]
    assert min(p.x for p in pts) == a.x and max(p.x for p in pts) == ap.x
    assert max_weight_chain_in_xrange(pts, a.x, ap.x) == max_weight_chain_between(pts, a, ap)


def test_closed_form_case1_example():
    mat = Matrix.zeros(4)
    emb = build_embedding(mat, [0, 1, 0, 0], 1)
    assert closed_form_c(emb, "l_b_eq", 1, 1, 2) == 10


def test_closed_form_weighted_n1():
    emb = build_embedding(Matrix.from_rows([[2]], 3), [3], 3)
    assert closed_form_c(emb, "a_ap", j=0) == 25
    pts = list(emb.index.values())
    assert max_weight_chain_between(pts, emb[A(0)], emb[Ap(0)]) == 25


def test_closed_form_b_to_ap_last_row():
    emb = random_instance(5, 1, 4)
    n = 5
    for j in range(n):
        tri = 3 * (n - j) * (n - j + 1) // 2
        assert closed_form_c(emb, "b_ap", i=n - 1, j=j) == tri + 1 + emb.b[n - 1]


def test_closed_form_l00_b2_random_n3():
    emb = random_instance(3, 1, 17)
    pts = list(emb.index.values())
    oracle = max_weight_chain_between(pts, emb[L(0, 0)], emb[B(2)])
    assert closed_form_c(emb, "l_b_lt", 0, 2, 0) == oracle


def test_closed_form_rejects_bad_combinations():
    emb = random_instance(3, 5, 0)
    with pytest.raises(ValueError):
        closed_form_c(emb, "a_b", 0, 0, 0)
    emb1 = random_instance(3, 1, 0)
    with pytest.raises(ValueError):
        closed_form_c(emb1, "l_b_lt", 1, 1, 0)
    with pytest.raises(ValueError):
        closed_form_c(emb1, "nope")
    with pytest.raises(ValueError):
        closed_form_c(emb1, "a_ap", j=3)


def test_a_ap_closed_form_boolean_equals_combined():
    emb = random_instance(4, 1, 5)
    n = 4
    for j in range(n):
        best = max(emb.A[j, i] + emb.b[i] for i in range(n))
        combined = (3 * n - 3 * j) * (n - 1) + 3 * (n - j) * (n - j + 1) + 2 + best
        assert closed_form_c(emb, "a_ap", j=j) == combined


def test_valid_tuples_cover_expected_counts():
    n = 4
    tuples = list(valid_tuples(n))
    per_case = {}
    for case, *_ in tuples:
        per_case[case] = per_case.get(case, 0) + 1
    assert per_case == {"l_b_eq": 16, "lp_b_eq": 16, "l_b_lt": 24, "lp_b_lt": 24,
                        "a_b": 16, "b_ap": 16, "a_ap": 4}
    assert [c for c, *_ in valid_tuples(n, M=3)] == ["a_ap"] * 4


@pytest.mark.parametrize("n", range(1, 5))
def test_sweep_small(n):
    records = sweep([n], range(3))
    assert records and all(r.ok for r in records)


def test_sweep_detects_fault():
    def bump(emb):
        lbl = L(0, 0)
        p = emb.index[lbl]
        emb.index[lbl] = WeightedPoint(p.x, p.y, p.w + 1, lbl)
    records = sweep([3], [0], mutate=bump)
    assert any(not r.ok for r in records)


@pytest.mark.parametrize("n", [2, 4])
def test_best_chain_routes_through_middle(n):
    emb = random_instance(n, 1, 8)
    pts = list(emb.index.values())
    for j in range(n):
        a, ap = emb[A(j)], emb[Ap(j)]
        total = max_weight_chain_between(pts, a, ap)
        through = []
        for i in range(n):
            b = emb[B(i)]
            left = max_weight_chain_between(pts, a, b)
            right = max_weight_chain_between(pts, b, ap)
            through.append(left + right - b.w)
        assert max(through) == total


def test_endpoints_table():
    assert case_endpoints("lp_b_lt", 0, 2, 1)[1] == B(2)
    assert case_endpoints("a_ap", 0, 0, 3) == (A(3), Ap(3))
