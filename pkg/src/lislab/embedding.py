"""The six-family point set encoding a matrix and one weight column.

For an ``n x n`` matrix ``A`` and a weight vector ``b`` the embedding holds

* ``L(i, j)``  left-grid chain points,        weight ``3M(n-j)``
* ``Lp(i, j)`` left-grid turn points,         weight ``3M(n-j) + A[j][i]``
* ``R(i, j)``  right-grid chain points,       weight ``3M(j+1)``
* ``A(j)``     left special points,           weight 1
* ``Ap(j)``    right special points,          weight 1
* ``B(i)``     middle points,                 weight ``b[i]``

so that the heaviest chain from ``A(j)`` to ``Ap(j)`` is a fixed offset plus
``max_i (A[j][i] + b[i])``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Optional, Sequence

from lislab.model import Matrix, WeightedPoint, check_int64, dominates

FAMILIES = ("L", "Lp", "R", "A", "Ap", "B")
GRID_FAMILIES = ("L", "Lp", "R")


class PointLabel(NamedTuple):
    family: str
    i: int = -1
    j: int = -1

    def __str__(self):
        if self.family in GRID_FAMILIES:
            return f"{self.family}({self.i},{self.j})"
        if self.family == "B":
            return f"B({self.i})"
        return f"{self.family}({self.j})"


def L(i, j):
    return PointLabel("L", i, j)


def Lp(i, j):
    return PointLabel("Lp", i, j)


def R(i, j):
    return PointLabel("R", i, j)


def A(j):
    return PointLabel("A", -1, j)


def Ap(j):
    return PointLabel("Ap", -1, j)


def B(i):
    return PointLabel("B", i, -1)


def label_valid(label: PointLabel, n: int) -> bool:
    fam, i, j = label
    if fam in GRID_FAMILIES:
        return 0 <= i < n and 0 <= j < n
    if fam == "B":
        return 0 <= i < n and j == -1
    if fam in ("A", "Ap"):
        return i == -1 and 0 <= j < n
    return False


@dataclass
class Embedding:
    n: int
    M: int
    A: Matrix
    b: list
    index: dict = field(repr=False)

    @property
    def points(self) -> list:
        """All points sorted by x."""
        return sorted(self.index.values(), key=lambda p: p.x)

    def __len__(self):
        return len(self.index)

    def __getitem__(self, label: PointLabel) -> WeightedPoint:
        return special_point(self, label)

    def b_points(self) -> list:
        return [self.index[B(i)] for i in range(self.n)]


def _check_weights(values: Iterable[int], M: int, what: str):
    for v in values:
        if not 0 <= v <= M:
            raise ValueError(f"{what} entry {v} outside 0..{M}")


def build_embedding(A_mat: Matrix, b: Sequence[int], M: Optional[int] = None) -> Embedding:
    """Build ``S_k`` for matrix ``A_mat`` and middle weights ``b``.

    ``M`` is the weight multiplier; ``M == 1`` gives the Boolean embedding.
    Defaults to ``A_mat.M``.
    """
    if M is None:
        M = A_mat.M
    n = A_mat.n
    if n < 1:
        raise ValueError("embedding needs n >= 1")
    if M < 1:
        raise ValueError("multiplier M must be at least 1")
    b = [int(v) for v in b]
    if len(b) != n:
        raise ValueError(f"b has length {len(b)}, expected {n}")
    _check_weights((e for row in A_mat.entries for e in row), M, "matrix")
    _check_weights(b, M, "b")
    a = A_mat.entries

    index = {}

    def put(label, x, y, w):
        index[label] = WeightedPoint(check_int64(x), check_int64(y), check_int64(w), label)

    for i in range(n):
        for j in range(n):
            put(L(i, j), j * (2 * n + 1) + i + 2, i * (3 * n + 1) + 2 * n + j + 1, 3 * M * (n - j))
            # turn points read the transposed matrix
            put(Lp(i, j), (j + 1) * (2 * n + 1) - i, i * (3 * n + 1) + 2 * n - j,
                3 * M * (n - j) + a[j][i])
            put(R(i, j), (2 * n + j) * (n + 1) + i + 1, (i + 1) * (3 * n + 1) + j + 1, 3 * M * (j + 1))
    for j in range(n):
        put(A(j), j * (2 * n + 1) + 1, n - j, 1)
        put(Ap(n - j - 1), (2 * n + j + 1) * (n + 1), 3 * n * (n + 1) - j, 1)
    for i in range(n):
        put(B(i), 2 * n * (n + 1) - i, (i + 1) * (3 * n + 1), b[i])

    return Embedding(n, M, A_mat, b, index)


def swap_b_column(emb: Embedding, new_b: Sequence[int]) -> list:
    """Reweight the middle points to ``new_b``.

    Returns ``(label, old_weight, new_weight)`` for each of the ``n`` middle
    points, in index order, so a driver can replay them as updates.
    """
    new_b = [int(v) for v in new_b]
    if len(new_b) != emb.n:
        raise ValueError(f"new b has length {len(new_b)}, expected {emb.n}")
    _check_weights(new_b, emb.M, "b")
    deltas = []
    for i, w in enumerate(new_b):
        label = B(i)
        old = emb.index[label]
        emb.index[label] = WeightedPoint(old.x, old.y, w, label)
        deltas.append((label, old.w, w))
    emb.b = new_b
    return deltas


def special_point(emb: Embedding, label: PointLabel) -> WeightedPoint:
    label = PointLabel(*label)
    if not label_valid(label, emb.n) or label not in emb.index:
        raise KeyError(f"no point labelled {label} in an n={emb.n} embedding")
    return emb.index[label]


def expand_unweighted(points: Sequence[WeightedPoint], scale: Optional[int] = None) -> list:
    """Replace every weight-``w`` point by a diagonal run of ``w`` unit points.

    Point ``(x, y, w)`` becomes ``(x*s + t, y*s + t)`` for ``0 <= t < w`` with
    ``s = 1 + max weight`` unless ``scale`` is given. Replicas keep the
    original label and carry ``(label, t)`` as their own label.
    """
    points = list(points)
    xs = [p.x for p in points]
    ys = [p.y for p in points]
    if len(set(xs)) != len(xs) or len(set(ys)) != len(ys):
        raise ValueError("expansion needs pairwise distinct x and y coordinates")
    max_w = max((p.w for p in points), default=0)
    s = 1 + max_w if scale is None else scale
    if s <= max_w:
        raise ValueError(f"scale {s} must exceed the largest weight {max_w}")
    out = []
    for p in points:
        for t in range(p.w):
            out.append(WeightedPoint(check_int64(p.x * s + t), check_int64(p.y * s + t), 1,
                                     (p.label, t)))
    return out


# -- structural validation -------------------------------------------------


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class ValidationReport:
    checks: list

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]


def _is_chain(pts) -> bool:
    return all(dominates(p, q) for p, q in zip(pts, pts[1:]))


def _is_antichain(pts) -> bool:
    return not any(dominates(p, q) for p in pts for q in pts)


def validate_structure(emb: Embedding) -> ValidationReport:
    """Check the geometric layout claims about an embedding; never mutates."""
    n = emb.n
    idx = emb.index
    checks = []

    def add(name, ok, detail=""):
        checks.append(Check(name, bool(ok), "" if ok else detail))

    expected = 3 * n * n + 3 * n
    add("count", len(idx) == expected, f"{len(idx)} points, expected {expected}")
    missing = [str(lbl) for lbl in _all_labels(n) if lbl not in idx]
    add("labels", not missing, f"missing {missing[:5]}")
    if missing:
        return ValidationReport(checks)

    pts = list(idx.values())
    xs = [p.x for p in pts]
    ys = [p.y for p in pts]
    add("distinct-x", len(set(xs)) == len(xs), "duplicate x coordinate")
    add("distinct-y", len(set(ys)) == len(ys), "duplicate y coordinate")

    rng = range(n)
    for fam, chain in (("L", True), ("Lp", False), ("R", True)):
        for j in rng:
            col = [idx[PointLabel(fam, i, j)] for i in rng]
            ok = _is_chain(col) if chain else _is_antichain(col)
            add(f"{fam}-column-{j}-{'chain' if chain else 'antichain'}", ok, f"column {j}")
        for i in rng:
            row = [idx[PointLabel(fam, i, j)] for j in rng]
            ok = _is_chain(row) if chain else _is_antichain(row)
            add(f"{fam}-row-{i}-{'chain' if chain else 'antichain'}", ok, f"row {i}")

    for i in rng:
        for j in rng:
            l, lp = idx[L(i, j)], idx[Lp(i, j)]
            add(f"cell-{i}-{j}-L-above-left-of-Lp", l.x < lp.x and l.y > lp.y,
                f"L{l.x, l.y} vs Lp{lp.x, lp.y}")

    for fam, labels in (("A", [A(j) for j in rng]), ("Ap", [Ap(j) for j in rng]),
                        ("B", [B(i) for i in rng])):
        add(f"{fam}-antichain", _is_antichain([idx[lbl] for lbl in labels]), fam)

    left = [idx[PointLabel(f, i, j)] for f in ("L", "Lp") for i in rng for j in rng]
    right = [idx[R(i, j)] for i in rng for j in rng]
    left_min_y = min(p.y for p in left)
    right_max_y = max(p.y for p in right)

    def left_col(j):
        return [idx[PointLabel(f, i, j)] for f in ("L", "Lp") for i in rng]

    def right_col(j):
        return [idx[R(i, j)] for i in rng]

    for j in rng:
        a = idx[A(j)]
        ok = a.y < left_min_y and all(a.x < p.x for p in left_col(j))
        if j > 0:
            ok = ok and all(p.x < a.x for p in left_col(j - 1))
        add(f"A({j})-below-grid-between-columns", ok, str(a))

    for c in rng:
        # Ap(n-c-1) sits just right of right-grid column c
        ap = idx[Ap(n - c - 1)]
        ok = ap.y > right_max_y and all(p.x < ap.x for p in right_col(c))
        if c + 1 < n:
            ok = ok and all(ap.x < p.x for p in right_col(c + 1))
        add(f"Ap({n - c - 1})-above-grid-between-columns", ok, str(ap))

    left_max_x = max(p.x for p in left)
    right_min_x = min(p.x for p in right)
    for i in rng:
        b = idx[B(i)]
        lrow = [idx[PointLabel(f, i, j)] for f in ("L", "Lp") for j in rng]
        rrow = [idx[R(i, j)] for j in rng]
        ok = all(p.y < b.y for p in lrow) and all(b.y < p.y for p in rrow)
        add(f"B({i})-between-rows", ok, str(b))
        add(f"B({i})-between-grids", left_max_x < b.x < right_min_x, str(b))

    return ValidationReport(checks)


def _all_labels(n):
    for i in range(n):
        for j in range(n):
            yield L(i, j)
            yield Lp(i, j)
            yield R(i, j)
    for j in range(n):
        yield A(j)
        yield Ap(j)
        yield B(j)


# -- dump format -----------------------------------------------------------


def dump_points(points: Iterable[WeightedPoint]) -> str:
    """One ``family i j x y w`` line per labelled point, sorted by x."""
    lines = []
    for p in sorted(points, key=lambda p: p.x):
        fam, i, j = p.label
        lines.append(f"{fam} {i} {j} {p.x} {p.y} {p.w}")
    return "\n".join(lines) + ("\n" if lines else "")


def parse_dump(text: str) -> list:
    out = []
    for lineno, ln in enumerate(text.splitlines(), start=1):
        if not ln.strip():
            continue
        parts = ln.split()
        if len(parts) != 6 or parts[0] not in FAMILIES:
            raise ValueError(f"line {lineno}: expected 'family i j x y w', got {ln!r}")
        fam = parts[0]
        i, j, x, y, w = (int(t) for t in parts[1:])
        out.append(WeightedPoint(x, y, w, PointLabel(fam, i, j)))
    return out
