"""Dynamic weighted LIS over an x-ordered point sequence.

Elements live in a treap ordered by x and augmented with subtree sizes, so
the element of any rank can be found in logarithmic time. Queries recompute
the heaviest increasing run over the addressed slice with a Fenwick sweep on
y-ranks; nothing here tries to be sublinear.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from typing import Iterator, Optional

from lislab.model import WeightedPoint

__all__ = ["DynamicSequence", "heaviest_increasing", "parse_script", "run_script", "ScriptError"]


class _Node:
    __slots__ = ("key", "prio", "size", "point", "handle", "left", "right")

    def __init__(self, key, prio, point, handle):
        self.key = key
        self.prio = prio
        self.size = 1
        self.point = point
        self.handle = handle
        self.left = None
        self.right = None


def _size(t):
    return t.size if t is not None else 0


def _pull(t):
    t.size = 1 + _size(t.left) + _size(t.right)


def _split(t, key):
    """Split into (keys < key, keys >= key)."""
    if t is None:
        return None, None
    if t.key < key:
        lo, hi = _split(t.right, key)
        t.right = lo
        _pull(t)
        return t, hi
    lo, hi = _split(t.left, key)
    t.left = hi
    _pull(t)
    return lo, t


def _merge(a, b):
    if a is None:
        return b
    if b is None:
        return a
    if a.prio > b.prio:
        a.right = _merge(a.right, b)
        _pull(a)
        return a
    b.left = _merge(a, b.left)
    _pull(b)
    return b


def _erase(t, key):
    if t.key == key:
        return _merge(t.left, t.right)
    if key < t.key:
        t.left = _erase(t.left, key)
    else:
        t.right = _erase(t.right, key)
    _pull(t)
    return t


def heaviest_increasing(items) -> int:
    """Max total weight of a strictly y-increasing subsequence of ``(y, w)`` pairs."""
    items = list(items)
    if not items:
        return 0
    ranks = {y: r for r, y in enumerate(sorted({y for y, _ in items}), start=1)}
    size = len(ranks)
    tree = [0] * (size + 1)
    best = 0
    for y, w in items:
        r = ranks[y]
        # prefix max over ranks < r
        k, prev = r - 1, 0
        while k > 0:
            if tree[k] > prev:
                prev = tree[k]
            k -= k & -k
        cur = prev + w
        if cur > best:
            best = cur
        k = r
        while k <= size:
            if tree[k] < cur:
                tree[k] = cur
            k += k & -k
    return best


@dataclass
class Stats:
    inserts: int = 0
    deletes: int = 0
    updates: int = 0
    queries: int = 0

    def as_dict(self) -> dict:
        return {"inserts": self.inserts, "deletes": self.deletes,
                "updates": self.updates, "queries": self.queries}


class DynamicSequence:
    """Points kept in increasing-x order, with weighted LIS queries.

    Handles returned by :meth:`insert` are small integers, issued in order
    starting at 0, and stay valid until the element is deleted.
    """

    def __init__(self, points=(), seed: int = 0):
        self._rng = random.Random(seed)
        self._root = None
        self._nodes = {}
        self._xs = {}
        self._ys = set()
        self._next_handle = 0
        self.stats = Stats()
        for p in points:
            self.insert(p)

    def __len__(self):
        return len(self._nodes)

    def __iter__(self) -> Iterator[WeightedPoint]:
        return (node.point for node in self._inorder(self._root))

    def __contains__(self, handle):
        return handle in self._nodes

    def points(self) -> list:
        return list(self)

    def handles(self) -> list:
        return [node.handle for node in self._inorder(self._root)]

    def get(self, handle) -> WeightedPoint:
        return self._node(handle).point

    def _node(self, handle):
        try:
            return self._nodes[handle]
        except KeyError:
            raise KeyError(f"stale or unknown handle {handle!r}") from None

    @staticmethod
    def _inorder(t):
        stack = []
        while stack or t is not None:
            while t is not None:
                stack.append(t)
                t = t.left
            t = stack.pop()
            yield t
            t = t.right

    # -- updates -----------------------------------------------------------

    def _link(self, key, point, handle):
        node = _Node(key, self._rng.random(), point, handle)
        lo, hi = _split(self._root, key)
        self._root = _merge(_merge(lo, node), hi)
        return node

    def insert(self, p: WeightedPoint) -> int:
        if p.x in self._xs:
            raise ValueError(f"x={p.x} already present")
        if p.y in self._ys:
            raise ValueError(f"y={p.y} already present")
        handle = self._next_handle
        self._next_handle += 1
        self._nodes[handle] = self._link((p.x, 0), p, handle)
        self._xs[p.x] = handle
        self._ys.add(p.y)
        self.stats.inserts += 1
        return handle

    def delete(self, handle) -> WeightedPoint:
        node = self._node(handle)
        self._root = _erase(self._root, node.key)
        del self._nodes[handle]
        del self._xs[node.point.x]
        self._ys.discard(node.point.y)
        self.stats.deletes += 1
        return node.point

    def update_weight(self, handle, w: int) -> int:
        if w < 0:
            raise ValueError(f"negative weight {w}")
        node = self._node(handle)
        old = node.point
        node.point = WeightedPoint(old.x, old.y, w, old.label)
        self.stats.updates += 1
        return old.w

    # -- rank addressing ---------------------------------------------------

    def find_rank(self, r: int) -> int:
        """Handle of the element with 0-based rank ``r`` in x order."""
        if not 0 <= r < len(self):
            raise IndexError(f"rank {r} out of range for {len(self)} elements")
        t = self._root
        while True:
            left = _size(t.left)
            if r < left:
                t = t.left
            elif r == left:
                return t.handle
            else:
                r -= left + 1
                t = t.right

    def rank_of_x(self, x: int) -> int:
        """Number of elements with x-coordinate strictly below ``x``."""
        t, r = self._root, 0
        while t is not None:
            if t.key[0] < x:
                r += _size(t.left) + 1
                t = t.right
            else:
                t = t.left
        return r

    def handle_at_x(self, x: int) -> Optional[int]:
        return self._xs.get(x)

    # -- queries -----------------------------------------------------------

    def _collect(self, t, xlo, xhi, out):
        while t is not None:
            kx = t.key[0]
            if kx < xlo:
                t = t.right
            elif kx > xhi:
                t = t.left
            else:
                self._collect(t.left, xlo, xhi, out)
                out.append((t.point.y, t.point.w))
                t = t.right

    def query_global(self) -> int:
        self.stats.queries += 1
        return heaviest_increasing((n.point.y, n.point.w) for n in self._inorder(self._root))

    def query_range(self, xlo: int, xhi: int) -> int:
        if xlo > xhi:
            raise ValueError(f"empty range: xlo={xlo} > xhi={xhi}")
        self.stats.queries += 1
        items = []
        self._collect(self._root, xlo, xhi, items)
        return heaviest_increasing(items)

    def query_rank_range(self, lo: int, hi: int) -> int:
        """Subarray form of :meth:`query_range`: ranks ``lo..hi`` inclusive."""
        xlo = self.get(self.find_rank(lo)).x
        xhi = self.get(self.find_rank(hi)).x
        return self.query_range(xlo, xhi)

    def sentinel_weight(self) -> int:
        max_w = max((n.point.w for n in self._nodes.values()), default=0)
        return (len(self) + 1) * max_w + 1

    def query_range_via_sentinels(self, xlo: int, xhi: int) -> int:
        """Answer a range query with one global query and two heavy sentinels.

        A sentinel below every y is placed immediately before the first element
        with x >= ``xlo`` and one above every y immediately after the last
        element with x <= ``xhi``. Both weigh more than all real points
        together, so the heaviest global chain uses both and, between them,
        exactly the heaviest chain of the range.
        """
        if xlo > xhi:
            raise ValueError(f"empty range: xlo={xlo} > xhi={xhi}")
        W = self.sentinel_weight()
        ys = self._ys
        y_lo = min(ys, default=0) - 1
        y_hi = max(ys, default=0) + 1
        # tie-breaking keys put the sentinels in the array slots next to the range
        keys = ((xlo, -1), (xhi, 1))
        self._link(keys[0], WeightedPoint(xlo, y_lo, W, "sentinel-lo"), None)
        self._link(keys[1], WeightedPoint(xhi, y_hi, W, "sentinel-hi"), None)
        self.stats.inserts += 2
        try:
            total = self.query_global()
        finally:
            for key in keys:
                self._root = _erase(self._root, key)
            self.stats.deletes += 2
        assert total >= 2 * W
        return total - 2 * W


# -- operation scripts -----------------------------------------------------


class ScriptError(ValueError):
    pass


@dataclass
class ScriptOp:
    op: str
    args: tuple
    expected: Optional[int] = None
    lineno: int = 0


@dataclass
class ScriptResult:
    op: ScriptOp
    answer: Optional[int] = None

    @property
    def ok(self) -> bool:
        return self.op.expected is None or self.op.expected == self.answer


_ARITY = {"I": 3, "D": 1, "U": 2, "QG": 0, "QR": 2, "QS": 2}


def parse_script(text: str) -> list:
    """Parse ``I x y w`` / ``D h`` / ``U h w`` / ``QG`` / ``QR lo hi`` / ``QS lo hi``.

    An expected answer may follow ``→`` (or ``->``).
    """
    ops = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = re.split(r"\s*(?:→|->)\s*", line)
        if len(parts) > 2:
            raise ScriptError(f"line {lineno}: more than one expected value")
        tokens = parts[0].split()
        name = tokens[0]
        if name not in _ARITY:
            raise ScriptError(f"line {lineno}: unknown op {name!r}")
        if len(tokens) - 1 != _ARITY[name]:
            raise ScriptError(f"line {lineno}: {name} takes {_ARITY[name]} arguments")
        try:
            args = tuple(int(t) for t in tokens[1:])
            expected = int(parts[1]) if len(parts) == 2 else None
        except ValueError:
            raise ScriptError(f"line {lineno}: non-integer argument") from None
        ops.append(ScriptOp(name, args, expected, lineno))
    return ops


def format_script(ops) -> str:
    lines = []
    for op in ops:
        line = " ".join([op.op, *map(str, op.args)])
        if op.expected is not None:
            line += f" → {op.expected}"
        lines.append(line)
    return "\n".join(lines) + "\n"


def run_script(ops, seq: Optional[DynamicSequence] = None) -> list:
    seq = DynamicSequence() if seq is None else seq
    results = []
    for op in ops:
        a = op.args
        if op.op == "I":
            ans = seq.insert(WeightedPoint(a[0], a[1], a[2]))
        elif op.op == "D":
            seq.delete(a[0])
            ans = None
        elif op.op == "U":
            ans = seq.update_weight(a[0], a[1])
        elif op.op == "QG":
            ans = seq.query_global()
        elif op.op == "QR":
            ans = seq.query_range(a[0], a[1])
        else:
            ans = seq.query_range_via_sentinels(a[0], a[1])
        results.append(ScriptResult(op, ans))
    return results


def random_script(rng: random.Random, steps: int, universe: int = 300,
                  max_weight: int = 9) -> list:
    """Random mixed workload over points drawn from a ``universe``-sized pool.

    The pool uses a random permutation for y so x and y stay distinct.
    """
    ys = list(range(universe))
    rng.shuffle(ys)
    free = list(range(universe))
    live = {}  # handle -> x
    next_handle = 0
    ops = []
    for _ in range(steps):
        roll = rng.random()
        if (roll < 0.35 or not live) and free:
            x = free.pop(rng.randrange(len(free)))
            ops.append(ScriptOp("I", (x, ys[x], rng.randint(0, max_weight))))
            live[next_handle] = x
            next_handle += 1
        elif roll < 0.5 and live:
            h = rng.choice(sorted(live))
            free.append(live.pop(h))
            ops.append(ScriptOp("D", (h,)))
        elif roll < 0.65 and live:
            h = rng.choice(sorted(live))
            ops.append(ScriptOp("U", (h, rng.randint(0, max_weight))))
        elif roll < 0.75:
            ops.append(ScriptOp("QG", ()))
        else:
            lo = rng.randint(-2, universe + 1)
            hi = rng.randint(lo, universe + 2)
            ops.append(ScriptOp("QR" if roll < 0.88 else "QS", (lo, hi)))
    return ops
