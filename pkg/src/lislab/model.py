"""Matrices, Boolean vectors, weighted points and the reference products."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

# Capacity contract: every coordinate and weight must fit a signed 64-bit word.
INT64_MAX = 2**63 - 1


class FormatError(ValueError):
    """Raised when a matrix or vector text file cannot be parsed."""


def check_int64(value: int, what: str = "value") -> int:
    if not -INT64_MAX - 1 <= value <= INT64_MAX:
        raise OverflowError(f"{what} {value} exceeds the 64-bit capacity contract")
    return value


@dataclass(frozen=True)
class Matrix:
    """Dense square integer matrix with entries in ``{0, ..., M}``.

    Boolean matrices are simply ``M == 1``.
    """

    n: int
    M: int
    entries: tuple

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("matrix dimension must be at least 1")
        if self.M < 1:
            raise ValueError("entry bound M must be at least 1")
        rows = tuple(tuple(int(e) for e in row) for row in self.entries)
        if len(rows) != self.n or any(len(row) != self.n for row in rows):
            raise ValueError(f"entries must form a {self.n}x{self.n} grid")
        for r, row in enumerate(rows):
            for c, e in enumerate(row):
                if not 0 <= e <= self.M:
                    raise ValueError(f"entry ({r},{c})={e} outside 0..{self.M}")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], M: Optional[int] = None) -> "Matrix":
        rows = [list(r) for r in rows]
        if M is None:
            M = max(1, max((max(r) for r in rows if r), default=1))
        return cls(len(rows), M, rows)

    @classmethod
    def zeros(cls, n: int, M: int = 1) -> "Matrix":
        return cls(n, M, [[0] * n for _ in range(n)])

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, 1, [[int(r == c) for c in range(n)] for r in range(n)])

    @classmethod
    def random(cls, n: int, M: int, rng) -> "Matrix":
        return cls(n, M, [[rng.randint(0, M) for _ in range(n)] for _ in range(n)])

    def __getitem__(self, idx):
        r, c = idx
        return self.entries[r][c]

    @property
    def is_boolean(self) -> bool:
        return all(e in (0, 1) for row in self.entries for e in row)

    def column(self, k: int) -> list:
        return [self.entries[r][k] for r in range(self.n)]

    def to_text(self) -> str:
        lines = [f"{self.n} {self.M}"]
        lines += [" ".join(str(e) for e in row) for row in self.entries]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Matrix":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise FormatError("empty matrix file")
        try:
            n, M = (int(t) for t in lines[0].split())
        except ValueError:
            raise FormatError(f"bad header line {lines[0]!r}, expected 'n M'") from None
        if len(lines) != n + 1:
            raise FormatError(f"expected {n} matrix rows, found {len(lines) - 1}")
        rows = []
        for lineno, ln in enumerate(lines[1:], start=2):
            try:
                row = [int(t) for t in ln.split()]
            except ValueError:
                raise FormatError(f"line {lineno}: non-integer entry") from None
            if len(row) != n:
                raise FormatError(f"line {lineno}: expected {n} entries, found {len(row)}")
            bad = [e for e in row if not 0 <= e <= M]
            if bad:
                raise FormatError(f"line {lineno}: entry {bad[0]} outside 0..{M}")
            rows.append(row)
        try:
            return cls(n, M, rows)
        except ValueError as exc:
            raise FormatError(str(exc)) from None


@dataclass(frozen=True)
class BitVector:
    bits: tuple

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if any(b not in (0, 1) for b in bits):
            raise ValueError("bit vector entries must be 0 or 1")
        object.__setattr__(self, "bits", bits)

    @property
    def length(self) -> int:
        return len(self.bits)

    def __len__(self):
        return len(self.bits)

    def __getitem__(self, i):
        return self.bits[i]

    def __iter__(self):
        return iter(self.bits)

    @classmethod
    def random(cls, length: int, rng) -> "BitVector":
        return cls(tuple(rng.randint(0, 1) for _ in range(length)))

    def to_text(self) -> str:
        return " ".join(str(b) for b in self.bits)

    @classmethod
    def from_text(cls, line: str) -> "BitVector":
        try:
            bits = [int(t) for t in line.split()]
        except ValueError:
            raise FormatError(f"non-integer bit in {line!r}") from None
        if any(b not in (0, 1) for b in bits):
            raise FormatError(f"bits must be 0 or 1 in {line!r}")
        return cls(tuple(bits))


@dataclass(frozen=True)
class WeightedPoint:
    x: int
    y: int
    w: int = 1
    label: Optional[object] = field(default=None, compare=False)

    def __post_init__(self):
        if self.w < 0:
            raise ValueError(f"negative weight {self.w}")
        for v, what in ((self.x, "x"), (self.y, "y"), (self.w, "weight")):
            if not isinstance(v, int):
                raise TypeError(f"{what} must be an exact integer, got {type(v).__name__}")
            check_int64(v, what)


def dominates(p: WeightedPoint, q: WeightedPoint) -> bool:
    """True iff ``p`` is strictly below and to the left of ``q``."""
    return p.x < q.x and p.y < q.y


def maxplus_product(A: Matrix, B: Matrix) -> Matrix:
    """Reference (max,+)-product by the plain triple loop."""
    if A.n != B.n:
        raise ValueError(f"dimension mismatch: {A.n} vs {B.n}")
    n = A.n
    C = [[max(A.entries[i][k] + B.entries[k][j] for k in range(n)) for j in range(n)]
         for i in range(n)]
    return Matrix(n, A.M + B.M, C)


def boolean_matvec(A: Matrix, v: BitVector) -> BitVector:
    if A.n != len(v):
        raise ValueError(f"dimension mismatch: matrix {A.n} vs vector {len(v)}")
    if not A.is_boolean:
        raise ValueError("boolean_matvec needs a 0/1 matrix")
    return BitVector(tuple(
        int(any(A.entries[i][j] and v[j] for j in range(A.n))) for i in range(A.n)
    ))
