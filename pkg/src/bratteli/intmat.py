"""Exact integer matrices.

Entries are Python ints, so telescoped products never overflow.  Matrices are
immutable values: safe to hash, share, and compare.  Level vectors are plain
tuples of positive ints; the pairing of a matrix with its domain/codomain
levels (the multiplicity condition) is checked by the helpers below at the
validation boundaries rather than being carried inside the matrix.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import DimensionMismatch, LimitExceeded

LevelVector = tuple  # tuple[int, ...] with every entry >= 1

DEFAULT_MAX_CELLS = 10**6


def max_cells() -> int:
    """Matrix size cap (rows*cols), overridable via the BD_MAX_CELLS env var."""
    raw = os.environ.get("BD_MAX_CELLS", "")
    try:
        return int(raw) if raw else DEFAULT_MAX_CELLS
    except ValueError:
        return DEFAULT_MAX_CELLS


@dataclass(frozen=True)
class Mat:
    """A rows x cols matrix of nonnegative (or, for K0 work, arbitrary) ints."""

    entries: tuple

    def __post_init__(self):
        rows = self.entries
        if not rows or not rows[0]:
            raise DimensionMismatch("matrix must have at least one row and column")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise DimensionMismatch("ragged matrix rows")
        if len(rows) * width > max_cells():
            raise LimitExceeded(
                f"matrix of {len(rows)}x{width} cells exceeds BD_MAX_CELLS={max_cells()}"
            )

    @staticmethod
    def from_rows(rows: Iterable[Sequence[int]]) -> "Mat":
        return Mat(tuple(tuple(int(x) for x in row) for row in rows))

    @staticmethod
    def identity(n: int) -> "Mat":
        return Mat(tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0])

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.cols != other.rows:
            raise DimensionMismatch(
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        ot = tuple(zip(*other.entries))
        return Mat(
            tuple(
                tuple(sum(a * b for a, b in zip(row, col)) for col in ot)
                for row in self.entries
            )
        )

    def vec(self, v: Sequence[int]) -> LevelVector:
        """Matrix-vector product, v treated as a column."""
        if self.cols != len(v):
            raise DimensionMismatch(f"matrix has {self.cols} columns, vector length {len(v)}")
        return tuple(sum(a * b for a, b in zip(row, v)) for row in self.entries)

    def column(self, j: int) -> tuple:
        return tuple(row[j] for row in self.entries)

    def is_embedding(self) -> bool:
        """No all-zero column: every source summand reaches the target."""
        return all(any(row[j] for row in self.entries) for j in range(self.cols))

    def zero_columns(self) -> list:
        return [j for j in range(self.cols) if not any(row[j] for row in self.entries)]

    def is_nonnegative(self) -> bool:
        return all(x >= 0 for row in self.entries for x in row)

    def lex_key(self) -> tuple:
        return self.entries

    def __str__(self) -> str:
        return "[" + ", ".join("[" + ", ".join(map(str, r)) + "]" for r in self.entries) + "]"


def vec_le(a: Sequence[int], b: Sequence[int]) -> bool:
    return len(a) == len(b) and all(x <= y for x, y in zip(a, b))


def check_level(v: Sequence[int]) -> LevelVector:
    from .errors import InvalidPresentation

    vt = tuple(int(x) for x in v)
    if not vt:
        raise InvalidPresentation("level vector must be nonempty")
    if any(x < 1 for x in vt):
        raise InvalidPresentation(f"level vector entries must be >= 1, got {vt}")
    return vt


def multiplicity_violation_row(m: Mat, domain: Sequence[int], codomain: Sequence[int]):
    """First row where (m @ domain) exceeds codomain, or None."""
    image = m.vec(domain)
    for i, (got, cap) in enumerate(zip(image, codomain)):
        if got > cap:
            return i
    return None


def enumerate_row_solutions(weights: Sequence[int], budget: int) -> Iterator[tuple]:
    """All nonnegative integer rows x with sum(x[j]*weights[j]) <= budget, lexicographic."""
    n = len(weights)
    row = [0] * n

    def rec(j: int, left: int):
        if j == n:
            yield tuple(row)
            return
        w = weights[j]
        top = left // w if w > 0 else None
        k = 0
        while top is None or k <= top:
            if w == 0 and k > budget:
                break  # zero-weight columns still capped to keep enumeration finite
            row[j] = k
            yield from rec(j + 1, left - k * w)
            k += 1
        row[j] = 0

    yield from rec(0, budget)


def solve_left_factor_rows(
    m: Mat, rhs_row: Sequence[int], weights: Sequence[int], budget: int
) -> list:
    """All nonnegative rows x with x @ m == rhs_row and x . weights <= budget.

    Used to extend intertwining chains: x ranges over rows of the unknown left
    factor, m is the known right factor.  Returned lexicographically sorted.
    """
    n = m.rows
    cols = m.cols
    out = []
    row = [0] * n

    # Entry bound per coordinate: from equation columns where m has support,
    # and from the weight budget.
    caps = []
    for c in range(n):
        cap = budget // weights[c] if weights[c] > 0 else budget
        for b in range(cols):
            if m.entries[c][b] > 0:
                cap = min(cap, rhs_row[b] // m.entries[c][b])
        caps.append(cap)

    def rec(c: int, partial: list, spent: int):
        if c == n:
            if partial == list(rhs_row):
                out.append(tuple(row))
            return
        for k in range(caps[c] + 1):
            cost = spent + k * weights[c]
            if cost > budget:
                break
            new = [p + k * m.entries[c][b] for b, p in enumerate(partial)]
            if any(x > y for x, y in zip(new, rhs_row)):
                continue
            row[c] = k
            rec(c + 1, new, cost)
            row[c] = 0

    rec(0, [0] * cols, 0)
    return out
