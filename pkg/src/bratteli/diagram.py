"""Bratteli diagrams as finite presentations with exact telescoping.

A presentation stores a finite prefix of levels and edges, plus an optional
periodic tail that makes the diagram infinite.  Tail data is the *first
cycle*: its level vectors are the actual level values right after the prefix,
and its edge matrices repeat forever.  Deeper levels are obtained by applying
the (periodic) edges, i.e. the diagram grows unitally once past the first
cycle.  This presents both the constant-shape examples (permutation tails)
and the growing towers (scalar levels 1, 2, 4, 8, ... with edge (2)) with
the same finite data.

The zero diagram is a distinct variant carrying no levels or edges.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import (
    DimensionMismatch,
    InvalidPresentation,
    MultiplicityViolation,
    NotEmbedding,
    OutOfRange,
)
from .intmat import LevelVector, Mat, check_level, multiplicity_violation_row, vec_le


@dataclass(frozen=True)
class PeriodicTail:
    """One cycle of tail data.

    levels[j] is the actual level value at depth P+1+j (P = prefix length);
    edges[j] maps tail position j to position j+1 (cyclically, so edges[q-1]
    wraps to position 0 of the next cycle).  glue maps the last prefix level
    into levels[0].
    """

    levels: tuple
    edges: tuple
    glue: Mat

    @property
    def period(self) -> int:
        return len(self.levels)


@dataclass(frozen=True)
class DiagramPresentation:
    prefix_levels: tuple = ()
    prefix_edges: tuple = ()
    tail: Optional[PeriodicTail] = None
    zero: bool = False


def _check_edge(e: Mat, dom: LevelVector, cod_len: int, where: str,
                cod: Optional[LevelVector] = None) -> None:
    if e.cols != len(dom) or e.rows != cod_len:
        raise DimensionMismatch(
            f"{where}: edge is {e.rows}x{e.cols}, expected {cod_len}x{len(dom)}"
        )
    if not e.is_nonnegative():
        raise InvalidPresentation(f"{where}: negative entry in edge matrix")
    bad = e.zero_columns()
    if bad:
        raise NotEmbedding(f"{where}: all-zero column {bad[0]}", column=bad[0])
    if cod is not None:
        row = multiplicity_violation_row(e, dom, cod)
        if row is not None:
            raise MultiplicityViolation(
                f"{where}: row {row}: E.V = {e.vec(dom)} exceeds {tuple(cod)}", row=row
            )


@dataclass(frozen=True)
class Diagram:
    """A validated diagram; construct through validate()."""

    presentation: DiagramPresentation

    @property
    def is_zero(self) -> bool:
        return self.presentation.zero

    @property
    def prefix_len(self) -> int:
        return len(self.presentation.prefix_levels)

    @property
    def tail(self) -> Optional[PeriodicTail]:
        return self.presentation.tail

    @property
    def has_tail(self) -> bool:
        return self.presentation.tail is not None

    @property
    def period(self) -> int:
        t = self.presentation.tail
        return t.period if t else 0

    @property
    def max_level(self) -> Optional[int]:
        """Largest resolvable level index, or None when the diagram is infinite."""
        if self.is_zero:
            return 0
        return None if self.has_tail else self.prefix_len

    def _require_nonzero(self):
        if self.is_zero:
            raise OutOfRange("the zero diagram has no levels")

    def phase(self, n: int) -> int:
        """Tail phase of level index n (n > prefix length)."""
        return (n - self.prefix_len - 1) % self.period

    @property
    def deep_start(self) -> int:
        """First index from which level(n+1) == edge(n).level(n) always holds."""
        return self.prefix_len + self.period

    def level(self, n: int) -> LevelVector:
        self._require_nonzero()
        P = self.prefix_len
        if n < 1:
            raise OutOfRange(f"level index {n} < 1")
        if n <= P:
            return self.presentation.prefix_levels[n - 1]
        t = self.presentation.tail
        if t is None:
            raise OutOfRange(f"level {n} beyond finite presentation of depth {P}")
        q = t.period
        if n <= P + q:
            return t.levels[n - P - 1]
        # Deep tail: evolve from the last first-cycle level by the cyclic edges.
        v = t.levels[q - 1]
        for m in range(P + q, n):
            v = self.edge(m).vec(v)
        return v

    def edge(self, n: int) -> Mat:
        self._require_nonzero()
        P = self.prefix_len
        if n < 1:
            raise OutOfRange(f"edge index {n} < 1")
        if n < P:
            return self.presentation.prefix_edges[n - 1]
        t = self.presentation.tail
        if t is None:
            raise OutOfRange(f"edge {n} beyond finite presentation of depth {P}")
        if n == P:
            return t.glue
        return t.edges[self.phase(n)]

    def telescope(self, n: int, m: int) -> Mat:
        """Edge product from level n to level m; identity when n == m."""
        self._require_nonzero()
        if n > m:
            raise OutOfRange(f"telescope requires n <= m, got {n} > {m}")
        if n < 1:
            raise OutOfRange(f"telescope index {n} < 1")
        acc = Mat.identity(len(self.level(n)))
        for i in range(n, m):
            acc = self.edge(i) @ acc
        return acc

    def is_unital_diagram(self) -> bool:
        """True iff every edge maps its level exactly onto the next one.

        Deep-tail edges satisfy this by construction, so the check covers the
        prefix, the gluing edge, and the first tail cycle.
        """
        if self.is_zero:
            return True
        P = self.prefix_len
        top = P if not self.has_tail else P + self.period
        for n in range(1, top):
            if self.edge(n).vec(self.level(n)) != self.level(n + 1):
                return False
        return True

    def constant_levels(self) -> bool:
        """True when the tail repeats its level values exactly (no growth)."""
        if not self.has_tail:
            return False
        P, q = self.prefix_len, self.period
        return all(self.level(n + q) == self.level(n) for n in range(P + 1, P + q + 1))

    def cycle_scale(self) -> Optional[int]:
        """Integer lambda with (one full cycle of edges).D == lambda.D on deep levels.

        Returns None when the tail is not self-similar (levels do not scale by
        a single integer per cycle).
        """
        if not self.has_tail:
            return None
        start = self.deep_start + 1
        base = self.level(start)
        nxt = self.level(start + self.period)
        if nxt[0] % base[0]:
            return None
        lam = nxt[0] // base[0]
        if all(b * lam == x for b, x in zip(base, nxt)):
            return lam
        return None

    def __repr__(self):
        if self.is_zero:
            return "Diagram(zero)"
        tail = f", tail(q={self.period})" if self.has_tail else ""
        return f"Diagram(prefix={self.prefix_len}{tail})"


ZERO_DIAGRAM = Diagram(DiagramPresentation(zero=True))


def validate(p: DiagramPresentation) -> Diagram:
    """Check every presentation invariant and return the validated diagram."""
    if p.zero:
        if p.prefix_levels or p.prefix_edges or p.tail:
            raise InvalidPresentation("zero diagram carries no levels or edges")
        return Diagram(p)
    if not p.prefix_levels:
        raise InvalidPresentation("presentation needs at least one level")
    levels = tuple(check_level(v) for v in p.prefix_levels)
    if len(p.prefix_edges) != len(levels) - 1:
        raise DimensionMismatch(
            f"{len(levels)} levels need {len(levels) - 1} edges, got {len(p.prefix_edges)}"
        )
    for i, e in enumerate(p.prefix_edges):
        _check_edge(e, levels[i], len(levels[i + 1]), f"edge {i + 1}", cod=levels[i + 1])
    t = p.tail
    if t is not None:
        if not t.levels:
            raise InvalidPresentation("periodic tail needs at least one level")
        tlev = tuple(check_level(v) for v in t.levels)
        q = len(tlev)
        if len(t.edges) != q:
            raise DimensionMismatch(f"tail with period {q} needs {q} edges, got {len(t.edges)}")
        _check_edge(t.glue, levels[-1], len(tlev[0]), "gluing edge", cod=tlev[0])
        for j, e in enumerate(t.edges):
            nxt = tlev[(j + 1) % q]
            # The wrap edge (j == q-1) defines the next cycle's entry level, so
            # only its shape is constrained; interior edges respect the stored
            # first-cycle values.
            cod = nxt if j < q - 1 else None
            _check_edge(e, tlev[j], len(nxt), f"tail edge {j}", cod=cod)
        p = DiagramPresentation(levels, tuple(p.prefix_edges), PeriodicTail(tlev, tuple(t.edges), t.glue))
    else:
        p = DiagramPresentation(levels, tuple(p.prefix_edges), None)
    return Diagram(p)


def diagram_from_data(
    levels: Sequence[Sequence[int]],
    edges: Sequence[Sequence[Sequence[int]]],
    tail_levels: Sequence[Sequence[int]] = (),
    tail_edges: Sequence[Sequence[Sequence[int]]] = (),
    glue: Optional[Sequence[Sequence[int]]] = None,
) -> Diagram:
    """Convenience builder from plain nested lists."""
    tail = None
    if tail_levels:
        if glue is None:
            raise InvalidPresentation("tail requires a gluing edge")
        tail = PeriodicTail(
            tuple(tuple(v) for v in tail_levels),
            tuple(Mat.from_rows(e) for e in tail_edges),
            Mat.from_rows(glue),
        )
    return validate(
        DiagramPresentation(
            tuple(tuple(v) for v in levels),
            tuple(Mat.from_rows(e) for e in edges),
            tail,
        )
    )
