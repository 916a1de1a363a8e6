"""Premorphisms between diagrams and their equivalence relations.

A premorphism is presented as a finite window (F_1..F_L, f_1..f_L) with
commuting squares F_{n+1} E_n = S_{f_n f_{n+1}} F_n, optionally continued by
a periodic rule F_{n+p} = F_n, f_{n+p} = f_n + p'.  The rule is validated so
that it is self-propagating: once the window squares and the p boundary
squares hold, every deeper square and multiplicity condition follows.

Cofinality of (f_n) cannot be observed on a window; a rule with p' >= 1
asserts it, and rule-less premorphisms are flagged window-only.

The three equivalence notions are bounded semi-decision procedures sharing
one primitive: march the residual S_{a,m} X - S_{b,m} Y up the target and
either find the first vanishing m, prove a column never vanishes (its
gcd-normalized value repeats at equal tail phase), or give up at the bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

from .diagram import Diagram
from .errors import (
    ComposabilityMismatch,
    DimensionMismatch,
    EmptyWindow,
    MonotonicityFails,
    MultiplicityViolation,
    OutOfRange,
    OutOfWindow,
    SourceTargetMismatch,
    SquareFails,
)
from .intmat import Mat, multiplicity_violation_row
from .verdicts import NeverVanishes, Verdict


@dataclass(frozen=True)
class Premorphism:
    """A validated premorphism window; construct through validate_premorphism."""

    source: Diagram
    target: Diagram
    indices: tuple
    matrices: tuple
    rule: Optional[tuple] = None  # (p, p')
    is_zero: bool = False
    truncated: bool = False  # composition with a window-only factor shrank the depth

    @property
    def depth(self) -> int:
        return len(self.indices)

    @property
    def window_only(self) -> bool:
        return self.rule is None and not self.is_zero

    @property
    def rule_base(self) -> int:
        p, _ = self.rule
        return self.depth - p + 1

    def covers(self, n: int) -> bool:
        return n >= 1 and (n <= self.depth or self.rule is not None)

    def _resolve(self, n: int) -> tuple:
        if n < 1 or (n > self.depth and self.rule is None):
            raise OutOfWindow(f"level {n} outside window of depth {self.depth}")
        if n <= self.depth:
            return self.matrices[n - 1], self.indices[n - 1]
        p, pp = self.rule
        k = -((n - self.depth) // -p)  # ceil
        base = n - k * p
        return self.matrices[base - 1], self.indices[base - 1] + k * pp

    def matrix(self, n: int) -> Mat:
        return self._resolve(n)[0]

    def index(self, n: int) -> int:
        return self._resolve(n)[1]

    def __repr__(self):
        if self.is_zero:
            return "Premorphism(zero)"
        rule = f", rule={self.rule}" if self.rule else ", window-only"
        return f"Premorphism(depth={self.depth}{rule})"


def zero_premorphism(source: Diagram, target: Diagram) -> Premorphism:
    """The unique map through the zero diagram (hom-sets to/from 0 are singletons)."""
    return Premorphism(source, target, (), (), None, is_zero=True)


def _check_rule(pre: Premorphism) -> None:
    p, pp = pre.rule
    L = pre.depth
    src, tgt = pre.source, pre.target
    if not (1 <= p <= L) or pp < 1:
        raise OutOfRange(f"periodic rule ({p},{pp}) needs 1 <= p <= depth and p' >= 1")
    if not (src.has_tail and tgt.has_tail):
        raise OutOfRange("periodic rule requires periodic tails on both diagrams")
    if p % src.period:
        raise DimensionMismatch(f"rule offset {p} not a multiple of source period {src.period}")
    if pp % tgt.period:
        raise DimensionMismatch(f"rule target offset {pp} not a multiple of target period {tgt.period}")
    b = pre.rule_base
    if b < src.deep_start:
        raise OutOfRange(
            f"rule base {b} must lie past the source prefix and first cycle ({src.deep_start})"
        )
    if pre.indices[b - 1] < tgt.deep_start:
        raise OutOfRange(
            f"f at rule base ({pre.indices[b - 1]}) must lie past the target "
            f"prefix and first cycle ({tgt.deep_start})"
        )
    # Boundary squares: with these, the square at any n >= depth reduces to an
    # in-window square by shifting indices one rule period down.
    for n in range(L, L + p):
        _check_square(pre, n)


def _check_square(pre: Premorphism, n: int) -> None:
    fn, f_at = pre.matrix(n), pre.index(n)
    fn1, f_at1 = pre.matrix(n + 1), pre.index(n + 1)
    lhs = fn1 @ pre.source.edge(n)
    rhs = pre.target.telescope(f_at, f_at1) @ fn
    if lhs != rhs:
        raise SquareFails(
            f"square at level {n}: F_{n + 1}.E_{n} = {lhs} but S.F_{n} = {rhs}",
            n=n, lhs=lhs, rhs=rhs,
        )


def validate_premorphism(
    source: Diagram,
    target: Diagram,
    indices: Sequence[int],
    matrices: Sequence[Mat],
    rule: Optional[Tuple[int, int]] = None,
) -> Premorphism:
    if source.is_zero or target.is_zero:
        return zero_premorphism(source, target)
    if len(indices) != len(matrices) or not indices:
        raise DimensionMismatch("window needs equal, nonzero counts of indices and matrices")
    idx = tuple(int(i) for i in indices)
    mats = tuple(matrices)
    pre = Premorphism(source, target, idx, mats, tuple(rule) if rule else None)
    for n in range(1, pre.depth + 1):
        f_at = idx[n - 1]
        if f_at < 1:
            raise OutOfRange(f"target index f_{n} = {f_at} < 1")
        if n > 1 and f_at < idx[n - 2]:
            raise MonotonicityFails(f"f_{n} = {f_at} < f_{n - 1} = {idx[n - 2]}", n=n)
        F = mats[n - 1]
        dom = source.level(n)
        cod = target.level(f_at)
        if F.cols != len(dom) or F.rows != len(cod):
            raise DimensionMismatch(
                f"F_{n} is {F.rows}x{F.cols}, expected {len(cod)}x{len(dom)}"
            )
        if not F.is_nonnegative():
            raise MultiplicityViolation(f"F_{n} has a negative entry", row=-1)
        bad = multiplicity_violation_row(F, dom, cod)
        if bad is not None:
            raise MultiplicityViolation(
                f"F_{n} row {bad}: F.V = {F.vec(dom)} exceeds W = {cod}", row=bad
            )
    for n in range(1, pre.depth):
        _check_square(pre, n)
    if pre.rule is not None:
        _check_rule(pre)
    return pre


def identity_premorphism(d: Diagram, depth: int) -> Premorphism:
    """F_n = I, f_n = n; carries the periodic rule when the window reaches the tail."""
    if d.is_zero:
        return zero_premorphism(d, d)
    if depth < 1:
        raise OutOfRange("identity window needs depth >= 1")
    if d.max_level is not None and depth > d.max_level:
        raise OutOfRange(f"depth {depth} beyond finite presentation of {d.max_level} levels")
    idx = tuple(range(1, depth + 1))
    mats = tuple(Mat.identity(len(d.level(n))) for n in idx)
    rule = None
    if d.has_tail and depth - d.period + 1 >= d.deep_start:
        rule = (d.period, d.period)
    return validate_premorphism(d, d, idx, mats, rule)


def compose(g: Premorphism, f: Premorphism) -> Premorphism:
    """gf with H_n = G_{f_n} F_n and h_n = g_{f_n}.

    When g is window-only the result depth shrinks to the covered range and is
    flagged truncated.
    """
    if f.target != g.source:
        raise ComposabilityMismatch("target of f differs from source of g")
    if f.is_zero or g.is_zero:
        return zero_premorphism(f.source, g.target)
    depth = 0
    for n in range(1, f.depth + 1):
        if not g.covers(f.index(n)):
            break
        depth = n
    if depth == 0:
        raise EmptyWindow("composition covers no level of the source window")
    idx = tuple(g.index(f.index(n)) for n in range(1, depth + 1))
    mats = tuple(g.matrix(f.index(n)) @ f.matrix(n) for n in range(1, depth + 1))
    rule = None
    if f.rule and g.rule and depth == f.depth:
        pf, ppf = f.rule
        pg, ppg = g.rule
        m = pg // math.gcd(ppf, pg)
        rule = (pf * m, (m * ppf // pg) * ppg)
    try:
        out = validate_premorphism(f.source, g.target, idx, mats, rule)
    except Exception:
        if rule is None:
            raise
        out = validate_premorphism(f.source, g.target, idx, mats, None)
    if depth < f.depth:
        out = Premorphism(out.source, out.target, out.indices, out.matrices,
                          out.rule, truncated=True)
    return out


# ---------------------------------------------------------------------------
# Equivalence machinery


@dataclass(frozen=True)
class EquivalenceWitness:
    """Recorded identities behind an Equivalent verdict; re-verifiable exactly.

    def29: items = ((n, m), ...)            with S_{f_n m} F_n = S_{g_n m} G_n
    def25: items = (n_seq, m_seq)           interleaving identities of both legs
    def210: items = ((n, k, m), ...)        with S_{f_n m} F_n = S_{g_k m} G_k E_{nk}
    """

    variant: str
    items: tuple
    scope: str = "window"  # "window" or "all-levels"


def _normalize_column(col: tuple) -> tuple:
    g = 0
    for x in col:
        g = math.gcd(g, abs(x))
    if g <= 1:
        return col
    return tuple(x // g for x in col)


def _agreement_search(target: Diagram, X: Mat, a: int, Y: Mat, b: int, bound: int):
    """Smallest m <= bound with S_{a,m} X == S_{b,m} Y, or a never-proof.

    Returns ("found", m) | ("never", NeverVanishes) | ("unknown", detail).
    X and Y share a domain; X maps into target level a, Y into level b.
    """
    if X.cols != Y.cols:
        raise DimensionMismatch("residual factors must share a domain")
    m0 = max(a, b)
    top = bound
    if target.max_level is not None:
        top = min(top, target.max_level)
    if m0 > top:
        return "unknown", f"start level {m0} beyond reachable bound {top}"
    U = target.telescope(a, m0) @ X
    V = target.telescope(b, m0) @ Y
    ncols = X.cols
    cols = {j: tuple(U.entries[i][j] - V.entries[i][j] for i in range(U.rows))
            for j in range(ncols)}
    first_zero = {}
    seen = {j: {} for j in range(ncols)}
    periodic_from = target.prefix_len + 1 if target.has_tail else None
    m = m0
    while True:
        for j in list(cols):
            col = cols[j]
            if not any(col):
                first_zero[j] = m
                del cols[j]
                continue
            if periodic_from is not None and m >= periodic_from:
                key = (target.phase(m), _normalize_column(col))
                if key in seen[j]:
                    return "never", NeverVanishes(
                        level=-1, column=j, m_start=seen[j][key], m_end=m,
                        residual=key[1],
                    )
                seen[j][key] = m
        if not cols:
            return "found", max(first_zero.values())
        if m >= top:
            return "unknown", f"bound {top} reached with residual columns {sorted(cols)}"
        e = target.edge(m)
        cols = {j: _normalize_column(e.vec(col)) for j, col in cols.items()}
        m += 1


def _common_levels(f: Premorphism, g: Premorphism):
    """Levels to check and the verdict scope for a pair of premorphisms."""
    if f.rule and g.rule:
        pf, ppf = f.rule
        pg, ppg = g.rule
        p = pf * pg // math.gcd(pf, pg)
        df, dg = ppf * (p // pf), ppg * (p // pg)
        base = max(f.rule_base, g.rule_base)
        levels = range(base, base + p)
        # With equal advance rates, identities at one full period past the base
        # shift to every deeper level, and any identity pushes down to shallower
        # ones; the verdict then covers all levels.
        scope = "all-levels" if df == dg else "window"
        return levels, scope
    depth = min(d.depth for d in (f, g) if d.rule is None)
    return range(1, depth + 1), "window"


def _require_parallel(f: Premorphism, g: Premorphism):
    if f.source != g.source or f.target != g.target:
        raise SourceTargetMismatch("premorphisms must share source and target")


def equivalent_def29(f: Premorphism, g: Premorphism, bound: int) -> Verdict:
    """Per-level agreement: for each n, some m <= bound with S_{f_n m}F_n = S_{g_n m}G_n."""
    _require_parallel(f, g)
    if f.is_zero and g.is_zero:
        return Verdict.yes(EquivalenceWitness("def29", (), scope="all-levels"),
                           detail="zero hom-set is a singleton")
    levels, scope = _common_levels(f, g)
    items = []
    unknown = None
    for n in levels:
        res, data = _agreement_search(
            f.target, f.matrix(n), f.index(n), g.matrix(n), g.index(n), bound
        )
        if res == "never":
            proof = NeverVanishes(n, data.column, data.m_start, data.m_end, data.residual)
            return Verdict.no(obstruction=proof,
                              detail=f"residual at level {n} never vanishes")
        if res == "unknown" and unknown is None:
            unknown = f"level {n}: {data}"
        if res == "found":
            items.append((n, data))
    if unknown:
        return Verdict.unknown(detail=unknown)
    return Verdict.yes(EquivalenceWitness("def29", tuple(items), scope=scope))


def equivalent_def210(f: Premorphism, g: Premorphism, bound: int) -> Verdict:
    """Pairwise condition: for n <= k, some m with S_{f_n m}F_n = S_{g_k m}G_k E_{nk}."""
    _require_parallel(f, g)
    if f.is_zero and g.is_zero:
        return Verdict.yes(EquivalenceWitness("def210", (), scope="all-levels"))
    levels, scope = _common_levels(f, g)
    items = []
    unknown = None
    for n in levels:
        for k in levels:
            if k < n:
                continue
            Y = g.matrix(k) @ f.source.telescope(n, k)
            res, data = _agreement_search(
                f.target, f.matrix(n), f.index(n), Y, g.index(k), bound
            )
            if res == "never":
                proof = NeverVanishes(n, data.column, data.m_start, data.m_end, data.residual)
                return Verdict.no(obstruction=proof,
                                  detail=f"residual at pair ({n},{k}) never vanishes")
            if res == "unknown" and unknown is None:
                unknown = f"pair ({n},{k}): {data}"
            if res == "found":
                items.append((n, k, data))
    if unknown:
        return Verdict.unknown(detail=unknown)
    return Verdict.yes(EquivalenceWitness("def210", tuple(items), scope=scope))


def equivalent_def25(f: Premorphism, g: Premorphism, bound: int) -> Verdict:
    """Greedy interleaving construction n_1 < m_1 < n_2 < ... within the bound."""
    _require_parallel(f, g)
    if f.is_zero and g.is_zero:
        return Verdict.yes(EquivalenceWitness("def25", ((), ()), scope="all-levels"))
    levels, scope = _common_levels(f, g)
    n_max = levels[-1]
    ns, ms = [], []
    n = 1
    while n <= n_max:
        res, data = _agreement_search(
            f.target, f.matrix(n), f.index(n), g.matrix(n), g.index(n), bound
        )
        if res == "never":
            return Verdict.no(
                obstruction=NeverVanishes(n, data.column, data.m_start, data.m_end, data.residual),
                detail=f"residual at level {n} never vanishes",
            )
        if res == "unknown":
            if ns and ms:
                break
            return Verdict.unknown(detail=f"level {n}: {data}")
        m_level = _first_level_above(g, n, data, n_max)
        if m_level is None:
            break
        # leg back: agreement at m_level with the roles swapped
        res2, data2 = _agreement_search(
            f.target, g.matrix(m_level), g.index(m_level),
            f.matrix(m_level), f.index(m_level), bound,
        )
        if res2 == "never":
            return Verdict.no(
                obstruction=NeverVanishes(m_level, data2.column, data2.m_start,
                                          data2.m_end, data2.residual),
                detail=f"residual at level {m_level} never vanishes",
            )
        if res2 == "unknown":
            if ns and ms:
                break
            return Verdict.unknown(detail=f"level {m_level}: {data2}")
        n_next = _first_level_above(f, m_level, data2, n_max)
        ns.append(n)
        ms.append(m_level)
        if n_next is None:
            break
        n = n_next
    if not ns:
        return Verdict.unknown(detail="window too short for an interleaving step")
    return Verdict.yes(EquivalenceWitness("def25", (tuple(ns), tuple(ms)), scope=scope))


def _first_level_above(pre: Premorphism, level: int, target_floor: int, n_max: int):
    """Smallest covered level > `level` whose target index exceeds target_floor."""
    n = level + 1
    while n <= n_max and pre.covers(n):
        if pre.index(n) > target_floor:
            return n
        n += 1
    return None


def verify_witness(w: EquivalenceWitness, f: Premorphism, g: Premorphism) -> bool:
    """Re-check every recorded identity by direct matrix arithmetic."""
    tgt = f.target
    src = f.source
    if w.variant == "def29":
        return all(
            tgt.telescope(f.index(n), m) @ f.matrix(n)
            == tgt.telescope(g.index(n), m) @ g.matrix(n)
            for n, m in w.items
        )
    if w.variant == "def210":
        return all(
            tgt.telescope(f.index(n), m) @ f.matrix(n)
            == tgt.telescope(g.index(k), m) @ (g.matrix(k) @ src.telescope(n, k))
            for n, k, m in w.items
        )
    if w.variant == "def25":
        ns, ms = w.items
        for i, (n, m) in enumerate(zip(ns, ms)):
            if not (n < m and f.index(n) < g.index(m)):
                return False
            lhs = g.matrix(m) @ src.telescope(n, m)
            rhs = tgt.telescope(f.index(n), g.index(m)) @ f.matrix(n)
            if lhs != rhs:
                return False
            if i + 1 < len(ns):
                n2 = ns[i + 1]
                if not (m < n2 and g.index(m) < f.index(n2)):
                    return False
                lhs = f.matrix(n2) @ src.telescope(m, n2)
                rhs = tgt.telescope(g.index(m), f.index(n2)) @ g.matrix(m)
                if lhs != rhs:
                    return False
        return True
    return False
