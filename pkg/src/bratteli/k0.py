"""Formal K0 classes over a diagram.

The inductive-limit group is never materialized: an element is a pair
(level, integer vector) and two pairs are identified when their pushes along
the telescopes eventually agree.  Positivity and membership in the scale
(componentwise 0 <= y <= V_m at some level) are bounded semi-decisions with
the same periodic residual-orbit machinery as premorphism equivalence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .diagram import Diagram
from .errors import DimensionMismatch, OutOfRange, OutOfWindow, SourceTargetMismatch
from .morphism import Premorphism
from .verdicts import Verdict


@dataclass(frozen=True)
class K0Class:
    diagram: Diagram
    level: int
    vector: tuple

    def __post_init__(self):
        if self.level < 1:
            raise OutOfRange(f"level {self.level} < 1")
        expected = len(self.diagram.level(self.level))
        if len(self.vector) != expected:
            raise DimensionMismatch(
                f"vector length {len(self.vector)} != {expected} summands at level {self.level}"
            )

    def __str__(self) -> str:
        return f"K0@{self.level} [{','.join(map(str, self.vector))}]"


def push(c: K0Class, m: int) -> K0Class:
    """Image of the class at a deeper level."""
    if m < c.level:
        raise OutOfRange(f"cannot push from level {c.level} down to {m}")
    vec = c.diagram.telescope(c.level, m).vec(c.vector)
    return K0Class(c.diagram, m, vec)


def _normalize(vec: tuple) -> tuple:
    g = 0
    for x in vec:
        g = math.gcd(g, abs(x))
    return vec if g <= 1 else tuple(x // g for x in vec)


def _orbit_walk(d: Diagram, level: int, vec: tuple, bound: int, accept):
    """March vec up the diagram; accept(m, v) may end the walk.

    Returns ("found", m) on acceptance, ("never", (m1, m2)) when the
    gcd-normalized state repeats at equal tail phase without acceptance,
    ("unknown", detail) at the bound.
    """
    top = bound if d.max_level is None else min(bound, d.max_level)
    periodic_from = d.prefix_len + 1 if d.has_tail else None
    seen = {}
    m, v = level, tuple(vec)
    while m <= top:
        if accept(m, v):
            return "found", m
        if periodic_from is not None and m >= periodic_from:
            key = (d.phase(m), _normalize(v))
            if key in seen:
                return "never", (seen[key], m)
            seen[key] = m
        if m == top:
            break
        v = d.edge(m).vec(v)
        m += 1
    return "unknown", f"bound {top} reached"


def class_equal(c1: K0Class, c2: K0Class, bound: int) -> Verdict:
    """Do the two classes agree at some common level <= bound?"""
    if c1.diagram != c2.diagram:
        raise SourceTargetMismatch("classes live over different diagrams")
    start = max(c1.level, c2.level)
    a = push(c1, start).vector
    b = push(c2, start).vector
    diff = tuple(x - y for x, y in zip(a, b))
    res, data = _orbit_walk(c1.diagram, start, diff, bound,
                            lambda m, v: not any(v))
    if res == "found":
        return Verdict.yes(witness=data, detail=f"pushes agree at level {data}")
    if res == "never":
        return Verdict.no(obstruction=data,
                          detail=f"difference orbit repeats without vanishing ({data[0]}..{data[1]})")
    return Verdict.unknown(detail=data)


def class_positive(c: K0Class, bound: int) -> Verdict:
    """Is some push of the class componentwise nonnegative?"""
    res, data = _orbit_walk(c.diagram, c.level, c.vector, bound,
                            lambda m, v: all(x >= 0 for x in v))
    if res == "found":
        return Verdict.yes(witness=data, detail=f"nonnegative at level {data}")
    if res == "never":
        return Verdict.no(obstruction=data, detail="sign pattern cycles without turning nonnegative")
    return Verdict.unknown(detail=data)


def class_in_scale(c: K0Class, bound: int) -> Verdict:
    """Is some push y within the scale, 0 <= y <= V_m componentwise?

    Tracks the pair (y, y - V_m); past the first tail cycle the pair evolves
    linearly, so the cycle argument applies to the joint vector.
    """
    d = c.diagram
    top = bound if d.max_level is None else min(bound, d.max_level)
    deep_from = d.deep_start + 1 if d.has_tail else None
    seen = {}
    m = c.level
    y = tuple(c.vector)
    while m <= top:
        lvl = d.level(m)
        z = tuple(a - b for a, b in zip(y, lvl))
        if all(x >= 0 for x in y) and all(x <= 0 for x in z):
            return Verdict.yes(witness=m, detail=f"within scale at level {m}")
        if deep_from is not None and m >= deep_from:
            key = (d.phase(m), _normalize(y + z))
            if key in seen:
                return Verdict.no(
                    obstruction=(seen[key], m),
                    detail=f"scale-violation pattern repeats ({seen[key]}..{m})",
                )
            seen[key] = m
        if m == top:
            break
        y = d.edge(m).vec(y)
        m += 1
    return Verdict.unknown(detail=f"bound {top} reached")


def induced_map(f: Premorphism, c: K0Class) -> K0Class:
    """K0 action of a premorphism: (n, x) -> (f_n, F_n x)."""
    if f.is_zero:
        raise OutOfWindow("the zero premorphism induces no class map")
    if c.diagram != f.source:
        raise SourceTargetMismatch("class does not live over the premorphism source")
    if not f.covers(c.level):
        raise OutOfWindow(f"level {c.level} outside premorphism window")
    return K0Class(f.target, f.index(c.level), f.matrix(c.level).vec(c.vector))
