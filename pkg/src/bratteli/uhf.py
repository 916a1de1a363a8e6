"""Supernatural-number invariant for scalar-level (UHF-type) diagrams.

A diagram qualifies when every level is a single matrix-algebra size k_n and
every edge is the exact ratio k_{n+1}/k_n.  The invariant records, for each
prime, the supremum of its exponent over all k_n: primes dividing the tail's
cycle ratio get exponent infinity, every other prime stops growing once the
tail is entered, so its exponent reads off the last prefix level times the
gluing edge.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .diagram import Diagram
from .errors import NotUhfShape
from .verdicts import Verdict


def factorize(n: int) -> dict:
    """Prime factorization by trial division; desk-scale inputs."""
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@dataclass(frozen=True)
class SupernaturalNumber:
    finite_part: tuple = ()  # ((prime, exponent), ...) ascending, exponents >= 1
    infinite_primes: frozenset = field(default_factory=frozenset)
    truncated: bool = False  # finite presentation: exponents are lower bounds only

    def exponent(self, p: int):
        if p in self.infinite_primes:
            return None  # infinity
        return dict(self.finite_part).get(p, 0)

    def __str__(self) -> str:
        parts = {p: str(e) for p, e in self.finite_part}
        parts.update({p: "∞" for p in self.infinite_primes})
        if not parts:
            return "1"
        return " · ".join(f"{p}^{parts[p]}" for p in sorted(parts))


def _scalar_chain(d: Diagram):
    """(k_1..k_last, edge scalars, tail ratio) for a scalar unital diagram."""
    if d.is_zero:
        raise NotUhfShape("the zero diagram has no UHF invariant")
    P = d.prefix_len
    top = P + d.period if d.has_tail else P
    ks = []
    for n in range(1, top + 1):
        lvl = d.level(n)
        if len(lvl) != 1:
            raise NotUhfShape(f"level {n} has {len(lvl)} summands, expected 1")
        ks.append(lvl[0])
    for n in range(1, top):
        e = d.edge(n)
        if e.entries != ((ks[n] // ks[n - 1],),) or ks[n] % ks[n - 1]:
            raise NotUhfShape(
                f"edge {n} = {e} is not the exact ratio of {ks[n]} / {ks[n - 1]}"
            )
    ratio = 1
    if d.has_tail:
        for e in d.tail.edges:
            ratio *= e.entries[0][0]
        if ratio < 1:
            raise NotUhfShape("tail edges must be positive scalars")
    return ks, ratio


def uhf_invariant(d: Diagram) -> SupernaturalNumber:
    ks, ratio = _scalar_chain(d)
    if not d.has_tail:
        finite = factorize(ks[-1]) if ks[-1] > 1 else {}
        return SupernaturalNumber(tuple(sorted(finite.items())), frozenset(), truncated=True)
    infinite = frozenset(factorize(ratio)) if ratio > 1 else frozenset()
    # Exponents of all other primes stabilize at the tail entry value.
    entry = ks[-d.period] if d.period <= len(ks) else ks[-1]
    finite = {p: e for p, e in factorize(entry).items() if p not in infinite}
    return SupernaturalNumber(tuple(sorted(finite.items())), infinite)


def sn_equal(a: SupernaturalNumber, b: SupernaturalNumber) -> bool:
    return (a.finite_part == b.finite_part
            and a.infinite_primes == b.infinite_primes
            and a.truncated == b.truncated)


def _divides_eventually(k: int, other: Diagram, inv_other: SupernaturalNumber, bound: int):
    """Does k divide some level of `other`?  Exact on periodic tails."""
    top = bound if other.max_level is None else min(bound, other.max_level)
    for l in range(1, top + 1):
        if other.level(l)[0] % k == 0:
            return True, l
    if other.has_tail:
        # Divisibility stabilizes: k | m_l eventually iff every prime power of k
        # fits under the invariant of `other`.
        for p, e in factorize(k).items():
            cap = inv_other.exponent(p)
            if cap is not None and e > cap:
                return False, p
        return True, None
    return None, None


def check_interleaving(d1: Diagram, d2: Diagram, bound: int) -> Verdict:
    """Mutual divisibility: every k_n divides some m_l and vice versa."""
    ks1, _ = _scalar_chain(d1)
    ks2, _ = _scalar_chain(d2)
    inv1 = uhf_invariant(d1)
    inv2 = uhf_invariant(d2)
    for d_from, d_to, inv_to, ks in ((d1, d2, inv2, ks1), (d2, d1, inv1, ks2)):
        # Levels past the stored chain only add ratio powers, which the
        # invariant check below already covers; deep primes of the ratio must
        # be infinite on the other side.
        if d_from.has_tail:
            _, ratio = _scalar_chain(d_from)
            for p in factorize(ratio):
                if inv_to.exponent(p) is not None:
                    return Verdict.no(
                        obstruction=("prime", p),
                        detail=f"{p}-exponent is infinite on one side only",
                    )
        for n, k in enumerate(ks, start=1):
            ok, info = _divides_eventually(k, d_to, inv_to, bound)
            if ok is None:
                return Verdict.unknown(detail=f"level {n} undecided at bound {bound}")
            if not ok:
                return Verdict.no(
                    obstruction=("prime", info),
                    detail=f"k_{n} = {k} divides no level of the other diagram",
                )
    return Verdict.yes(detail="mutual divisibility holds")
