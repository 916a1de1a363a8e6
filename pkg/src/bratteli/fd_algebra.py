"""Concrete block-diagonal realizations of multiplicity matrices.

An algebra is a direct sum of full matrix blocks, a tuple of square rational
matrices.  The canonical embedding of a multiplicity matrix places, in each
target block, the source blocks in index order with their multiplicities and
pads with zeros.  Such maps, their composites, and their conjugates by block
permutations are all "slot maps": every diagonal position of a target block
is either assigned to one copy of one source block or to zero padding.  That
layout drives both exact evaluation and the constructive search for
permutation intertwiners; multiplicity recovery goes the other way, by rank
computations on actual images, so it stays an independent oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import DimensionMismatch, MultiplicityViolation
from .intmat import Mat


@dataclass(frozen=True)
class FdAlgebra:
    """M_{n_1} + ... + M_{n_k} as the size vector (n_1, ..., n_k)."""

    sizes: tuple

    def __post_init__(self):
        if not self.sizes or any(s < 1 for s in self.sizes):
            raise DimensionMismatch("algebra needs positive block sizes")

    @property
    def blocks(self) -> int:
        return len(self.sizes)


def identity_tuple(alg: FdAlgebra) -> tuple:
    return tuple(
        tuple(tuple(1 if r == s else 0 for s in range(n)) for r in range(n))
        for n in alg.sizes
    )


def zero_tuple(alg: FdAlgebra) -> tuple:
    return tuple(
        tuple(tuple(0 for _ in range(n)) for _ in range(n)) for n in alg.sizes
    )


def matrix_unit(alg: FdAlgebra, block: int, r: int, s: int) -> tuple:
    """e^{block}_{rs}: single 1 entry in one block."""
    out = []
    for j, n in enumerate(alg.sizes):
        out.append(tuple(
            tuple(1 if (j == block and a == r and b == s) else 0 for b in range(n))
            for a in range(n)
        ))
    return tuple(out)


def tuple_mul(alg: FdAlgebra, x: tuple, y: tuple) -> tuple:
    out = []
    for n, xb, yb in zip(alg.sizes, x, y):
        cols = tuple(zip(*yb))
        out.append(tuple(
            tuple(sum(a * b for a, b in zip(row, col)) for col in cols) for row in xb
        ))
    return tuple(out)


def tuple_add(x: tuple, y: tuple) -> tuple:
    return tuple(
        tuple(tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(xb, yb))
        for xb, yb in zip(x, y)
    )


def tuple_transpose(x: tuple) -> tuple:
    return tuple(tuple(zip(*xb)) for xb in x)


# ---------------------------------------------------------------------------
# Slot maps

Slot = Optional[tuple]  # (source_block, copy_ordinal, row) or None for padding


@dataclass(frozen=True)
class BlockMap:
    source: FdAlgebra
    target: FdAlgebra
    layout: tuple  # per target block: tuple of Slot, length = block size


def _relabel(raw_layout) -> tuple:
    """Renumber copy ids canonically: per (target block, source block), by first use."""
    out = []
    for slots in raw_layout:
        ids = {}
        new = []
        for slot in slots:
            if slot is None:
                new.append(None)
                continue
            j, copy_key, r = slot
            ordinal = ids.setdefault((j, copy_key), len([k for k in ids if k[0] == j]))
            new.append((j, ordinal, r))
        out.append(tuple(new))
    return tuple(out)


def h_of(e: Mat, source_sizes: Sequence[int], target_sizes: Sequence[int]) -> BlockMap:
    """Canonical embedding: source blocks in index order, zero padding last."""
    src = FdAlgebra(tuple(source_sizes))
    tgt = FdAlgebra(tuple(target_sizes))
    if e.rows != tgt.blocks or e.cols != src.blocks:
        raise DimensionMismatch(
            f"matrix is {e.rows}x{e.cols}, expected {tgt.blocks}x{src.blocks}"
        )
    layout = []
    for i, m_i in enumerate(tgt.sizes):
        slots = []
        for j, n_j in enumerate(src.sizes):
            for c in range(e.entries[i][j]):
                slots.extend((j, c, r) for r in range(n_j))
        slack = m_i - len(slots)
        if slack < 0:
            raise MultiplicityViolation(
                f"target block {i} of size {m_i} cannot hold {len(slots)} rows", row=i
            )
        slots.extend([None] * slack)
        layout.append(tuple(slots))
    return BlockMap(src, tgt, tuple(layout))


def identity_map(alg: FdAlgebra) -> BlockMap:
    return h_of(Mat.identity(alg.blocks), alg.sizes, alg.sizes)


def compose_maps(outer: BlockMap, inner: BlockMap) -> BlockMap:
    """outer . inner by slot substitution."""
    if inner.target != outer.source:
        raise DimensionMismatch("maps do not chain")
    raw = []
    for slots in outer.layout:
        new = []
        for slot in slots:
            if slot is None:
                new.append(None)
                continue
            j2, c2, r2 = slot
            inner_slot = inner.layout[j2][r2]
            if inner_slot is None:
                new.append(None)
            else:
                j1, c1, r1 = inner_slot
                new.append((j1, (c2, c1), r1))
        raw.append(tuple(new))
    return BlockMap(inner.source, outer.target, _relabel(raw))


def conjugate_by_permutation(bm: BlockMap, perms: Sequence[Sequence[int]]) -> BlockMap:
    """Ad(u) for a blockwise permutation u; perms[i][s] is the old slot at new slot s."""
    if len(perms) != bm.target.blocks:
        raise DimensionMismatch("one permutation per target block required")
    raw = []
    for slots, perm in zip(bm.layout, perms):
        if sorted(perm) != list(range(len(slots))):
            raise DimensionMismatch(f"not a permutation of {len(slots)} slots: {perm}")
        raw.append(tuple(slots[p] for p in perm))
    return BlockMap(bm.source, bm.target, _relabel(raw))


def apply(bm: BlockMap, x: tuple) -> tuple:
    """Exact image of a matrix tuple under the slot map."""
    if len(x) != bm.source.blocks:
        raise DimensionMismatch("tuple does not match the source algebra")
    for n, xb in zip(bm.source.sizes, x):
        if len(xb) != n or any(len(row) != n for row in xb):
            raise DimensionMismatch("tuple block sizes do not match the source algebra")
    out = []
    for slots in bm.layout:
        m = len(slots)
        block = [[0] * m for _ in range(m)]
        for s, a in enumerate(slots):
            if a is None:
                continue
            for t, b in enumerate(slots):
                if b is None or a[0] != b[0] or a[1] != b[1]:
                    continue
                block[s][t] = x[a[0]][a[2]][b[2]]
        out.append(tuple(tuple(row) for row in block))
    return tuple(out)


def slack(e: Mat, domain: Sequence[int], codomain: Sequence[int]) -> tuple:
    """Zero-padding sizes s_i = m_i - sum_j a_ij n_j."""
    img = e.vec(tuple(domain))
    out = []
    for i, (got, cap) in enumerate(zip(img, codomain)):
        if got > cap:
            raise MultiplicityViolation(f"row {i}: {got} > {cap}", row=i)
        out.append(cap - got)
    return tuple(out)


def is_injective_matrix(e: Mat) -> bool:
    return e.is_embedding()


def is_unital_matrix(e: Mat, domain: Sequence[int], codomain: Sequence[int]) -> bool:
    return e.vec(tuple(domain)) == tuple(codomain)


# ---------------------------------------------------------------------------
# Rank-based recovery (the oracle direction)


def _rank(rows) -> int:
    """Exact rank by fraction-free (Bareiss) elimination on integer-scaled rows."""
    m = []
    for row in rows:
        scale = 1
        for x in row:
            if isinstance(x, Fraction):
                scale = scale * x.denominator // _gcd(scale, x.denominator)
        m.append([int(x * scale) if isinstance(x, Fraction) else int(x) * scale for x in row])
    if not m:
        return 0
    rank = 0
    prev = 1
    rows_n, cols_n = len(m), len(m[0])
    for col in range(cols_n):
        pivot = next((r for r in range(rank, rows_n) if m[r][col]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        for r in range(rank + 1, rows_n):
            for c in range(col + 1, cols_n):
                m[r][c] = (m[rank][col] * m[r][c] - m[r][col] * m[rank][c]) // prev
            m[r][col] = 0
        prev = m[rank][col]
        rank += 1
        if rank == rows_n:
            break
    return rank


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a or 1


def recover_multiplicity(bm: BlockMap) -> Mat:
    """a_ij = rank of the target-block-i image of the rank-one unit e^j_11."""
    rows = []
    for i in range(bm.target.blocks):
        rows.append(tuple(
            _rank(apply(bm, matrix_unit(bm.source, j, 0, 0))[i])
            for j in range(bm.source.blocks)
        ))
    return Mat(tuple(rows))


# ---------------------------------------------------------------------------
# Permutation intertwiners


def _copies(slots) -> dict:
    """(source block, copy) -> positions sorted by the row they carry."""
    groups = {}
    for pos, slot in enumerate(slots):
        if slot is None:
            groups.setdefault(None, []).append(pos)
        else:
            j, c, r = slot
            groups.setdefault((j, c), []).append((r, pos))
    return groups


def find_permutation_intertwiner(phi: BlockMap, psi: BlockMap):
    """Blockwise permutation u with u psi(x) u^T = phi(x), or None.

    Exists whenever the recovered multiplicities agree; built by matching the
    two slot layouts copy by copy and verified on every matrix unit.
    """
    if phi.source != psi.source or phi.target != psi.target:
        raise DimensionMismatch("maps must share source and target algebras")
    if recover_multiplicity(phi) != recover_multiplicity(psi):
        return None
    perms = []
    for slots_phi, slots_psi in zip(phi.layout, psi.layout):
        g_phi = _copies(slots_phi)
        g_psi = _copies(slots_psi)
        perm = [None] * len(slots_phi)
        # copies of each source block matched by ordinal
        keys_phi = sorted(k for k in g_phi if k is not None)
        keys_psi = sorted(k for k in g_psi if k is not None)
        if len(keys_phi) != len(keys_psi):
            return None
        for kf, kp in zip(keys_phi, keys_psi):
            if kf[0] != kp[0]:
                return None
            for (r1, p1), (r2, p2) in zip(sorted(g_phi[kf]), sorted(g_psi[kp])):
                if r1 != r2:
                    return None
                perm[p1] = p2
        for p1, p2 in zip(g_phi.get(None, ()), g_psi.get(None, ())):
            perm[p1] = p2
        if any(p is None for p in perm):
            return None
        perms.append(tuple(perm))
    perms = tuple(perms)
    if not _verify_intertwiner(phi, psi, perms):
        return None
    return perms


def _verify_intertwiner(phi: BlockMap, psi: BlockMap, perms) -> bool:
    conj = conjugate_by_permutation(psi, perms)
    for j in range(phi.source.blocks):
        n = phi.source.sizes[j]
        for r in range(n):
            for s in range(n):
                unit = matrix_unit(phi.source, j, r, s)
                if apply(conj, unit) != apply(phi, unit):
                    return False
    return True


def permutation_matrices(perms, alg: FdAlgebra) -> tuple:
    """Realize a permutation tuple as 0/1 matrices (P[s][perm[s]] = 1)."""
    out = []
    for perm, n in zip(perms, alg.sizes):
        out.append(tuple(
            tuple(1 if c == perm[r] else 0 for c in range(n)) for r in range(n)
        ))
    return tuple(out)
