"""Cyclic-partition construction of (3,k)-Turán hypergraphs.

Vertices are split into ``k - 1`` contiguous blocks.  The complement family
holds every triple lying inside one block, plus every triple with exactly two
vertices in block ``i`` and the third in block ``(i + 1) mod (k - 1)``.  The
Turán hypergraph is everything else.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from .errors import DivisibilityError, InputError
from .hypergraph import TripleFamily, all_triples, complement

STRICT = "strict"
BALANCED = "balanced"


@dataclass(frozen=True, eq=False)
class TuranInstance:
    n: int
    k: int
    mode: str
    part_sizes: tuple[int, ...]
    part_of: np.ndarray
    T: TripleFamily
    T_bar: TripleFamily

    @property
    def parts(self) -> int:
        return self.k - 1

    @property
    def m(self) -> int | None:
        """Common part size, or None when parts are unequal."""
        sizes = set(self.part_sizes)
        return self.part_sizes[0] if len(sizes) == 1 else None

    @property
    def experimental(self) -> bool:
        return self.mode != STRICT

    def block(self, i: int) -> list[int]:
        return [int(v) for v in np.flatnonzero(self.part_of == i)]


def _part_sizes(n: int, k: int, mode: str) -> tuple[int, ...]:
    if k < 4:
        raise InputError(f"k must be at least 4, got {k}")
    if n < k:
        raise InputError(f"need n >= k, got n={n}, k={k}")
    q = k - 1
    if mode == STRICT:
        if n % q:
            raise DivisibilityError(f"strict mode needs (k-1) | n, but {q} does not divide {n}")
        return (n // q,) * q
    if mode == BALANCED:
        base, extra = divmod(n, q)
        return tuple(base + 1 if i < extra else base for i in range(q))
    raise InputError(f"unknown mode {mode!r}")


def complement_membership(part_of: np.ndarray, parts: int) -> np.ndarray:
    """Rank-indexed membership of the complement family for a vertex partition."""
    n = len(part_of)
    tri = all_triples(n)
    p = part_of[tri]
    pa, pb, pc = p[:, 0], p[:, 1], p[:, 2]
    same = (pa == pb) & (pb == pc)

    def two_then_next(x, y, z):
        # x, y share a block; z sits in the cyclic successor
        return (x == y) & (z == (x + 1) % parts)

    cross = two_then_next(pa, pb, pc) | two_then_next(pa, pc, pb) | two_then_next(pb, pc, pa)
    return same | cross


def build_turan(n: int, k: int, mode: str = STRICT) -> TuranInstance:
    """Build the construction on ``n`` vertices for the (3,k) problem.

    ``mode="balanced"`` accepts any ``n >= k`` by using block sizes
    ``ceil(n/(k-1))`` then ``floor(n/(k-1))``; it is an extension and is
    flagged experimental.
    """
    n, k = int(n), int(k)
    sizes = _part_sizes(n, k, mode)
    part_of = np.repeat(np.arange(k - 1), sizes)
    part_of.setflags(write=False)
    t_bar = TripleFamily(n, complement_membership(part_of, k - 1))
    return TuranInstance(n, k, mode, sizes, part_of, complement(t_bar), t_bar)


def complement_count_closed(n: int, k: int) -> int:
    """``(k-1) * (C(m,3) + m*C(m,2))`` with ``m = n/(k-1)``."""
    q = k - 1
    if k < 4:
        raise InputError(f"k must be at least 4, got {k}")
    if n % q:
        raise DivisibilityError(f"{q} does not divide {n}")
    m = n // q
    return q * (comb(m, 3) + m * comb(m, 2))


def density_limit(k: int) -> Fraction:
    """Limiting edge density ``1 - (2/(k-1))**2`` of the construction."""
    if k < 4:
        raise InputError(f"k must be at least 4, got {k}")
    return 1 - Fraction(4, (k - 1) ** 2)


@dataclass(frozen=True)
class DensityRow:
    n: int
    edges_T: int
    total: int
    density: Fraction
    limit: Fraction

    @property
    def gap(self) -> Fraction:
        return self.limit - self.density

    @property
    def edges_T_bar(self) -> int:
        return self.total - self.edges_T


def density_table(k: int, n_list, mode: str = STRICT) -> list[DensityRow]:
    limit = density_limit(k)
    rows = []
    for n in n_list:
        inst = build_turan(n, k, mode)
        total = comb(n, 3)
        rows.append(DensityRow(n, inst.T.edge_count, total, Fraction(inst.T.edge_count, total), limit))
    return rows
