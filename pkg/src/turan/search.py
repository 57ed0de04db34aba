"""Exact maximum (3,k)-Turán families on small vertex sets.

Depth-first include/exclude search over triples with bitmask bookkeeping:
``included`` and ``excluded`` are Python ints over triple ranks and every
k-subset is a mask of its ``C(k,3)`` triples.  A node is pruned when

* including a triple would make some k-subset complete, or
* ``included + undecided - forced <= best``, where ``forced`` is a greedy
  packing of still-uncovered k-subsets with pairwise disjoint undecided
  triples (each needs at least one more exclusion).

Triples are branched in rank order, include first.  Every triple lies in
the same number of k-subsets, so ordering by that degree is no ordering at
all.
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from math import comb

import numpy as np

from .construction import BALANCED, STRICT, build_turan
from .errors import InputError
from .hypergraph import TripleFamily, complement, rank_triple
from .verifier import is_turan_property

DEFAULT_BUDGET = 10**9
EXHAUSTIVE_MAX_TRIPLES = 24


@dataclass
class SearchResult:
    n: int
    k: int
    max_edges: int
    witness: TripleFamily
    nodes_explored: int
    complete: bool
    elapsed: float = field(default=0.0, compare=False)

    @property
    def lower_bound_only(self) -> bool:
        return not self.complete

    @property
    def min_cover(self) -> int:
        return comb(self.n, 3) - self.max_edges


def _kset_masks(n: int, k: int) -> list[int]:
    masks = []
    for s in itertools.combinations(range(n), k):
        m = 0
        for t in itertools.combinations(s, 3):
            m |= 1 << rank_triple(t, n)
        masks.append(m)
    return masks


def _initial_incumbent(n: int, k: int) -> TripleFamily | None:
    if n < 4 or n < k:
        return None
    mode = STRICT if n % (k - 1) == 0 else BALANCED
    t = build_turan(n, k, mode).T
    return t if is_turan_property(t, k).holds else None


class _Search:
    def __init__(self, n, k, budget):
        self.n, self.k, self.budget = n, k, budget
        self.nt = comb(n, 3)
        self.kmasks = _kset_masks(n, k)
        # k-subsets through each triple
        self.through = [[m for m in self.kmasks if m >> t & 1] for t in range(self.nt)]
        self.all_mask = (1 << self.nt) - 1
        self.nodes = 0
        self.exhausted = False
        self.best = -1
        self.best_mask = 0

    def forced(self, excluded: int, undecided: int) -> int:
        used = need = 0
        for km in self.kmasks:
            if km & excluded:
                continue
            u = km & undecided
            if not u & used:
                used |= u
                need += 1
        return need

    def run(self, included: int, excluded: int, pos: int) -> None:
        self.nodes += 1
        if self.nodes > self.budget:
            self.exhausted = True
            return
        undecided = self.all_mask >> pos << pos
        cur = included.bit_count()
        remaining = self.nt - pos
        if cur + remaining <= self.best:
            return
        if cur + remaining - self.forced(excluded, undecided) <= self.best:
            return
        if pos == self.nt:
            self.best, self.best_mask = cur, included
            return
        bit = 1 << pos
        grown = included | bit
        if all((grown & km) != km for km in self.through[pos]):
            self.run(grown, excluded, pos + 1)
            if self.exhausted:
                return
        self.run(included, excluded | bit, pos + 1)


def max_kfree(n: int, k: int, budget: int = DEFAULT_BUDGET, *, use_incumbent: bool = True) -> SearchResult:
    """Largest triple family on ``n`` vertices with no complete k-subset.

    Triple 0 is forced out of the family: every optimum excludes some
    triple, and relabelling vertices moves it to ``{0, 1, 2}``.  If the node
    budget runs out the result holds the best family found and
    ``complete`` is False.
    """
    n, k = int(n), int(k)
    if k < 4 or n < 3:
        raise InputError(f"need k >= 4 and n >= 3, got n={n}, k={k}")
    t0 = time.perf_counter()
    s = _Search(n, k, budget)
    if n < k:
        full = TripleFamily.full(n)
        return SearchResult(n, k, full.edge_count, full, 0, True, time.perf_counter() - t0)

    incumbent = _initial_incumbent(n, k) if use_incumbent else None
    if incumbent is not None:
        s.best = incumbent.edge_count
        bits = np.flatnonzero(incumbent.membership)
        s.best_mask = sum(1 << int(r) for r in bits)
    s.run(0, 1, 1)

    witness = TripleFamily(n, [(s.best_mask >> r) & 1 for r in range(s.nt)])
    return SearchResult(n, k, s.best, witness, s.nodes, not s.exhausted, time.perf_counter() - t0)


def min_cover(n: int, k: int, budget: int = DEFAULT_BUDGET) -> int:
    """Fewest triples meeting every k-subset: ``C(n,3) - max_kfree``."""
    return max_kfree(n, k, budget).min_cover


def exhaustive_max_kfree(n: int, k: int) -> tuple[int, TripleFamily]:
    """Enumerate all ``2**C(n,3)`` families and return the best one.

    Only feasible for ``C(n,3) <= 24`` (n <= 6).
    """
    nt = comb(n, 3)
    if nt > EXHAUSTIVE_MAX_TRIPLES:
        raise InputError(f"2**{nt} families is too many to enumerate")
    fams = np.arange(1 << nt, dtype=np.int64)
    ok = np.ones(fams.shape, dtype=bool)
    for km in _kset_masks(n, k):
        ok &= (fams & km) != km
    sizes = np.zeros(fams.shape, dtype=np.int64)
    for r in range(nt):
        sizes += (fams >> r) & 1
    sizes[~ok] = -1
    best = int(np.argmax(sizes))
    fam = TripleFamily(n, [(best >> r) & 1 for r in range(nt)])
    return int(sizes[best]), fam


def best_cover(result: SearchResult) -> TripleFamily:
    return complement(result.witness)
