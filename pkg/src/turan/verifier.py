"""Exhaustive (3,k)-Turán property checking.

A family has the property when no k-subset of vertices contains all
``C(k,3)`` of its triples.  The scan covers every k-subset, partitioned by
leading (smallest) vertex; each partition is counted with a vectorised
gather over the membership vector and the per-partition maxima are reduced
in vertex order, which keeps the lexicographically least argmax regardless
of thread count.
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from math import comb

import numpy as np

from ._parallel import ordered_map
from .errors import BudgetExceeded, InputError
from .hypergraph import TripleFamily, rank_triples

DEFAULT_BUDGET = 10**8
CHUNK_ROWS = 1 << 15


@dataclass
class VerifyReport:
    holds: bool
    witness: tuple[int, ...] | None
    max_inside: int
    subsets_scanned: int
    argmax: tuple[int, ...] | None = None
    elapsed_ms: float = field(default=0.0, compare=False)

    def to_dict(self, timing: bool = False) -> dict:
        out = {
            "holds": self.holds,
            "witness": list(self.witness) if self.witness is not None else None,
            "max_inside": self.max_inside,
            "subsets_scanned": self.subsets_scanned,
        }
        if timing:
            out["elapsed_ms"] = self.elapsed_ms
        return out


def _check_args(f: TripleFamily, k: int, budget: int) -> int:
    k = int(k)
    if not 3 < k <= f.n:
        raise InputError(f"need 3 < k <= n, got k={k}, n={f.n}")
    total = comb(f.n, k)
    if total > budget:
        raise BudgetExceeded(f"C({f.n},{k}) = {total} subsets exceeds scan budget {budget}", required=total)
    return k


def _scan_leading(f: TripleFamily, k: int, lead: int, stop_at: int | None):
    """Scan all k-subsets whose smallest vertex is ``lead``.

    Returns ``(best, argmax, scanned)``; stops early once a subset reaches
    ``stop_at`` inside-edges.
    """
    bits = f.membership
    # positions of the C(k,3) sub-triples inside a sorted k-tuple
    pos = np.array(list(itertools.combinations(range(k), 3)), dtype=np.int64)
    rest = itertools.combinations(range(lead + 1, f.n), k - 1)
    best, arg, scanned = -1, None, 0
    while True:
        block = np.fromiter(itertools.chain.from_iterable(itertools.islice(rest, CHUNK_ROWS)),
                            dtype=np.int64)
        if block.size == 0:
            break
        subs = np.empty((block.size // (k - 1), k), dtype=np.int64)
        subs[:, 0] = lead
        subs[:, 1:] = block.reshape(-1, k - 1)
        inside = bits[rank_triples(subs[:, pos])].sum(axis=1)
        i = int(np.argmax(inside))
        scanned += len(subs)
        if inside[i] > best:
            best, arg = int(inside[i]), tuple(int(v) for v in subs[i])
        if stop_at is not None and best >= stop_at:
            scanned -= len(subs) - 1 - i
            break
    return best, arg, scanned


def _scan(f: TripleFamily, k: int, threads: int, witness_only: bool):
    full = comb(k, 3)
    leads = range(f.n - k + 1)
    if not witness_only:
        parts = ordered_map(lambda v: _scan_leading(f, k, v, None), leads, threads)
    else:
        # waves of `threads` partitions; the earliest violating partition wins
        parts = []
        leads = list(leads)
        for start in range(0, len(leads), threads):
            wave = ordered_map(lambda v: _scan_leading(f, k, v, full), leads[start:start + threads], threads)
            for p in wave:
                parts.append(p)
                if p[0] >= full:
                    break
            if parts[-1][0] >= full:
                break
    best, arg, scanned = -1, None, 0
    for b, a, s in parts:
        scanned += s
        if b > best:
            best, arg = b, a
        if witness_only and best >= full:
            break
    return best, arg, scanned


def is_turan_property(f: TripleFamily, k: int, *, witness_only: bool = False,
                      budget: int = DEFAULT_BUDGET, threads: int = 1) -> VerifyReport:
    """Decide whether ``f`` has the (3,k)-Turán property.

    With ``witness_only`` the scan stops at the first complete k-subset (in
    lexicographic order); ``max_inside`` is then exact only when the property
    holds.
    """
    k = _check_args(f, k, budget)
    t0 = time.perf_counter()
    best, arg, scanned = _scan(f, k, threads, witness_only)
    holds = best < comb(k, 3)
    return VerifyReport(
        holds=holds,
        witness=None if holds else arg,
        max_inside=best,
        subsets_scanned=scanned,
        argmax=arg,
        elapsed_ms=(time.perf_counter() - t0) * 1e3,
    )


def max_edges_in_any_ksubset(f: TripleFamily, k: int, *, budget: int = DEFAULT_BUDGET,
                             threads: int = 1) -> tuple[int, tuple[int, ...]]:
    """Exact maximum inside-edge count over k-subsets, lexicographically least argmax."""
    k = _check_args(f, k, budget)
    best, arg, _ = _scan(f, k, threads, witness_only=False)
    return best, arg
