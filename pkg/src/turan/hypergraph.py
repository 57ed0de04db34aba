"""3-uniform hypergraphs on ``{0, ..., n-1}`` stored as dense triple bitsets.

Triples are canonical ascending tuples ``(a, b, c)`` and are indexed by the
colex combinatorial number system ``C(c,3) + C(b,2) + a``.
"""
from __future__ import annotations

import itertools
from functools import lru_cache
from math import comb
from typing import Iterable, Iterator, TextIO

import numpy as np

from .errors import FormatError, InputError

MAX_VERTICES = 128

# BINOM[i, j] == C(i, j) for 0 <= i <= MAX_VERTICES, 0 <= j <= 3
BINOM = np.array([[comb(i, j) for j in range(4)] for i in range(MAX_VERTICES + 1)], dtype=np.int64)

Triple = tuple[int, int, int]


def _check_n(n: int) -> int:
    n = int(n)
    if n < 3 or n > MAX_VERTICES:
        raise InputError(f"vertex count must satisfy 3 <= n <= {MAX_VERTICES}, got {n}")
    return n


def num_triples(n: int) -> int:
    return comb(n, 3)


def rank_triple(t: Iterable[int], n: int) -> int:
    """Colex rank of a canonical triple; inverse of :func:`unrank_triple`."""
    a, b, c = (int(v) for v in t)
    if not 0 <= a < b < c:
        raise InputError(f"triple {(a, b, c)} is not strictly increasing")
    if c >= n:
        raise InputError(f"vertex {c} out of range for n={n}")
    return int(BINOM[c, 3] + BINOM[b, 2] + a)


def unrank_triple(r: int, n: int) -> Triple:
    r = int(r)
    if not 0 <= r < comb(n, 3):
        raise InputError(f"rank {r} out of range [0, {comb(n, 3)})")
    c = 2
    while BINOM[c + 1, 3] <= r:
        c += 1
    r -= int(BINOM[c, 3])
    b = 1
    while BINOM[b + 1, 2] <= r:
        b += 1
    r -= int(BINOM[b, 2])
    return (r, b, c)


def rank_triples(triples: np.ndarray) -> np.ndarray:
    """Vectorised colex rank of an ``(..., 3)`` array of canonical triples."""
    triples = np.asarray(triples, dtype=np.int64)
    return BINOM[triples[..., 2], 3] + BINOM[triples[..., 1], 2] + triples[..., 0]


@lru_cache(maxsize=None)
def _all_triples(n: int) -> np.ndarray:
    combos = np.array(list(itertools.combinations(range(n), 3)), dtype=np.int64).reshape(-1, 3)
    out = np.empty_like(combos)
    out[rank_triples(combos)] = combos
    out.setflags(write=False)
    return out


def all_triples(n: int) -> np.ndarray:
    """All ``C(n, 3)`` triples as a read-only ``(C(n,3), 3)`` array in rank order."""
    return _all_triples(_check_n(n))


def ksubsets(n: int, k: int) -> Iterator[tuple[int, ...]]:
    """Yield every k-subset of ``range(n)`` in lexicographic order."""
    return itertools.combinations(range(n), k)


class TripleFamily:
    """A family of vertex triples (a 3-uniform hypergraph) on ``n`` vertices.

    Membership is a boolean vector indexed by triple rank; the edge count is
    cached and kept current by :meth:`add` and :meth:`discard`.
    """

    __slots__ = ("n", "_bits", "_count")

    def __init__(self, n: int, membership=None):
        self.n = _check_n(n)
        size = comb(self.n, 3)
        if membership is None:
            bits = np.zeros(size, dtype=bool)
        else:
            bits = np.array(membership, dtype=bool)
            if bits.shape != (size,):
                raise InputError(f"membership must have length C({self.n},3)={size}, got {bits.shape}")
        self._bits = bits
        self._count = int(np.count_nonzero(bits))

    @classmethod
    def empty(cls, n: int) -> "TripleFamily":
        return cls(n)

    @classmethod
    def full(cls, n: int) -> "TripleFamily":
        return cls(n, np.ones(comb(_check_n(n), 3), dtype=bool))

    @classmethod
    def from_triples(cls, n: int, triples: Iterable[Iterable[int]], *, strict: bool = False) -> "TripleFamily":
        """Build a family from triples.

        Unordered triples are sorted unless ``strict`` is set, in which case
        non-canonical or repeated triples raise :class:`InputError`.
        """
        fam = cls(n)
        for t in triples:
            t = tuple(int(v) for v in t)
            if len(t) != 3:
                raise InputError(f"expected a triple, got {t}")
            if not strict:
                t = tuple(sorted(t))
            r = rank_triple(t, fam.n)
            if fam._bits[r]:
                if strict:
                    raise InputError(f"duplicate triple {t}")
                continue
            fam._bits[r] = True
            fam._count += 1
        return fam

    @property
    def membership(self) -> np.ndarray:
        """Read-only view of the rank-indexed membership vector."""
        view = self._bits.view()
        view.setflags(write=False)
        return view

    @property
    def edge_count(self) -> int:
        return self._count

    def __len__(self) -> int:
        return self._count

    def __contains__(self, t) -> bool:
        return bool(self._bits[rank_triple(t, self.n)])

    def __iter__(self) -> Iterator[Triple]:
        return self.triples()

    def triples(self) -> Iterator[Triple]:
        """Member triples in rank order."""
        for a, b, c in all_triples(self.n)[self._bits]:
            yield (int(a), int(b), int(c))

    def triple_array(self) -> np.ndarray:
        return all_triples(self.n)[self._bits]

    def add(self, t) -> None:
        r = rank_triple(t, self.n)
        if not self._bits[r]:
            self._bits[r] = True
            self._count += 1

    def discard(self, t) -> None:
        r = rank_triple(t, self.n)
        if self._bits[r]:
            self._bits[r] = False
            self._count -= 1

    def copy(self) -> "TripleFamily":
        return TripleFamily(self.n, self._bits)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TripleFamily):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self._bits, other._bits))

    def __hash__(self):
        return hash((self.n, self._bits.tobytes()))

    def __repr__(self) -> str:
        return f"TripleFamily(n={self.n}, edges={self._count})"


def complement(f: TripleFamily) -> TripleFamily:
    return TripleFamily(f.n, ~f.membership)


def count_edges_within(f: TripleFamily, s: Iterable[int]) -> int:
    """Number of member triples with all three vertices in ``s``."""
    verts = sorted(int(v) for v in s)
    if len(set(verts)) != len(verts):
        raise InputError(f"subset {verts} has repeated vertices")
    if verts and (verts[0] < 0 or verts[-1] >= f.n):
        raise InputError(f"subset {verts} out of range for n={f.n}")
    if len(verts) < 3:
        return 0
    sub = np.array(list(itertools.combinations(verts, 3)), dtype=np.int64)
    return int(np.count_nonzero(f.membership[rank_triples(sub)]))


# -- text format -------------------------------------------------------------

def dumps(f: TripleFamily) -> str:
    lines = [f"{f.n} {f.edge_count}"]
    lines.extend(f"{a} {b} {c}" for a, b, c in f.triples())
    return "\n".join(lines) + "\n"


def write(f: TripleFamily, fp: TextIO) -> None:
    fp.write(dumps(f))


def loads(text: str) -> TripleFamily:
    """Parse the ``n m`` header plus ``m`` lines of ``a b c`` triples.

    Duplicate or non-ascending triples are rejected.
    """
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise FormatError("empty hypergraph text")
    try:
        n, m = (int(tok) for tok in lines[0].split())
    except ValueError:
        raise FormatError(f"bad header line {lines[0]!r}") from None
    if len(lines) - 1 != m:
        raise FormatError(f"header declares {m} edges, found {len(lines) - 1}")
    triples = []
    for ln in lines[1:]:
        toks = ln.split()
        if len(toks) != 3:
            raise FormatError(f"bad edge line {ln!r}")
        try:
            triples.append(tuple(int(tok) for tok in toks))
        except ValueError:
            raise FormatError(f"bad edge line {ln!r}") from None
    try:
        return TripleFamily.from_triples(n, triples, strict=True)
    except InputError as exc:
        raise FormatError(str(exc)) from None


def read(fp: TextIO) -> TripleFamily:
    return loads(fp.read())


def load(path) -> TripleFamily:
    with open(path, encoding="ascii") as fp:
        return read(fp)


def save(f: TripleFamily, path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fp:
        write(f, fp)
