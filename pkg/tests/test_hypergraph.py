import itertools
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from turan import hypergraph as hg
from turan.errors import FormatError, InputError
from turan.hypergraph import (TripleFamily, complement, count_edges_within, ksubsets, rank_triple,
                              unrank_triple)

import oracles


@pytest.mark.parametrize("t, r", [((0, 1, 2), 0), ((2, 3, 4), 9), ((0, 1, 3), 1)])
def test_rank_examples(t, r):
    assert rank_triple(t, 5) == r
    assert unrank_triple(r, 5) == t


def test_rank_matches_colex_enumeration():
    for n in range(3, 9):
        for i, t in enumerate(oracles.colex_triples(n)):
            assert rank_triple(t, n) == i


@pytest.mark.parametrize("n", range(3, 13))
def test_rank_unrank_bijection(n):
    seen = set()
    for r in range(comb(n, 3)):
        t = unrank_triple(r, n)
        assert 0 <= t[0] < t[1] < t[2] < n
        assert rank_triple(t, n) == r
        seen.add(t)
    assert len(seen) == comb(n, 3)


@pytest.mark.parametrize("bad", [(1, 0, 2), (0, 0, 1), (0, 1, 5), (-1, 1, 2)])
def test_rank_rejects_bad_triples(bad):
    with pytest.raises(InputError):
        rank_triple(bad, 5)


@pytest.mark.parametrize("r", [-1, 10])
def test_unrank_rejects_out_of_range(r):
    with pytest.raises(InputError):
        unrank_triple(r, 5)


def test_all_triples_rank_order():
    tri = hg.all_triples(7)
    assert [tuple(t) for t in tri] == oracles.colex_triples(7)


def test_complement_examples():
    full = complement(TripleFamily.empty(5))
    assert full.edge_count == 10
    f = TripleFamily.from_triples(4, [(0, 1, 2)])
    c = complement(f)
    assert sorted(c) == [(0, 1, 3), (0, 2, 3), (1, 2, 3)]
    assert complement(c) == f


@settings(max_examples=50, deadline=None)
@given(st.integers(3, 9).flatmap(lambda n: st.tuples(st.just(n), st.lists(st.booleans(), min_size=comb(n, 3), max_size=comb(n, 3)))))
def test_complement_involution_and_counts(data):
    n, bits = data
    f = TripleFamily(n, bits)
    c = complement(f)
    assert complement(c) == f
    assert f.edge_count + c.edge_count == comb(n, 3)
    assert f.edge_count == sum(bits)


def test_count_edges_within_examples():
    full = TripleFamily.full(5)
    for s in itertools.combinations(range(5), 4):
        assert count_edges_within(full, s) == 4
    assert count_edges_within(TripleFamily.empty(6), (0, 2, 4, 5)) == 0


@pytest.mark.parametrize("n", [5, 7, 9])
def test_count_edges_within_complement_sum(n):
    rng = np.random.default_rng(n)
    f = TripleFamily(n, rng.random(comb(n, 3)) < 0.5)
    c = complement(f)
    edges = list(f)
    for k in (4, 5):
        for s in itertools.combinations(range(n), k):
            got = count_edges_within(f, s)
            assert got == oracles.inside_count(edges, s)
            assert got + count_edges_within(c, s) == comb(k, 3)


def test_mutation_updates_count():
    f = TripleFamily.empty(5)
    f.add((0, 1, 2))
    f.add((0, 1, 2))
    f.add((1, 3, 4))
    assert f.edge_count == 2 and (1, 3, 4) in f
    f.discard((0, 1, 2))
    f.discard((0, 1, 2))
    assert f.edge_count == 1 and (0, 1, 2) not in f


@pytest.mark.parametrize("n, k, count", [(4, 4, 1), (5, 4, 5), (9, 4, comb(9, 4))])
def test_ksubsets_counts(n, k, count):
    subs = list(ksubsets(n, k))
    assert len(subs) == count


@pytest.mark.parametrize("n", range(4, 11))
def test_ksubsets_distinct_sorted(n):
    for k in range(4, n + 1):
        subs = list(ksubsets(n, k))
        assert len(set(subs)) == comb(n, k)
        assert subs == sorted(subs)
        assert all(list(s) == sorted(set(s)) for s in subs)


def test_vertex_limit():
    with pytest.raises(InputError):
        TripleFamily(2)
    with pytest.raises(InputError):
        TripleFamily(hg.MAX_VERTICES + 1)


def test_text_format_bit_exact():
    f = TripleFamily.from_triples(5, [(2, 3, 4), (0, 1, 2), (0, 1, 3)])
    text = hg.dumps(f)
    assert text == "5 3\n0 1 2\n0 1 3\n2 3 4\n"
    assert hg.loads(text) == f
    assert hg.dumps(hg.loads(text)) == text


def test_text_format_file_round_trip(tmp_path):
    f = TripleFamily(8, np.random.default_rng(1).random(56) < 0.4)
    path = tmp_path / "f.hg"
    hg.save(f, path)
    assert hg.load(path) == f
    assert path.read_bytes().endswith(b"\n")


@pytest.mark.parametrize("text", [
    "5 2\n0 1 2\n0 1 2\n",      # duplicate
    "5 1\n1 0 2\n",             # not ascending
    "5 2\n0 1 2\n",             # count mismatch
    "5 1\n0 1 7\n",             # out of range
    "5 1\n0 1\n",               # short line
    "five 1\n0 1 2\n",          # bad header
    "",
])
def test_text_format_rejects(text):
    with pytest.raises(FormatError):
        hg.loads(text)
