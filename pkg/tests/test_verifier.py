import itertools
from math import comb

import numpy as np
import pytest

from turan.construction import build_turan
from turan.errors import BudgetExceeded, InputError
from turan.hypergraph import TripleFamily, complement, count_edges_within
from turan.verifier import is_turan_property, max_edges_in_any_ksubset

import oracles


def random_family(n, p, seed):
    return TripleFamily(n, np.random.default_rng(seed).random(comb(n, 3)) < p)


def test_complete_family_violates():
    rep = is_turan_property(TripleFamily.full(5), 5)
    assert not rep.holds
    assert rep.witness == (0, 1, 2, 3, 4)
    assert rep.max_inside == 10


@pytest.mark.parametrize("n, k", [(5, 4), (8, 5), (10, 4)])
def test_empty_family_holds(n, k):
    rep = is_turan_property(TripleFamily.empty(n), k)
    assert rep.holds and rep.witness is None and rep.max_inside == 0
    assert rep.subsets_scanned == comb(n, k)


def test_construction_9_4():
    T = build_turan(9, 4).T
    rep = is_turan_property(T, 4)
    assert rep.holds and rep.subsets_scanned == 126
    assert max_edges_in_any_ksubset(T, 4) == (3, (0, 1, 2, 6)) == oracles.max_inside(list(T), 9, 4)


def test_max_edges_examples():
    assert max_edges_in_any_ksubset(TripleFamily.empty(6), 4) == (0, (0, 1, 2, 3))
    assert max_edges_in_any_ksubset(TripleFamily.full(6), 4) == (4, (0, 1, 2, 3))


@pytest.mark.parametrize("seed", range(12))
def test_matches_brute_force(seed):
    n = 6 + seed % 3
    k = 4 + seed % 2
    f = random_family(n, 0.55 + 0.03 * (seed % 4), seed)
    best, arg = oracles.max_inside(list(f), n, k)
    assert max_edges_in_any_ksubset(f, k) == (best, arg)
    rep = is_turan_property(f, k)
    assert rep.holds == (best < comb(k, 3))
    assert rep.max_inside == best
    if not rep.holds:
        assert count_edges_within(f, rep.witness) == comb(k, 3)


@pytest.mark.parametrize("seed", range(8))
def test_witness_only_agrees(seed):
    f = random_family(9, 0.8, seed)
    full = is_turan_property(f, 4)
    fast = is_turan_property(f, 4, witness_only=True)
    assert fast.holds == full.holds
    assert fast.witness == full.witness
    if not full.holds:
        assert fast.subsets_scanned <= full.subsets_scanned
        # lexicographically first complete 4-set
        first = next(s for s in itertools.combinations(range(9), 4)
                     if count_edges_within(f, s) == 4)
        assert fast.witness == first


@pytest.mark.parametrize("n", [6, 7, 8])
def test_complement_duality(n):
    for seed in range(5):
        f = random_family(n, 0.7, seed)
        c = complement(f)
        for k in (4, 5):
            has_complete = not is_turan_property(f, k).holds
            zero_in_c = any(count_edges_within(c, s) == 0 for s in itertools.combinations(range(n), k))
            assert has_complete == zero_in_c


@pytest.mark.parametrize("seed", range(10))
def test_removing_edges_preserves_property(seed):
    rng = np.random.default_rng(seed)
    f = build_turan(6, 4).T if seed % 2 else random_family(7, 0.15, seed)
    k = 4
    if not is_turan_property(f, k).holds:
        pytest.skip("random family already violates")
    for t in rng.permutation(list(f))[:5]:
        f.discard(tuple(int(v) for v in t))
        assert is_turan_property(f, k).holds


@pytest.mark.parametrize("threads", [2, 3, 8])
def test_thread_count_does_not_change_report(threads):
    for seed in range(4):
        f = random_family(11, 0.75, seed)
        for wo in (False, True):
            a = is_turan_property(f, 5, witness_only=wo)
            b = is_turan_property(f, 5, witness_only=wo, threads=threads)
            assert a == b


def test_budget_and_input_errors():
    with pytest.raises(BudgetExceeded) as exc:
        is_turan_property(TripleFamily.empty(20), 6, budget=1000)
    assert exc.value.required == comb(20, 6)
    with pytest.raises(InputError):
        is_turan_property(TripleFamily.empty(5), 3)
    with pytest.raises(InputError):
        is_turan_property(TripleFamily.empty(5), 6)
