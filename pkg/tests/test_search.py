from math import comb

import pytest

from turan.construction import build_turan
from turan.errors import InputError
from turan.search import exhaustive_max_kfree, max_kfree, min_cover
from turan.verifier import is_turan_property

import oracles

# exhaustive pure-Python enumeration (oracles.brute_max_kfree), frozen
KNOWN = {(4, 4): 3, (5, 4): 7, (6, 4): 14, (5, 5): 9, (6, 5): 18}


@pytest.mark.parametrize("n, k", [(4, 4), (5, 4), (5, 5)])
def test_small_values_against_brute_force(n, k):
    assert max_kfree(n, k).max_edges == oracles.brute_max_kfree(n, k) == KNOWN[n, k]


@pytest.mark.parametrize("n, k", sorted(KNOWN))
def test_known_values(n, k):
    res = max_kfree(n, k)
    assert res.complete
    assert res.max_edges == KNOWN[n, k]
    assert res.witness.edge_count == res.max_edges
    assert is_turan_property(res.witness, k).holds
    assert res.max_edges + res.min_cover == comb(n, 3)


@pytest.mark.parametrize("n, k", [(5, 4), (6, 4), (6, 5)])
def test_exhaustive_route(n, k):
    best, fam = exhaustive_max_kfree(n, k)
    assert best == KNOWN[n, k] == fam.edge_count
    assert is_turan_property(fam, k).holds


def test_without_incumbent_same_optimum():
    for n, k in [(5, 4), (6, 4), (6, 5), (7, 5)]:
        assert max_kfree(n, k, use_incumbent=False).max_edges == max_kfree(n, k).max_edges


def test_min_cover_examples():
    assert min_cover(4, 4) == 1
    assert min_cover(5, 4) == 3
    assert min_cover(3, 4) == 0
    assert min_cover(5, 6) == 0


def test_construction_never_beats_optimum():
    for n, k in [(6, 4), (8, 5)]:
        res = max_kfree(n, k)
        assert res.complete
        assert build_turan(n, k).T.edge_count == res.max_edges
    for n, k in [(5, 4), (7, 4), (6, 5), (7, 5)]:
        res = max_kfree(n, k)
        assert build_turan(n, k, "balanced").T.edge_count <= res.max_edges


def test_construction_optimal_at_6_4():
    assert build_turan(6, 4).T.edge_count == max_kfree(6, 4).max_edges == 14


def test_monotone_in_n():
    for k in (4, 5):
        vals = [max_kfree(n, k).max_edges for n in range(3, 8)]
        assert vals == sorted(vals)


def test_budget_exhaustion_flags_lower_bound():
    res = max_kfree(7, 4, budget=50)
    assert not res.complete and res.lower_bound_only
    assert res.nodes_explored >= 50
    # incumbent is still a valid family
    assert is_turan_property(res.witness, 4).holds
    assert res.max_edges <= 23


def test_rejects_small_k():
    with pytest.raises(InputError):
        max_kfree(5, 3)
    with pytest.raises(InputError):
        exhaustive_max_kfree(7, 4)
