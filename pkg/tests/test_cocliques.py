from itertools import combinations, product

import numpy as np
import pytest

from ekrlab.catalog import agl1, alt, psl2, sym
from ekrlab.cocliques import (Coclique, canonical_cocliques, classify, clique_cover,
                              ekr_bound_certificate, exhaustive_allowed, is_coclique, max_cocliques)
from ekrlab.dergraph import default_normal
from ekrlab.perm_core import point_stabilizer


def intersecting(G, a, b):
    return bool(np.any(G.elements[a] == G.elements[b]))


def brute_cocliques(G, size):
    return [c for c in combinations(range(G.order), size)
            if all(intersecting(G, a, b) for a, b in combinations(c, 2))]


def test_agl15_transversal_oracle():
    G = agl1(5)
    N = default_normal(G)
    cosets = {tuple(sorted(G.mul_many(N, g))) for g in range(G.order)}
    assert len(cosets) == 4
    oracle = {tuple(sorted(t)) for t in product(*cosets)
              if all(intersecting(G, a, b) for a, b in combinations(t, 2))}
    census = max_cocliques(G, limit=10_000, exhaustive=True)
    assert census.complete
    assert census.total == len(oracle) == 625
    assert census.canonical_count == 25
    assert {c.members for c in census.found} == oracle


def test_sym3_census():
    G = sym(3)
    census = max_cocliques(G, limit=100, exhaustive=True)
    assert census.complete and census.total == 9 and census.canonical_count == 9
    assert {c.members for c in census.found} == set(brute_cocliques(G, 2))


def test_alt4_census_brute():
    G = alt(4)
    census = max_cocliques(G, limit=1000, exhaustive=True)
    assert census.total == len(brute_cocliques(G, 3))
    assert not brute_cocliques(G, 4)


@pytest.mark.parametrize("make", [lambda: sym(3), lambda: alt(5), lambda: psl2(7)])
def test_canonical(make):
    G = make()
    canon = canonical_cocliques(G)
    assert len(canon) == G.degree ** 2
    assert all(len(c) == G.order // G.degree for c in canon)
    assert all(is_coclique(G, c.members) for c in canon)
    assert set(canon[0].members) == set(point_stabilizer(G, 0).tolist())


def test_is_coclique():
    G = sym(3)
    assert not is_coclique(G, [0, *[int(i) for i in np.flatnonzero(G.fix_counts == 0)][:1]])
    assert is_coclique(G, [0])


def test_limit_must_be_positive():
    with pytest.raises(ValueError):
        max_cocliques(sym(3), limit=0)


@pytest.mark.parametrize("make", [lambda: sym(4), lambda: alt(5), lambda: psl2(5)])
def test_plus_one_infeasible(make):
    G = make()
    cert = ekr_bound_certificate(G)
    assert cert["plus_one_complete"] and cert["plus_one_found"] == 0


def test_cover_partitions_group():
    for G in (alt(5), psl2(5), agl1(7)):
        cover = clique_cover(G)
        allv = np.concatenate(cover.cliques)
        assert sorted(allv.tolist()) == list(range(G.order))
        for c in cover.cliques:
            assert all(not intersecting(G, a, b) for a, b in combinations(c.tolist(), 2))
        assert exhaustive_allowed(G, cover)


def test_classify():
    G = agl1(5)
    census = max_cocliques(G, limit=700, exhaustive=True)
    kinds = [classify(c, G) for c in census.found]
    assert sum(k.canonical for k in kinds) == 25
    assert all(k.is_coset_of_subgroup for k in kinds if k.canonical)
    assert classify(point_stabilizer(G, 0), G).is_subgroup


def test_coclique_sorted():
    assert Coclique((3, 1, 2)).members == (1, 2, 3)
