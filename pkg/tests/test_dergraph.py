import numpy as np
import pytest
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from ekrlab.catalog import agammal1, agl1, agl3_2, alt, sym
from ekrlab.dergraph import (PreconditionError, adjacent, connectivity, coset_derangement_profile,
                             default_normal, equitable_check, frobenius_by_derangements,
                             is_disjoint_clique_union, neighbours, two_point_stabilizer_generation,
                             two_point_stabilizers_trivial)
from ekrlab.perm_core import coset_set, point_stabilizer


def bfs_components(G):
    P = G.elements
    A = (P[:, None, :] != P[None, :, :]).all(axis=2)
    return connected_components(csr_matrix(A), directed=False)[0]


@pytest.mark.parametrize("make", [lambda: sym(3), lambda: sym(4), lambda: alt(5), lambda: agl1(5),
                                  lambda: agammal1(3, 2), lambda: agammal1(2, 3)])
def test_components_match_graph_search(make):
    G = make()
    assert connectivity(G).component_count == bfs_components(G)


def test_known_connectivity():
    assert connectivity(alt(5)).is_connected
    assert connectivity(agammal1(3, 2)).component_count > 1
    assert connectivity(agl1(7)).component_count == 6


def test_adjacency():
    G = sym(3)
    assert not adjacent(G, 0, 0)
    assert len(neighbours(G, 0)) == 2


@pytest.mark.parametrize("q", [5, 7, 8])
def test_frobenius_both_directions(q):
    G = agl1(q)
    N = default_normal(G)
    assert two_point_stabilizers_trivial(G)
    assert frobenius_by_derangements(G, N)
    assert is_disjoint_clique_union(G)


def test_non_frobenius():
    G = sym(4)
    N = default_normal(G)
    assert not two_point_stabilizers_trivial(G)
    assert not frobenius_by_derangements(G, N)
    assert not is_disjoint_clique_union(G)


@pytest.mark.parametrize("make", [lambda: sym(4), lambda: agl1(7), lambda: agammal1(3, 2), agl3_2])
def test_coset_profile_agrees(make):
    flags = coset_derangement_profile(make())
    assert all(f.direct == f.centralizer for f in flags)


def test_two_point_generation():
    assert two_point_stabilizer_generation(agl3_2()).equal
    assert two_point_stabilizer_generation(agammal1(3, 2)).equal


def test_no_regular_normal():
    with pytest.raises(PreconditionError):
        default_normal(alt(5))
    with pytest.raises(PreconditionError):
        default_normal(sym(4), [0, 1, 2, 3])


def test_equitable():
    G = alt(5)
    assert equitable_check(G, point_stabilizer(G, 0))
    assert equitable_check(G, coset_set(G, 1, 3))
