import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ekrlab.catalog import agl1, alt, sym
from ekrlab.perm_core import (GroupTooLarge, Permutation, closure, compose, conjugacy_classes,
                              coset_set, element_orders, fixed_points, generate, identity, inverse,
                              is_2transitive, is_subgroup, perm_order, point_stabilizer,
                              regular_normal_subgroups, subgroup_generated)

perms = st.integers(1, 8).flatmap(lambda n: st.permutations(range(n)))


def test_permutation_rejects_non_bijection():
    with pytest.raises(ValueError):
        Permutation((0, 0, 1))


def test_compose_is_right_action():
    p = Permutation.from_cycles(3, (0, 1))
    q = Permutation.from_cycles(3, (1, 2))
    # i^(pq) = (i^p)^q
    assert compose(p, q).images == (2, 0, 1)
    assert (p * q).images == compose(p, q).images


@given(perms)
def test_inverse_and_order(images):
    p = Permutation(tuple(images))
    n = p.degree
    assert compose(p, inverse(p)) == identity(n)
    k = perm_order(p)
    acc = identity(n)
    for _ in range(k):
        acc = compose(acc, p)
    assert acc == identity(n)
    assert fixed_points(p) == {i for i in range(n) if images[i] == i}


@given(perms, perms)
def test_compose_associative_when_degrees_match(a, b):
    if len(a) != len(b):
        return
    p, q = Permutation(tuple(a)), Permutation(tuple(b))
    r = compose(q, p)
    assert compose(compose(p, q), r) == compose(p, compose(q, r))


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_sym_alt_orders(n):
    assert sym(n).order == math.factorial(n)
    assert alt(n).order == math.factorial(n) // 2


def test_alt_small_degree_rejected():
    with pytest.raises(ValueError):
        alt(2)


def test_generate_matches_brute_force():
    G = sym(4)
    brute = sorted(itertools.permutations(range(4)))
    assert sorted(tuple(int(x) for x in r) for r in G.elements) == brute
    assert G.elements[0].tolist() == [0, 1, 2, 3]
    for i in range(G.order):
        assert G.index_of(G.elements[i]) == i


def test_generate_cap():
    with pytest.raises(GroupTooLarge):
        generate(7, [Permutation.from_cycles(7, (0, 1)), Permutation.from_cycles(7, tuple(range(7)))], cap=100)


def test_multiplication_table_consistent():
    G = alt(5)
    rng = np.random.default_rng(0)
    for a, b in rng.integers(0, G.order, size=(50, 2)):
        expect = compose(G.perm(int(a)), G.perm(int(b)))
        assert G.perm(G.mul(int(a), int(b))) == expect


def test_classes_sym5_partition():
    cc = conjugacy_classes(sym(5))
    # cycle types of S5: 7 classes
    assert cc.count == 7
    assert sorted(cc.sizes) == [1, 10, 15, 20, 20, 24, 30]
    assert cc.class_of[0] == 0 and cc.sizes[0] == 1


def test_classes_alt5_split_five_cycles():
    cc = conjugacy_classes(alt(5))
    assert sorted(cc.sizes) == [1, 12, 12, 15, 20]


def test_classes_brute_force_conjugation():
    G = alt(4)
    cc = conjugacy_classes(G)
    for x in range(G.order):
        orbit = {G.conjugate_all(g)[x] for g in range(G.order)}
        assert set(np.flatnonzero(cc.class_of == cc.class_of[x])) == orbit


def test_inverse_class():
    G = alt(5)
    cc = conjugacy_classes(G)
    for c, r in enumerate(cc.representatives):
        assert cc.class_of[G.inverses[r]] == cc.inverse_class[c]


def test_stabilizer_and_cosets():
    G = sym(4)
    H = point_stabilizer(G, 2)
    assert len(H) == 6 and is_subgroup(G, H)
    S = coset_set(G, 1, 3)
    assert len(S) == 6
    assert all(G.elements[s][1] == 3 for s in S)


def test_two_transitivity():
    assert is_2transitive(sym(4))
    assert is_2transitive(agl1(5))
    cyclic = generate(5, [Permutation.from_cycles(5, (0, 1, 2, 3, 4))])
    assert not is_2transitive(cyclic)


def test_closure_and_incremental_generation():
    G = sym(4)
    t = G.index_of(Permutation.from_cycles(4, (0, 1)))
    c = G.index_of(Permutation.from_cycles(4, (0, 1, 2, 3)))
    assert len(closure(G, [t])) == 2
    assert len(closure(G, [t, c])) == 24
    assert set(subgroup_generated(G, [t, c])) == set(range(24))


def test_regular_normal_subgroups():
    normal = regular_normal_subgroups(sym(4))
    assert [len(N) for N in normal] == [4]
    (N,) = regular_normal_subgroups(agl1(7))
    assert len(N) == 7
    assert regular_normal_subgroups(alt(5)) == []


def test_element_orders_exponent():
    orders = element_orders(alt(5))
    assert sorted(set(orders.tolist())) == [1, 2, 3, 5]
