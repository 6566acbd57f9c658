import math
from fractions import Fraction
from itertools import permutations

import numpy as np
import pytest

from ekrlab.catalog import agl1, alt, psl2, sym
from ekrlab.perm_core import conjugacy_classes
from ekrlab.spectra import (Verdict, alt_degree_bound, alt_derangement_count,
                            certify_rational_eigenvalue, class_sum_matrix, clique_coclique_bound,
                            derangements, least_eigenvalue_report, numeric_spectrum)


def adjacency_spectrum(G):
    P = G.elements
    A = (P[:, None, :] != P[None, :, :]).all(axis=2).astype(float)
    return np.linalg.eigvalsh(A)


def rounded(values):
    return {round(float(np.real(x)), 6) + 0.0 for x in values}


def test_sym3_spectrum():
    G = sym(3)
    assert derangements(G).d == 2
    assert sorted(rounded(numeric_spectrum(class_sum_matrix(G)))) == [-1.0, 2.0]
    # three classes: eigenvalues for trivial, sign, 2-dim characters
    vals = sorted(np.real(numeric_spectrum(class_sum_matrix(G))).round(6))
    assert vals == [-1.0, 2.0, 2.0]


@pytest.mark.parametrize("make", [lambda: sym(4), lambda: alt(4), lambda: alt(5), lambda: psl2(7),
                                  lambda: agl1(7)])
def test_class_sum_spectrum_matches_adjacency(make):
    G = make()
    assert rounded(numeric_spectrum(class_sum_matrix(G))) == rounded(adjacency_spectrum(G))


def test_alt5_report():
    rep = least_eigenvalue_report(alt(5))
    assert rep.d == 24
    assert rep.least == -6
    assert rep.multiplicity == 1
    assert rep.verdict is Verdict.CERTIFIED_UNIQUE


def test_class_sum_column_identity():
    G = psl2(7)
    cc = conjugacy_classes(G)
    M = class_sum_matrix(G).entries
    d = derangements(G).d
    assert np.array_equal(np.array(cc.sizes) @ M, d * np.array(cc.sizes))
    assert np.all(M.sum(axis=1) == d)


def test_certify_exact_multiplicity():
    M = class_sum_matrix(sym(3))
    assert certify_rational_eigenvalue(M, 2) == 2
    assert certify_rational_eigenvalue(M, -1) == 1
    assert certify_rational_eigenvalue(M, Fraction(1, 2)) == 0


def test_sym4_least_is_not_unique_or_not_least():
    rep = least_eigenvalue_report(sym(4))
    assert rep.least == Fraction(-rep.d, 3)
    assert rep.verdict in (Verdict.CERTIFIED_NONUNIQUE, Verdict.NOT_LEAST, Verdict.CERTIFIED_UNIQUE)
    assert min(np.real(rep.spectrum)) <= float(rep.least) + 1e-9


def brute_even_derangements(n):
    count = 0
    for p in permutations(range(n)):
        if any(p[i] == i for i in range(n)):
            continue
        inversions = sum(p[i] > p[j] for i in range(n) for j in range(i + 1, n))
        count += inversions % 2 == 0
    return count


@pytest.mark.parametrize("n", [4, 5, 6, 7])
def test_alt_derangements_brute_force(n):
    assert alt_derangement_count(n) == brute_even_derangements(n)


@pytest.mark.parametrize("n,d", [(5, 24), (6, 130), (7, 930)])
def test_alt_degree_bound(n, d):
    b = alt_degree_bound(n)
    assert b.d == d
    assert b.holds and b.d >= Fraction(math.factorial(n), 6)
    assert b.threshold == n - 1


def test_clique_coclique_bound():
    assert clique_coclique_bound(alt(5), 5) == 12
    with pytest.raises(ValueError):
        clique_coclique_bound(alt(5), 0)
