import json
import math

import numpy as np
import pytest

from ekrlab.catalog import (SpecError, agammal1, agl1, agl3_2, asl2, emit_group_spec, gf, m11,
                            parse_family, parse_group_spec, pgl2, prime_power, psl2, spec_of)
from ekrlab.perm_core import conjugacy_classes, is_2transitive


@pytest.mark.parametrize("p,e", [(2, 1), (2, 2), (2, 3), (3, 2), (5, 1), (7, 1)])
def test_field_axioms(p, e):
    F = gf(p, e)
    q = F.q
    for a in range(q):
        assert F.add[a, 0] == a and F.mul[a, 1] == a
        assert F.add[a, F.neg[a]] == 0
        if a:
            assert F.mul[a, F.inv[a]] == 1
    # distributivity on a sample
    for a in range(q):
        for b in range(q):
            c = (a + b + 1) % q
            assert F.mul[a, F.add[b, c]] == F.add[F.mul[a, b], F.mul[a, c]]
    assert F.element_order(F.generator) == q - 1


def test_gf4_generator_cubes_to_one():
    F = gf(2, 2)
    a = F.generator
    assert F.power(a, 3) == 1 and a not in (0, 1)
    assert F.add[F.mul[a, a], F.add[a, 1]] == 0


def test_prime_power():
    assert prime_power(8) == (2, 3)
    assert prime_power(9) == (3, 2)
    with pytest.raises(ValueError):
        prime_power(6)


@pytest.mark.parametrize("G,order", [
    (lambda: psl2(5), 60), (lambda: psl2(7), 168), (lambda: psl2(8), 504), (lambda: psl2(11), 660),
    (lambda: pgl2(5), 120), (lambda: agl1(8), 56), (lambda: agammal1(2, 3), 168),
    (lambda: agammal1(3, 2), 144), (lambda: asl2(4), 960), (lambda: agl3_2(), 1344),
    (lambda: m11(), 7920)])
def test_family_orders_and_2transitivity(G, order):
    H = G()
    assert H.order == order
    assert is_2transitive(H)


def test_psl27_classes():
    assert sorted(conjugacy_classes(psl2(7)).sizes) == [1, 21, 24, 24, 42, 56]


def test_m11_class_count():
    cc = conjugacy_classes(m11())
    assert cc.count == 10
    assert sum(cc.sizes) == 7920


def test_parse_family():
    assert parse_family("agammal1:3,2").order == 144
    assert parse_family("agl3_2").degree == 8
    with pytest.raises(ValueError):
        parse_family("psl2:6")
    with pytest.raises(ValueError):
        parse_family("unknown:3")


def test_spec_round_trip():
    G = psl2(5)
    text = emit_group_spec(spec_of(G))
    H = parse_group_spec(text).build()
    assert H.order == G.order and H.degree == G.degree
    assert {tuple(r) for r in H.elements.tolist()} == {tuple(r) for r in G.elements.tolist()}


def test_spec_one_based():
    text = json.dumps({"degree": 4, "generators": [[2, 1, 3, 4], [2, 3, 4, 1]], "one_based": True})
    assert parse_group_spec(text).build().order == 24


@pytest.mark.parametrize("text", [
    "not json",
    json.dumps({"degree": 3}),
    json.dumps({"degree": 3, "generators": [[0, 0, 1]]}),
    json.dumps({"degree": 3, "generators": [[0, 1]]}),
    json.dumps({"degree": 0, "generators": []}),
])
def test_spec_errors(text):
    with pytest.raises(SpecError):
        parse_group_spec(text)
