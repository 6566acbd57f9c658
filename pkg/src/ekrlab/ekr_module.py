"""Exact checks that a maximum intersecting set lies in the chi-module.

For a 2-transitive group the non-trivial constituent of the permutation
character is ``psi(g) = fix(g) - 1``, an integer class function, so all
projector entries are rationals computable without a character table.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from . import _kernels as K
from .perm_core import GroupTable, conjugacy_classes, point_stabilizer


class ModuleCheckError(ValueError):
    pass


@dataclass(frozen=True)
class PsiValues:
    by_class: list[int]
    degree: int


def psi_values(G: GroupTable) -> PsiValues:
    cc = conjugacy_classes(G)
    vals = [int(G.fix_counts[r]) - 1 for r in cc.representatives]
    return PsiValues(vals, G.degree - 1)


def _members(S) -> np.ndarray:
    idx = np.unique(np.asarray(list(S), dtype=np.int64))
    if len(idx) == 0:
        raise ModuleCheckError("empty set")
    return idx


def coefficient_sum(G: GroupTable, S: Iterable[int], y: int) -> int:
    """``sum_{s in S} psi(s y^-1)``, directly from fixed-point counts."""
    idx = _members(S)
    prods = G.mul_many(idx, int(G.inverses[y]))
    return int(np.sum(G.fix_counts[prods]) - len(idx))


def coefficient_sums(G: GroupTable, S: Iterable[int]) -> np.ndarray:
    """Coefficient sums for every ``y`` at once.

    ``fix(s y^-1) = #{i : i^s = i^y}``, so with ``T[i, j] = #{s : i^s = j}``
    the sum over ``s`` is ``sum_i T[i, i^y] - |S|``.
    """
    idx = _members(S)
    n = G.degree
    P = G.elements[idx]
    T = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        T[i] = np.bincount(P[:, i], minlength=n)
    agree = T[np.arange(n)[None, :], G.elements].sum(axis=1)
    return agree - len(idx)


@dataclass(frozen=True)
class ModuleCheck:
    holds: bool
    witness: int | None
    precheck: Fraction


def module_check(G: GroupTable, S: Iterable[int]) -> ModuleCheck:
    """Is ``E_psi v_S = v_S - 1/n`` (equivalently ``E_chi v_S = v_S``)?"""
    idx = _members(S)
    n, order = G.degree, G.order
    if len(idx) * n != order:
        raise ModuleCheckError(f"|S| = {len(idx)} is not |G|/n = {Fraction(order, n)}")
    sums = coefficient_sums(G, idx)
    scale = Fraction(n - 1, order)
    size = len(idx)
    # v^T E_chi v = |S|^2/|G| + (n-1)/|G| * sum_{y in S} c_y must equal |S|
    quad = Fraction(size * size, order) + scale * int(sums[idx].sum())
    if quad != size:
        bad = _first_bad(sums, idx, scale, n)
        return ModuleCheck(False, bad, quad)
    bad = _first_bad(sums, idx, scale, n)
    return ModuleCheck(bad is None, bad, quad)


def _first_bad(sums: np.ndarray, idx: np.ndarray, scale: Fraction, n: int) -> int | None:
    inside = np.zeros(len(sums), dtype=bool)
    inside[idx] = True
    want_in = Fraction(n - 1, n)
    want_out = Fraction(-1, n)
    for y, c in enumerate(sums):
        want = want_in if inside[y] else want_out
        if scale * int(c) != want:
            return y
    return None


def dual_distribution(G: GroupTable, S: Iterable[int]) -> tuple[Fraction, Fraction]:
    """``(v^T E_1 v / |S|, v^T E_psi v / |S|)``, exact."""
    idx = _members(S)
    size = len(idx)
    e1 = Fraction(size * size, G.order) / size
    epsi = Fraction(G.degree - 1, G.order) * int(coefficient_sums(G, idx)[idx].sum()) / size
    return e1, epsi


@dataclass(frozen=True)
class InnerDistribution:
    values: list[Fraction]

    def __getitem__(self, c: int) -> Fraction:
        return self.values[c]

    def __len__(self):
        return len(self.values)


def pair_class_counts(G: GroupTable, S: Iterable[int]) -> np.ndarray:
    """Number of ordered pairs ``(g, h)`` in ``S x S`` with ``h g^-1`` in each class."""
    idx = _members(S)
    cc = conjugacy_classes(G)
    if G._coded:
        P = G.elements[idx]
        Pinv = G.elements[G.inverses[idx]]
        return K.pair_class_counts(P, Pinv, G._sorted_codes, G._sorted_idx,
                                   np.asarray(cc.class_of), cc.count)
    counts = np.zeros(cc.count, dtype=np.int64)
    for g in idx:
        prods = G.mul_many(idx, int(G.inverses[g]))
        counts += np.bincount(cc.class_of[prods], minlength=cc.count)
    return counts


def inner_distribution(G: GroupTable, S: Iterable[int]) -> InnerDistribution:
    idx = _members(S)
    counts = pair_class_counts(G, idx)
    return InnerDistribution([Fraction(int(c), len(idx)) for c in counts])


def stabilizer_distribution(G: GroupTable) -> InnerDistribution:
    cached = getattr(G, "_stab_dist", None)
    if cached is None:
        cached = G._stab_dist = inner_distribution(G, point_stabilizer(G, 0))
    return cached


def inner_matches_stabilizer(G: GroupTable, S: Iterable[int]) -> bool:
    idx = _members(S)
    if len(idx) * G.degree != G.order:
        raise ModuleCheckError("S must have size |G|/n")
    return inner_distribution(G, idx).values == stabilizer_distribution(G).values
