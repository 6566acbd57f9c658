"""Structure of the derangement graph.

The graph is never stored: ``g ~ h`` iff ``g h^-1`` is a derangement iff
``g`` and ``h`` disagree on every point.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from . import _kernels as K
from .perm_core import (GroupTable, closure, is_2transitive, point_stabilizer,
                        regular_normal_subgroups, subgroup_generated)
from .spectra import derangements


class PreconditionError(ValueError):
    pass


def adjacent(G: GroupTable, g: int, h: int) -> bool:
    return bool(np.all(G.elements[g] != G.elements[h]))


@dataclass(frozen=True)
class ComponentStructure:
    generated: np.ndarray
    component_count: int

    @property
    def is_connected(self) -> bool:
        return self.component_count == 1


def connectivity(G: GroupTable) -> ComponentStructure:
    """Components of a Cayley graph are the cosets of ``<Der>``."""
    H = subgroup_generated(G, derangements(G).indices)
    return ComponentStructure(H, G.order // len(H))


def neighbours(G: GroupTable, g: int) -> np.ndarray:
    return np.flatnonzero((G.elements != G.elements[g][None, :]).all(axis=1))


def is_disjoint_clique_union(G: GroupTable) -> bool:
    """True iff ``Der u {1}`` is a subgroup (components are then its cosets)."""
    der = derangements(G).indices
    return len(closure(G, der)) == len(der) + 1


def _check_regular_normal(G: GroupTable, N) -> np.ndarray:
    N = np.unique(np.asarray(N, dtype=np.int64))
    if len(N) != G.degree or N[0] != 0:
        raise PreconditionError("N must have order equal to the degree")
    if np.any(G.fix_counts[N[1:]] != 0):
        raise PreconditionError("N does not act regularly")
    if len(closure(G, N)) != len(N):
        raise PreconditionError("N is not a subgroup")
    member = np.zeros(G.order, dtype=bool)
    member[N] = True
    for g in G.generators:
        if not member[G.conjugate_all(g)[N]].all():
            raise PreconditionError("N is not normal")
    return N


def default_normal(G: GroupTable, N=None) -> np.ndarray:
    if N is None:
        found = regular_normal_subgroups(G)
        if not found:
            raise PreconditionError("group has no regular normal subgroup")
        N = found[0]
    return _check_regular_normal(G, N)


@dataclass(frozen=True)
class CosetFlag:
    h: int
    direct: bool
    centralizer: bool


def coset_derangement_profile(G: GroupTable, N=None, x: int = 0) -> list[CosetFlag]:
    """For each ``h`` in ``G_x``: does ``Nh`` contain a derangement?

    Answered twice, by scanning the coset and by asking whether ``h``
    commutes with some non-identity element of ``N``.
    """
    N = default_normal(G, N)
    nontrivial = N[1:]
    out = []
    for h in point_stabilizer(G, x):
        h = int(h)
        coset = G.mul_many(N, h)
        direct = bool(np.any(G.fix_counts[coset] == 0))
        hu = G.mul_many(np.full(len(nontrivial), h), nontrivial)
        uh = G.mul_many(nontrivial, h)
        cent = bool(np.any(hu == uh))
        out.append(CosetFlag(h, direct, cent))
    return out


@dataclass(frozen=True)
class TwoPointGeneration:
    der_generated: np.ndarray
    stabilizer_generated: np.ndarray

    @property
    def equal(self) -> bool:
        return np.array_equal(self.der_generated, self.stabilizer_generated)


def two_point_stabilizer_generation(G: GroupTable, N=None, x: int = 0) -> TwoPointGeneration:
    if not is_2transitive(G):
        raise PreconditionError("needs a 2-transitive group")
    N = default_normal(G, N)
    M = subgroup_generated(G, derangements(G).indices)
    Gx = G.elements[:, x] == x
    seed: list[int] = [int(u) for u in N]
    for y in range(G.degree):
        if y != x:
            seed.extend(int(h) for h in np.flatnonzero(Gx & (G.elements[:, y] == y)))
    M2 = subgroup_generated(G, seed)
    return TwoPointGeneration(M, M2)


def two_point_stabilizers_trivial(G: GroupTable) -> bool:
    """Every element fixing two points is the identity."""
    return bool(np.all(G.fix_counts[1:] <= 1))


def frobenius_by_derangements(G: GroupTable, N) -> bool:
    der = derangements(G).indices
    return np.array_equal(np.sort(der), np.sort(np.asarray(N)[1:]))


class EquitableError(ValueError):
    pass


def equitable_check(G: GroupTable, S: Iterable[int]) -> bool:
    """Does every vertex outside ``S`` have exactly ``d/(n-1)`` neighbours in ``S``?"""
    S = np.unique(np.fromiter(S, dtype=np.int64))
    n = G.degree
    if len(S) * n != G.order:
        raise EquitableError(f"|S| = {len(S)}, expected {G.order // n}")
    P = G.elements[S]
    if not K.all_pairs_intersect(P):
        raise EquitableError("S is not a coclique")
    d = derangements(G).d
    if d % (n - 1):
        raise EquitableError(f"(n-1) = {n - 1} does not divide d = {d}")
    outside = np.ones(G.order, dtype=bool)
    outside[S] = False
    counts = K.disjoint_counts(G.elements[outside], P)
    return bool(np.all(counts == d // (n - 1)))
