"""Complements to a regular normal subgroup, and the two explicit examples.

A complement ``K`` (``K n N = 1``, ``|K| |N| = |G|``) is a coclique iff all
its elements have a fixed point: in a transitive group an element is
conjugate into a point stabilizer exactly when it fixes a point.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable

import numpy as np

from .catalog import FiniteField, agl3_2, asl2, block_matrix_perm, gf, mat_mul
from .dergraph import default_normal
from .exact import gf2_rank
from .perm_core import (GroupTable, closure, generating_pair, is_subgroup, perm_order,
                        point_stabilizer)

DEFAULT_BUDGET = 10_000_000


class ComplementError(ValueError):
    pass


@dataclass(frozen=True)
class ComplementReport:
    subgroup: np.ndarray = field(repr=False)
    is_complement: bool
    is_standard: bool
    is_coclique: bool
    derangement_witness: int | None

    @property
    def order(self) -> int:
        return len(self.subgroup)


def conjugation_table(G: GroupTable) -> np.ndarray:
    """``table[g, x]`` = index of ``g^-1 x g``."""
    cached = getattr(G, "_conj_table", None)
    if cached is None:
        cached = np.stack([G.conjugate_all(g).astype(np.int32) for g in range(G.order)])
        cached.setflags(write=False)
        G._conj_table = cached
    return cached


def conjugates(G: GroupTable, K: Iterable[int]) -> set[tuple[int, ...]]:
    """All G-conjugates of the subgroup ``K``, as sorted index tuples."""
    K = np.unique(np.asarray(list(K), dtype=np.int64))
    rows = np.sort(conjugation_table(G)[:, K], axis=1)
    return {tuple(int(x) for x in r) for r in np.unique(rows, axis=0)}


def conjugacy_key(G: GroupTable, K: Iterable[int]) -> tuple[int, ...]:
    """Least sorted conjugate of ``K``: equal keys iff G-conjugate."""
    return min(conjugates(G, K))


def complement_coclique_test(G: GroupTable, K: Iterable[int], N=None, x: int = 0) -> ComplementReport:
    K = np.unique(np.asarray(list(K), dtype=np.int64))
    if not is_subgroup(G, K):
        raise ComplementError("K is not closed under multiplication")
    N = default_normal(G, N)
    is_comp = len(np.intersect1d(K, N)) == 1 and len(K) * len(N) == G.order
    der = K[G.fix_counts[K] == 0]
    witness = int(der[0]) if len(der) else None
    Gx = point_stabilizer(G, x)
    standard = len(K) == len(Gx) and conjugacy_key(G, K) == conjugacy_key(G, Gx)
    return ComplementReport(K, is_comp, standard, witness is None, witness)


def every_element_conjugate_into_stabilizer(G: GroupTable, K: Iterable[int], x: int = 0) -> bool:
    """Literal form of the criterion, by searching conjugates (independent of fix counts)."""
    member = np.zeros(G.order, dtype=bool)
    member[point_stabilizer(G, x)] = True
    K = np.asarray(list(K), dtype=np.int64)
    pending = set(int(k) for k in K)
    for g in range(G.order):
        if not pending:
            break
        conj = G.conjugate_all(g)
        pending = {k for k in pending if not member[conj[k]]}
    return not pending


def p_element_shortcut_test(G: GroupTable, K: Iterable[int], p: int, N=None) -> bool:
    """Fixed-point test restricted to elements of ``p``-power order."""
    N = default_normal(G, N)
    if any(perm_order(G.perm(int(u))) not in (1, p) for u in N):
        raise ComplementError(f"N is not an elementary abelian {p}-group")
    K = np.unique(np.asarray(list(K), dtype=np.int64))
    if len(np.intersect1d(K, N)) != 1 or len(K) * len(N) != G.order:
        raise ComplementError("K is not a complement to N")
    for k in K:
        o = perm_order(G.perm(int(k)))
        while o % p == 0:
            o //= p
        if o == 1 and G.fix_counts[k] == 0:
            return False
    return True


@dataclass
class ComplementSearch:
    reports: list[ComplementReport]
    candidates_tried: int
    complements_found: int
    budget_exceeded: bool


def find_complements(G: GroupTable, N=None, budget: int = DEFAULT_BUDGET, x: int = 0) -> ComplementSearch:
    """Complements up to G-conjugacy, found by lifting stabilizer generators.

    Each generator ``h`` of ``G_x`` is replaced by ``u h`` for ``u`` in ``N``;
    tuples are pruned when an image changes order, then closed.
    """
    N = default_normal(G, N)
    Gx = point_stabilizer(G, x)
    gens = generating_pair(G, Gx)
    target = len(Gx)
    orders = [perm_order(G.perm(h)) for h in gens]
    lifts = []
    for h, o in zip(gens, orders):
        opts = [int(G.mul(int(u), h)) for u in N]
        lifts.append([g for g in opts if perm_order(G.perm(g)) == o])
    member_n = np.zeros(G.order, dtype=bool)
    member_n[N] = True
    seen_sets: set[tuple[int, ...]] = set()
    classes: list[np.ndarray] = []
    orbits: set[tuple[int, ...]] = set()
    steps = 0
    tried = 0
    exceeded = False
    for combo in product(*lifts):
        tried += 1
        K = closure(G, combo)
        steps += len(K) * max(1, len(combo))
        if steps > budget:
            exceeded = True
            break
        if len(K) != target or member_n[K].sum() != 1:
            continue
        key = tuple(int(k) for k in K)
        if key in seen_sets:
            continue
        seen_sets.add(key)
        if key not in orbits:
            orbits |= conjugates(G, K)
            classes.append(K)
    reports = [complement_coclique_test(G, K, N, x) for K in classes]
    reports.sort(key=lambda r: (not r.is_standard, tuple(r.subgroup)))
    return ComplementSearch(reports, tried, len(seen_sets), exceeded)


# --------------------------------------------------------------------------
# the two explicit examples
# --------------------------------------------------------------------------

@dataclass
class ASLExample:
    G: GroupTable
    field: FiniteField
    t: int
    u: int
    s: int
    standard: np.ndarray
    nonstandard: np.ndarray
    orders: tuple[int, int, int]


def _mat_index(G: GroupTable, F: FiniteField, M) -> int:
    return G.index_of(block_matrix_perm(F, M))


def asl2_nonstandard_example() -> ASLExample:
    """ASL2(4) with t, u, s as 3x3 block matrices over GF(4)."""
    F = gf(2, 2)
    alpha = F.generator
    t = [[1, 0, 0], [1, 1, 0], [0, 0, 1]]
    u = [[1, 0, 0], [0, 1, 1], [0, 0, 1]]
    s = [[0, 1, 0], [1, alpha, 0], [0, 0, 1]]
    tu = mat_mul(F, t, u)
    G = asl2(4)
    ti, ui, si, tui = (_mat_index(G, F, M) for M in (t, u, s, tu))
    orders = tuple(perm_order(G.perm(i)) for i in (ti, ui, si))
    return ASLExample(G, F, ti, ui, si, closure(G, [ti, si]), closure(G, [tui, si]), orders)


@dataclass
class AGLExample:
    G: GroupTable
    a: int
    u: int
    s: int
    au: int
    complement: np.ndarray
    standard: np.ndarray
    orders: tuple[int, int, int]
    rank_a: int
    rank_au: int


def agl32_counterexample() -> AGLExample:
    """AGL3(2) with a, u, s as 4x4 block matrices over GF(2)."""
    F = gf(2, 1)
    a = [[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
    u = [[1, 0, 0, 1], [0, 1, 0, 0], [0, 0, 1, 1], [0, 0, 0, 1]]
    s = [[0, 0, 1, 0], [1, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]]
    au = mat_mul(F, a, u)
    G = agl3_2()
    ai, ui, si, aui = (_mat_index(G, F, M) for M in (a, u, s, au))

    def minus_one(M):
        return [[(M[i][j] - (i == j)) % 2 for j in range(4)] for i in range(4)]

    orders = tuple(perm_order(G.perm(i)) for i in (ai, ui, si))
    return AGLExample(G, ai, ui, si, aui, closure(G, [aui, si]), closure(G, [ai, si]), orders,
                      gf2_rank(minus_one(a)), gf2_rank(minus_one(au)))
