"""Maximum intersecting sets: canonical ones, exact search, classification.

The search partitions the group into cliques of the derangement graph
and picks at most one vertex per clique. Vertex sets are Python ints
used as bitsets; ``compat[v]`` is the set of elements agreeing with
``v`` somewhere, i.e. the union over points ``i`` of ``S_{i, i^v}``.
"""
from __future__ import annotations

import random
import sys
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import _kernels as K
from .perm_core import (GroupTable, closure, coset_set, is_subgroup, perm_order,
                        regular_normal_subgroups, NotAttempted)
from .spectra import derangements

DEFAULT_BUDGET = 2_000_000
REGULAR_PAIR_BUDGET = 20_000


def _mask(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << int(i)
    return m


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _bool_to_mask(flags: np.ndarray) -> int:
    packed = np.packbits(flags.astype(np.uint8), bitorder="little")
    return int.from_bytes(packed.tobytes(), "little")


@dataclass(frozen=True)
class Coclique:
    members: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(sorted(int(m) for m in self.members)))

    @property
    def size(self) -> int:
        return len(self.members)

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def array(self) -> np.ndarray:
        return np.array(self.members, dtype=np.int64)


def is_coclique(G: GroupTable, S: Iterable[int]) -> bool:
    """Pairwise test: every ``s t^-1`` has a fixed point."""
    idx = np.unique(np.fromiter(S, dtype=np.int64))
    if len(idx) < 2:
        return True
    return bool(K.all_pairs_intersect(G.elements[idx]))


def canonical_cocliques(G: GroupTable) -> list[Coclique]:
    """All ``S_{i,j} = {g : i^g = j}`` in row-major ``(i, j)`` order."""
    if not G.is_transitive():
        raise ValueError("canonical cocliques need a transitive group")
    n = G.degree
    return [Coclique(tuple(coset_set(G, i, j))) for i in range(n) for j in range(n)]


# --------------------------------------------------------------------------
# cliques and clique covers
# --------------------------------------------------------------------------

class _Bitsets:
    """Per-element compatibility masks for one group (cached on the table)."""

    def __init__(self, G: GroupTable):
        n = G.degree
        inc = [[_bool_to_mask(G.elements[:, i] == j) for j in range(n)] for i in range(n)]
        self.incidence = inc
        compat = []
        for row in G.elements:
            m = 0
            for i, j in enumerate(row):
                m |= inc[i][j]
            compat.append(m)
        self.compat = compat
        self.full = (1 << G.order) - 1


def bitsets(G: GroupTable) -> _Bitsets:
    cached = getattr(G, "_bitsets", None)
    if cached is None:
        cached = G._bitsets = _Bitsets(G)
    return cached


def find_clique(G: GroupTable, size: int, budget: int = 200_000) -> np.ndarray | None:
    """A clique of the given size containing the identity, by backtracking."""
    der = derangements(G).indices
    if size <= 1:
        return np.array([0], dtype=np.int64)
    P = G.elements[der]
    nodes = 0

    def rec(chosen: list[int], cand: np.ndarray):
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise NotAttempted("clique search budget exhausted")
        if len(chosen) == size - 1:
            return chosen
        if len(chosen) + len(cand) < size - 1:
            return None
        for t, c in enumerate(cand):
            rest = cand[t + 1:]
            rest = rest[(P[rest] != P[c][None, :]).all(axis=1)]
            got = rec(chosen + [int(c)], rest)
            if got is not None:
                return got
        return None

    try:
        got = rec([], np.arange(len(der)))
    except NotAttempted:
        return None
    if got is None:
        return None
    return np.sort(np.concatenate([[0], der[got]])).astype(np.int64)


def regular_subgroup(G: GroupTable, budget: int = REGULAR_PAIR_BUDGET) -> tuple[np.ndarray, str] | None:
    """A subgroup of order n whose non-identity elements are derangements.

    Tried in order: a regular normal subgroup, a cyclic group of a
    derangement of order n, a subgroup generated by two derangements.
    """
    n = G.degree
    try:
        normal = regular_normal_subgroups(G)
    except NotAttempted:
        normal = []
    if normal:
        return normal[0], "regular-normal"
    der = derangements(G).indices
    fix = G.fix_counts
    for d in der:
        if perm_order(G.perm(int(d))) == n:
            H = closure(G, [int(d)])
            if np.all(fix[H[1:]] == 0):
                return H, "cyclic"
    from .perm_core import conjugacy_classes
    cc = conjugacy_classes(G)
    reps = [r for r in cc.representatives if fix[r] == 0 and n % perm_order(G.perm(r)) == 0]
    tries = 0
    for a in reps:
        for b in der:
            if n % perm_order(G.perm(int(b))):
                continue
            tries += 1
            if tries > budget:
                return None
            H = _bounded_closure(G, [a, int(b)], n)
            if H is not None and len(H) == n and np.all(fix[H[1:]] == 0):
                return H, "regular-pair"
    return None


def _bounded_closure(G: GroupTable, gens: list[int], limit: int) -> np.ndarray | None:
    member = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = G.mul(x, g)
                if y not in member:
                    member.add(y)
                    if len(member) > limit:
                        return None
                    nxt.append(y)
        frontier = nxt
    return np.array(sorted(member), dtype=np.int64)


@dataclass(frozen=True)
class CliqueCover:
    cliques: list[np.ndarray]
    kind: str
    # largest clique known; gives |G| // omega as an upper bound on cocliques
    omega: int
    omega_witness: np.ndarray = field(repr=False)

    @property
    def count(self) -> int:
        return len(self.cliques)

    @property
    def bound(self) -> int:
        """Coclique size bound: one vertex per part, and the clique-coclique bound."""
        return min(self.count, self.fractional_bound)

    @property
    def fractional_bound(self) -> int:
        total = sum(len(c) for c in self.cliques)
        return total // self.omega


def clique_cover(G: GroupTable) -> CliqueCover:
    cached = getattr(G, "_cover", None)
    if cached is not None:
        return cached
    reg = regular_subgroup(G)
    if reg is not None:
        R, kind = reg
        covered = np.zeros(G.order, dtype=bool)
        cliques = []
        for g in range(G.order):
            if not covered[g]:
                coset = np.sort(G.mul_many(R, g))
                covered[coset] = True
                cliques.append(coset)
        cover = CliqueCover(cliques, kind, len(R), R)
    else:
        cover = _greedy_cover(G)
    G._cover = cover
    return cover


def _greedy_cover(G: GroupTable) -> CliqueCover:
    best = None
    for size in range(G.degree, 0, -1):
        best = find_clique(G, size)
        if best is not None:
            break
    assert best is not None
    covered = np.zeros(G.order, dtype=bool)
    cliques = []
    for g in range(G.order):
        tr = np.sort(G.mul_many(best, g))
        if not covered[tr].any():
            covered[tr] = True
            cliques.append(tr)
    E = G.elements
    for v in range(G.order):
        if covered[v]:
            continue
        members = [v]
        covered[v] = True
        for w in np.flatnonzero(~covered):
            if all(np.all(E[w] != E[m]) for m in members):
                members.append(int(w))
                covered[w] = True
        cliques.append(np.array(sorted(members), dtype=np.int64))
    return CliqueCover(cliques, "greedy", len(best), best)


# --------------------------------------------------------------------------
# census
# --------------------------------------------------------------------------

@dataclass
class CocliqueCensus:
    target: int
    found: list[Coclique]
    complete: bool
    total: int
    canonical_count: int
    noncanonical_count: int
    truncated_at: int | None
    nodes: int
    cover_kind: str
    cover_bound: int
    gated: bool = False
    budget_exhausted: bool = False


def exhaustive_allowed(G: GroupTable, cover: CliqueCover | None = None) -> bool:
    cover = cover or clique_cover(G)
    return (cover.count <= 48 and G.degree <= 16) or G.order <= 400


class _Stop(Exception):
    pass


def max_cocliques(G: GroupTable, limit: int = 10, exhaustive: bool = False,
                  target: int | None = None, budget: int = DEFAULT_BUDGET,
                  seed: int | None = None) -> CocliqueCensus:
    """Branch-and-bound search for cocliques of size ``target`` (default |G|/n).

    In exhaustive mode every coclique of that size is visited (and
    counted; at most ``limit`` are kept). Otherwise the search stops after
    ``limit`` hits, which makes the census a sample.
    """
    if limit < 1:
        raise ValueError("limit must be positive")
    n = G.degree
    if target is None:
        target = G.order // n
    cover = clique_cover(G)
    gated = exhaustive and not exhaustive_allowed(G, cover)
    exhaustive = exhaustive and not gated
    canon = {_mask(c.members) for c in canonical_cocliques(G)} if G.is_transitive() else set()

    if cover.bound < target:
        return CocliqueCensus(target, [], True, 0, 0, 0, None, 0, cover.kind, cover.bound, gated)

    bs = bitsets(G)
    compat = bs.compat
    masks = [_mask(c) for c in cover.cliques]
    rng = random.Random(seed) if seed is not None else None
    found: list[Coclique] = []
    stats = {"total": 0, "canon": 0, "nodes": 0}
    exhausted = False

    def record(mask: int):
        stats["total"] += 1
        if mask in canon:
            stats["canon"] += 1
        if len(found) < limit:
            found.append(Coclique(tuple(_bits(mask))))
        elif not exhaustive:
            raise _Stop

    def rec(chosen: int, size: int, cand: int, remaining: list[int]):
        stats["nodes"] += 1
        if stats["nodes"] > budget:
            raise _Stop("budget")
        if size == target:
            record(chosen)
            return
        live = []
        for c in remaining:
            cnt = (cand & masks[c]).bit_count()
            if cnt:
                live.append((cnt, c))
        if size + len(live) < target:
            return
        if size + 1 == target:
            for _, c in live:
                for v in _bits(cand & masks[c]):
                    record(chosen | (1 << v))
            return
        cnt, c = min(live)
        rest = [x for _, x in live if x != c]
        options = _bits(cand & masks[c])
        if rng is not None:
            rng.shuffle(options)
        for v in options:
            rec(chosen | (1 << v), size + 1, cand & compat[v], rest)
        if size + len(rest) >= target:
            rec(chosen, size, cand, rest)

    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 4 * target + 1000))
    try:
        rec(0, 0, bs.full, list(range(len(masks))))
        complete = True
    except _Stop as stop:
        complete = False
        exhausted = bool(stop.args and stop.args[0] == "budget")
    finally:
        sys.setrecursionlimit(old)

    for S in found:
        if not is_coclique(G, S.members) or S.size != target:
            raise AssertionError("search produced an invalid coclique")
    truncated = limit if stats["total"] > len(found) else None
    return CocliqueCensus(
        target=target, found=found, complete=complete, total=stats["total"],
        canonical_count=stats["canon"], noncanonical_count=stats["total"] - stats["canon"],
        truncated_at=truncated, nodes=stats["nodes"], cover_kind=cover.kind,
        cover_bound=cover.bound, gated=gated, budget_exhausted=exhausted)


def ekr_bound_certificate(G: GroupTable) -> dict:
    """Evidence that no coclique exceeds |G|/n."""
    cover = clique_cover(G)
    n = G.degree
    target = G.order // n
    census = max_cocliques(G, limit=1, exhaustive=True, target=target + 1)
    return {
        "target": target,
        "cover_kind": cover.kind,
        "cover_cliques": cover.count,
        "omega": cover.omega,
        "clique_coclique_bound": G.order // cover.omega,
        "plus_one_found": census.total,
        "plus_one_complete": census.complete,
        "nodes": census.nodes,
    }


# --------------------------------------------------------------------------
# classification
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Classification:
    canonical: bool
    matching: tuple[int, int] | None
    is_subgroup: bool
    is_coset_of_subgroup: bool


def classify(S: Coclique | Sequence[int], G: GroupTable) -> Classification:
    members = np.unique(np.asarray(list(S), dtype=np.int64))
    n = G.degree
    match = None
    if len(members) * n == G.order:
        first = G.elements[members[0]]
        for i in range(n):
            j = int(first[i])
            if np.all(G.elements[members, i] == j) and len(coset_set(G, i, j)) == len(members):
                match = (i, j)
                break
    sub = is_subgroup(G, members)
    coset = sub
    if not coset:
        s_inv = int(G.inverses[members[0]])
        right = G.mul_many(members, s_inv)   # S s^-1
        left = G.mul_many(np.full(len(members), s_inv), members)  # s^-1 S
        coset = is_subgroup(G, right) or is_subgroup(G, left)
    return Classification(match is not None, match, sub, coset)
