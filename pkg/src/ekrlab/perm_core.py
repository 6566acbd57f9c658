"""Permutation arithmetic and enumeration of small permutation groups.

Points are ``0..n-1`` and groups act on the right: ``i^(pq) = (i^p)^q``,
so ``compose(p, q)`` applies ``p`` first.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from . import _kernels as K

DEFAULT_CAP = 20_000
# |G| x |G| product table is cached only up to this order.
TABLE_LIMIT = 4_096
# Normal-subgroup search enumerates class subsets only up to this class count.
MAX_CLASSES_FOR_NORMAL_SEARCH = 24


class GroupTooLarge(RuntimeError):
    """Closure exceeded the element cap."""


class NotAttempted(RuntimeError):
    """Search skipped because it would be exponential in the input."""


@dataclass(frozen=True)
class Permutation:
    images: tuple[int, ...]

    def __post_init__(self):
        imgs = tuple(int(i) for i in self.images)
        if sorted(imgs) != list(range(len(imgs))):
            raise ValueError(f"not a bijection on 0..{len(imgs) - 1}: {list(imgs)}")
        object.__setattr__(self, "images", imgs)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def __repr__(self):
        return f"Permutation({list(self.images)})"

    @classmethod
    def from_cycles(cls, n: int, *cycles: Sequence[int]) -> "Permutation":
        imgs = list(range(n))
        for cyc in cycles:
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                imgs[a] = b
        return cls(tuple(imgs))


def identity(n: int) -> Permutation:
    return Permutation(tuple(range(n)))


def compose(p: Permutation, q: Permutation) -> Permutation:
    """Apply ``p`` then ``q``."""
    if p.degree != q.degree:
        raise ValueError(f"degree mismatch: {p.degree} vs {q.degree}")
    return Permutation(tuple(q.images[i] for i in p.images))


def inverse(p: Permutation) -> Permutation:
    out = [0] * p.degree
    for i, j in enumerate(p.images):
        out[j] = i
    return Permutation(tuple(out))


def fixed_points(p: Permutation) -> set[int]:
    return {i for i, j in enumerate(p.images) if i == j}


def perm_order(p: Permutation) -> int:
    """Order of ``p`` as the lcm of its cycle lengths."""
    seen = [False] * p.degree
    order = 1
    for start in range(p.degree):
        if seen[start]:
            continue
        length, i = 0, start
        while not seen[i]:
            seen[i] = True
            i = p.images[i]
            length += 1
        order = order * length // np.gcd(order, length)
    return int(order)


class GroupTable:
    """A fully enumerated permutation group.

    ``elements`` is an ``(order, degree)`` integer array in breadth-first
    order from the identity; element indices refer to its rows.
    """

    def __init__(self, degree: int, elements: np.ndarray, generators: list[int],
                 name: str | None = None):
        self.degree = int(degree)
        self.elements = np.ascontiguousarray(elements, dtype=np.int64)
        self.elements.setflags(write=False)
        self.generators = list(generators)
        self.name = name
        self.order = len(self.elements)
        self._coded = self.degree <= K.MAX_CODED_DEGREE
        if self._coded:
            codes = K.perm_codes(self.elements)
            self._sorted_idx = np.argsort(codes, kind="stable")
            self._sorted_codes = codes[self._sorted_idx]
        else:
            self._dict = {row.tobytes(): i for i, row in enumerate(self.elements)}
        self.inverses = self.lookup(K.inverse_rows(self.elements))
        self.inverses.setflags(write=False)

    def __repr__(self):
        label = self.name or "G"
        return f"<GroupTable {label}: degree {self.degree}, order {self.order}>"

    def __len__(self):
        return self.order

    # -- element lookup ---------------------------------------------------

    def lookup(self, perms: np.ndarray) -> np.ndarray:
        """Element indices of the rows of ``perms``; raises if any is absent."""
        perms = np.atleast_2d(np.asarray(perms, dtype=np.int64))
        if self._coded:
            codes = K.perm_codes(perms)
            pos = np.searchsorted(self._sorted_codes, codes)
            pos = np.minimum(pos, self.order - 1)
            if not np.array_equal(self._sorted_codes[pos], codes):
                raise KeyError("permutation not in group")
            return self._sorted_idx[pos]
        try:
            return np.array([self._dict[np.ascontiguousarray(r).tobytes()] for r in perms],
                            dtype=np.int64)
        except KeyError:
            raise KeyError("permutation not in group") from None

    def contains(self, perm: Permutation | Sequence[int]) -> bool:
        imgs = perm.images if isinstance(perm, Permutation) else perm
        try:
            self.lookup(np.asarray(imgs)[None, :])
        except KeyError:
            return False
        return True

    def index_of(self, perm: Permutation | Sequence[int]) -> int:
        imgs = perm.images if isinstance(perm, Permutation) else perm
        return int(self.lookup(np.asarray(imgs)[None, :])[0])

    @cached_property
    def index(self) -> dict[tuple[int, ...], int]:
        return {tuple(int(x) for x in row): i for i, row in enumerate(self.elements)}

    def perm(self, i: int) -> Permutation:
        return Permutation(tuple(int(x) for x in self.elements[i]))

    # -- multiplication ---------------------------------------------------

    @cached_property
    def table(self) -> np.ndarray | None:
        """``table[a, b]`` = index of ``a*b``; only for order <= TABLE_LIMIT."""
        if self.order > TABLE_LIMIT:
            return None
        tab = np.empty((self.order, self.order), dtype=np.int64)
        for b in range(self.order):
            tab[:, b] = self.lookup(self.elements[b][self.elements])
        tab.setflags(write=False)
        return tab

    def mul(self, a: int, b: int) -> int:
        tab = self.table
        if tab is not None:
            return int(tab[a, b])
        return int(self.lookup(self.elements[b][self.elements[a]][None, :])[0])

    def mul_many(self, left: np.ndarray, right: int | np.ndarray) -> np.ndarray:
        """Indices of ``left[k] * right`` (or ``left[k] * right[k]``)."""
        left = np.asarray(left, dtype=np.int64)
        tab = self.table
        if tab is not None:
            return tab[left, right]
        if np.ndim(right) == 0:
            return self.lookup(self.elements[int(right)][self.elements[left]])
        return self.lookup(K.compose_rows(self.elements[left], self.elements[np.asarray(right)]))

    def conjugate_all(self, g: int) -> np.ndarray:
        """Index map ``x -> g^-1 x g`` over all elements."""
        ginv = self.elements[self.inverses[g]]
        prods = self.elements[g][self.elements[:, ginv]]
        return self.lookup(prods)

    # -- action -----------------------------------------------------------

    @cached_property
    def fix_counts(self) -> np.ndarray:
        """Number of fixed points of every element (the permutation character)."""
        out = (self.elements == np.arange(self.degree)[None, :]).sum(axis=1)
        out.setflags(write=False)
        return out

    def orbit(self, x: int) -> list[int]:
        seen = {x}
        queue = deque([x])
        gens = [self.elements[g] for g in self.generators]
        while queue:
            y = queue.popleft()
            for g in gens:
                z = int(g[y])
                if z not in seen:
                    seen.add(z)
                    queue.append(z)
        return sorted(seen)

    def is_transitive(self) -> bool:
        return self.degree <= 1 or len(self.orbit(0)) == self.degree


def generate(degree: int, gens: Iterable[Permutation | Sequence[int]], cap: int = DEFAULT_CAP,
             name: str | None = None) -> GroupTable:
    """Enumerate ``<gens>`` breadth-first from the identity."""
    if cap < 1:
        raise ValueError("cap must be at least 1")
    gen_rows = []
    for g in gens:
        imgs = g.images if isinstance(g, Permutation) else tuple(g)
        if len(imgs) != degree:
            raise ValueError(f"generator of degree {len(imgs)} in a degree-{degree} group")
        Permutation(imgs)
        gen_rows.append(tuple(int(i) for i in imgs))
    ident = tuple(range(degree))
    seen = {ident: 0}
    elements = [ident]
    queue = deque([ident])
    while queue:
        p = queue.popleft()
        for g in gen_rows:
            r = tuple(g[i] for i in p)
            if r not in seen:
                if len(elements) >= cap:
                    raise GroupTooLarge(f"more than {cap} elements")
                seen[r] = len(elements)
                elements.append(r)
                queue.append(r)
    gen_idx = [seen[g] for g in gen_rows]
    arr = np.array(elements, dtype=np.int64).reshape(len(elements), degree)
    return GroupTable(degree, arr, gen_idx, name=name)


@dataclass(frozen=True)
class ConjugacyClasses:
    class_of: np.ndarray
    representatives: list[int]
    sizes: list[int]
    inverse_class: list[int]
    members: list[np.ndarray] = field(repr=False)

    @property
    def count(self) -> int:
        return len(self.sizes)


def conjugacy_classes(G: GroupTable) -> ConjugacyClasses:
    cached = getattr(G, "_classes", None)
    if cached is not None:
        return cached
    gens = G.generators or [0]
    rows, cols = [], []
    for g in gens:
        rows.append(np.arange(G.order))
        cols.append(G.conjugate_all(g))
    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    graph = coo_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(G.order, G.order))
    _, labels = connected_components(graph, directed=True, connection="weak")
    # relabel by least member so class 0 is the identity and order is reproducible
    first = {}
    for i, lab in enumerate(labels):
        if lab not in first:
            first[lab] = i
    order = sorted(first, key=first.get)
    relabel = np.empty(len(order), dtype=np.int64)
    for new, old in enumerate(order):
        relabel[old] = new
    class_of = relabel[labels]
    class_of.setflags(write=False)
    members = [np.flatnonzero(class_of == c) for c in range(len(order))]
    reps = [int(m[0]) for m in members]
    inv_class = [int(class_of[G.inverses[r]]) for r in reps]
    cc = ConjugacyClasses(class_of, reps, [len(m) for m in members], inv_class, members)
    G._classes = cc
    return cc


def point_stabilizer(G: GroupTable, x: int) -> np.ndarray:
    """Indices of ``{g : x^g = x}``."""
    if not 0 <= x < G.degree:
        raise ValueError(f"point {x} out of range")
    return np.flatnonzero(G.elements[:, x] == x)


def coset_set(G: GroupTable, i: int, j: int) -> np.ndarray:
    """Indices of ``{g : i^g = j}``."""
    return np.flatnonzero(G.elements[:, i] == j)


def is_2transitive(G: GroupTable) -> bool:
    n = G.degree
    if n < 2:
        raise ValueError("2-transitivity needs degree >= 2")
    gens = [G.elements[g] for g in G.generators]
    start = (0, 1)
    seen = {start}
    queue = deque([start])
    while queue:
        a, b = queue.popleft()
        for g in gens:
            pair = (int(g[a]), int(g[b]))
            if pair not in seen:
                seen.add(pair)
                queue.append(pair)
    return len(seen) == n * (n - 1)


def closure(G: GroupTable, gens: Iterable[int]) -> np.ndarray:
    """Sorted indices of the subgroup generated by element indices ``gens``."""
    gens = sorted({int(g) for g in gens} - {0})
    member = np.zeros(G.order, dtype=bool)
    member[0] = True
    frontier = np.array([0], dtype=np.int64)
    while len(frontier):
        fresh = []
        for g in gens:
            prods = G.mul_many(frontier, g)
            new = prods[~member[prods]]
            if len(new):
                new = np.unique(new)
                member[new] = True
                fresh.append(new)
        frontier = np.concatenate(fresh) if fresh else np.empty(0, dtype=np.int64)
    return np.flatnonzero(member)


def subgroup_generated(G: GroupTable, seed: Iterable[int]) -> np.ndarray:
    """Closure of ``seed`` as a sorted index array.

    Seed elements already inside the running subgroup are skipped, so the
    closure is recomputed at most ``log2 |G|`` times.
    """
    gens: list[int] = []
    member = np.zeros(G.order, dtype=bool)
    member[0] = True
    current = np.array([0], dtype=np.int64)
    for s in seed:
        s = int(s)
        if member[s]:
            continue
        gens.append(s)
        current = closure(G, gens)
        member[:] = False
        member[current] = True
    return current


def is_subgroup(G: GroupTable, idx: Iterable[int]) -> bool:
    idx = np.unique(np.fromiter(idx, dtype=np.int64))
    if len(idx) == 0 or idx[0] != 0:
        return False
    member = np.zeros(G.order, dtype=bool)
    member[idx] = True
    # finite: closed under products suffices
    for a in idx:
        if not member[G.mul_many(idx, int(a))].all():
            return False
    return True


def regular_normal_subgroups(G: GroupTable) -> list[np.ndarray]:
    """Normal subgroups of order ``degree`` acting regularly.

    Built from unions of conjugacy classes (which are automatically
    normal); only classes of derangements can take part.
    """
    cached = getattr(G, "_regular_normal", None)
    if cached is not None:
        return cached
    cc = conjugacy_classes(G)
    if cc.count > MAX_CLASSES_FOR_NORMAL_SEARCH:
        raise NotAttempted(f"{cc.count} classes exceeds {MAX_CLASSES_FOR_NORMAL_SEARCH}")
    n = G.degree
    der_classes = [c for c in range(1, cc.count) if G.fix_counts[cc.representatives[c]] == 0]
    target = n - 1
    found = []

    def extend(pos: int, chosen: list[int], total: int):
        if total == target:
            idx = np.sort(np.concatenate([cc.members[0]] + [cc.members[c] for c in chosen]))
            if is_subgroup(G, idx):
                found.append(idx)
            return
        for t in range(pos, len(der_classes)):
            c = der_classes[t]
            if total + cc.sizes[c] <= target:
                extend(t + 1, chosen + [c], total + cc.sizes[c])

    extend(0, [], 0)
    G._regular_normal = found
    return found


def element_orders(G: GroupTable) -> np.ndarray:
    """Order of every element, from cycle lengths."""
    out = np.array([perm_order(G.perm(i)) for i in range(G.order)], dtype=np.int64)
    return out


def generating_pair(G: GroupTable, subgroup: np.ndarray) -> list[int]:
    """A short generating list for ``subgroup`` (deterministic greedy)."""
    subgroup = np.asarray(subgroup)
    target = len(subgroup)
    if target == 1:
        return []
    orders = {int(s): perm_order(G.perm(int(s))) for s in subgroup}
    by_order = sorted(orders, key=lambda s: (-orders[s], s))
    for a in by_order:
        if len(closure(G, [a])) == target:
            return [a]
    for a, b in combinations(by_order[: min(len(by_order), 64)], 2):
        if len(closure(G, [a, b])) == target:
            return [a, b]
    gens: list[int] = []
    current = np.array([0])
    for s in by_order:
        if s not in set(current.tolist()):
            gens.append(s)
            current = closure(G, gens)
            if len(current) == target:
                break
    return gens
