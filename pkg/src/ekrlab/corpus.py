"""The desk-scale corpus and the acceptance criteria run over it.

Each ``criterion_*`` function returns a list of :class:`Check` rows, one per
group (or per sub-check), so a failure points at the exact case.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .catalog import parse_family
from .cocliques import (canonical_cocliques, classify, ekr_bound_certificate, exhaustive_allowed,
                        is_coclique, max_cocliques)
from .complements import agl32_counterexample, asl2_nonstandard_example, find_complements
from .dergraph import (connectivity, coset_derangement_profile, frobenius_by_derangements,
                       is_disjoint_clique_union, two_point_stabilizer_generation,
                       two_point_stabilizers_trivial)
from .ekr_module import (coefficient_sums, inner_distribution, module_check, psi_values,
                         stabilizer_distribution)
from .perm_core import (conjugacy_classes, is_2transitive, point_stabilizer,
                        regular_normal_subgroups)
from .spectra import (Verdict, alt_degree_bound, class_sum_matrix, derangements,
                      least_eigenvalue_report)

CORPUS = (
    "sym:3", "sym:4", "sym:5", "alt:4", "alt:5", "alt:6",
    "agl1:5", "agl1:7", "agl1:8", "agammal1:2,3", "agammal1:3,2",
    "psl2:5", "psl2:7", "psl2:8", "psl2:11", "pgl2:5", "asl2:4", "agl3_2", "m11",
)
AFFINE = ("sym:3", "sym:4", "alt:4", "agl1:5", "agl1:7", "agl1:8",
          "agammal1:2,3", "agammal1:3,2", "asl2:4", "agl3_2")
SPECTRAL = ("alt:5", "alt:6", "psl2:5", "psl2:7", "psl2:8", "psl2:11", "m11", "asl2:4", "agl3_2")
DISCONNECTED = ("agammal1:3,2", "agammal1:2,3")
FROBENIUS = ("agl1:5", "agl1:7", "agl1:8")
CONNECTED = ("alt:5", "alt:6", "psl2:5", "psl2:7", "psl2:8", "psl2:11", "m11", "asl2:4", "agl3_2")

CENSUS_LIMIT = 20


@dataclass(frozen=True)
class Check:
    criterion: int
    case: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        extra = f" ({self.detail})" if self.detail else ""
        return f"[{mark}] criterion {self.criterion:>2} {self.case}{extra}"


@lru_cache(maxsize=None)
def group(spec: str):
    return parse_family(spec)


@lru_cache(maxsize=None)
def census(spec: str):
    G = group(spec)
    return max_cocliques(G, limit=CENSUS_LIMIT, exhaustive=exhaustive_allowed(G))


@lru_cache(maxsize=None)
def canonical(spec: str):
    return canonical_cocliques(group(spec))


@lru_cache(maxsize=None)
def coclique_complements(spec: str):
    G = group(spec)
    if not regular_normal_subgroups(G):
        return []
    return [r.subgroup for r in find_complements(G).reports if r.is_coclique]


def maximum_cocliques(spec: str) -> list[np.ndarray]:
    """Every maximum coclique this run produces for the group."""
    out = [c.array() for c in canonical(spec)]
    out += [c.array() for c in census(spec).found]
    out += list(coclique_complements(spec))
    if spec == "asl2:4":
        out.append(asl2_nonstandard_example().nonstandard)
    return out


def criterion_1(groups=CORPUS) -> list[Check]:
    rows = []
    for spec in groups:
        G = group(spec)
        t0 = time.perf_counter()
        cert = ekr_bound_certificate(G)
        target = G.order // G.degree
        canon = canonical(spec)
        canon_ok = (len(canon) == G.degree ** 2
                    and all(c.size == target and is_coclique(G, c.members) for c in canon))
        cen = census(spec)
        ok = (cert["plus_one_found"] == 0 and cert["plus_one_complete"] and canon_ok
              and cen.total >= 1)
        rows.append(Check(1, spec, ok,
                          f"target {target}, +1 via {cert['cover_kind']} cover "
                          f"{'infeasible' if cert['plus_one_complete'] and not cert['plus_one_found'] else 'NOT settled'}, "
                          f"{len(canon)} canonical, census {cen.total}, {time.perf_counter() - t0:.2f}s"))
    return rows


def criterion_2(groups=CORPUS) -> list[Check]:
    rows = []
    for spec in groups:
        G = group(spec)
        sets = maximum_cocliques(spec)
        bad = [i for i, S in enumerate(sets) if not module_check(G, S).holds]
        rows.append(Check(2, spec, not bad, f"{len(sets)} maximum cocliques, {len(bad)} outside the module"))
    return rows


def criterion_3() -> list[Check]:
    rows = []
    for spec, total, canon in (("agl1:5", 625, 25), ("sym:3", 9, 9)):
        G = group(spec)
        full = max_cocliques(G, limit=10_000, exhaustive=True)
        ok = full.complete and full.total == total and full.canonical_count == canon
        ok = ok and all(module_check(G, S.members).holds for S in full.found)
        stab = stabilizer_distribution(G).values
        ok = ok and all(inner_distribution(G, S.members).values == stab for S in full.found)
        rows.append(Check(3, spec, ok, f"complete={full.complete}, {full.total} maximum, "
                                       f"{full.canonical_count} canonical"))
    return rows


def brute_force_spectrum(G) -> set[float]:
    E = G.elements
    A = ~(E[:, None, :] == E[None, :, :]).any(axis=2)
    return {round(float(x), 6) + 0.0 for x in np.linalg.eigvalsh(A.astype(float))}


def criterion_4(groups=SPECTRAL) -> list[Check]:
    rows = []
    for spec in groups:
        G = group(spec)
        rep = least_eigenvalue_report(G)
        ok = rep.verdict is Verdict.CERTIFIED_UNIQUE
        detail = f"d={rep.d}, lambda*={rep.least}, min={min(rep.spectrum.real):.6g}, {rep.verdict.value}"
        if spec == "alt:5":
            class_vals = {round(float(x), 6) + 0.0 for x in rep.spectrum.real}
            ok = ok and rep.d == 24 and rep.least == -6 and class_vals == brute_force_spectrum(G)
        rows.append(Check(4, spec, ok, detail))
    return rows


def criterion_5() -> list[Check]:
    rows = []
    for spec in DISCONNECTED:
        cs = connectivity(group(spec))
        rows.append(Check(5, f"{spec} disconnected", not cs.is_connected,
                          f"{cs.component_count} component(s)"))
    for spec in FROBENIUS:
        G = group(spec)
        N = regular_normal_subgroups(G)[0]
        cs = connectivity(G)
        stab = len(point_stabilizer(G, 0))
        frob = two_point_stabilizers_trivial(G)
        ok = (frob and frobenius_by_derangements(G, N) and is_disjoint_clique_union(G)
              and cs.component_count == stab and len(cs.generated) == G.degree)
        rows.append(Check(5, f"{spec} Frobenius", ok,
                          f"{cs.component_count} complete graphs on {len(cs.generated)} vertices"))
    for spec in CONNECTED:
        cs = connectivity(group(spec))
        rows.append(Check(5, f"{spec} connected", cs.is_connected, f"{cs.component_count} component(s)"))
    return rows


def criterion_6(groups=AFFINE) -> list[Check]:
    rows = []
    for spec in groups:
        prof = coset_derangement_profile(group(spec))
        bad = [f.h for f in prof if f.direct != f.centralizer]
        rows.append(Check(6, spec, not bad, f"{len(prof)} cosets, {sum(f.direct for f in prof)} with derangements"))
    return rows


def criterion_7(groups=AFFINE) -> list[Check]:
    rows = []
    for spec in groups:
        r = two_point_stabilizer_generation(group(spec))
        rows.append(Check(7, spec, r.equal, f"|<Der>| = {len(r.der_generated)}, "
                                            f"|<N, H_y>| = {len(r.stabilizer_generated)}"))
    return rows


def criterion_8() -> list[Check]:
    ex = asl2_nonstandard_example()
    G = ex.G
    S = ex.nonstandard
    from .complements import complement_coclique_test
    rep = complement_coclique_test(G, S)
    cls = classify(S, G)
    ok_a = (ex.orders == (2, 2, 5) and len(S) == 60 and rep.is_complement and not rep.is_standard
            and rep.is_coclique and len(S) == G.order // G.degree and not cls.canonical
            and module_check(G, S).holds
            and np.array_equal(ex.standard, point_stabilizer(G, 0)))
    e2 = agl32_counterexample()
    rep2 = complement_coclique_test(e2.G, e2.complement)
    ok_b = (e2.orders == (2, 2, 7) and e2.rank_a == 1 and e2.rank_au == 2
            and e2.G.fix_counts[e2.au] == 0 and rep2.is_complement and not rep2.is_standard
            and not rep2.is_coclique)
    return [
        Check(8, "asl2:4 nonstandard complement", ok_a,
              f"orders {ex.orders}, |K|={len(S)}, standard={rep.is_standard}, coclique={rep.is_coclique}"),
        Check(8, "agl3_2 ranks and derangement", ok_b,
              f"orders {e2.orders}, rank(a-1)={e2.rank_a}, rank(au-1)={e2.rank_au}"),
    ]


def criterion_9(groups=AFFINE) -> list[Check]:
    rows = []
    for spec in groups:
        G = group(spec)
        n = G.degree
        gx = G.order // n
        inside, outside = Fraction(gx), Fraction(-gx, n - 1)
        bad = 0
        sets = maximum_cocliques(spec)
        for S in sets:
            sums = coefficient_sums(G, S)
            member = np.zeros(G.order, dtype=bool)
            member[S] = True
            if not (np.all(sums[member] == inside) and np.all(sums[~member] == outside)):
                bad += 1
        rows.append(Check(9, spec, bad == 0, f"{len(sets)} cocliques, values {inside} / {outside}"))
    return rows


def criterion_10(groups=CORPUS) -> list[Check]:
    rows = []
    for spec in groups:
        G = group(spec)
        stab = stabilizer_distribution(G).values
        sets = maximum_cocliques(spec)
        bad = sum(inner_distribution(G, S).values != stab for S in sets)
        rows.append(Check(10, spec, bad == 0, f"{len(sets)} cocliques checked"))
    return rows


def criterion_11() -> list[Check]:
    rows = []
    for n in (5, 6, 7):
        b = alt_degree_bound(n)
        ok = b.d >= Fraction(math.factorial(n), 6) and b.threshold == n - 1
        rows.append(Check(11, f"alt({n})", ok, f"d={b.d} >= {b.d_lower}, threshold {b.threshold}"))
    return rows


def property_suite(spec: str) -> list[str]:
    """Type invariants for one group; returns the names of violated ones."""
    G = group(spec)
    bad = []
    n = G.degree
    if not np.all(np.sort(G.elements, axis=1) == np.arange(n)):
        bad.append("bijection")
    inv = G.inverses
    if not (np.all(inv[inv] == np.arange(G.order))
            and np.all(G.mul_many(np.arange(G.order), inv) == 0)):
        bad.append("inverse")
    cc = conjugacy_classes(G)
    if sum(cc.sizes) != G.order or any(G.order % s for s in cc.sizes) or cc.sizes[0] != 1:
        bad.append("class equation")
    for g in G.generators:
        conj = G.conjugate_all(g)
        if not np.array_equal(cc.class_of[conj], cc.class_of):
            bad.append("class closure")
            break
    if not is_2transitive(G):
        bad.append("2-transitive")
    psi = psi_values(G)
    sizes = np.array(cc.sizes)
    vals = np.array(psi.by_class)
    if psi.by_class[0] != n - 1 or int(sizes @ vals) != 0 or int(sizes @ vals ** 2) != G.order:
        bad.append("psi orthogonality")
    if not all(is_coclique(G, c.members) for c in canonical(spec)):
        bad.append("canonical cocliques")
    M = class_sum_matrix(G).entries
    d = derangements(G).d
    if not np.array_equal(sizes @ M, d * sizes):
        bad.append("class-sum column identity")
    if int(np.trace(M)) != round(float(np.sum(np.linalg.eigvals(M.astype(float)).real))):
        bad.append("trace")
    return bad


def criterion_12(groups=CORPUS) -> list[Check]:
    rows = []
    t0 = time.perf_counter()
    for spec in groups:
        bad = property_suite(spec)
        rows.append(Check(12, spec, not bad, ", ".join(bad) if bad else "all invariants"))
    elapsed = time.perf_counter() - t0
    rows.append(Check(12, "runtime", elapsed < 60, f"{elapsed:.1f}s < 60s"))
    return rows


CRITERIA = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
    6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9, 10: criterion_10,
    11: criterion_11, 12: criterion_12,
}


def run_all(selected=None) -> list[Check]:
    out = []
    for k, fn in CRITERIA.items():
        if selected is None or k in selected:
            out.extend(fn())
    return out
