"""Spectrum of the derangement graph through the centre of the group algebra.

The derangement graph is a normal Cayley graph, so the sum ``D`` of all
derangements is central and acts on the span of the class sums. The
``k x k`` matrix of that action has the central-character values
``lambda_phi = sum_{d in Der} phi(d) / phi(1)`` as eigenvalues, one per
irreducible character.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from .exact import kernel_dimension
from .perm_core import GroupTable, conjugacy_classes, ConjugacyClasses, is_2transitive

NUMERIC_K_CAP = 200


@dataclass(frozen=True)
class DerangementSet:
    indices: np.ndarray

    @property
    def d(self) -> int:
        return len(self.indices)

    def mask(self, order: int) -> np.ndarray:
        out = np.zeros(order, dtype=bool)
        out[self.indices] = True
        return out


def derangements(G: GroupTable) -> DerangementSet:
    cached = getattr(G, "_der", None)
    if cached is None:
        idx = np.flatnonzero(G.fix_counts == 0)
        idx.setflags(write=False)
        cached = G._der = DerangementSet(idx)
    return cached


@dataclass(frozen=True)
class ClassSumMatrix:
    entries: np.ndarray  # int64, k x k

    @property
    def k(self) -> int:
        return self.entries.shape[0]

    def as_lists(self) -> list[list[int]]:
        return [[int(x) for x in row] for row in self.entries]


def class_sum_matrix(G: GroupTable, C: ConjugacyClasses | None = None,
                     D: DerangementSet | None = None) -> ClassSumMatrix:
    """``entries[i, j] = #{d in Der : d^-1 * rep_i in class j}``."""
    C = C or conjugacy_classes(G)
    D = D if D is not None else derangements(G)
    k = C.count
    M = np.zeros((k, k), dtype=np.int64)
    if D.d:
        dinv = G.inverses[D.indices]
        for i, rep in enumerate(C.representatives):
            prods = G.mul_many(dinv, rep)
            M[i] = np.bincount(C.class_of[prods], minlength=k)
    M.setflags(write=False)
    return ClassSumMatrix(M)


def certify_rational_eigenvalue(M: ClassSumMatrix, lam: Fraction | int) -> int:
    """Number of irreducible characters affording ``lam`` (exact kernel rank)."""
    return kernel_dimension(M.as_lists(), lam)


def numeric_spectrum(M: ClassSumMatrix) -> np.ndarray:
    """Eigenvalues of the class-sum matrix (LAPACK geev balances first)."""
    if M.k > NUMERIC_K_CAP:
        raise ValueError(f"{M.k} classes exceeds numeric cap {NUMERIC_K_CAP}")
    vals = np.linalg.eigvals(M.entries.astype(float))
    return np.sort_complex(vals)


class Verdict(str, Enum):
    CERTIFIED_UNIQUE = "CERTIFIED_UNIQUE"
    CERTIFIED_NONUNIQUE = "CERTIFIED_NONUNIQUE"
    NOT_LEAST = "NOT_LEAST"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass
class LeastEigenvalueReport:
    d: int
    least: Fraction
    spectrum: np.ndarray
    multiplicity: int
    verdict: Verdict
    tolerance: float


def least_eigenvalue_report(G: GroupTable) -> LeastEigenvalueReport:
    if not is_2transitive(G):
        raise ValueError("least-eigenvalue report needs a 2-transitive group")
    D = derangements(G)
    n = G.degree
    lam = Fraction(-D.d, n - 1)
    M = class_sum_matrix(G, conjugacy_classes(G), D)
    spec = numeric_spectrum(M)
    tol = 1e-6 * (1 + abs(float(lam)))
    mult = certify_rational_eigenvalue(M, lam)
    real = spec.real
    if np.any(real < float(lam) - tol):
        verdict = Verdict.NOT_LEAST
    elif mult == 0:
        verdict = Verdict.INCONCLUSIVE
    else:
        near = int(np.sum(np.abs(spec - float(lam)) <= tol))
        if near != mult:
            # an irrational eigenvalue sits within tolerance of lam
            verdict = Verdict.INCONCLUSIVE
        else:
            verdict = Verdict.CERTIFIED_UNIQUE if mult == 1 else Verdict.CERTIFIED_NONUNIQUE
    return LeastEigenvalueReport(D.d, lam, spec, mult, verdict, tol)


@dataclass(frozen=True)
class AltDegreeBound:
    n: int
    d: int
    d_lower: Fraction
    holds: bool
    threshold: int
    # (n-1) * sqrt(|Alt(n)|/d - 2), the degree bound for other characters
    degree_bound: float


def alt_derangement_count(n: int) -> int:
    """Even derangements of n points, counted from cycle types."""
    from .catalog import alt
    return derangements(alt(n)).d


def alt_degree_bound(n: int) -> AltDegreeBound:
    if n < 5:
        raise ValueError("the bound is stated for n >= 5")
    d = alt_derangement_count(n)
    lower = Fraction(math.factorial(n), 6)
    half = math.factorial(n) // 2
    bound = (n - 1) * math.sqrt(half / d - 2)
    return AltDegreeBound(n, d, lower, d >= lower, n - 1, bound)


def clique_coclique_bound(G: GroupTable, clique_size: int) -> int:
    if clique_size < 1:
        raise ValueError("clique size must be positive")
    return G.order // clique_size
