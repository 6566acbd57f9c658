"""Exact integer/rational linear algebra (Bareiss elimination)."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def rank_fraction_free(rows: Sequence[Sequence[int]]) -> int:
    """Rank of an integer matrix by one-step fraction-free elimination.

    Every intermediate entry stays an integer (Bareiss): after eliminating
    with pivot ``p`` the division by the previous pivot is exact.
    """
    M = [[int(x) for x in r] for r in rows]
    if not M:
        return 0
    nrows, ncols = len(M), len(M[0])
    rank = 0
    prev = 1
    for col in range(ncols):
        pivot = next((r for r in range(rank, nrows) if M[r][col] != 0), None)
        if pivot is None:
            continue
        M[rank], M[pivot] = M[pivot], M[rank]
        p = M[rank][col]
        for r in range(rank + 1, nrows):
            a = M[r][col]
            row_r, row_p = M[r], M[rank]
            for c in range(col, ncols):
                q, rem = divmod(p * row_r[c] - a * row_p[c], prev)
                assert rem == 0
                row_r[c] = q
        prev = p
        rank += 1
        if rank == nrows:
            break
    return rank


def kernel_dimension(M: Sequence[Sequence[int]], lam: Fraction | int) -> int:
    """dim ker(M - lam*I) over the rationals, with no floating point."""
    lam = Fraction(lam)
    k = len(M)
    scaled = [[lam.denominator * int(M[i][j]) - (lam.numerator if i == j else 0)
               for j in range(k)] for i in range(k)]
    return k - rank_fraction_free(scaled)


def gf2_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank over GF(2), rows packed as ints."""
    packed = [int("".join(str(int(x) & 1) for x in r), 2) if len(r) else 0 for r in rows]
    rank = 0
    while packed:
        pivot = max(packed)
        packed.remove(pivot)
        if pivot == 0:
            continue
        rank += 1
        top = pivot.bit_length() - 1
        packed = [r ^ pivot if (r >> top) & 1 else r for r in packed]
    return rank


def render(x: Fraction | int) -> str:
    """Canonical ``p/q`` rendering (integers without denominator)."""
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
