"""Hot inner loops, compiled with numba when available.

Set ``EKRLAB_NO_NUMBA=1`` to force the pure-numpy path (used by the
benchmark and by the test-suite to check both routes agree).
"""
from __future__ import annotations

import os

import numpy as np

_DISABLED = os.environ.get("EKRLAB_NO_NUMBA", "").strip().lower() in {"1", "true", "yes"}

try:
    if _DISABLED:
        raise ImportError
    from numba import njit
    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised via env flag
    HAS_NUMBA = False

BACKEND = "numba" if HAS_NUMBA else "numpy"

# Above this degree the base-n element code overflows int64.
MAX_CODED_DEGREE = 16


def perm_codes(perms: np.ndarray) -> np.ndarray:
    """Injective int64 code of each row (first n-1 images in base n)."""
    perms = np.atleast_2d(perms)
    n = perms.shape[1]
    if n <= 1:
        return np.zeros(perms.shape[0], dtype=np.int64)
    weights = np.int64(n) ** np.arange(n - 1, dtype=np.int64)
    return perms[:, : n - 1].astype(np.int64) @ weights


def compose_rows(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Row-wise right-action product: apply ``a[k]`` then ``b[k]``."""
    return np.take_along_axis(b, a, axis=1)


def inverse_rows(perms: np.ndarray) -> np.ndarray:
    out = np.empty_like(perms)
    rows = np.arange(perms.shape[0])[:, None]
    out[rows, perms] = np.arange(perms.shape[1])[None, :]
    return out


# --------------------------------------------------------------------------
# numpy reference versions
# --------------------------------------------------------------------------

def _all_pairs_intersect_np(perms: np.ndarray) -> bool:
    m = perms.shape[0]
    block = max(1, 4_000_000 // max(1, m * perms.shape[1]))
    for start in range(0, m, block):
        chunk = perms[start:start + block]
        agree = (chunk[:, None, :] == perms[None, :, :]).any(axis=2)
        if not agree.all():
            return False
    return True


def _disjoint_counts_np(rows: np.ndarray, perms: np.ndarray) -> np.ndarray:
    """For each row r: number of p in ``perms`` agreeing with r nowhere."""
    out = np.empty(rows.shape[0], dtype=np.int64)
    block = max(1, 4_000_000 // max(1, perms.shape[0] * perms.shape[1]))
    for start in range(0, rows.shape[0], block):
        chunk = rows[start:start + block]
        agree = (chunk[:, None, :] == perms[None, :, :]).any(axis=2)
        out[start:start + block] = (~agree).sum(axis=1)
    return out


def _pair_class_counts_np(perms, inv_perms, sorted_codes, sorted_idx, class_of, k):
    """Histogram over classes of h * g^-1 for all (g, h) in perms x perms."""
    n = perms.shape[1]
    counts = np.zeros(k, dtype=np.int64)
    weights = np.int64(n) ** np.arange(max(n - 1, 0), dtype=np.int64)
    for g in range(perms.shape[0]):
        prod = inv_perms[g][perms]  # row h: i -> h[i] -> g^-1[h[i]]
        codes = prod[:, : n - 1].astype(np.int64) @ weights if n > 1 else np.zeros(len(prod), np.int64)
        pos = np.searchsorted(sorted_codes, codes)
        counts += np.bincount(class_of[sorted_idx[pos]], minlength=k)
    return counts


# --------------------------------------------------------------------------
# numba versions
# --------------------------------------------------------------------------

if HAS_NUMBA:

    @njit(cache=True)
    def _all_pairs_intersect_nb(perms):
        m, n = perms.shape
        for a in range(m):
            for b in range(a + 1, m):
                hit = False
                for i in range(n):
                    if perms[a, i] == perms[b, i]:
                        hit = True
                        break
                if not hit:
                    return False
        return True

    @njit(cache=True)
    def _disjoint_counts_nb(rows, perms):
        r, n = rows.shape
        m = perms.shape[0]
        out = np.zeros(r, dtype=np.int64)
        for a in range(r):
            c = 0
            for b in range(m):
                hit = False
                for i in range(n):
                    if rows[a, i] == perms[b, i]:
                        hit = True
                        break
                if not hit:
                    c += 1
            out[a] = c
        return out

    @njit(cache=True)
    def _pair_class_counts_nb(perms, inv_perms, sorted_codes, sorted_idx, class_of, k):
        m, n = perms.shape
        counts = np.zeros(k, dtype=np.int64)
        for g in range(m):
            ginv = inv_perms[g]
            for h in range(m):
                code = np.int64(0)
                w = np.int64(1)
                for i in range(n - 1):
                    code += np.int64(ginv[perms[h, i]]) * w
                    w *= n
                pos = np.searchsorted(sorted_codes, code)
                counts[class_of[sorted_idx[pos]]] += 1
        return counts

    all_pairs_intersect = _all_pairs_intersect_nb
    disjoint_counts = _disjoint_counts_nb
    pair_class_counts = _pair_class_counts_nb
else:
    all_pairs_intersect = _all_pairs_intersect_np
    disjoint_counts = _disjoint_counts_np
    pair_class_counts = _pair_class_counts_np


def numpy_backend():
    """The numpy implementations, regardless of the active backend."""
    return {
        "all_pairs_intersect": _all_pairs_intersect_np,
        "disjoint_counts": _disjoint_counts_np,
        "pair_class_counts": _pair_class_counts_np,
    }
