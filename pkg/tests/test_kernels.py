import os
import subprocess
import sys

import numpy as np
import pytest

from ekrlab import _kernels as K
from ekrlab.catalog import alt, psl2
from ekrlab.perm_core import conjugacy_classes, point_stabilizer

NP = K.numpy_backend()


def random_rows(rng, count, n):
    return np.stack([rng.permutation(n) for _ in range(count)]).astype(np.int64)


def test_backend_flag():
    assert K.BACKEND in ("numba", "numpy")
    assert K.BACKEND == ("numba" if K.HAS_NUMBA else "numpy")


def test_env_flag_selects_numpy():
    out = subprocess.run([sys.executable, "-c", "from ekrlab import _kernels; print(_kernels.BACKEND)"],
                         env={**os.environ, "EKRLAB_NO_NUMBA": "1"}, capture_output=True, text=True,
                         check=True)
    assert out.stdout.strip() == "numpy"


def test_compose_and_inverse_rows():
    rng = np.random.default_rng(1)
    a, b = random_rows(rng, 20, 7), random_rows(rng, 20, 7)
    ab = K.compose_rows(a, b)
    for i in range(20):
        assert ab[i].tolist() == [int(b[i][a[i][j]]) for j in range(7)]
    inv = K.inverse_rows(a)
    assert np.all(K.compose_rows(a, inv) == np.arange(7))


@pytest.mark.parametrize("seed", range(5))
def test_all_pairs_intersect_agree(seed):
    rng = np.random.default_rng(seed)
    P = random_rows(rng, 6, 5)
    assert K.all_pairs_intersect(P) == NP["all_pairs_intersect"](P)
    G = alt(5)
    S = G.elements[point_stabilizer(G, 2)]
    assert K.all_pairs_intersect(S) and NP["all_pairs_intersect"](S)


@pytest.mark.parametrize("seed", range(5))
def test_disjoint_counts_agree(seed):
    rng = np.random.default_rng(seed)
    rows, perms = random_rows(rng, 15, 6), random_rows(rng, 40, 6)
    fast = K.disjoint_counts(rows, perms)
    slow = NP["disjoint_counts"](rows, perms)
    brute = [(perms != r).all(axis=1).sum() for r in rows]
    assert fast.tolist() == slow.tolist() == brute


def test_pair_class_counts_agree():
    G = psl2(7)
    cc = conjugacy_classes(G)
    S = point_stabilizer(G, 0)
    args = (G.elements[S], G.elements[G.inverses[S]], G._sorted_codes, G._sorted_idx,
            np.asarray(cc.class_of), cc.count)
    assert K.pair_class_counts(*args).tolist() == NP["pair_class_counts"](*args).tolist()
