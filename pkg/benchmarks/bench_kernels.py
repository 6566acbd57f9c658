"""Compare the numba kernels with the numpy fallback.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]

Each backend runs in its own interpreter (the backend is fixed at import
time by EKRLAB_NO_NUMBA).  Numba compilation is excluded by a warm-up call.
"""
import argparse
import json
import os
import subprocess
import sys

WORKLOAD = r"""
import json, sys, time
import numpy as np
from ekrlab import _kernels as K
from ekrlab.catalog import parse_family
from ekrlab.perm_core import conjugacy_classes, point_stabilizer
from ekrlab.spectra import derangements

repeat = int(sys.argv[1])
out = {"backend": K.BACKEND}

def best(fn, *args):
    fn(*args)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times)

G = parse_family("m11")
cc = conjugacy_classes(G)
S = point_stabilizer(G, 0)
P, Pinv = G.elements[S], G.elements[G.inverses[S]]
out["pair_class_counts m11 |S|=720"] = best(
    K.pair_class_counts, P, Pinv, G._sorted_codes, G._sorted_idx, np.asarray(cc.class_of), cc.count)
out["all_pairs_intersect m11 |S|=720"] = best(K.all_pairs_intersect, P)

H = parse_family("asl2:4")
rest = H.elements[derangements(H).indices]
out["disjoint_counts asl2:4 60 x 195"] = best(K.disjoint_counts, H.elements[point_stabilizer(H, 0)], rest)
print(json.dumps(out))
"""


def run(no_numba: bool, repeat: int) -> dict:
    env = dict(os.environ)
    if no_numba:
        env["EKRLAB_NO_NUMBA"] = "1"
    else:
        env.pop("EKRLAB_NO_NUMBA", None)
    res = subprocess.run([sys.executable, "-c", WORKLOAD, str(repeat)], env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(res.stdout)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    fast = run(False, args.repeat)
    slow = run(True, args.repeat)
    if fast["backend"] != "numba":
        print("numba unavailable; both columns use numpy")
    print(f"{'kernel':40s} {'numba s':>10s} {'numpy s':>10s} {'speedup':>8s}")
    for key in fast:
        if key == "backend":
            continue
        a, b = fast[key], slow[key]
        print(f"{key:40s} {a:10.4f} {b:10.4f} {b / a:8.1f}x")


if __name__ == "__main__":
    main()
