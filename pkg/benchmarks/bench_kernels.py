"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import timeit

import numpy as np

from sepchk import gf2, homology as hm, simplicial as sc
from sepchk._backend import available_backends


def workloads(rng):
    dense = (rng.random((400, 600)) < 0.05).astype(np.uint8)
    words = gf2.Gf2Matrix.from_dense(dense).words
    x = sc.barycentric_subdivision(sc.barycentric_subdivision(sc.klein_bottle())[0])[0]
    cols = hm.boundary_columns(x, 2)
    nrows = x.count(1)
    occ = rng.random((160, 160)) < 0.45
    return {
        "rref 400x600": lambda k: k.rref(words, 600),
        f"sparse_rank d2 ({len(cols)} cols)": lambda k: k.sparse_rank(cols, nrows),
        "label_components 160^2": lambda k: k.label_components(occ),
    }


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    backends = available_backends()
    jobs = workloads(np.random.default_rng(0))
    print(f"{'kernel':32} " + " ".join(f"{name:>10}" for name in backends) + "   speedup")
    for label, job in jobs.items():
        best = {name: min(timeit.repeat(lambda: job(k), number=1, repeat=args.repeat))
                for name, k in backends.items()}
        cells = " ".join(f"{best[n] * 1e3:8.2f}ms" for n in backends)
        speed = f"{best['python'] / best['cython']:8.1f}x" if "cython" in best else "       n/a"
        print(f"{label:32} {cells}  {speed}")


if __name__ == "__main__":
    main()
