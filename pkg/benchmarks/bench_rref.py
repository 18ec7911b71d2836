"""Compare the numba and numpy row-reduction kernels on random F_p matrices.

    python3 benchmarks/bench_rref.py --sizes 100x200 400x600 --repeat 3

Both kernels must agree on rank, pivots and the reduced matrix; the script
exits with status 1 if they do not.
"""

import argparse
import sys
import time

import numpy as np

from gorenstein_rate import _kernels
from gorenstein_rate.linalg import DEFAULT_PRIME


def _matrix(rows, cols, rank, p, rng):
    # low-rank products look like the catalecticant and syzygy matrices
    k = min(rank, rows, cols)
    L = rng.integers(0, p, size=(rows, k), dtype=np.int64)
    R = rng.integers(0, p, size=(k, cols), dtype=np.int64)
    return (L.astype(object) @ R.astype(object) % p).astype(np.int64)


def _best(fn, A, p, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        B = A.copy()
        t = time.perf_counter()
        r, piv = fn(B, p, True)
        best = min(best, time.perf_counter() - t)
        out = (int(r), np.asarray(piv), B)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", nargs="+", default=["60x120", "200x300", "400x600", "600x900"])
    ap.add_argument("--rank-fraction", type=float, default=0.7)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--prime", type=int, default=DEFAULT_PRIME)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    if _kernels.rref_inplace_numba is None:
        print("numba is not installed; nothing to compare", file=sys.stderr)
        return 2
    rng = np.random.Generator(np.random.PCG64(args.seed))
    p = args.prime
    # compile outside the timed region
    _kernels.rref_inplace_numba(np.eye(2, dtype=np.int64), np.int64(p), True)

    print(f"{'shape':>10} {'rank':>6} {'numba s':>10} {'numpy s':>10} {'speedup':>8}")
    ok = True
    for size in args.sizes:
        rows, cols = (int(x) for x in size.lower().split("x"))
        A = _matrix(rows, cols, int(args.rank_fraction * min(rows, cols)), p, rng)
        t_nb, (r1, p1, B1) = _best(lambda M, q, red: _kernels.rref_inplace_numba(M, np.int64(q), red), A, p, args.repeat)
        t_np, (r2, p2, B2) = _best(_kernels.rref_inplace_numpy, A, p, args.repeat)
        same = r1 == r2 and np.array_equal(p1, p2) and np.array_equal(B1, B2)
        ok = ok and same
        print(f"{size:>10} {r1:>6} {t_nb:>10.4f} {t_np:>10.4f} {t_np / t_nb:>7.1f}x{'' if same else '  MISMATCH'}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
