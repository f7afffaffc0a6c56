"""Time the numba kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Both implementations are called directly, so the backend flag is irrelevant
here.  Results are checked for equality before timing.
"""

import argparse
import time

import numpy as np

from groupoid_galois import _kernels
from groupoid_galois.catalog import s8_groupoid
from groupoid_galois.groupoid import coarse_groupoid, cyclic_group, product_with_group


def cases():
    G = s8_groupoid()
    objs = np.array(G.objects, dtype=np.int64)
    free = np.array([g for g in range(len(G)) if g not in set(G.objects)], dtype=np.int64)
    yield "closed_subsets A2xV4 (12 free)", "closed_subsets", (G.comp, G.inv, objs, free)

    big = product_with_group(coarse_groupoid(3), cyclic_group(4))
    mask = np.zeros(len(big), dtype=bool)
    mask[list(big.objects)] = True
    mask[[5, 17]] = True
    yield f"closure A3xZ4 (|G|={len(big)})", "closure", (big.comp, big.inv, mask)

    rng = np.random.default_rng(0)
    n = 20000
    src = rng.integers(n, size=n // 2)
    dst = rng.integers(n, size=n // 2)
    yield f"orbit_labels n={n}", "orbit_labels", (n, src, dst)


def best_of(fn, args, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if _kernels.numba_impl is None:
        print("numba not available; nothing to compare")
        return
    print(f"{'kernel':40s} {'numpy [ms]':>12s} {'numba [ms]':>12s} {'speedup':>8s}")
    for label, name, raw in cases():
        prepared = tuple(np.ascontiguousarray(a, dtype=np.bool_ if getattr(a, 'dtype', None) == np.bool_ else np.int64)
                         if isinstance(a, np.ndarray) else a for a in raw)
        fnp, fnb = _kernels.numpy_impl[name], _kernels.numba_impl[name]
        a, b = fnp(*prepared), fnb(*prepared)  # also warms the jit
        if not np.array_equal(np.sort(np.asarray(a)), np.sort(np.asarray(b))):
            raise SystemExit(f"{label}: backends disagree")
        tn = best_of(fnp, prepared, args.repeat)
        tb = best_of(fnb, prepared, args.repeat)
        print(f"{label:40s} {tn * 1e3:12.3f} {tb * 1e3:12.3f} {tn / tb:8.1f}x")


if __name__ == "__main__":
    main()
