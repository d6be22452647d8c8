"""Compare the numba and numpy kernel backends on representative workloads.

    python benchmarks/bench_kernels.py [--repeat 5]

Each workload runs once per backend to warm up (numba compiles on first
call), then ``--repeat`` timed runs; the best time is reported together with
a check that both backends return identical results.
"""
import argparse
import time

import numpy as np

from nearbycycles import _accel, kernels
from nearbycycles.ffield import make_field
from nearbycycles.hermitian import HermitianDatum
from nearbycycles.localmodel import build_ambient, enumerate_special_fiber


def _count_zeros(backend):
    F = make_field(7)
    terms = F.mul[np.array([1, 1, 1, 3, 1, 6])[:, None], F.square[None, :]]
    return kernels.count_zeros(F.add, terms, backend=backend)


def _convolve(backend):
    F = make_field(13)
    base = np.array(F.chi, dtype=np.int64)
    out = base
    for _ in range(7):
        out = kernels.convolve(F.add, out, base, backend=backend)
    return [int(x) for x in out]


def _batch_rref(backend):
    F = make_field(5)
    rng = np.random.default_rng(0)
    mats = rng.integers(0, 5, size=(20000, 4, 8))
    R, ranks = kernels.batch_rref(F.add, F.mul, F.neg, F.inv, mats, backend=backend)
    return R.tobytes(), ranks.tobytes()


def _enumeration(backend):
    amb = build_ambient(HermitianDatum.standard(3, 4, True))
    return [p.rows for p in enumerate_special_fiber(amb, backend)]


WORKLOADS = {
    "count_zeros  (7^6 affine points)": _count_zeros,
    "convolve     (F_13, 7 rounds)": _convolve,
    "batch_rref   (20000 x 4x8 over F_5)": _batch_rref,
    "enumeration  (n=4, p=3 special fiber)": _enumeration,
}


def best_time(fn, backend, repeat):
    fn(backend)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(backend)
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    backends = ["numpy"] + (["numba"] if _accel.HAVE_NUMBA else [])
    print(f"{'workload':40s} " + " ".join(f"{b:>10s}" for b in backends) + "   speedup  agree")
    for name, fn in WORKLOADS.items():
        times = {b: best_time(fn, b, args.repeat) for b in backends}
        agree = len({repr(fn(b)) for b in backends}) == 1
        speed = times["numpy"] / times["numba"] if "numba" in times else float("nan")
        cols = " ".join(f"{times[b] * 1e3:8.1f}ms" for b in backends)
        print(f"{name:40s} {cols}   {speed:6.1f}x  {agree}")


if __name__ == "__main__":
    main()
