"""Time the numba and numpy kernel paths on the enumeration workloads.

Usage::

    python benchmarks/bench_kernels.py [--repeat N]

Each row reports the best-of-N wall time per path and checks that both paths
return the same value.  The numba path is warmed up once first so JIT
compilation is not counted.
"""
import argparse
import time

import numpy as np

from uurel import _accel, kernels
from uurel.multi import MeasurementEnsemble, example1_ensemble, omega_tilde_k_multi
from uurel.pair import omega_tilde_k
from uurel.quantum import gram_matrix, haar_random_basis


def best_of(fn, repeat):
    times, val = [], None
    for _ in range(repeat):
        t0 = time.perf_counter()
        val = fn()
        times.append(time.perf_counter() - t0)
    return min(times), val


def pair_cases():
    for d, r, s in [(6, 3, 3), (7, 3, 4), (8, 4, 4), (9, 4, 5)]:
        rng = np.random.default_rng(d)
        g = gram_matrix(haar_random_basis(d, rng), haar_random_basis(d, rng))
        yield f"pair_block_max d={d} r={r} s={s}", (lambda g=g, r=r, s=s: lambda nb: kernels.pair_block_max(g, r, s, nb)[0])()


def bound_cases():
    for d in (6, 7, 8):
        rng = np.random.default_rng(100 + d)
        a, b = haar_random_basis(d, rng), haar_random_basis(d, rng)
        k = d - 1
        yield f"omega_tilde_k d={d} k={k}", (lambda a=a, b=b, k=k: lambda nb: omega_tilde_k(a, b, k, use_numba=nb))()
    ens = example1_ensemble()
    yield "omega_tilde_k_multi example1 k=1", lambda nb: omega_tilde_k_multi(ens, 1, use_numba=nb)
    rng = np.random.default_rng(7)
    trip = MeasurementEnsemble(tuple(haar_random_basis(3, rng) for _ in range(3)))
    yield "omega_tilde_k_multi 3x d=3 k=3", lambda nb: omega_tilde_k_multi(trip, 3, use_numba=nb)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if not _accel.HAVE_NUMBA:
        print("numba is not installed; only the numpy path can run")
    print(f"{'case':40s} {'numpy [s]':>11s} {'numba [s]':>11s} {'speedup':>8s}  agree")
    for name, fn in list(pair_cases()) + list(bound_cases()):
        t_np, v_np = best_of(lambda: fn(False), args.repeat)
        if _accel.HAVE_NUMBA:
            fn(True)
            t_nb, v_nb = best_of(lambda: fn(True), args.repeat)
            agree = abs(v_nb - v_np) <= 1e-12
            print(f"{name:40s} {t_np:11.4f} {t_nb:11.4f} {t_np / t_nb:8.1f}x  {agree}")
        else:
            print(f"{name:40s} {t_np:11.4f} {'-':>11s} {'-':>8s}  -")


if __name__ == "__main__":
    main()
