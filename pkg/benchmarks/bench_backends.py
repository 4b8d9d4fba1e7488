"""Compiled (numba) vs pure-numpy kernels.

Run with ``python benchmarks/bench_backends.py``.  Both kernel flavours are
imported directly, so one process times both regardless of ENTEVO_BACKEND;
the last section times ``tau_lower_bound`` end to end in two subprocesses,
one per backend.
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from entevo import _kernels as K
from entevo.measures import psd_factor
from entevo.states import random_density, random_pure


def per_call(fn, number):
    fn()  # warm-up / compile
    return min(timeit.repeat(fn, number=number, repeat=5)) / number


def bench_block(number):
    print("block spin-flip singular values (us per call)")
    print(f"{'state':<26}{'numba':>10}{'numpy':>10}{'speedup':>9}{'max diff':>11}")
    cases = [
        ("3 qubits, pure", random_pure(3, 1).density()),
        ("3 qubits, rank 2", random_density(3, 2, rank=2)),
        ("3 qubits, full rank", random_density(3, 3)),
        ("4 qubits, rank 3", random_density(4, 4, rank=3)),
        ("5 qubits, rank 4", random_density(5, 5, rank=4)),
        ("6 qubits, rank 2", random_density(6, 6, rank=2)),
    ]
    for label, rho in cases:
        x = np.ascontiguousarray(psd_factor(rho.mat))
        d1 = x.shape[0] // 2
        n = max(1, number // d1**2)
        a = per_call(lambda: K.block_lambdas_nb(x, d1), n)
        b = per_call(lambda: K.block_lambdas_np(x, d1), n)
        diff = np.abs(K.block_lambdas_nb(x, d1) - K.block_lambdas_np(x, d1)).max()
        print(f"{label:<26}{a * 1e6:>10.1f}{b * 1e6:>10.1f}{b / a:>9.2f}{diff:>11.1e}")


def bench_eigh(number):
    print("\nHermitian eigensolver (us per call)")
    print(f"{'dim':<26}{'jacobi':>10}{'lapack':>10}{'ratio':>9}")
    rng = np.random.default_rng(0)
    for d in (4, 8, 16, 32, 64):
        a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        h = a + a.conj().T
        n = max(1, number // d)
        j = per_call(lambda: K.jacobi_eigh_nb(h, 1e-15, 60), n)
        lp = per_call(lambda: K.jacobi_eigh_np(h), n)
        print(f"{d:<26}{j * 1e6:>10.1f}{lp * 1e6:>10.1f}{lp / j:>9.2f}")


END_TO_END = """
import timeit
from entevo.measures import tau_lower_bound
from entevo.states import random_rank2
rho = random_rank2(3, 0)
tau_lower_bound(rho)
print(min(timeit.repeat(lambda: tau_lower_bound(rho), number=200, repeat=5)) / 200)
"""


def bench_end_to_end():
    print("\ntau_lower_bound on a rank-2 three-qubit state (us per call)")
    for backend in ("numba", "numpy"):
        env = dict(os.environ, ENTEVO_BACKEND=backend)
        out = subprocess.run([sys.executable, "-c", END_TO_END], env=env, capture_output=True,
                             text=True, check=True)
        print(f"  ENTEVO_BACKEND={backend:<6} {float(out.stdout) * 1e6:8.1f}")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--number", type=int, default=400, help="base repetition count")
    args = parser.parse_args()
    bench_block(args.number)
    bench_eigh(args.number)
    bench_end_to_end()


if __name__ == "__main__":
    main()
