"""Compare the compiled kernels with the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat N] [--k K]

Each row times one kernel entry point on both backends with identical
inputs, checks that the results agree, and reports the speed-up.
"""

import argparse
import sys
import timeit

import numpy as np

from detsieve._kernels import _pykernels, compiled_backend
from detsieve.enumerators import cauchy_binet_poly
from detsieve.field import GF2_8, GF2_64, P31
from detsieve.linalg import Matrix
from detsieve.matroid import LinearMatroid
from detsieve.sieve import _SieveSetup, _trial_inputs


def cases(k: int, gen: np.random.Generator):
    """(name, callable taking a backend) pairs."""
    out = []
    for F in (GF2_8, GF2_64, P31):
        a, b = F.random_vector(gen, 2)
        out.append((f"mul x1000 {F.label}", lambda K, F=F, a=a, b=b: [K.mul(F.fs, a, b) for _ in range(1000)]))
    for F in (GF2_64, P31):
        M = F.random_vector(gen, 16 * 16)
        out.append((f"det_rank 16x16 {F.label}", lambda K, F=F, M=M: K.det_rank(F.fs, M, 16, 16)))
    F = GF2_64
    x, y = F.random_vector(gen, 1 << 8), F.random_vector(gen, 1 << 8)
    out.append(("wedge k=8 GF(2^64)", lambda K: list(K.wedge(F.fs, 8, x, y))))
    A = Matrix.random(F, k, k + 3, gen)
    setup = _SieveSetup(cauchy_binet_poly(A, A), LinearMatroid(A), None, "basis", None, None)
    plan = setup.plan(*_trial_inputs(setup, 1, (), 0))
    prog = setup.flat[0].circuit.compiled()
    out.append((f"sieve trial k={k} ({1 << k} evals)", lambda K: K.sieve_sum_program(F.fs, prog, plan)))
    return out


def _plain(value):
    return list(value) if isinstance(value, (list, tuple)) else value


def best_of(fn, repeat: int) -> float:
    runs = timeit.repeat(fn, number=1, repeat=repeat)
    return min(runs)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3, help="timing runs per row (best is kept)")
    ap.add_argument("--k", type=int, default=8, help="matroid rank of the sieve-trial row")
    args = ap.parse_args(argv)
    if compiled_backend is None:
        print("compiled extension unavailable; build it with `pip install -e .`", file=sys.stderr)
        return 1
    gen = np.random.default_rng(2024)
    print(f"{'kernel':34s} {'compiled':>12s} {'python':>12s} {'speed-up':>9s}")
    for name, run in cases(args.k, gen):
        if _plain(run(compiled_backend)) != _plain(run(_pykernels)):
            print(f"{name}: backends disagree", file=sys.stderr)
            return 2
        tc = best_of(lambda: run(compiled_backend), args.repeat)
        tp = best_of(lambda: run(_pykernels), args.repeat)
        print(f"{name:34s} {tc * 1e3:10.3f}ms {tp * 1e3:10.3f}ms {tp / tc:8.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
