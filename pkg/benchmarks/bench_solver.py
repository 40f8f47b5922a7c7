"""Time the solver kernels on both backends.

The numba kernels and the plain numpy fallback compute identical
results; this script measures what the compiled path buys on an
exhaustive scan and on annealing.  Backend selection happens per call
through QUBOGATES_BACKEND, so each timing block just flips the
environment variable.

Run from the repository root:

    python3 benchmarks/bench_solver.py
    python3 benchmarks/bench_solver.py --vars 20 --repeats 5
"""

import argparse
import os
import statistics
import time

import numpy as np

from qubogates import Poly, Var, penalty_to_qubo, solve_anneal, solve_exhaustive
from qubogates.solver import AnnealParams

BACKENDS = ("numpy", "numba")


def random_model(rng, n_vars, density=0.5):
    vs = [Poly.variable(Var(f"x{t}")) for t in range(n_vars)]
    p = Poly.constant(int(rng.integers(-5, 6)))
    for t, v in enumerate(vs):
        p = p + int(rng.integers(-5, 6)) * v
        for u in vs[t + 1 :]:
            if rng.random() < density:
                p = p + int(rng.integers(-5, 6)) * v * u
    return penalty_to_qubo(p, variables=tuple(Var(f"x{t}") for t in range(n_vars)))


def timed(fn, repeats):
    fn()  # warmup: JIT compilation on the numba path, caches on both
    samples = []
    for _ in range(repeats):
        start = time.perf_counter()
        result = fn()
        samples.append(time.perf_counter() - start)
    return statistics.median(samples), result


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--vars", type=int, default=18, help="exhaustive model size")
    parser.add_argument("--anneal-vars", type=int, default=26, help="anneal model size")
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--sweeps", type=int, default=400)
    parser.add_argument("--restarts", type=int, default=64)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    exhaustive_model = random_model(rng, args.vars)
    anneal_model = random_model(rng, args.anneal_vars)
    params = AnnealParams(sweeps=args.sweeps, restarts=args.restarts, seed=args.seed)

    print(f"exhaustive: {args.vars} variables, 2^{args.vars} assignments")
    values = {}
    for backend in BACKENDS:
        os.environ["QUBOGATES_BACKEND"] = backend
        median, result = timed(
            lambda: solve_exhaustive(exhaustive_model, limit=args.vars), args.repeats
        )
        values[backend] = result.value
        print(f"  {backend:<6} {median:8.3f}s   ground value {result.value}")
    assert values["numpy"] == values["numba"], "backends disagree on the minimum"
    print(f"  agreement: both find ground value {values['numpy']}")

    print(
        f"anneal: {args.anneal_vars} variables,"
        f" {args.restarts} restarts x {args.sweeps} sweeps"
    )
    bests = {}
    for backend in BACKENDS:
        os.environ["QUBOGATES_BACKEND"] = backend
        median, result = timed(
            lambda: solve_anneal(anneal_model, params=params), args.repeats
        )
        bests[backend] = result.value
        print(f"  {backend:<6} {median:8.3f}s   best value {result.value}")
    assert bests["numpy"] == bests["numba"], "seeded runs should be identical"
    print(f"  agreement: both settle at {bests['numpy']}")


if __name__ == "__main__":
    main()
