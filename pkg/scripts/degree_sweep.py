"""Projection degree of the SL_n torus map for every root choice and a few primes.

    python scripts/degree_sweep.py --max-n 10 --primes 3
"""
import argparse
import time

from cayleydeg.constructions import sln_projection_spec
from cayleydeg.engine import projection_degree
from cayleydeg.exactfield import find_prime_with_root, make_stream


def sweep(max_n: int, n_primes: int, samples: int, seed: int):
    for n in range(3, max_n + 1):
        p = 210
        for _ in range(n_primes):
            p = find_prime_with_root(n, p + 1)
            t0 = time.perf_counter()
            rows = []
            for k in range(1, n):
                rep = projection_degree(sln_projection_spec(n, p, k), p, samples, rng=make_stream(seed, k))
                rows.append(f"{rep.degree}{'' if rep.stable else '*'}")
            print(f"n={n:2d} p={p:5d} degrees by root: {' '.join(rows):30s} ({time.perf_counter() - t0:.2f}s)")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-n", type=int, default=8)
    ap.add_argument("--primes", type=int, default=2)
    ap.add_argument("--samples", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    print("* = samples disagreed (some target hit the branch locus); the modal value is shown")
    sweep(a.max_n, a.primes, a.samples, a.seed)
