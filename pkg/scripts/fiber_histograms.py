"""Fiber-size histograms of the built-in torus maps over F_p."""
import argparse

from cayleydeg.constructions import named_candidate
from cayleydeg.engine import brute_force_degree
from cayleydeg.exactfield import find_prime_with_root

MAPS = ["pgl2", "sl2", "sl2-sq-isogeny", "g2", "sl3", "product:pgl2,sl2",
        "product:sl2-sq-isogeny,sl2-sq-isogeny", "sl4"]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--maps", nargs="*", default=MAPS)
    ap.add_argument("--min-prime", type=int, default=211)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    for name in args.maps:
        n = int(name[2:]) if name.startswith("sl") and name[2:].isdigit() else 2
        p = find_prime_with_root(n, args.min_prime)
        rep = brute_force_degree(named_candidate(name, p), p, workers=args.workers)
        total = sum(rep.histogram.values())
        shares = ", ".join(f"{k}: {v / total:.3%}" for k, v in sorted(rep.histogram.items()))
        print(f"{name:40s} p={p:4d} degree={rep.degree}  [{shares}]")


if __name__ == "__main__":
    main()
