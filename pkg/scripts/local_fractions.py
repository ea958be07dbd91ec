"""Conditional fractions by prime, split by splitting type, against the local factors."""

import argparse
from collections import Counter

import numpy as np

from arithstat.census import Census, SPLIT_TYPES, even_valuation, splitting_type, unramified
from arithstat.density import btt_factor_even, btt_factor_unramified


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-disc", type=int, default=10**6)
    ap.add_argument("--primes", default="2,5,7,11")
    ap.add_argument("--type-sample", type=int, default=20000, help="fields sampled for the splitting-type table")
    args = ap.parse_args()

    C = Census.obtain(args.max_disc)
    X, n = args.max_disc, C.count(args.max_disc)
    fields = C.fields(X)
    rng = np.random.default_rng(0)
    sample = [fields[i] for i in rng.choice(len(fields), min(args.type_sample, len(fields)), replace=False)]
    for p in map(int, args.primes.split(",")):
        unr = C.count_with_conditions([unramified(p)], X) / n
        even = C.count_with_conditions([even_valuation(p)], X) / n
        types = Counter(splitting_type(K, p) for K in sample)
        share = {t: types[t] / len(sample) for t in SPLIT_TYPES}
        print(f"p={p}: unramified {unr:.4f} (factor {float(btt_factor_unramified(p)):.4f}), "
              f"ord even {even:.4f}, not 1^21 {1 - share['1^21']:.4f} (factor {float(btt_factor_even(p)):.4f})")
        print("   types:", " ".join(f"{t}={share[t]:.4f}" for t in SPLIT_TYPES))


if __name__ == "__main__":
    main()
