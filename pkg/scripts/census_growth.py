"""Census counts per decade against the leading term and the two-term asymptotic."""

import argparse

from arithstat.census import Census
from arithstat.density import ZETA3, secondary_term_prediction


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-disc", type=int, default=10**6)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    C = Census.obtain(args.max_disc, workers=args.workers)
    print(*C.notes, sep="\n")
    print(f"{'X':>9} {'N+':>8} {'N-':>8} {'N/X':>8} {'1/3z3':>8} {'2-term':>10}")
    X = 1000
    while X <= args.max_disc:
        pred = secondary_term_prediction(X)
        n = C.count(X)
        print(f"{X:>9} {C.count(X, 'totally-real'):>8} {C.count(X, 'complex'):>8} {n / X:8.5f} "
              f"{1 / (3 * ZETA3):8.5f} {pred['total']:10.1f}")
        X *= 10


if __name__ == "__main__":
    main()
