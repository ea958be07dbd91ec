"""Fitted Delange exponents for residue-class prime sets, with and without a 1/log X correction."""

import argparse
import math

from arithstat.frobenian import Residue
from arithstat.sieve import count_even_valuations_sieved, fit_delange, fit_delange_corrected


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max", type=int, default=10**8)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    cps = [round(10 ** (k / 2)) for k in range(6, 40) if 10 ** (k / 2) <= args.max]
    for S in (Residue(4, {3}), Residue(3, {2}), Residue(8, {3, 5, 7})):
        s = count_even_valuations_sieved(S, args.max, cps, workers=args.workers)
        a, c = fit_delange(s)
        a2, c2, beta = fit_delange_corrected(s)
        print(f"{S.describe():28s} alpha_hat={a:.4f} C={c:.4f} | corrected alpha={a2:.4f} beta={beta:.3f}")
        # local slopes between consecutive checkpoints
        for (x0, n0), (x1, n1) in zip(zip(s.checkpoints, s.counts), zip(s.checkpoints[1:], s.counts[1:])):
            loc = -(math.log(n1 / x1) - math.log(n0 / x0)) / (math.log(math.log(x1)) - math.log(math.log(x0)))
            print(f"    [{x0:.0e}, {x1:.0e}] local alpha {loc:.4f}")


if __name__ == "__main__":
    main()
