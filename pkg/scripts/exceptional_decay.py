"""Exceptional fraction of the census over decades, with the fields found."""

import argparse
import json

from arithstat.census import Census
from arithstat.exceptional import exceptional_census_fraction, exceptional_fields


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-disc", type=int, default=10**6)
    ap.add_argument("--bound", type=int, default=50)
    ap.add_argument("--t-max", type=int, default=10**4)
    ap.add_argument("--list", type=int, default=20, help="print the first N exceptional fields")
    args = ap.parse_args()

    C = Census.obtain(args.max_disc)
    cps = [10**k for k in range(2, 20) if 10**k <= args.max_disc]
    for X, f in exceptional_census_fraction(C, cps, args.bound, args.t_max):
        print(f"X={X:>9}  fraction={f:.6f}")
    for e in exceptional_fields(args.bound, args.t_max)[: args.list]:
        print(json.dumps(e.to_dict() | {"witnesses": e.to_dict()["witnesses"][:2], "all_tags": e.all_tags[:3]}))


if __name__ == "__main__":
    main()
