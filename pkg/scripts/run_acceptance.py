"""Run the acceptance battery and write the JSON dossier."""

import argparse
import json

from arithstat.acceptance import Budget, run_all


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--budget", default="default", choices=("default", "tiny"))
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", default="dossier.json")
    args = ap.parse_args()

    budget = Budget.preset(args.budget)
    budget.workers = args.workers
    dossier = run_all(budget, echo=print)
    with open(args.out, "w") as fh:
        json.dump(dossier, fh, indent=2, sort_keys=True)
    print(dossier["summary"], "->", args.out)


if __name__ == "__main__":
    main()
