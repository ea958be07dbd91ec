"""Command-line workbench: ``arithstat <subcommand> ...``.

Reports are JSON documents ``{"meta": {...}, "report": {...}}``; only the
meta block carries timestamps, so reports are reproducible byte for byte.
Exit codes: 0 ok, 1 acceptance failures, 2 bad input or state, 3 resource limit,
4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
import traceback
from fractions import Fraction
from pathlib import Path

from . import __version__
from .census import (CACHE_ENV, Census, CensusStateError, default_cache_dir, even_valuation, has_type,
                     unramified)
from .density import (ZETA3, LocalFactor, compare_predicted_empirical, fit_product_decay, partial_product)
from .frobenian import AllPrimes, Explicit, HasRoot, NoRoot, PrimeSet, Residue, empirical_density
from .poly import DomainError, IntPoly
from .primes import ResourceLimitError

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE, EXIT_INVARIANT = 0, 1, 2, 3, 4

# reference values shown beside measurements
KNOWN_DENSITIES = {"x0_64": 21 / 32}
CENSUS_CONSTANTS = {None: 1 / (3 * ZETA3), "complex": 1 / (4 * ZETA3), "totally-real": 1 / (12 * ZETA3)}


class UsageError(Exception):
    pass


# -- parsing helpers ----------------------------------------------------------


def parse_poly(text: str) -> IntPoly:
    """Integer polynomial in T from an expression such as '-27T^8 - 1' or '1,0,-3' (high to low)."""
    text = text.strip()
    if all(ch in "0123456789-+, " for ch in text) and "," in text:
        return IntPoly([int(c) for c in reversed(text.split(","))])
    import sympy

    from sympy.parsing.sympy_parser import (convert_xor, implicit_multiplication_application, parse_expr,
                                            standard_transformations)

    T = sympy.Symbol("T")
    try:
        expr = parse_expr(text, local_dict={"T": T},
                          transformations=standard_transformations + (implicit_multiplication_application, convert_xor))
        P = sympy.Poly(sympy.expand(expr), T)
    except (SyntaxError, TypeError, sympy.SympifyError, sympy.PolynomialError) as exc:
        raise UsageError(f"not a polynomial in T: {text!r}") from exc
    coeffs = P.all_coeffs()[::-1]
    if any(not c.is_integer for c in coeffs):
        raise UsageError(f"polynomial {text!r} has non-integer coefficients")
    return IntPoly([int(c) for c in coeffs])


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"expected comma separated integers, got {text!r}") from exc


def parse_prime_set(args) -> tuple[PrimeSet, float | None]:
    """Prime set from the mutually exclusive selector flags, with its density when known."""
    if args.residue:
        try:
            m, rs = args.residue.split(":")
            modulus = int(m)
        except ValueError as exc:
            raise UsageError("--residue takes MODULUS:R1,R2,...") from exc
        S = Residue(modulus, _int_list(rs))
        return S, len(S.residues) / _phi(modulus)
    if args.explicit is not None:
        return Explicit(_int_list(args.explicit)), 0.0
    if args.noroot:
        return NoRoot(parse_poly(args.noroot)), None
    if args.hasroot:
        return HasRoot(parse_poly(args.hasroot)), None
    if args.set_json:
        src = Path(args.set_json)
        text = src.read_text() if src.exists() else args.set_json
        try:
            return PrimeSet.from_json(text), None
        except (json.JSONDecodeError, KeyError) as exc:
            raise UsageError(f"bad prime set JSON: {exc}") from exc
    if args.all_primes:
        return AllPrimes(), 1.0
    raise UsageError("choose a prime set: --residue, --explicit, --noroot, --hasroot, --set-json or --all-primes")


def _phi(n: int) -> int:
    return sum(math.gcd(k, n) == 1 for k in range(1, n + 1))


def parse_condition(text: str):
    """unramified:P | even:P | type:P:T1,T2"""
    parts = text.split(":")
    try:
        p = int(parts[1])
    except (IndexError, ValueError) as exc:
        raise UsageError(f"bad condition {text!r}") from exc
    if parts[0] == "unramified" and len(parts) == 2:
        return unramified(p)
    if parts[0] in ("even", "even-valuation") and len(parts) == 2:
        return even_valuation(p)
    if parts[0] == "type" and len(parts) == 3:
        return has_type(p, parts[2].split(","))
    raise UsageError(f"bad condition {text!r}; use unramified:P, even:P or type:P:T1,T2")


def _positive(text: str) -> int:
    try:
        v = int(float(text)) if "e" in text.lower() else int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    if v <= 0:
        raise argparse.ArgumentTypeError(f"{text!r} must be positive")
    return v


def _add_prime_set_flags(p):
    g = p.add_argument_group("prime set")
    g.add_argument("--residue", help="MODULUS:R1,R2 (e.g. 4:3)")
    g.add_argument("--explicit", help="comma separated primes")
    g.add_argument("--noroot", help="primes where the polynomial has no root mod p")
    g.add_argument("--hasroot", help="primes where the polynomial has a root mod p")
    g.add_argument("--set-json", help="prime set descriptor (JSON text or file)")
    g.add_argument("--all-primes", action="store_true")


def _cache_dir(args) -> Path:
    return Path(args.cache_dir) if args.cache_dir else default_cache_dir()


# -- subcommands ----------------------------------------------------------------


def cmd_census_build(args):
    path = _cache_dir(args) / "cubic_census.csv"
    if args.force and path.exists():
        path.unlink()
    C = Census.obtain(args.max_disc, _cache_dir(args), workers=args.workers)
    X = args.max_disc
    report = {
        "max_disc": X,
        "cache": str(path),
        "counts": {"total": C.count(X), "complex": C.count(X, "complex"), "totally-real": C.count(X, "totally-real")},
        "expected_leading_term": {k or "total": v * X for k, v in CENSUS_CONSTANTS.items()},
    }
    return report, C.notes, None


def _loaded_census(args) -> Census:
    path = _cache_dir(args) / "cubic_census.csv"
    if not path.exists():
        raise CensusStateError(f"no census at {path}; run census-build first")
    C = Census.load(path)
    if C.max_disc < args.max_disc:
        raise CensusStateError(f"census covers |disc| <= {C.max_disc}, query asks {args.max_disc}")
    return C


def cmd_census_query(args):
    C = _loaded_census(args)
    X = args.max_disc
    conds = [parse_condition(c) for c in args.condition]
    sel = C._select(X, None)
    keep = sel[C.condition_mask(conds, X)]
    if args.signature:
        keep = keep[(C.discs[keep] < 0) == (args.signature == "complex")]
    rows = [_row(C, int(i)) for i in keep]  # the census is stored in (|disc|, disc) order
    report = {
        "max_disc": X,
        "signature": args.signature or "all",
        "conditions": [c.label for c in conds],
        "count": len(rows),
        "expected_leading_term_unconditioned": CENSUS_CONSTANTS[args.signature] * X,
    }
    if not args.no_rows:
        report["rows"] = rows
    table = (["a", "b", "c", "d", "disc", "signature", "galois_type"],
             [[r[k] for k in ("a", "b", "c", "d", "disc", "signature", "galois_type")] for r in rows])
    return report, [], table


def _row(C: Census, i: int) -> dict:
    a, b, c, d = map(int, C.forms[i])
    D = int(C.discs[i])
    r = math.isqrt(D) if D > 0 else -1
    return {"a": a, "b": b, "c": c, "d": d, "disc": D, "signature": "totally-real" if D > 0 else "complex",
            "galois_type": "C3" if r * r == D else "S3"}


def cmd_sieve(args):
    from .sieve import count_even_valuations_naive, count_even_valuations_sieved

    S, alpha = parse_prime_set(args)
    cps = args.checkpoints
    if cps is not None and "," in cps:
        cps = _int_list(cps)
    elif cps is not None:
        cps = int(cps)
    series = count_even_valuations_sieved(S, args.max, cps, workers=args.workers, alpha_expected=alpha)
    report = {"prime_set": S.to_dict(), "max": args.max, **series.summary()}
    if args.all_primes:
        report["expected_counts"] = [math.isqrt(x) for x in series.checkpoints]
    if args.naive or args.max <= 10**5:
        if args.max > 10**6:
            raise ResourceLimitError("naive oracle limited to --max <= 10^6")
        naive = [count_even_valuations_naive(S, x) for x in series.checkpoints]
        report["naive_counts"] = naive
        report["naive_agrees"] = naive == series.counts
    table = (["X", "count", "predicted"], [row.split(",") for row in series.to_csv().splitlines()[1:]])
    return report, [], table


def cmd_density(args):
    notes = []
    if args.compare:
        C = _loaded_census(argparse.Namespace(cache_dir=args.cache_dir, max_disc=args.compare))
        T = _int_list(args.T) if args.T else []
        report = compare_predicted_empirical(C, args.compare, T, args.condition)
        return report, C.notes, None
    S, dens = parse_prime_set(args)
    est = empirical_density(S, args.limit, workers=args.workers)
    report = {"prime_set": S.to_dict(), "description": S.describe(), "estimate": est.to_dict(),
              "expected_density": dens if args.expect is None else args.expect}
    table = None
    if args.product:
        degree, cond = args.factor.split(":")
        series = partial_product(S, LocalFactor(int(degree), cond), args.product)
        slope = fit_product_decay(series, report["expected_density"])
        report["partial_product"] = {**series.to_dict(), "slope": slope, "expected_slope": report["expected_density"]}
        table = (["N", "factors", "partial_product"], [r.split(",") for r in series.to_csv().splitlines()[1:]])
    return report, notes, table


def cmd_family(args):
    from .family import (DEFAULT_SEED, analyze, field_disc_of_specialization, get_family, load_family,
                         sample_parameters, specialize, verify_parity)

    F = load_family(args.file) if args.file else get_family(args.name)
    report: dict = {"family": F.to_dict(), "equation": F.pretty()}
    table = None
    if not (args.analyze or args.parity or args.specialize):
        args.analyze = True
    fam_report = None
    if args.analyze or args.parity:
        fam_report = analyze(F, args.limit, workers=args.workers)
        if args.analyze:
            report["analysis"] = fam_report.to_dict()
            report["analysis"]["expected_density"] = KNOWN_DENSITIES.get(F.name)
    if args.parity:
        seed = DEFAULT_SEED if args.seed is None else args.seed
        ts = sample_parameters(args.height, args.samples, seed)
        rep = verify_parity(F, ts, args.prime_limit, fam_report)
        report["parity"] = {**rep.to_dict(), "seed": seed, "height": args.height, "expected_violations": 0}
        table = (["t", "field_disc"], [[str(t), d] for t, d in rep.rows])
    if args.specialize:
        out = []
        for tok in args.specialize.split(","):
            t = Fraction(tok.strip())
            f = specialize(F, t)
            out.append({"t": str(t), "theta": f is None,
                        "monic": None if f is None else f.pretty("Y"),
                        "field_disc": None if f is None else field_disc_of_specialization(F, t)})
        report["specializations"] = out
    return report, [], table


def cmd_exceptional(args):
    from .exceptional import exceptional_census_fraction, exceptional_fields

    fields = exceptional_fields(args.bound, args.t_max)
    report: dict = {"B": args.bound, "t_max": args.t_max,
                    "complex_expected_subset": [-31, -23],
                    "fields": [e.to_dict() for e in fields if args.max_disc is None or abs(e.field.disc) <= args.max_disc]}
    report["complex_discs"] = sorted(d["disc"] for d in report["fields"] if d["disc"] < 0)
    table = None
    if args.census_fraction:
        cps = _int_list(args.census_fraction)
        C = _loaded_census(argparse.Namespace(cache_dir=args.cache_dir, max_disc=max(cps)))
        series = exceptional_census_fraction(C, cps, args.bound, args.t_max)
        report["decay"] = [{"X": X, "fraction": f} for X, f in series]
        table = (["X", "fraction"], [[X, repr(f)] for X, f in series])
    return report, [], table


def cmd_report_all(args):
    from .acceptance import Budget, run_all

    budget = Budget.preset(args.budget)
    budget.workers = args.workers
    budget.cache_dir = str(args.cache_dir) if args.cache_dir else None
    echo = (lambda s: print(s, file=sys.stderr, flush=True)) if not args.quiet else None
    dossier = run_all(budget, only=set(_int_list(args.only)) if args.only else None, echo=echo)
    for r in dossier["results"]:
        r.pop("seconds")  # timing goes to meta
    return dossier, dossier.pop("notes"), None


# -- driver -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    def common(parser, defaults: bool):
        # accepted before or after the subcommand
        d = (lambda v: v) if defaults else (lambda v: argparse.SUPPRESS)
        parser.add_argument("--workers", type=_positive, default=d(os.cpu_count() or 1),
                            help="worker processes (default: all cores)")
        parser.add_argument("--cache-dir", default=d(None),
                            help=f"census cache directory (default: ${CACHE_ENV} or ~/.cache/arithstat)")
        parser.add_argument("--format", choices=("json", "csv"), default=d("json"))
        parser.add_argument("--out", default=d(None), help="write the report here instead of stdout")

    p = argparse.ArgumentParser(prog="arithstat", description="Cubic field and prime set statistics workbench.")
    p.add_argument("--version", action="version", version=f"arithstat {__version__}")
    common(p, True)
    shared = argparse.ArgumentParser(add_help=False)
    common(shared, False)
    _sub = p.add_subparsers(dest="command", required=True)

    class _Sub:
        def add_parser(self, name, **kw):
            return _sub.add_parser(name, parents=[shared], **kw)

    sub = _Sub()

    s = sub.add_parser("census-build", help="enumerate cubic fields up to |disc| <= X and cache them")
    s.add_argument("--max-disc", type=_positive, required=True)
    s.add_argument("--force", action="store_true", help="ignore an existing cache")
    s.set_defaults(run=cmd_census_build)

    s = sub.add_parser("census-query", help="count or list cached fields")
    s.add_argument("--max-disc", type=_positive, required=True)
    s.add_argument("--signature", choices=("complex", "totally-real"))
    s.add_argument("--condition", action="append", default=[], help="unramified:P, even:P or type:P:T1,T2")
    s.add_argument("--no-rows", action="store_true")
    s.set_defaults(run=cmd_census_query)

    s = sub.add_parser("sieve", help="count n <= X with even valuation at every prime of a set")
    _add_prime_set_flags(s)
    s.add_argument("--max", type=_positive, required=True)
    s.add_argument("--checkpoints", help="count k (log-log spaced) or a comma list")
    s.add_argument("--naive", action="store_true", help="also run the factoring oracle (automatic for X <= 1e5)")
    s.set_defaults(run=cmd_sieve)

    s = sub.add_parser("density", help="empirical density of a prime set, partial products, census comparison")
    _add_prime_set_flags(s)
    s.add_argument("--limit", type=_positive, default=10**6)
    s.add_argument("--expect", type=float, help="reference density to report alongside")
    s.add_argument("--product", type=_positive, help="partial Euler product up to N")
    s.add_argument("--factor", default="3:even-valuation", help="DEGREE:CONDITION local factor")
    s.add_argument("--compare", type=_positive, help="compare the census count at X with the local-factor prediction")
    s.add_argument("--T", help="comma separated primes carrying the condition")
    s.add_argument("--condition", default="unramified", choices=("unramified", "even-valuation"))
    s.set_defaults(run=cmd_density)

    s = sub.add_parser("family", help="analyze a one-parameter family of cubic fields")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--name", default="x0_64")
    g.add_argument("--file", help="family descriptor JSON")
    s.add_argument("--analyze", action="store_true")
    s.add_argument("--limit", type=_positive, default=10**6, help="prime bound for the density sample")
    s.add_argument("--parity", action="store_true")
    s.add_argument("--samples", type=_positive, default=100)
    s.add_argument("--height", type=_positive, default=50)
    s.add_argument("--seed", type=int)
    s.add_argument("--prime-limit", type=_positive, default=10**4)
    s.add_argument("--specialize", help="comma separated rationals t")
    s.set_defaults(run=cmd_family)

    s = sub.add_parser("exceptional", help="fields with exceptional units")
    s.add_argument("--bound", type=_positive, default=50)
    s.add_argument("--t-max", type=_positive, default=10**4)
    s.add_argument("--max-disc", type=_positive)
    s.add_argument("--census-fraction", help="comma separated X for the census decay series")
    s.set_defaults(run=cmd_exceptional)

    s = sub.add_parser("report-all", help="run the acceptance battery")
    s.add_argument("--budget", default="default", choices=("default", "tiny"))
    s.add_argument("--only", help="comma separated criterion numbers")
    s.add_argument("--quiet", action="store_true")
    s.set_defaults(run=cmd_report_all)
    return p


def render(report, notes, table, args, started: float, argv) -> str:
    if args.format == "csv":
        if table is None:
            raise UsageError(f"{args.command} has no CSV form")
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(table[0])
        w.writerows(table[1])
        return buf.getvalue()
    meta = {"version": __version__, "command": list(argv), "started": time.strftime("%Y-%m-%dT%H:%M:%S%z", time.localtime(started)),
            "elapsed_seconds": round(time.time() - started, 3), "notes": notes}
    return json.dumps({"meta": meta, "report": report}, sort_keys=True, indent=2) + "\n"


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    started = time.time()
    try:
        report, notes, table = args.run(args)
        text = render(report, notes, table, args, started, argv)
    except (UsageError, DomainError, CensusStateError, FileNotFoundError, ValueError) as exc:
        print(f"arithstat: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ResourceLimitError, MemoryError) as exc:
        print(f"arithstat: resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except Exception as exc:
        traceback.print_exc()
        print(f"arithstat: internal invariant violated: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if args.command == "report-all" and report["summary"]["fail"]:
        return EXIT_FAIL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
