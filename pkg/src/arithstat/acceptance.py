"""The acceptance battery: each check measures one headline number against its target."""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable

from .census import Census, enumerate_fields, even_valuation, has_type, unramified
from .density import (ZETA3, LocalFactor, fit_product_decay, partial_product,
                      secondary_term_prediction)
from .exceptional import (enumerate_exceptional_polys, field_of_poly as exceptional_field_of, exceptional_census_fraction, nagell_f, nagell_g,
                          nagell_index, quadratic_field_disc, witness_index)
from .family import DEFAULT_SEED, get_family, sample_parameters, verify_parity
from .frobenian import AllPrimes, Explicit, HasRoot, NoRoot, Residue, empirical_density
from .oracles import box_scan_fields, dedekind_field_discs
from .poly import IntPoly, disc_in_Y, poly_discriminant, squarefree_split
from .sieve import (count_even_valuations_naive, count_even_valuations_sieved, fit_delange,
                    fit_delange_corrected)

G8 = IntPoly([-1, 0, 0, 0, 0, 0, 0, 0, -27])
F4 = IntPoly([-31, -6, 7, 6, 1])
CUBIC_CONSTANT = 1 / (3 * ZETA3)


@dataclass
class Budget:
    census_max_disc: int = 10**6
    density_limit: int = 10**7
    sieve_max: int = 10**8
    naive_max: int = 10**5
    product_limit: int = 10**7
    t_max: int = 10**4
    exceptional_bound: int = 50
    parity_samples: int = 100
    parity_height: int = 50
    parity_prime_limit: int = 10**4
    workers: int = 1
    cache_dir: str | None = None

    @classmethod
    def preset(cls, name: str) -> "Budget":
        if name == "default":
            return cls()
        if name == "tiny":
            return cls(census_max_disc=10**4, density_limit=10**5, sieve_max=10**6, naive_max=10**4,
                       product_limit=10**5, t_max=100, parity_samples=10, parity_prime_limit=10**3)
        raise ValueError(f"unknown budget preset {name!r}")


@dataclass
class Result:
    number: int
    title: str
    status: str  # pass | fail | skipped
    measured: dict
    expected: dict
    detail: str = ""
    seconds: float = 0.0

    def line(self) -> str:
        return f"[{self.status.upper():7s}] criterion {self.number:2d}: {self.title} | {self.detail}"


@dataclass
class Context:
    budget: Budget
    notes: list = field(default_factory=list)
    _census: Census | None = None

    def census(self) -> Census:
        if self._census is None:
            cache = Path(self.budget.cache_dir) if self.budget.cache_dir else None
            self._census = Census.obtain(self.budget.census_max_disc, cache, workers=self.budget.workers)
            self.notes.extend(self._census.notes)
        return self._census


@dataclass(frozen=True)
class Criterion:
    number: int
    title: str
    run: Callable
    needs: dict  # budget field -> minimum value


CRITERIA: list[Criterion] = []


def criterion(number: int, title: str, **needs):
    def wrap(fn):
        CRITERIA.append(Criterion(number, title, fn, needs))
        return fn

    return wrap


@criterion(1, "disc_Y(4Y^3+Y-T^4) and its squarefree split")
def _c1(ctx):
    fam = get_family("x0_64")
    delta = disc_in_Y(fam.F)
    g, h = squarefree_split(delta)
    want = IntPoly([-16, 0, 0, 0, 0, 0, 0, 0, -432])
    ok = delta == want and g == G8 and h == IntPoly([4])
    return ok, {"delta": delta.pretty("T"), "g": g.pretty("T"), "h": h.pretty("T")}, \
        {"delta": want.pretty("T"), "g": G8.pretty("T"), "h": "4"}, ""


@criterion(2, "Nagell discriminant identities on t in [-50, 50]")
def _c2(ctx):
    bad = [t for t in range(-50, 51)
           if poly_discriminant(nagell_g(t)) != (t * t + 3 * t + 9) ** 2
           or poly_discriminant(nagell_f(t)) != t**4 + 6 * t**3 + 7 * t * t - 6 * t - 31]
    return not bad, {"mismatches": bad}, {"mismatches": []}, ""


def _density_check(ctx, S, target):
    est = empirical_density(S, ctx.budget.density_limit, workers=ctx.budget.workers)
    ok = abs(est.ratio - target) <= 0.01
    return ok, est.to_dict(), {"ratio": target, "tolerance": 0.01}, f"ratio {est.ratio:.5f} vs {target}"


@criterion(3, "density of primes where the Nagell quartic has a root", density_limit=10**7)
def _c3(ctx):
    return _density_check(ctx, HasRoot(F4), 0.375)


@criterion(4, "density of primes where -27T^8-1 has no root", density_limit=10**7)
def _c4(ctx):
    return _density_check(ctx, NoRoot(G8), 21 / 32)


@criterion(5, "census total / X against 1/(3 zeta(3))", census_max_disc=10**6)
def _c5(ctx):
    C = ctx.census()
    r5 = C.count(10**5) / 10**5
    r6 = C.count(10**6) / 10**6
    dev5 = abs(r5 - CUBIC_CONSTANT) / CUBIC_CONSTANT
    dev6 = abs(r6 - CUBIC_CONSTANT) / CUBIC_CONSTANT
    ok = dev6 < 0.10 and dev6 < dev5
    sec = secondary_term_prediction(10**6)["total"] / 10**6
    return ok, {"ratio_1e5": r5, "ratio_1e6": r6, "rel_dev_1e5": dev5, "rel_dev_1e6": dev6,
                "two_term_prediction_1e6": sec}, \
        {"ratio": CUBIC_CONSTANT, "rel_tolerance": 0.10}, \
        f"ratio {r6:.5f} ({dev6:.1%} off; 1e5: {dev5:.1%}); two-term asymptotic predicts {sec:.5f}"


@criterion(6, "exact census for |disc| <= 50 with both oracles")
def _c6(ctx):
    cx = sorted(K.disc for K in enumerate_fields(50, "complex"))
    tr = sorted(K.disc for K in enumerate_fields(50, "totally-real"))
    scan = sorted(d for _, d in box_scan_fields(50, 6))
    ded = sorted(dedekind_field_discs(50, 12))
    ok = cx == [-44, -31, -23] and tr == [49] and scan == ded == sorted(cx + tr)
    return ok, {"complex": cx, "totally_real": tr, "box_scan": scan, "dedekind": ded}, \
        {"complex": [-44, -31, -23], "totally_real": [49]}, ""


@criterion(7, "conditional fractions at p = 2", census_max_disc=10**6)
def _c7(ctx):
    C = ctx.census()
    X = 10**6
    n = C.count(X)
    unr = C.count_with_conditions([unramified(2)], X) / n
    even = C.count_with_conditions([even_valuation(2)], X) / n
    not_partial = C.count_with_conditions([has_type(2, ["111", "12", "3", "1^3"])], X) / n
    ok = abs(unr - 4 / 7) <= 0.02 and abs(even - 5 / 7) <= 0.02
    return ok, {"unramified": unr, "even_valuation": even, "not_partially_ramified": not_partial}, \
        {"unramified": 4 / 7, "even_valuation": 5 / 7, "tolerance": 0.02}, \
        f"unramified {unr:.4f} vs {4/7:.4f}; ord_2 even {even:.4f} vs {5/7:.4f}; not 1^21 {not_partial:.4f}"


@criterion(8, "quadratic exceptional fields for B in [3, 30]")
def _c8(ctx):
    found = {B: sorted({quadratic_field_disc(w.f) for w in enumerate_exceptional_polys(2, B)}) for B in range(3, 31)}
    ok = all(v == [-3, 5] for v in found.values())
    return ok, {"field_discs": found[30]}, {"field_discs": [-3, 5]}, ""


@criterion(9, "complex exceptional cubic fields at B = 50")
def _c9(ctx):
    B = ctx.budget.exceptional_bound
    idx = witness_index(B, 0)  # polynomial witnesses only
    discs = sorted({K.disc for K, _, _ in idx.values() if K.disc < 0})
    return set(discs) <= {-23, -31}, {"complex_discs": discs, "B": B}, {"subset_of": [-31, -23]}, ""


@criterion(10, "real exceptional fields at B = 10 are Nagell fields", t_max=10**4)
def _c10(ctx):
    nag = nagell_index(ctx.budget.t_max)
    real = {}
    for w in enumerate_exceptional_polys(3, 10):
        K = exceptional_field_of(w.f)
        if K.disc > 0:
            real[K.canonical_form] = K
    missing = sorted(K.disc for F, K in real.items() if F not in nag)
    return not missing, {"real_fields": len(real), "unmatched_discs": missing}, {"unmatched_discs": []}, \
        f"{len(real)} real fields, {len(missing)} unmatched"


@criterion(11, "exceptional fraction decays over 1e4, 1e5, 1e6", census_max_disc=10**6, t_max=10**4)
def _c11(ctx):
    series = exceptional_census_fraction(ctx.census(), [10**4, 10**5, 10**6], ctx.budget.exceptional_bound,
                                         ctx.budget.t_max)
    fr = [f for _, f in series]
    ok = fr[0] > fr[1] > fr[2] and fr[2] < 0.005
    return ok, {"series": series}, {"strictly_decreasing": True, "last_below": 0.005}, \
        ", ".join(f"{X:.0e}: {f:.5f}" for X, f in series)


@criterion(12, "even-valuation sieve: oracle equality, squares, fitted alpha", sieve_max=10**8, naive_max=10**5)
def _c12(ctx):
    battery = [Explicit({2}), Explicit(), Explicit({2, 3, 5, 7}), Residue(4, {3}), Residue(3, {2}), AllPrimes(),
               NoRoot(G8), HasRoot(F4)]
    X = ctx.budget.naive_max
    mismatch = []
    for S in battery:
        for x in (1, 10, 1000, X):
            if count_even_valuations_naive(S, x) != count_even_valuations_sieved(S, x).counts[-1]:
                mismatch.append((S.describe(), x))
    sq_bad = [x for x in (1, 99, 100, 10**5, 10**6 + 1) if count_even_valuations_sieved(AllPrimes(), x).counts[-1] != math.isqrt(x)]
    series = count_even_valuations_sieved(Residue(4, {3}), 10**8, [10**k for k in range(4, 9)],
                                          workers=ctx.budget.workers, alpha_expected=0.5)
    alpha, C = fit_delange(series)
    alpha_c, _, beta = fit_delange_corrected(series)
    ok = not mismatch and not sq_bad and 0.45 <= alpha <= 0.55
    return ok, {"oracle_mismatches": mismatch, "square_mismatches": sq_bad, "alpha_hat": alpha, "C_hat": C,
                "counts": series.counts, "alpha_with_1/logX_term": alpha_c}, \
        {"alpha_range": [0.45, 0.55]}, \
        f"oracle mismatches {len(mismatch)}; alpha_hat {alpha:.4f} (with 1/log X term: {alpha_c:.4f})"


@criterion(13, "parity of field disc valuations on the X0(64) family")
def _c13(ctx):
    b = ctx.budget
    fam = get_family("x0_64")
    ts = sample_parameters(b.parity_height, b.parity_samples, DEFAULT_SEED)
    rep = verify_parity(fam, ts, b.parity_prime_limit)
    return not rep.violations, rep.to_dict(), {"violations": 0}, \
        f"{rep.samples} samples, {rep.theta_flagged} flagged, {rep.primes_checked} primes, {len(rep.violations)} violations"


@criterion(14, "partial products over the no-root set decay with slope 21/32", product_limit=10**7)
def _c14(ctx):
    s = partial_product(NoRoot(G8), LocalFactor(3, "even-valuation"), ctx.budget.product_limit)
    slope = fit_product_decay(s, 21 / 32)
    ok = abs(slope - 0.656) <= 0.15 and s.strictly_decreasing
    return ok, {"slope": slope, "strictly_decreasing": s.strictly_decreasing, "checkpoints": s.checkpoints}, \
        {"slope": 0.656, "tolerance": 0.15}, f"slope {slope:.4f}"


@criterion(15, "C3 fraction of the census", census_max_disc=10**6)
def _c15(ctx):
    c3, s3 = ctx.census().galois_split(10**6)
    frac = c3 / (c3 + s3)
    return frac < 0.01, {"C3": c3, "S3": s3, "fraction": frac}, {"fraction_below": 0.01}, f"C3 fraction {frac:.5f}"


def run_criterion(c: Criterion, ctx: Context) -> Result:
    short = [k for k, v in c.needs.items() if getattr(ctx.budget, k) < v]
    if short:
        return Result(c.number, c.title, "skipped", {}, {}, f"skipped (budget: {', '.join(short)})")
    t0 = time.perf_counter()
    ok, measured, expected, detail = c.run(ctx)
    return Result(c.number, c.title, "pass" if ok else "fail", _jsonable(measured), _jsonable(expected),
                  detail, time.perf_counter() - t0)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float) and not math.isfinite(x):
        return None
    if hasattr(x, "item"):
        return x.item()
    return x


def run_all(budget: Budget | None = None, only=None, echo: Callable | None = None) -> dict:
    """Run the battery; every criterion appears in the dossier as pass, fail or skipped."""
    budget = budget or Budget()
    ctx = Context(budget)
    results = []
    for c in sorted(CRITERIA, key=lambda c: c.number):
        if only and c.number not in only:
            continue
        try:
            r = run_criterion(c, ctx)
        except Exception as exc:  # recorded, never dropped
            r = Result(c.number, c.title, "fail", {}, {}, f"error: {type(exc).__name__}: {exc}")
        results.append(r)
        if echo:
            echo(r.line())
    return {
        "budget": asdict(budget),
        "results": [asdict(r) for r in results],
        "summary": {s: sum(r.status == s for r in results) for s in ("pass", "fail", "skipped")},
        "notes": ctx.notes,
    }
