import json

import pytest

from arithstat.cli import main, parse_poly
from arithstat.poly import IntPoly


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def cache(tmp_path, monkeypatch):
    monkeypatch.setenv("ARITHSTAT_CACHE", str(tmp_path))
    return tmp_path


def test_census_build_then_query(capsys, cache):
    code, out, _ = run(capsys, "census-build", "--max-disc", "50")
    assert code == 0
    assert json.loads(out)["report"]["counts"] == {"complex": 3, "total": 4, "totally-real": 1}
    code, out, _ = run(capsys, "census-query", "--max-disc", "50", "--signature", "complex")
    rows = json.loads(out)["report"]["rows"]
    assert code == 0 and [r["disc"] for r in rows] == [-23, -31, -44]
    code, out, _ = run(capsys, "--format", "csv", "census-query", "--max-disc", "50", "--condition", "even:2")
    assert out.splitlines()[0] == "a,b,c,d,disc,signature,galois_type" and len(out.splitlines()) == 5


def test_query_without_census_is_state_error(capsys, cache):
    code, _, err = run(capsys, "census-query", "--max-disc", "50")
    assert code == 2 and "census-build" in err


def test_sieve_matches_naive(capsys):
    code, out, _ = run(capsys, "sieve", "--residue", "4:3", "--max", "100000", "--checkpoints", "4")
    rep = json.loads(out)["report"]
    assert code == 0 and rep["naive_agrees"] and rep["alpha_expected"] == 0.5


def test_sieve_all_primes(capsys):
    code, out, _ = run(capsys, "sieve", "--all-primes", "--max", "2000000")
    rep = json.loads(out)["report"]
    assert rep["counts"] == rep["expected_counts"] == [1414]


def test_family_analyze(capsys):
    code, out, _ = run(capsys, "family", "--name", "x0_64", "--analyze", "--limit", "100000")
    rep = json.loads(out)["report"]["analysis"]
    assert code == 0 and rep["g"] == "-27*T^8 - 1"
    assert abs(rep["free_density"]["ratio"] - 0.656) < 0.01 and rep["expected_density"] == 21 / 32


def test_family_parity_is_reproducible(capsys):
    args = ("family", "--parity", "--samples", "20", "--prime-limit", "500", "--limit", "1000", "--seed", "7")
    _, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args)
    ra, rb = json.loads(a), json.loads(b)
    assert ra["report"] == rb["report"] and ra["report"]["parity"]["seed"] == 7
    assert json.dumps(ra["report"], sort_keys=True) == json.dumps(rb["report"], sort_keys=True)


def test_density_polynomial_flag(capsys):
    code, out, _ = run(capsys, "density", "--hasroot", "T^4+6T^3+7T^2-6T-31", "--limit", "100000", "--expect", "0.375")
    rep = json.loads(out)["report"]
    assert code == 0 and abs(rep["estimate"]["ratio"] - 0.375) < 0.02


def test_exceptional_report(capsys):
    code, out, _ = run(capsys, "exceptional", "--bound", "20", "--t-max", "50", "--max-disc", "100")
    rep = json.loads(out)["report"]
    assert code == 0 and rep["complex_discs"] == [-31, -23]


@pytest.mark.parametrize("argv", [
    ("sieve", "--max", "10"),  # no prime set
    ("sieve", "--residue", "4:2", "--max", "10"),  # 2 is not a unit mod 4
    ("sieve", "--all-primes", "--max", "-5"),
    ("density", "--noroot", "T^2+x"),
    ("family", "--name", "nope"),
    ("bogus",),
])
def test_usage_errors_exit_2(capsys, argv):
    assert main(list(argv)) == 2


def test_resource_error_exit_3(capsys):
    assert main(["sieve", "--all-primes", "--max", "2000000", "--naive"]) == 3


def test_invariant_error_exit_4(capsys, monkeypatch):
    import arithstat.sieve

    def broken(*args, **kw):
        raise AssertionError("counts went backwards")

    monkeypatch.setattr(arithstat.sieve, "count_even_valuations_sieved", broken)
    assert main(["sieve", "--all-primes", "--max", "10"]) == 4
    assert "invariant" in capsys.readouterr().err


def test_report_all_tiny(capsys, cache, tmp_path):
    out = tmp_path / "dossier.json"
    code, _, err = run(capsys, "report-all", "--budget", "tiny", "--out", str(out))
    doc = json.loads(out.read_text())
    statuses = {r["number"]: r["status"] for r in doc["report"]["results"]}
    assert code == 0 and sorted(statuses) == list(range(1, 16))
    assert statuses[5] == "skipped" and statuses[1] == "pass"
    assert "criterion  1" in err


def test_parse_poly():
    assert parse_poly("-27T^8-1") == IntPoly([-1, 0, 0, 0, 0, 0, 0, 0, -27])
    assert parse_poly("1,0,-3") == IntPoly([-3, 0, 1])
