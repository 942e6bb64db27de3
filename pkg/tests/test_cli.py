import csv
import io
import json
import subprocess
import sys

import pytest

from hankelff import census as census_mod
from hankelff.cli import BadFlag, RunConfig, main, parse_range


def run_cli(*argv):
    buf = io.StringIO()
    status = main(list(argv), stdout=buf)
    return status, buf.getvalue()


def run_json(*argv):
    status, text = run_cli(*argv)
    return status, (json.loads(text) if text else None)


def test_variance_example():
    status, doc = run_json("variance", "--p", "2", "--n", "4", "--h", "0..4", "--format", "json")
    assert status == 0
    assert doc["schema"] == "hankelff/v1" and doc["command"] == "variance"
    row = next(r for r in doc["rows"] if r["h"] == 1)
    assert (row["brute"], row["formula"], row["match"]) == ("1/1", "1/1", True)
    assert [r["h"] for r in doc["rows"]] == [0, 1, 2, 3, 4]


def test_small_n_variance_is_informational():
    status, doc = run_json("variance", "--p", "3", "--n", "1..4")
    assert status == 0 and not doc["failures"]
    assert {r["n"] for r in doc["informational"]} == {1, 2, 3}


def test_census_example():
    status, doc = run_json("census", "--p", "2", "--e", "1", "--n", "2", "--h", "0")
    assert status == 0
    ranks = {r["r"]: r["brute"] for r in doc["rows"] if r["kind"] == "rank"}
    assert ranks == {0: "1", 1: "3", 2: "4"}
    assert all(r["match"] for r in doc["rows"])


def test_census_filters():
    _, doc = run_json("census", "--p", "3", "--n", "5", "--h", "2", "--l", "2", "--m", "5")
    assert doc["rows"] and all((r["l"], r["m"]) == (2, 5) for r in doc["rows"])
    _, doc = run_json("census", "--p", "3", "--n", "4", "--rho", "1")
    assert doc["rows"] and all(r["kind"] == "rho_pi" and r["rho"] == 1 for r in doc["rows"])


def test_euclid_example():
    status, doc = run_json("euclid", "--p", "2", "--n", "4", "--sample", "100", "--seed", "7")
    assert status == 0
    (row,) = doc["rows"]
    assert row["match"] and row["asserted_levels"] > 0
    assert {x["case"] for x in doc["informational"]} <= {"tail-linear", "tail-constant"}
    assert doc["informational"]


def test_kernel_and_expsum_suites():
    assert run_cli("kernel", "--p", "3", "--n", "0..4")[0] == 0
    status, doc = run_json("expsum", "--p", "2", "--n", "1..4")
    assert status == 0
    checks = {r["check"] for r in doc["rows"]}
    assert checks == {"lemma", "identity"}


def test_all_on_extension_field_skips_prime_only_suites():
    status, doc = run_json("all", "--p", "2", "--e", "2", "--n", "2")
    assert status == 0
    notes = [x for x in doc["informational"] if "note" in x]
    assert {x["suite"] for x in notes} == {"variance", "expsum"}


def test_csv_and_json_agree():
    _, doc = run_json("variance", "--p", "3", "--n", "4..5")
    _, text = run_cli("variance", "--p", "3", "--n", "4..5", "--format", "csv")
    rows = [r for r in csv.DictReader(io.StringIO(text)) if r["section"] == "row"]
    assert len(rows) == len(doc["rows"])
    for a, b in zip(rows, doc["rows"]):
        assert (a["brute"], a["formula"], int(a["h"])) == (b["brute"], b["formula"], b["h"])


def test_mismatch_exits_one(monkeypatch):
    real = census_mod.formula_L_r
    monkeypatch.setattr(census_mod, "formula_L_r", lambda q, n, h, r: real(q, n, h, r) + (r == 1))
    status, doc = run_json("census", "--p", "2", "--n", "3", "--h", "0")
    assert status == 1
    (bad,) = doc["failures"]
    assert bad["kind"] == "rank" and bad["r"] == 1 and bad["witnesses"]


def test_usage_errors_exit_two(tmp_path, capsys):
    assert run_cli("census", "--p", "3", "--n", "8", "--budget", "100")[0] == 2
    assert run_cli("kernel", "--p", "3", "--n", "2", "--jobs", "0")[0] == 2
    assert run_cli("census", "--p", "4", "--n", "2")[0] == 2
    assert run_cli("census", "--p", "2", "--n", "5..3")[0] == 2
    assert run_cli("census", "--p", "2", "--n", "2", "--cache-dir", str(tmp_path / "missing"))[0] == 2
    with pytest.raises(SystemExit) as err:
        main(["bogus", "--n", "1"])
    assert err.value.code == 2
    assert "budget" in capsys.readouterr().err


def test_sampling_beyond_budget():
    status, doc = run_json("kernel", "--p", "5", "--n", "9", "--sample", "20", "--seed", "3", "--budget", "1000")
    assert status == 0 and doc["rows"][0]["sequences"] == 20


def test_cache_dir(tmp_path):
    args = ("census", "--p", "3", "--n", "3", "--cache-dir", str(tmp_path))
    first = run_cli(*args)
    files = sorted(p.name for p in tmp_path.iterdir())
    assert files == [f"census_p3_e1_mnone_n3_h{h}.json" for h in range(5)]
    assert run_cli(*args) == first


def test_jobs_do_not_change_output():
    args = ["all", "--p", "3", "--n", "2..4", "--seed", "5", "--sample", "40"]
    one = run_cli(*args, "--jobs", "1")
    two = run_cli(*args, "--jobs", "2")
    assert one == two and one[0] == 0
    assert "jobs" not in json.loads(one[1])["params"]


def test_parse_range_and_config():
    assert parse_range("3") == (3, 3) and parse_range("2..6") == (2, 6)
    with pytest.raises(BadFlag):
        parse_range("a..b")
    with pytest.raises(BadFlag):
        RunConfig("census", l=2)


def test_module_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "hankelff", "census", "--p", "2", "--n", "1", "--format", "csv"],
        capture_output=True, text=True, check=True,
    )
    assert out.stdout.startswith("section,")
