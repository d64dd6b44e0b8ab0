import json
import subprocess
import sys

import pytest

from growth_forge import seqfn
from growth_forge.cli import run


@pytest.fixture()
def fib_spec(tmp_path):
    path = tmp_path / "lang.json"
    path.write_text(json.dumps({"alphabet": 2, "forbidden": ["11"]}))
    return path


class TestLang:
    def test_count_csv_and_plot(self, fib_spec, tmp_path):
        report = tmp_path / "rep.json"
        csv = tmp_path / "gamma.csv"
        svg = tmp_path / "gamma.svg"
        rc = run(["lang", "count", "--spec", str(fib_spec), "--upto", "10",
                  "--csv", str(csv), "--plot", str(svg), "--report", str(report)])
        assert rc == 0
        payload = json.loads(report.read_text())
        assert payload["artifacts"]["gamma_prime"][9] == 144
        assert svg.read_bytes().startswith(b"<?xml")
        table = seqfn.read_csv(csv)
        assert table(10) == payload["artifacts"]["gamma"][10]

    def test_reports_are_reproducible(self, fib_spec, tmp_path):
        out = []
        for _ in range(2):
            report = tmp_path / "rep.json"
            svg = tmp_path / "g.svg"
            run(["lang", "count", "--spec", str(fib_spec), "--upto", "8",
                 "--plot", str(svg), "--report", str(report)])
            out.append((report.read_bytes(), svg.read_bytes()))
        assert out[0] == out[1]

    def test_missing_spec_is_usage_error(self, tmp_path):
        rc = run(["lang", "count", "--spec", str(tmp_path / "nope.json"),
                  "--upto", "5"])
        assert rc == 64

    def test_weighted_count(self, tmp_path):
        spec = tmp_path / "free.json"
        spec.write_text(json.dumps({"alphabet": 2, "forbidden": []}))
        report = tmp_path / "rep.json"
        rc = run(["lang", "count", "--spec", str(spec), "--upto", "3",
                  "--weights", "1,2", "--report", str(report)])
        assert rc == 0
        assert json.loads(report.read_text())["artifacts"]["weighted_gamma"][3] == 6

    def test_checks(self, fib_spec, tmp_path):
        rc = run(["lang", "check", "--spec", str(fib_spec),
                  "--check", "prolongable", "--report", str(tmp_path / "p.json")])
        assert rc == 0
        rc = run(["lang", "check", "--spec", str(fib_spec),
                  "--check", "irreducible", "--report", str(tmp_path / "i.json")])
        assert rc == 0


class TestBz:
    def test_refute_witness_json(self, tmp_path):
        out = tmp_path / "w.json"
        rc = run(["bz", "refute", "--schedule", "3,13", "--C", "1",
                  "--imax", "1", "--json", str(out)])
        assert rc == 0
        witness = json.loads(out.read_text())["witness"]
        assert witness["strict"] and (witness["m"], witness["N"]) == (4096, 8192)
        assert set(witness) == {"C", "i", "m", "N", "lhs_bits", "rhs_bits", "strict"}

    def test_refute_cap_exhaustion(self, tmp_path):
        rc = run(["bz", "refute", "--schedule", "3,13", "--C", "50",
                  "--imax", "1", "--json", str(tmp_path / "w.json")])
        assert rc == 2

    def test_validate_exit_codes(self, tmp_path):
        assert run(["bz", "validate", "--schedule", "3,13",
                    "--report", str(tmp_path / "a.json")]) == 0
        assert run(["bz", "validate", "--schedule", "3,5",
                    "--report", str(tmp_path / "b.json")]) == 1

    def test_eval_table(self, tmp_path):
        csv = tmp_path / "t.csv"
        rc = run(["bz", "eval", "--schedule", "3,13", "--upto", "20",
                  "--out", str(csv), "--report", str(tmp_path / "r.json")])
        assert rc == 0
        assert seqfn.read_csv(csv)(17) == 464

    def test_aux(self, tmp_path):
        rc = run(["bz", "aux", "--schedule", "3,13", "--i", "1",
                  "--report", str(tmp_path / "a.json")])
        assert rc == 0


class TestHole:
    def test_build_writes_ledgered_schedule(self, tmp_path):
        out = tmp_path / "sched.json"
        rc = run(["hole", "build", "--k", "1", "--d1", "3", "--no-witness",
                  "--out", str(out)])
        assert rc == 0
        payload = json.loads(out.read_text())
        assert payload["d"] == [3] and payload["n"] == [11]
        assert all(entry["pass"] for entry in payload["ledger"].values())
        assert all(set(entry) == {"pass", "verified_to"}
                   for entry in payload["ledger"].values())

    def test_build_rejects_small_d1(self):
        assert run(["hole", "build", "--k", "1", "--d1", "2"]) == 64

    def test_witness_default_schedule(self, tmp_path):
        out = tmp_path / "w.json"
        rc = run(["hole", "witness", "--C", "1", "--report", str(out)])
        assert rc == 0
        assert json.loads(out.read_text())["witness"]["strict"]

    def test_eval_and_dominates(self, tmp_path):
        rc = run(["hole", "eval", "--upto", "60", "--csv", str(tmp_path / "h.csv"),
                  "--plot", str(tmp_path / "h.svg"),
                  "--report", str(tmp_path / "r.json")])
        assert rc == 0
        rc = run(["hole", "dominates", "--omega", "1/12",
                  "--report", str(tmp_path / "d.json")])
        assert rc == 0


class TestSb:
    def test_run_report(self, tmp_path):
        report = tmp_path / "sb.json"
        rc = run(["sb", "run", "--f", "square", "--stages", "4", "--L", "16",
                  "--report", str(report)])
        payload = json.loads(report.read_text())
        verdicts = {r["property"]: r["verdict"] for r in payload["reports"]}
        assert verdicts["c_sequence_envelope"] == "pass"
        assert verdicts["queue_recurrence"] == "pass"
        assert verdicts["target_below_gammaprime"] == "pass"
        assert rc in (0, 1)  # bounded-window pair coverage may fail honestly

    def test_insufficient_stages_is_budget_error(self):
        assert run(["sb", "run", "--f", "square", "--stages", "5", "--L", "64"]) == 2


class TestFn:
    def test_check_suite_on_table(self, tmp_path):
        f = seqfn.growth_from_callable(lambda n: 2 ** (n + 1) - 1)
        path = tmp_path / "f.csv"
        seqfn.write_csv(f, 64, path)
        report = tmp_path / "r.json"
        rc = run(["fn", "check", "--table", str(path), "--report", str(report)])
        assert rc == 0
        payload = json.loads(report.read_text())
        assert payload["verdict"] == "pass" and len(payload["reports"]) == 5

    def test_bad_table_fails_with_counterexamples(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("n,value\n1,1\n2,3\n3,4\n")
        report = tmp_path / "r.json"
        rc = run(["fn", "check", "--table", str(path), "--report", str(report)])
        assert rc == 1
        verdicts = {r["property"]: r["verdict"]
                    for r in json.loads(report.read_text())["reports"]}
        assert verdicts["submultiplicative"] == "fail"

    def test_jobs_flag_shards(self, tmp_path):
        f = seqfn.growth_from_callable(lambda n: 2 ** (n + 1) - 1)
        path = tmp_path / "f.csv"
        seqfn.write_csv(f, 48, path)
        rc = run(["--jobs", "2", "fn", "check", "--table", str(path),
                  "--report", str(tmp_path / "r.json")])
        assert rc == 0


def test_cap_env_override(monkeypatch, tmp_path):
    monkeypatch.setenv("GROWTH_FORGE_CAP", "50")
    rc = run(["bz", "eval", "--schedule", "3,13", "--upto", "100",
              "--report", str(tmp_path / "r.json")])
    assert rc == 2  # cap exceeded


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "growth_forge.cli", "bz", "validate",
         "--schedule", "3,13"],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["verdict"] == "pass"
