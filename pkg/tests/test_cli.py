import csv
import io
import json
import subprocess
import sys

import pytest

from ctcsim.cli import main

from conftest import DATA


@pytest.fixture(autouse=True)
def data_env(monkeypatch):
    monkeypatch.setenv("CTCSIM_DATA_DIR", str(DATA))


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def parse_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


class TestThresholds:
    def test_story_year_row(self, capsys):
        code, out = run_cli(capsys, "thresholds", "--scenario", "s1",
                            "--year", "2009", "--group", "single_mother")
        assert code == 0
        rows = parse_csv(out)
        assert len(rows) == 1
        assert abs(float(rows[0]["full_actc"]) - 9667) <= 50
        assert abs(float(rows[0]["full_ctc"]) - 25650) <= 50

    def test_missing_year_is_validation_error(self, capsys):
        code, _ = run_cli(capsys, "thresholds", "--year", "1999")
        assert code == 1

    def test_missing_file_is_io_error(self, capsys):
        code, _ = run_cli(capsys, "thresholds", "--params", "/nonexistent/params.json")
        assert code == 2

    def test_full_table_rows(self, capsys):
        code, out = run_cli(capsys, "thresholds")
        assert code == 0
        assert len(parse_csv(out)) == 16 * 3  # years x groups, one scenario


class TestClassify:
    def test_matches_golden_file(self, capsys):
        code, out = run_cli(capsys, "classify", "--scenario", "s1", "--year", "2017")
        assert code == 0
        golden = (DATA.parent / "tests" / "golden" / "classify_s1_2017.csv").read_text()
        assert out == golden

    def test_round_trips_counts(self, capsys, pop):
        from ctcsim import ParentalGroup

        code, out = run_cli(capsys, "classify", "--scenario", "s2", "--year", "2010")
        assert code == 0
        rows = parse_csv(out)
        by_group = {}
        for r in rows:
            by_group.setdefault(r["group"], []).append(r)
        for group, rs in by_group.items():
            total = sum(int(r["count"]) for r in rs)
            assert total == pop.total(2010, ParentalGroup(group))
            for r in rs:
                assert abs(float(r["proportion"]) - int(r["count"]) / total) < 1e-6

    def test_json_format(self, capsys):
        code, out = run_cli(capsys, "classify", "--year", "2017", "--format", "json")
        assert code == 0
        rows = json.loads(out)
        assert {r["category"] for r in rows} == set("abcdef")


class TestAnalyses:
    def test_piecemeal_shape(self, capsys):
        code, out = run_cli(capsys, "piecemeal", "--table", "1a")
        assert code == 0
        rows = parse_csv(out)
        assert len(rows) == 8 * 3
        assert {r["step"] for r in rows} == {str(i) for i in range(1, 9)}

    def test_sweep_shape_and_monotonicity(self, capsys):
        code, out = run_cli(capsys, "sweep", "--credits", "500:3600:100",
                            "--year", "2018", "--scenario", "s1")
        assert code == 0
        rows = parse_csv(out)
        assert len(rows) == 32 * 3
        by_group = {}
        for r in rows:
            by_group.setdefault(r["group"], []).append((int(r["credit"]), float(r["proportion"])))
        for series in by_group.values():
            shares = [p for _, p in sorted(series)]
            assert all(a >= b for a, b in zip(shares, shares[1:]))

    def test_priced_out_2017(self, capsys):
        code, out = run_cli(capsys, "priced-out", "--year", "2017", "--scenario", "s1")
        assert code == 0
        rows = {r["group"]: r for r in parse_csv(out)}
        assert abs(float(rows["married"]["proportion"]) - 0.1472) < 1e-3

    def test_parity_table(self, capsys):
        code, out = run_cli(capsys, "parity")
        assert code == 0
        rows = parse_csv(out)
        assert len(rows) == 9
        after = {r["group"]: float(r["proportion"]) for r in rows if r["step"] == "2"}
        assert abs(after["single_father"] - 0.95) < 1e-3

    def test_eliminate_refund_aggregate(self, capsys):
        code, out = run_cli(capsys, "eliminate-refund", "--scenario", "s2")
        assert code == 0
        rows = parse_csv(out)
        agg = [r for r in rows if r["group"] == "all"]
        assert len(agg) == 1
        assert abs(int(agg[0]["gaining_households"]) - 176_000) <= 1000

    def test_regress_emits_terms(self, capsys):
        code, out = run_cli(capsys, "regress", "--outcome", "d", "--scenario", "s1")
        assert code == 0
        rows = parse_csv(out)
        terms = {r["term"] for r in rows}
        assert {"const", "single_father", "single_mother"} <= terms
        assert all(set(r) == {"scenario", "outcome", "term", "estimate", "robust_se", "stars"}
                   for r in rows)

    def test_did_emits_interaction(self, capsys):
        code, out = run_cli(capsys, "did", "--outcome", "d")
        assert code == 0
        rows = parse_csv(out)
        assert any(r["term"] == "treated_post" for r in rows)


class TestConfigAndDeterminism:
    def test_config_file_with_flag_precedence(self, capsys, tmp_path):
        config = tmp_path / "run.json"
        config.write_text(json.dumps({"scenario": "s2", "format": "json"}))
        code, out = run_cli(capsys, "classify", "--year", "2017", "--config", str(config))
        rows = json.loads(out)  # format taken from config
        assert {r["scenario"] for r in rows} == {"s2"}
        code, out = run_cli(capsys, "classify", "--year", "2017", "--config", str(config),
                            "--scenario", "s1", "--format", "csv")
        rows = parse_csv(out)  # flags win
        assert {r["scenario"] for r in rows} == {"s1"}

    def test_report_runs_are_byte_identical(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        assert main(["report", "--out", str(a)]) == 0
        assert main(["report", "--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_out_flag_writes_file(self, tmp_path, capsys):
        out_path = tmp_path / "t.csv"
        code, out = run_cli(capsys, "thresholds", "--year", "2009", "--out", str(out_path))
        assert code == 0
        assert out == ""
        assert out_path.read_text().startswith("year,")

    def test_console_entry_point(self):
        proc = subprocess.run(
            [sys.executable, "-m", "ctcsim.cli", "thresholds", "--year", "2009"],
            capture_output=True, text=True,
            env={"PATH": "", "CTCSIM_DATA_DIR": str(DATA),
                 "PYTHONPATH": str(DATA.parent / "src")},
        )
        assert proc.returncode == 0
        assert "9666.67" in proc.stdout
