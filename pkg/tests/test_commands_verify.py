"""Tests for the verify command."""
import json

import pytest
from click.testing import CliRunner

from forbidden_subposet.commands.verify import verify_command


class TestVerifyCommand:
    @pytest.fixture
    def runner(self):
        return CliRunner()

    def run(self, runner, tmp_path, *args, name="report.json"):
        output = tmp_path / name
        result = runner.invoke(verify_command, [*args, "--output", str(output)])
        report = json.loads(output.read_text()) if output.exists() else None
        return result, report

    def test_marked_count(self, runner, tmp_path):
        result, report = self.run(runner, tmp_path, "marked-count", "--n", "4", "--families", "5")
        assert result.exit_code == 0
        assert report["command"] == "verify marked-count"
        assert report["summary"] == {"rows": 5, "passed": 5}
        assert all(row["match"] and row["lym_match"] for row in report["results"])

    def test_marked_count_with_workers(self, runner, tmp_path):
        _, serial = self.run(runner, tmp_path, "marked-count", "--n", "4", "--families", "4", name="a.json")
        _, pooled = self.run(runner, tmp_path, "marked-count", "--n", "4", "--families", "4", "--workers", "2",
                             name="b.json")
        assert serial["results"] == pooled["results"]
        assert pooled["config"]["workers"] == 2

    def test_density(self, runner, tmp_path):
        result, report = self.run(runner, tmp_path, "density", "--n", "4", "--families", "10", "--epsilon", "1")
        assert result.exit_code == 0
        for row in report["results"]:
            assert row["epsilon"] == "1"
            assert row["passed"]

    def test_zone_hit_exact(self, runner, tmp_path):
        result, report = self.run(runner, tmp_path, "zone-hit", "--n", "12", "--s", "1", "--s", "2")
        assert result.exit_code == 0
        assert [row["s"] for row in report["results"]] == [1, 2]
        assert all(row["mode"] == "exact" and row["stderr"] == 0 for row in report["results"])

    def test_zone_hit_montecarlo(self, runner, tmp_path):
        result, report = self.run(runner, tmp_path, "zone-hit", "--n", "64", "--trials", "500")
        assert result.exit_code == 0
        row = report["results"][0]
        assert row["mode"] == "montecarlo"
        assert row["trials"] == 500
        assert row["asserted"] is True

    def test_bad_string(self, runner, tmp_path):
        result, report = self.run(runner, tmp_path, "bad-string", "--n", "64", "--p", "1", "--p", "2", "--trials", "200")
        assert result.exit_code == 0
        one, two = report["results"]
        assert (one["p"], two["p"]) == (1, 2)

    def test_nested(self, runner, tmp_path):
        result, report = self.run(runner, tmp_path, "nested", "--n", "3", "--k", "2", "--h", "2")
        assert result.exit_code == 0
        rows = report["results"]
        assert rows[0]["first_is_markers"] is True
        assert rows[0]["marked_count"] == 36
        assert len(rows) == 2
        assert all(row["passed"] for row in rows)
        assert rows[-1]["all_good"] is None

    def test_nested_on_middle_levels(self, runner, tmp_path):
        result, report = self.run(runner, tmp_path, "nested", "--n", "4", "--family", "middle:2", "--h", "1")
        assert result.exit_code == 0
        assert report["summary"]["rows"] == 1

    def test_unknown_target(self, runner, tmp_path):
        result, _ = self.run(runner, tmp_path, "sperner")
        assert result.exit_code == 2

    def test_bad_epsilon(self, runner, tmp_path):
        result, _ = self.run(runner, tmp_path, "density", "--epsilon", "half")
        assert result.exit_code == 2

    def test_bad_band(self, runner, tmp_path):
        result, _ = self.run(runner, tmp_path, "zone-hit", "--band", "5,1")
        assert result.exit_code == 2

    def test_bad_family_spec(self, runner, tmp_path):
        result, _ = self.run(runner, tmp_path, "nested", "--family", "levels:2")
        assert result.exit_code == 2

    def test_same_seed_same_report(self, runner, tmp_path):
        args = ("zone-hit", "--n", "64", "--s", "2", "--trials", "300", "--seed", "11")
        self.run(runner, tmp_path, *args, name="a.json")
        self.run(runner, tmp_path, *args, name="b.json")
        assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


    @pytest.mark.parametrize("alias, target, args", [
        ("2.3", "marked-count", ("--n", "4", "--k", "2", "--families", "3")),
        ("2.4", "density", ("--n", "4", "--k", "2", "--families", "3", "--epsilon", "1")),
        ("3.1", "zone-hit", ("--n", "12", "--s", "1")),
        ("4.2", "bad-string", ("--n", "64", "--p", "1", "--trials", "100")),
        ("5.1", "nested", ("--n", "3", "--k", "2", "--h", "2")),
    ])
    def test_numbered_aliases(self, runner, tmp_path, alias, target, args):
        result, report = self.run(runner, tmp_path, alias, *args, "--seed", "7")
        assert result.exit_code == 0
        assert report["command"] == f"verify {target}"
        _, named = self.run(runner, tmp_path, target, *args, "--seed", "7", name="named.json")
        assert report["results"] == named["results"]

    def test_zone_hit_witness_too_large(self, runner, tmp_path):
        result, report = self.run(runner, tmp_path, "zone-hit", "--n", "8", "--s", "5")
        assert result.exit_code == 2
        assert report is None

    def test_density_both_readings(self, runner, tmp_path):
        _, default = self.run(runner, tmp_path, "density", "--n", "4", "--families", "2", "--epsilon", "1",
                              name="a.json")
        for row in default["results"]:
            assert row["t"] == 2
            assert row["threshold"] == row["printed_threshold"] == "12"
        _, read_t = self.run(runner, tmp_path, "density", "--n", "4", "--families", "2", "--epsilon", "1",
                             "--t", "3", name="b.json")
        for row in read_t["results"]:
            assert row["t"] == 3
            assert row["threshold"] == "12"
            assert row["printed_threshold"] == "18"

    def test_nested_checks_goodness(self, runner, tmp_path):
        result, report = self.run(runner, tmp_path, "nested", "--n", "4", "--k", "2", "--h", "2")
        assert result.exit_code == 0
        assert report["results"][0]["all_good"] is True

    @pytest.mark.parametrize("args", [
        ("marked-count", "--n", "4", "--k", "2", "--families", "20", "--seed", "7"),
        ("nested", "--n", "4", "--k", "2", "--h", "2", "--seed", "7"),
        ("bad-string", "--n", "64", "--p", "1", "--p", "2", "--trials", "200", "--seed", "7"),
    ])
    def test_same_seed_same_report_for_every_target(self, runner, tmp_path, args):
        self.run(runner, tmp_path, *args, name="a.json")
        self.run(runner, tmp_path, *args, name="b.json")
        assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()
