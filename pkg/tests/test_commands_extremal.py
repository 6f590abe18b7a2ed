"""Tests for extremal commands."""
import json
from pathlib import Path

import numpy as np
import pytest
from click.testing import CliRunner

from forbidden_subposet.commands.extremal import extremal_group, random_members

FIXTURES_DIR = Path(__file__).parent / "fixtures"


class TestExtremalCommands:
    @pytest.fixture
    def runner(self):
        return CliRunner()

    def run(self, runner, tmp_path, *args, name="report.json"):
        output = tmp_path / name
        result = runner.invoke(extremal_group, [*args, "--output", str(output)])
        report = json.loads(output.read_text()) if output.exists() else None
        return result, report

    def test_la_sperner(self, runner, tmp_path):
        result, report = self.run(runner, tmp_path, "la", "--n", "3", "--poset", "chain2")
        assert result.exit_code == 0
        row = report["results"][0]
        assert row["verdict"] == "found"
        assert row["value"] == 3
        assert row["induced"] is True
        assert len(row["witness"]) == 3
        assert "elapsed_ms" not in row

    def test_la_weak_three_chain(self, runner, tmp_path):
        result, report = self.run(runner, tmp_path, "la", "--n", "4", "--poset", "chain3", "--weak")
        assert result.exit_code == 0
        row = report["results"][0]
        assert row["value"] == 10
        assert row["induced"] is False

    def test_la_budget_is_indeterminate(self, runner, tmp_path):
        result, report = self.run(runner, tmp_path, "la", "--n", "4", "--poset", "v2", "--node-limit", "3")
        assert result.exit_code == 0
        assert report["results"][0]["verdict"] == "indeterminate"
        assert "lower bound" in result.output

    def test_la_timings(self, runner, tmp_path):
        result, report = self.run(runner, tmp_path, "la", "--n", "2", "--poset", "chain2", "--timings")
        assert result.exit_code == 0
        assert report["results"][0]["elapsed_ms"] >= 0

    def test_embed_fork(self, runner, tmp_path):
        result, report = self.run(runner, tmp_path, "embed", "--n", "8", "--poset", "v2")
        assert result.exit_code == 0
        row = report["results"][0]
        assert row["verdict"] == "found"
        assert row["oracle_verdict"] == "found"
        assert row["agree"] is True
        assert [label for label, _ in row["embedding"]] == ["A", "B1", "B2"]

    def test_embed_from_file(self, runner, tmp_path):
        result, report = self.run(runner, tmp_path, "embed", "--n", "9", "--file", str(FIXTURES_DIR / "tree3.json"))
        assert result.exit_code == 0
        assert report["results"][0]["verdict"] == "found"

    def test_embed_without_copy(self, runner, tmp_path):
        result, report = self.run(runner, tmp_path, "embed", "--n", "6", "--poset", "chain2", "--family", "middle:1")
        assert result.exit_code == 0
        row = report["results"][0]
        assert row["verdict"] == "indeterminate"
        assert row["oracle_verdict"] == "absent"
        assert row["agree"] is True

    def test_embed_large_n_skips_oracle(self, runner, tmp_path):
        result, report = self.run(runner, tmp_path, "embed", "--n", "12", "--poset", "v2")
        assert result.exit_code == 0
        assert report["results"][0]["oracle_verdict"] is None

    @pytest.mark.parametrize("spec", ["butterfly", "h3"])
    def test_embed_rejects_non_trees(self, runner, tmp_path, spec):
        result, _ = self.run(runner, tmp_path, "embed", "--n", "8", "--poset", spec)
        assert result.exit_code == 1

    def test_embed_reproducible(self, runner, tmp_path):
        args = ("embed", "--n", "9", "--poset", "v3", "--seed", "3")
        self.run(runner, tmp_path, *args, name="a.json")
        self.run(runner, tmp_path, *args, name="b.json")
        assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()

    def test_construct(self, runner, tmp_path):
        result, report = self.run(runner, tmp_path, "construct", "--n", "4", "--t", "2")
        assert result.exit_code == 0
        row = report["results"][0]
        assert row["op"] == "construct"
        assert row["size"] == 10
        assert row["weights"] == [2, 3]

    def test_construct_invalid(self, runner, tmp_path):
        result, _ = self.run(runner, tmp_path, "construct", "--n", "4", "--t", "0")
        assert result.exit_code == 2

    def test_check_avoided(self, runner, tmp_path):
        result, report = self.run(runner, tmp_path, "check", "--n", "8", "--poset", "v2")
        assert result.exit_code == 0
        row = report["results"][0]
        assert row["levels"] == 1
        assert row["avoided"] is True
        assert row["verdict"] == "absent"

    def test_check_found(self, runner, tmp_path):
        result, report = self.run(runner, tmp_path, "check", "--n", "8", "--poset", "chain2", "--levels", "2")
        assert result.exit_code == 0
        assert report["results"][0]["avoided"] is False
        assert report["results"][0]["verdict"] == "found"

    def test_check_indeterminate(self, runner, tmp_path):
        result, report = self.run(runner, tmp_path, "check", "--n", "6", "--poset", "h3", "--node-limit", "0")
        assert result.exit_code == 0
        row = report["results"][0]
        assert row["verdict"] == "indeterminate"
        assert row["avoided"] is None

    def test_spread(self, runner, tmp_path):
        result, report = self.run(runner, tmp_path, "spread", "--n", "8", "--m", "3", "--copies", "3", "--noise", "5")
        assert result.exit_code == 0
        assert report["summary"] == {"copies": 3, "certified": 3, "middle_levels_avoided": True}
        for row in report["results"]:
            assert row["spread"] >= 2
            assert row["intersections_distinct"] is True

    def test_spread_needs_room(self, runner, tmp_path):
        result, _ = self.run(runner, tmp_path, "spread", "--n", "5", "--m", "3", "--copies", "1")
        assert result.exit_code == 2

    def test_embed_zone_cap(self, runner, tmp_path):
        result, report = self.run(runner, tmp_path, "embed", "--n", "12", "--poset", "v2", "--zone-cap", "100")
        assert result.exit_code == 1
        assert report is None
        assert "enumeration cap 100" in result.output

    def test_check_zone_cap_keeps_verdict(self, runner, tmp_path):
        result, report = self.run(runner, tmp_path, "check", "--n", "8", "--poset", "v2", "--zone-cap", "10")
        assert result.exit_code == 0
        assert report["config"]["zone_cap"] == 10
        assert report["results"][0]["avoided"] is True

    def test_spread_beyond_64_elements(self, runner, tmp_path):
        result, report = self.run(runner, tmp_path, "spread", "--n", "70", "--m", "2", "--copies", "2", "--noise", "3")
        assert result.exit_code == 0
        assert report["summary"] == {"copies": 2, "certified": 2, "middle_levels_avoided": True}


class TestRandomMembers:
    def test_wide_ground_set(self):
        members = random_members(70, 20, np.random.default_rng(1))
        assert len(members) == 20
        assert all(0 <= v < 1 << 70 for v in members)
        assert any(v >= 1 << 63 for v in members)

    def test_seeded(self):
        assert random_members(10, 5, np.random.default_rng(4)) == random_members(10, 5, np.random.default_rng(4))
