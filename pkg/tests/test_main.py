"""Tests for main CLI."""
import pytest
from click.testing import CliRunner

from forbidden_subposet.main import cli


class TestMainCLI:
    @pytest.fixture
    def runner(self):
        return CliRunner()

    def test_version(self, runner):
        result = runner.invoke(cli, ["--version"])
        assert result.exit_code == 0
        assert "1.0.0" in result.output

    def test_help(self, runner):
        result = runner.invoke(cli, ["--help"])
        assert result.exit_code == 0
        assert "poset" in result.output
        assert "verify" in result.output
        assert "extremal" in result.output

    def test_poset_help(self, runner):
        result = runner.invoke(cli, ["poset", "--help"])
        assert result.exit_code == 0
        for name in ("analyze", "saturate", "decompose"):
            assert name in result.output

    def test_verify_help(self, runner):
        result = runner.invoke(cli, ["verify", "--help"])
        assert result.exit_code == 0
        assert "marked-count" in result.output
        assert "--seed" in result.output

    def test_extremal_help(self, runner):
        result = runner.invoke(cli, ["extremal", "--help"])
        assert result.exit_code == 0
        for name in ("la", "embed", "construct", "check", "spread"):
            assert name in result.output

    def test_unknown_command(self, runner):
        result = runner.invoke(cli, ["solve"])
        assert result.exit_code == 2
