"""Tests for the ciltlab command line."""

import csv
import json
from unittest.mock import patch

import pytest
from click.testing import CliRunner
from scipy.special import ellipk

from ciltlab.cli import main
from ciltlab.ledger import Ledger

CORRELATOR_ARGS = ["correlator", "--beta", "1", "--radius", "4", "--mu-boundary", "1", "--alpha=-1,-1"]


@pytest.fixture
def runner():
    return CliRunner()


def invoke(runner, tmp_path, *args, config_text=None):
    config_file = tmp_path / "config.toml"
    if config_text is not None:
        config_file.write_text(config_text)
    return runner.invoke(main, ["-c", str(config_file), "-e", str(tmp_path / "env.toml"), *args])


def report(runner, tmp_path, *args, name="out.json", config_text=None):
    out = tmp_path / name
    result = invoke(runner, tmp_path, *args, "--out", str(out), config_text=config_text)
    assert result.exit_code == 0, result.output
    return json.loads(out.read_text())


class TestReports:
    """Test cases for the JSON reports."""

    def test_params(self, runner, tmp_path):
        """Test that params reports Q and the central charge."""
        data = report(runner, tmp_path, "params", "--beta", "1", "--radius", "4")
        assert data["subcommand"] == "params"
        assert data["result"]["q_charge"] == pytest.approx(-1.5)
        assert data["result"]["central_charge"] == pytest.approx(-12.5)
        assert data["result"]["constraints_ok"] is True

    def test_dtn(self, runner, tmp_path):
        """Test that the Dirichlet energy of cos(2 theta) is 2 pi."""
        data = report(runner, tmp_path, "dtn", "--cos", "0,1")
        assert data["result"]["residual"] < 1e-8

    def test_morris(self, runner, tmp_path):
        """Test that the Morris estimate agrees with its closed form."""
        data = report(runner, tmp_path, "morris", "--q", "1", "--beta", "1", "--n-samples", "20000", "--seed", "7")
        assert data["n_samples"] == 20000
        assert data["seed"] == 7
        assert abs(data["result"]["z_score"]) < 5.0

    def test_correlator(self, runner, tmp_path):
        """Test the correlator value and its term table."""
        table = tmp_path / "terms.csv"
        data = report(runner, tmp_path, *CORRELATOR_ARGS, "--csv", str(table))
        real, imag = data["result"]["value"]
        assert real == pytest.approx(-0.9375 * 4.0 * ellipk(0.0625), rel=1e-7)
        assert imag == pytest.approx(0.0, abs=1e-12)
        assert data["result"]["neutrality_set"] == [[0, 1]]
        with table.open() as f:
            rows = list(csv.DictReader(f))
        assert [r["term_id"] for r in rows] == ["0,1"]
        assert list(rows[0]) == ["term_id", "value_re", "value_im", "stderr", "n_samples"]

    def test_version_in_report(self, runner, tmp_path):
        """Test that the report carries the library version."""
        with patch("ciltlab.cli.report.library_version", return_value="9.9.9"):
            data = report(runner, tmp_path, "params", "--beta", "1", "--radius", "4")
        assert data["version"] == "9.9.9"


class TestDeterminism:
    """Test cases for digests and timing."""

    def test_digest_repeats(self, runner, tmp_path):
        """Test that two runs with the same seed have the same digest."""
        args = ["morris", "--q", "2", "--beta", "1", "--n-samples", "2000", "--seed", "3"]
        first = report(runner, tmp_path, *args, name="a.json")
        second = report(runner, tmp_path, *args, name="b.json")
        assert first["digest"] == second["digest"]
        assert first["result"] == second["result"]

    @pytest.mark.parametrize(
        "args",
        [
            ["morris", "--q", "2", "--beta", "1"],
            ["gmc-moment", "--region", "bulk", "--beta", "0.8", "--epsilon", "0.05", "--support", "0.5"],
        ],
    )
    def test_thread_count_keeps_report(self, runner, tmp_path, args):
        """Test that one worker and four workers write the same report text."""
        texts = []
        for threads in ("1", "4"):
            out = tmp_path / f"threads{threads}.json"
            result = invoke(
                runner, tmp_path, *args, "--n-samples", "4000", "--chunk-size", "500", "--seed", "5",
                "--threads", threads, "--out", str(out),
            )
            assert result.exit_code == 0, result.output
            texts.append(out.read_text())
        assert texts[0] == texts[1]

    def test_timing_is_opt_in(self, runner, tmp_path):
        """Test that wall time appears only with --timing."""
        plain = report(runner, tmp_path, "params", "--beta", "1", "--radius", "4", name="a.json")
        timed = report(runner, tmp_path, "params", "--beta", "1", "--radius", "4", "--timing", name="b.json")
        assert "timing" not in plain
        assert timed["timing"]["wall_seconds"] >= 0.0
        assert timed["digest"] == plain["digest"]

    def test_verify(self, runner, tmp_path):
        """Test that --verify accepts a deterministic run."""
        data = report(runner, tmp_path, "morris", "--q", "1", "--beta", "1", "--n-samples", "1000", "--verify")
        assert data["subcommand"] == "morris"


class TestErrors:
    """Test cases for exit codes."""

    def test_beta_out_of_range(self, runner, tmp_path):
        """Test that an invalid coupling exits with code 2."""
        result = invoke(runner, tmp_path, "params", "--beta", "2", "--radius", "4")
        assert result.exit_code == 2

    def test_compactification(self, runner, tmp_path):
        """Test that beta R outside 2Z with a boundary potential exits with code 2."""
        result = invoke(runner, tmp_path, "params", "--beta", "1", "--radius", "3", "--mu-boundary", "1")
        assert result.exit_code == 2

    def test_missing_option(self, runner, tmp_path):
        """Test that a missing required option is a usage error."""
        result = invoke(runner, tmp_path, "params", "--beta", "1")
        assert result.exit_code == 2


class TestLedger:
    """Test cases for the run ledger."""

    def test_runs_are_recorded(self, runner, tmp_path):
        """Test that enabled storage records one row per run."""
        db = tmp_path / "runs.db"
        config_text = f'[store]\nenabled = true\ndb_file = "{db.as_posix()}"\n'
        first = report(runner, tmp_path, "params", "--beta", "1", "--radius", "4", name="a.json", config_text=config_text)
        report(runner, tmp_path, "params", "--beta", "1", "--radius", "4", name="b.json", config_text=config_text)
        with Ledger(str(db)) as ledger:
            runs = list(ledger.get_runs("params"))
        assert len(runs) == 2
        assert {r["digest"] for r in runs} == {first["digest"]}

        listing = invoke(runner, tmp_path, "ledger", config_text=config_text)
        assert listing.exit_code == 0
        assert "params" in listing.output

