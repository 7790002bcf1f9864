"""Unit tests for the run ledger and the shared logger."""

import pytest

from ciltlab import logs
from ciltlab.ledger import Ledger, canonical_json, digest


class TestCanonicalJson:
    """Test cases for canonical serialization."""

    def test_key_order_does_not_matter(self):
        """Test that key order leaves the digest unchanged."""
        assert canonical_json({"b": 1, "a": [1.5, 2]}) == '{"a":[1.5,2],"b":1}'
        assert digest({"b": 1, "a": 2}) == digest({"a": 2, "b": 1})

    def test_digest_is_sha256(self):
        """Test the digest length."""
        assert len(digest({})) == 64


class TestLedger:
    """Test cases for the sqlite run ledger."""

    def test_store_and_get(self):
        """Test storing runs and listing them back."""
        with Ledger(":memory:") as ledger:
            first = ledger.store_run("params", {"beta": 1.0}, 0, "abc", "2026-01-01T00:00:00+00:00")
            ledger.store_run("morris", {"q": 2}, 1, "def")
            runs = list(ledger.get_runs())
            assert [r["subcommand"] for r in runs] == ["params", "morris"]
            assert runs[0]["id"] == first
            assert runs[0]["params"] == '{"beta":1.0}'
            assert [r["digest"] for r in ledger.get_runs("morris")] == ["def"]

    def test_last_digest(self):
        """Test that the most recent matching digest is returned."""
        with Ledger() as ledger:
            ledger.store_run("dtn", {"cos": "1"}, 0, "old")
            ledger.store_run("dtn", {"cos": "1"}, 0, "new")
            assert ledger.last_digest("dtn", {"cos": "1"}) == "new"
            assert ledger.last_digest("dtn", {"cos": "2"}) is None

    def test_file_database(self, tmp_path):
        """Test that runs persist across connections."""
        path = str(tmp_path / "runs.db")
        with Ledger(path) as ledger:
            ledger.store_run("params", {}, 0, "x")
        with Ledger(path) as ledger:
            assert len(list(ledger.get_runs())) == 1


class TestLogs:
    """Test cases for the shared logger."""

    def test_parse_level(self):
        """Test level parsing and rejection."""
        assert logs.parse_level("debug") is logs.parse_level("DEBUG")
        with pytest.raises(ValueError):
            logs.parse_level("LOUD")

    def test_set_level(self):
        """Test that the current level follows set_level."""
        logs.set_level("warning")
        assert logs.current_level() == "WARNING"
        assert logs.get_logger() is logs.get_logger()
        logs.set_level("INFO")
