"""Unit tests for the chunked Monte Carlo plumbing."""

import math

import numpy as np
import pytest

from ciltlab.montecarlo import McEstimate, chunk_sizes, combine, map_chunks, mc_estimate, resolve_threads, summarize


def _uniform(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.random(n)


class TestChunks:
    """Test cases for chunk scheduling."""

    def test_chunk_sizes(self):
        """Test that the last chunk carries the remainder."""
        assert chunk_sizes(10, 4) == [4, 4, 2]
        assert chunk_sizes(8, 4) == [4, 4]

    def test_invalid_sizes(self):
        """Test that nonpositive counts are rejected."""
        with pytest.raises(ValueError):
            chunk_sizes(0, 4)
        with pytest.raises(ValueError):
            chunk_sizes(4, 0)

    def test_workers_do_not_change_stream(self):
        """Test that the sample set is independent of the worker count."""
        a = map_chunks(_uniform, 10_000, 42, chunk_size=1000, threads=1)
        b = map_chunks(_uniform, 10_000, 42, chunk_size=1000, threads=3)
        assert np.array_equal(a, b)

    def test_seed_changes_stream(self):
        """Test that different seeds give different samples."""
        a = map_chunks(_uniform, 100, 1, chunk_size=50, threads=1)
        b = map_chunks(_uniform, 100, 2, chunk_size=50, threads=1)
        assert not np.array_equal(a, b)

    def test_threads_from_environment(self, monkeypatch):
        """Test that CILTLAB_THREADS caps the workers."""
        monkeypatch.setenv("CILTLAB_THREADS", "3")
        assert resolve_threads(None) == 3
        assert resolve_threads(5) == 5


class TestEstimates:
    """Test cases for McEstimate reductions."""

    def test_uniform_mean(self):
        """Test the mean of uniform draws within its error bar."""
        est = mc_estimate(_uniform, 20_000, 0, chunk_size=4096, threads=1)
        assert est.within(0.5, 5.0)
        assert est.stderr == pytest.approx(math.sqrt(1 / 12 / 20_000), rel=0.05)

    def test_summarize_complex(self):
        """Test that real and imaginary errors combine in quadrature."""
        est = summarize(np.array([1 + 1j, -1 - 1j]), 0)
        assert est.value == 0
        assert est.stderr == pytest.approx(math.sqrt(2.0 + 2.0) / math.sqrt(2.0))

    def test_z_score_with_zero_error(self):
        """Test z-scores of exact estimates."""
        exact = McEstimate(1.0 + 0j, 0.0, 1, 0)
        assert exact.z_score(1.0) == 0.0
        assert exact.z_score(2.0) == math.inf

    def test_scaled_and_combined(self):
        """Test scaling and weighted combination."""
        a = McEstimate(1.0 + 0j, 0.3, 10, 0)
        b = McEstimate(2.0j, 0.4, 20, 0)
        assert a.scaled(-2.0).stderr == pytest.approx(0.6)
        both = combine([a, b], [1.0, 1.0])
        assert both.value == pytest.approx(1.0 + 2.0j)
        assert both.stderr == pytest.approx(0.5)
        assert both.n_samples == 10

    def test_to_dict(self):
        """Test the report form of an estimate."""
        d = McEstimate(1.0 - 2.0j, 0.1, 5, 3, 0.01).to_dict()
        assert d == {"value_re": 1.0, "value_im": -2.0, "stderr": 0.1, "n_samples": 5, "seed": 3, "epsilon": 0.01}
