"""Deterministic chunked Monte Carlo plumbing.

Samples are produced in fixed-size chunks. Chunk ``j`` always draws from the
substream ``SeedSequence(seed, spawn_key=(j,))`` so the sample set does not
depend on how many workers run the chunks. Results are reassembled in chunk
order before any reduction.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable

import numpy as np

from .logs import get_logger

DEFAULT_CHUNK_SIZE = 4096
THREADS_ENV = "CILTLAB_THREADS"

Draw = Callable[[np.random.Generator, int], np.ndarray]


@dataclass(frozen=True)
class McEstimate:
    """Complex Monte Carlo estimate with its standard error.

    ``stderr`` combines the standard errors of the real and imaginary parts
    in quadrature.
    """

    value: complex
    stderr: float
    n_samples: int
    seed: int
    epsilon: float | None = None

    def z_score(self, target: complex) -> float:
        gap = abs(complex(self.value) - complex(target))
        if self.stderr == 0.0:
            return 0.0 if gap == 0.0 else math.inf
        return gap / self.stderr

    def within(self, target: complex, sigmas: float = 3.0) -> bool:
        return self.z_score(target) <= sigmas

    def scaled(self, factor: complex) -> "McEstimate":
        return McEstimate(
            value=complex(self.value) * factor,
            stderr=self.stderr * abs(factor),
            n_samples=self.n_samples,
            seed=self.seed,
            epsilon=self.epsilon,
        )

    def to_dict(self) -> dict[str, Any]:
        value = complex(self.value)
        return {
            "value_re": value.real,
            "value_im": value.imag,
            "stderr": self.stderr,
            "n_samples": self.n_samples,
            "seed": self.seed,
            "epsilon": self.epsilon,
        }


def resolve_threads(threads: int | None = None) -> int:
    """Worker cap: explicit value, then ``CILTLAB_THREADS``, then the CPU count."""
    if threads is not None and threads > 0:
        return threads
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            value = int(env)
        except ValueError:
            raise ValueError(f"{THREADS_ENV} must be a positive integer, got {env!r}")
        if value > 0:
            return value
    return os.cpu_count() or 1


def chunk_sizes(n_samples: int, chunk_size: int = DEFAULT_CHUNK_SIZE) -> list[int]:
    if n_samples <= 0:
        raise ValueError(f"n_samples must be positive, got {n_samples}")
    if chunk_size <= 0:
        raise ValueError(f"chunk_size must be positive, got {chunk_size}")
    full, rest = divmod(n_samples, chunk_size)
    return [chunk_size] * full + ([rest] if rest else [])


def chunk_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def map_chunks(
    draw: Draw,
    n_samples: int,
    seed: int,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    threads: int | None = None,
) -> np.ndarray:
    """Run ``draw(rng, n)`` over all chunks and stack the per-sample outputs.

    ``draw`` must return an array whose first axis has length ``n``.
    """
    sizes = chunk_sizes(n_samples, chunk_size)
    workers = min(resolve_threads(threads), len(sizes))
    get_logger().debug(
        "Monte Carlo chunks",
        {"n_samples": n_samples, "chunks": len(sizes), "workers": workers, "seed": seed},
    )

    def run(index: int) -> np.ndarray:
        out = np.asarray(draw(chunk_rng(seed, index), sizes[index]))
        if out.shape[0] != sizes[index]:
            raise ValueError(f"draw returned {out.shape[0]} samples for a chunk of {sizes[index]}")
        return out

    if workers <= 1:
        parts = [run(i) for i in range(len(sizes))]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, range(len(sizes))))
    return np.concatenate(parts, axis=0)


def summarize(values: np.ndarray, seed: int, epsilon: float | None = None) -> McEstimate:
    """Mean and standard error of a vector of (complex) per-sample values."""
    values = np.asarray(values, dtype=complex)
    n = values.shape[0]
    mean = np.sum(values) / n
    if n > 1:
        var_re = np.sum((values.real - mean.real) ** 2) / (n - 1)
        var_im = np.sum((values.imag - mean.imag) ** 2) / (n - 1)
        stderr = math.sqrt((var_re + var_im) / n)
    else:
        stderr = math.inf
    return McEstimate(value=complex(mean), stderr=float(stderr), n_samples=n, seed=seed, epsilon=epsilon)


def mc_estimate(
    draw: Draw,
    n_samples: int,
    seed: int,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    threads: int | None = None,
    epsilon: float | None = None,
) -> McEstimate:
    values = map_chunks(draw, n_samples, seed, chunk_size=chunk_size, threads=threads)
    return summarize(values, seed, epsilon=epsilon)


def combine(estimates: list[McEstimate], weights: list[complex] | None = None) -> McEstimate:
    """Weighted sum of independent estimates, errors added in quadrature."""
    if not estimates:
        raise ValueError("combine needs at least one estimate")
    weights = weights or [1.0] * len(estimates)
    value = sum(complex(w) * complex(e.value) for w, e in zip(weights, estimates))
    stderr = math.sqrt(sum((abs(w) * e.stderr) ** 2 for w, e in zip(weights, estimates)))
    return McEstimate(
        value=value,
        stderr=stderr,
        n_samples=min(e.n_samples for e in estimates),
        seed=estimates[0].seed,
        epsilon=estimates[0].epsilon,
    )
