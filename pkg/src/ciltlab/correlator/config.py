from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from ..errors import DomainError
from ..geometry import SurfaceSpec, disk
from ..montecarlo import DEFAULT_CHUNK_SIZE, McEstimate
from ..params import ChargeConfig, ParamSet, validate_charges

ZERO_MODE_TOL = 1e-9


class Backend(Enum):
    COULOMB_GAS = "coulomb_gas"
    MONTE_CARLO = "monte_carlo"


@dataclass(frozen=True)
class CorrelatorConfig:
    """Everything a correlator evaluation depends on.

    ``epsilon`` is the field regularization of the monte_carlo backend and of
    the cross-check. ``base`` is the base point of the primitives; ``None``
    picks a point clear of the punctures and their cuts.
    """

    params: ParamSet
    charges: ChargeConfig
    surface: SurfaceSpec = field(default_factory=disk)
    backend: Backend = Backend.COULOMB_GAS
    epsilon: float = 0.01
    n_samples: int = 100_000
    seed: int = 0
    base: complex | None = None
    chunk_size: int = DEFAULT_CHUNK_SIZE
    threads: int | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.backend, Backend):
            try:
                object.__setattr__(self, "backend", Backend(self.backend))
            except ValueError:
                raise DomainError(f"unknown backend {self.backend!r}") from None
        if not 0.0 < self.epsilon < 0.5:
            raise DomainError(f"epsilon = {self.epsilon} must lie in (0, 1/2)")
        if self.n_samples <= 0:
            raise DomainError(f"n_samples must be positive, got {self.n_samples}")

    def validated(self) -> "CorrelatorConfig":
        validate_charges(self.params, self.charges)
        return self


@dataclass(frozen=True)
class CorrelatorResult:
    """A correlator value with its per-term decomposition.

    ``per_term`` maps (p, q) to the term's contribution including the
    expansion prefactor; ``topological_sum_terms`` maps annulus lattice
    coordinates to their weights.
    """

    value: complex
    stderr: float
    per_term: dict[tuple[int, int], McEstimate]
    neutrality_set: frozenset[tuple[int, int]]
    topological_sum_terms: dict[int, complex] = field(default_factory=dict)

    def to_dict(self) -> dict:
        value = complex(self.value)
        return {
            "value_re": value.real,
            "value_im": value.imag,
            "stderr": self.stderr,
            "neutrality_set": sorted([list(t) for t in self.neutrality_set]),
            "terms": term_table(self),
            "topological_sum_terms": {
                str(k): [complex(w).real, complex(w).imag] for k, w in sorted(self.topological_sum_terms.items())
            },
        }


def term_table(result: CorrelatorResult) -> list[dict]:
    """One row per (p, q) term, in increasing (p, q) order, for CSV export."""
    rows = []
    for (p, q), term in sorted(result.per_term.items()):
        value = complex(term.value)
        rows.append(
            {
                "term_id": f"{p},{q}",
                "value_re": value.real,
                "value_im": value.imag,
                "stderr": term.stderr,
                "n_samples": term.n_samples,
            }
        )
    return rows


def zero_mode_weight(kappa: float, radius: float) -> float:
    """The zero-mode integral int_0^{2 pi R} e^{i kappa c} dc."""
    return 2.0 * math.pi * radius if abs(kappa) < ZERO_MODE_TOL else 0.0
