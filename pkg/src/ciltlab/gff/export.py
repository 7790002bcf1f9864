from __future__ import annotations

import csv
from pathlib import Path

from .sampler import FieldSample


def export_samples_csv(samples: FieldSample, path: str | Path) -> Path:
    """Write one row per sample; the header names each site as ``x+yj@eps``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["sample"] + [f"{complex(s.point)!r}@{s.eps!r}" for s in samples.sites])
        for i, row in enumerate(samples.values):
            writer.writerow([i] + [repr(float(v)) for v in row])
    return path
