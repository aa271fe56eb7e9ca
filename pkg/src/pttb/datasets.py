"""Dataset ingestion and deterministic synthetic benchmark generators.

The real benchmark datasets (city populations, car mileage, ...) are not
redistributable here; ``scripts/fetch_datasets.py`` documents their sources.
The synthetic generators below provide structurally similar stand-ins so the
harness and its tests run out of the box.
"""

from __future__ import annotations

import csv
import logging
from pathlib import Path

import numpy as np

from .model import ItemTable

logger = logging.getLogger(__name__)


def load_item_table(path: str | Path, criterion_column: str
                    ) -> tuple[ItemTable, int]:
    """Read a header-full CSV into an item table.

    All non-criterion numeric columns become cues. Rows with any missing or
    unparseable value are dropped; the drop count is returned. A column that
    fails to parse in every row is reported as an error instead.
    """
    path = Path(path)
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            rows = [row for row in reader if row]
    except OSError as exc:
        raise ValueError(f"cannot read {path}: {exc}") from exc
    if not header:
        raise ValueError(f"{path} has no header row")
    if criterion_column not in header:
        raise ValueError(f"criterion column {criterion_column!r} not in {path}")
    crit_idx = header.index(criterion_column)
    cue_names = [h for k, h in enumerate(header) if k != crit_idx]

    parsed = []
    n_dropped = 0
    bad_per_col = np.zeros(len(header), dtype=int)
    for row in rows:
        if len(row) != len(header):
            n_dropped += 1
            continue
        try:
            vals = []
            for k, cell in enumerate(row):
                cell = cell.strip()
                if not cell:
                    bad_per_col[k] += 1
                    raise ValueError
                try:
                    vals.append(float(cell))
                except ValueError:
                    bad_per_col[k] += 1
                    raise
            parsed.append(vals)
        except ValueError:
            n_dropped += 1
    for k, bad in enumerate(bad_per_col):
        if rows and bad == len(rows):
            raise ValueError(f"column {header[k]!r} in {path} is not numeric")
    if len(parsed) < 2:
        raise ValueError(f"{path}: fewer than 2 usable rows")
    if n_dropped:
        logger.warning("%s: dropped %d row(s) with missing or non-numeric "
                       "values", path, n_dropped)
    data = np.asarray(parsed, dtype=float)
    features = np.delete(data, crit_idx, axis=1)
    return ItemTable(features, data[:, crit_idx], tuple(cue_names)), n_dropped


def synthetic_single_cue(n_items: int = 16, n_cues: int = 3,
                         seed: int = 0) -> ItemTable:
    """Noiseless table whose first cue equals the criterion."""
    rng = np.random.default_rng(seed)
    criterion = rng.permutation(n_items).astype(float)
    features = rng.normal(size=(n_items, n_cues))
    features[:, 0] = criterion
    return ItemTable(features, criterion)


def synthetic_city(n_items: int = 60, n_cues: int = 6, seed: int = 0) -> ItemTable:
    """Binary-cue table: cues of decaying validity for a latent size score."""
    rng = np.random.default_rng(seed)
    criterion = np.sort(rng.lognormal(mean=0.0, sigma=1.0, size=n_items))[::-1]
    rank = np.argsort(np.argsort(-criterion)) / (n_items - 1)   # 0 = largest
    features = np.empty((n_items, n_cues))
    for m in range(n_cues):
        fidelity = 0.9 - 0.1 * m
        signal = (rank < 0.4).astype(float)
        flip = rng.random(n_items) > fidelity
        features[:, m] = np.where(flip, 1.0 - signal, signal)
    return ItemTable(features, criterion.copy())


def synthetic_mileage(n_items: int = 160, n_cues: int = 5, seed: int = 0) -> ItemTable:
    """Continuous-cue table where small cue differences are mostly noise.

    Every cue is a noisy reading of the criterion, so a thresholdless
    lexicographic rule decides almost everything on its first (noisy) cue;
    discrimination thresholds let later cues contribute.
    """
    rng = np.random.default_rng(seed)
    criterion = rng.normal(size=n_items)
    noise_scale = np.linspace(0.8, 1.6, n_cues)
    features = criterion[:, None] + rng.normal(size=(n_items, n_cues)) * noise_scale
    return ItemTable(features, criterion)


SYNTHETIC_BENCHMARKS = {
    "city-synth": synthetic_city,
    "mileage-synth": synthetic_mileage,
}
