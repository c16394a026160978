"""Empirical scaling of the measures on the per-input importance sweep.

For each (measure, N, d) cell the harness times a full importance sweep:
d two-column projections of an (N, d) sample against a fixed response.
That is the operation a sensitivity user actually pays for, and it carries
the expected costs - Theta(N^2 d) kernel work for the closed-form measures,
Theta(N d) grid occupancy for the ersatz.

Cells are measured with a monotonic clock, warmup iterations excluded, and
the median of the measured repetitions reported.  Runs are strictly serial;
log-log slope fits over the N grid (at fixed d) and the d grid (at fixed N)
summarize the scaling per measure.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .discrepancy import ALL_KINDS, MeasureKind
from .sensitivity import importance_profile

__all__ = ["TimingRow", "timing_study", "fit_slopes"]

#: Fixed dimension for the N sweep and fixed sample size for the d sweep.
D_REF = 5
N_REF = 500


@dataclass(frozen=True)
class TimingRow:
    kind: MeasureKind
    n: int
    d: int
    median_seconds: float
    axis: str  # "n" for the N sweep, "d" for the d sweep


def _time_cell(kind: MeasureKind, m: np.ndarray, y: np.ndarray, reps: int, warmup: int) -> float:
    for _ in range(warmup):
        importance_profile(m, y, [kind])
    samples = []
    for _ in range(reps):
        t0 = time.perf_counter_ns()
        importance_profile(m, y, [kind])
        samples.append(time.perf_counter_ns() - t0)
    return float(np.median(samples)) / 1e9


def timing_study(
    n_grid: Sequence[int],
    d_grid: Sequence[int],
    reps: int = 5,
    warmup: int = 2,
    measures: Iterable[MeasureKind] = ALL_KINDS,
    d_ref: int = D_REF,
    n_ref: int = N_REF,
    seed: int = 0,
) -> list[TimingRow]:
    """Median sweep times over the N grid (at d_ref) and d grid (at n_ref)."""
    if reps < 5:
        raise ValueError("need reps >= 5 for a stable median")
    measures = list(measures)
    rng = np.random.default_rng(seed)
    rows: list[TimingRow] = []
    for n in n_grid:
        m = rng.random((n, d_ref))
        y = rng.random(n)
        for kind in measures:
            rows.append(
                TimingRow(kind, n, d_ref, _time_cell(kind, m, y, reps, warmup), "n")
            )
    for d in d_grid:
        m = rng.random((n_ref, d))
        y = rng.random(n_ref)
        for kind in measures:
            rows.append(
                TimingRow(kind, n_ref, d, _time_cell(kind, m, y, reps, warmup), "d")
            )
    return rows


def fit_slopes(rows: list[TimingRow]) -> dict[tuple[MeasureKind, str], float]:
    """Log-log slope per (measure, axis); needs >= 2 grid points per sweep."""
    slopes: dict[tuple[MeasureKind, str], float] = {}
    kinds = {row.kind for row in rows}
    for kind in kinds:
        for axis in ("n", "d"):
            pts = [
                (row.n if axis == "n" else row.d, row.median_seconds)
                for row in rows
                if row.kind is kind and row.axis == axis
            ]
            if len(pts) < 2:
                continue
            xs = np.log([p[0] for p in pts])
            ys = np.log([max(p[1], 1e-12) for p in pts])
            slopes[(kind, axis)] = float(np.polyfit(xs, ys, 1)[0])
    return slopes
