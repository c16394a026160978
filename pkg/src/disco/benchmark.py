"""Randomized benchmark of discrepancy rankings against the Jansen estimator.

Each simulation draws a design factor tuple (sampling method, base sample
size, dimension, model seed, input distribution) from a scrambled Sobol'
stream, builds the paired designs, runs a seeded metafunction over both,
and records the savage-score Pearson correlation r between the Jansen
total-order ranking and the ranking of every discrepancy measure.

The whole batch is a pure function of the master seed: every simulation
derives its own sub-streams from (master_seed, sim_id), so results are
bit-identical whether run serially or across a worker pool, and any single
row can be replayed in isolation.  A failing simulation is recorded with
undefined r values instead of aborting the batch.
"""

from __future__ import annotations

import csv
import io
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
from scipy import stats as scipy_stats

from .discrepancy import ALL_KINDS, MeasureKind
from .distributions import setting_from_index, transform
from .metafunction import build_metafunction, evaluate_matrix
from .sampling import SamplerKind, SamplerMethod, build_design_pair, generate
from .sensitivity import agreement, importance_profile, jansen_total_order

__all__ = [
    "FACTOR_BOUNDS",
    "FactorSample",
    "SimulationRecord",
    "MeasureSummary",
    "MoodTestResult",
    "sample_factors",
    "run_simulation",
    "run_benchmark",
    "replay",
    "aggregate",
    "mood_median_p",
    "mood_all",
    "mood_pairwise",
    "write_results_csv",
    "read_results_csv",
    "write_summary_csv",
    "write_mood_csv",
]

#: Inclusive integer ranges of the benchmark design factors.
FACTOR_BOUNDS = {
    "tau": (1, 2),
    "n_s": (10, 100),
    "d": (3, 50),
    "epsilon": (1, 200),
    "phi": (1, 8),
}

# Sub-stream salts under (master_seed, sim_id, ...).
_SALT_FACTORS = 101
_SALT_DESIGN = 1
_SALT_TRANSFORM = 2


def _derive_seed(*entropy: int) -> int:
    """A 64-bit seed deterministically derived from an integer tuple."""
    return int(
        np.random.SeedSequence(tuple(int(e) for e in entropy)).generate_state(
            1, np.uint64
        )[0]
    )


@dataclass(frozen=True)
class FactorSample:
    """One row of the benchmark design: the five factors plus replay keys."""

    tau: int
    n_s: int
    d: int
    epsilon: int
    phi: int
    sim_id: int
    master_seed: int

    def __post_init__(self):
        for name in ("tau", "n_s", "d", "epsilon", "phi"):
            lo, hi = FACTOR_BOUNDS[name]
            v = getattr(self, name)
            if not lo <= v <= hi:
                raise ValueError(f"{name}={v} outside [{lo}, {hi}]")

    @property
    def sampler_kind(self) -> SamplerKind:
        method = SamplerMethod.RANDOM if self.tau == 1 else SamplerMethod.SOBOL
        return SamplerKind(
            method=method,
            seed=_derive_seed(self.master_seed, self.sim_id, _SALT_DESIGN),
            scrambling=True,
        )

    @property
    def transform_seed(self) -> int:
        return _derive_seed(self.master_seed, self.sim_id, _SALT_TRANSFORM)


@dataclass
class SimulationRecord:
    """Per-measure r values (None when undefined) plus stage wall times."""

    factors: FactorSample
    r_by_measure: dict[MeasureKind, float | None]
    wall_times: dict[str, float] = field(default_factory=dict)
    error: str | None = None


@dataclass(frozen=True)
class MeasureSummary:
    kind: MeasureKind
    n_defined: int
    n_undefined: int
    median_r: float
    q1_r: float
    q3_r: float
    frac_negative: float
    frac_undefined: float


@dataclass(frozen=True)
class MoodTestResult:
    """Holm-corrected p-value for one unordered pair of measures."""

    pair: tuple[MeasureKind, MeasureKind]
    p_value: float

    def matches(self, a: MeasureKind, b: MeasureKind) -> bool:
        return {a, b} == set(self.pair)


def sample_factors(n_sims: int, master_seed: int) -> list[FactorSample]:
    """Draw the benchmark design from a scrambled Sobol' stream.

    Each unit coordinate u maps onto its inclusive integer range as
    lo + floor(u * (hi - lo + 1)).  Row i is independent of n_sims, so a
    single simulation can be replayed without regenerating the batch.
    """
    if n_sims < 1:
        raise ValueError("need at least one simulation")
    kind = SamplerKind(
        method=SamplerMethod.SOBOL,
        seed=_derive_seed(master_seed, _SALT_FACTORS),
        scrambling=True,
    )
    u = generate(kind, n_sims, 5)
    out = []
    for i in range(n_sims):
        vals = {}
        for col, name in enumerate(("tau", "n_s", "d", "epsilon", "phi")):
            lo, hi = FACTOR_BOUNDS[name]
            vals[name] = lo + int(u[i, col] * (hi - lo + 1))
        out.append(FactorSample(sim_id=i, master_seed=int(master_seed), **vals))
    return out


def run_simulation(f: FactorSample) -> SimulationRecord:
    """Run the full pipeline for one factor row.

    Steps: build the design pair, map inputs through the phi distribution,
    evaluate the epsilon-seeded metafunction on both designs, estimate
    total-order indices from the stacked design, score all seven importance
    vectors on the plain design (unit-hypercube coordinates against the
    min-max normalized output), and record the savage-score agreement r per
    measure.  Constant outputs yield undefined r, never an exception.
    """
    times: dict[str, float] = {}
    t0 = time.perf_counter()
    design = build_design_pair(f.sampler_kind, f.n_s, f.d)
    times["design"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    dist = setting_from_index(f.phi)
    xj = transform(design.jansen, dist, f.transform_seed)
    xd = transform(design.discrepancy, dist, f.transform_seed)
    times["transform"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    mf = build_metafunction(f.d, f.epsilon)
    yj = evaluate_matrix(mf, xj)
    yd = evaluate_matrix(mf, xd)
    times["evaluate"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    t_idx = jansen_total_order(yj, f.n_s, f.d)
    times["jansen"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    profile = importance_profile(design.discrepancy, yd, ALL_KINDS)
    times["importance"] = time.perf_counter() - t0

    r: dict[MeasureKind, float | None] = {}
    for kind in ALL_KINDS:
        result = agreement(t_idx, profile[kind])
        r[kind] = float(result.r) if result.defined else None
    return SimulationRecord(factors=f, r_by_measure=r, wall_times=times)


def _safe_run(f: FactorSample) -> SimulationRecord:
    try:
        return run_simulation(f)
    except Exception as exc:  # crash isolation: keep the batch alive
        return SimulationRecord(
            factors=f,
            r_by_measure={k: None for k in ALL_KINDS},
            error=f"{type(exc).__name__}: {exc}",
        )


def run_benchmark(
    n_sims: int, master_seed: int, jobs: int = 1
) -> list[SimulationRecord]:
    """Run the batch; records come back ordered by sim_id regardless of jobs."""
    factors = sample_factors(n_sims, master_seed)
    if jobs <= 1:
        return [_safe_run(f) for f in factors]
    chunk = max(1, len(factors) // (4 * jobs))
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_safe_run, factors, chunksize=chunk))


def replay(master_seed: int, sim_id: int) -> SimulationRecord:
    """Re-run a single simulation identified by (master_seed, sim_id)."""
    factors = sample_factors(sim_id + 1, master_seed)
    return _safe_run(factors[sim_id])


# ---------------------------------------------------------------------------
# Aggregation and tests on the r distributions
# ---------------------------------------------------------------------------


def defined_r(records: list[SimulationRecord], kind: MeasureKind) -> np.ndarray:
    return np.array(
        [
            rec.r_by_measure[kind]
            for rec in records
            if rec.r_by_measure.get(kind) is not None
        ],
        dtype=np.float64,
    )


def aggregate(records: list[SimulationRecord]) -> dict[MeasureKind, MeasureSummary]:
    """Median / quartiles / negative fraction per measure.

    Undefined r values are excluded from the quantiles but counted in the
    undefined fraction, so silent failures cannot shift the medians.
    """
    if not records:
        raise ValueError("no simulation records")
    out = {}
    for kind in ALL_KINDS:
        r = defined_r(records, kind)
        n_def = r.size
        n_undef = len(records) - n_def
        if n_def:
            median = float(np.median(r))
            q1, q3 = (float(v) for v in np.percentile(r, [25.0, 75.0]))
            frac_neg = float((r < 0.0).sum() / n_def)
        else:
            median = q1 = q3 = frac_neg = float("nan")
        out[kind] = MeasureSummary(
            kind=kind,
            n_defined=n_def,
            n_undefined=n_undef,
            median_r=median,
            q1_r=q1,
            q3_r=q3,
            frac_negative=frac_neg,
            frac_undefined=n_undef / len(records),
        )
    return out


def mood_median_p(a, b) -> float:
    """Uncorrected Mood median test between two samples.

    Pools both samples, counts values above the grand median, and tests the
    resulting 2x2 table: chi-square with continuity correction when every
    expected count reaches 5, otherwise the exact (Fisher) tail.  Degenerate
    tables (all values equal, or nothing above the grand median) return 1.
    """
    x = np.asarray(a, dtype=np.float64).ravel()
    y = np.asarray(b, dtype=np.float64).ravel()
    if x.size < 2 or y.size < 2:
        raise ValueError("need at least 2 defined values per sample")
    pooled = np.concatenate([x, y])
    if np.all(pooled == pooled[0]):
        return 1.0
    gm = float(np.median(pooled))
    above = np.array([(x > gm).sum(), (y > gm).sum()], dtype=np.int64)
    below = np.array([x.size, y.size], dtype=np.int64) - above
    table = np.vstack([above, below])
    if (table.sum(axis=1) == 0).any():
        return 1.0
    expected = np.outer(table.sum(axis=1), table.sum(axis=0)) / table.sum()
    if expected.min() < 5.0:
        return float(scipy_stats.fisher_exact(table)[1])
    return float(scipy_stats.chi2_contingency(table, correction=True)[1])


def _holm(p_values: np.ndarray) -> np.ndarray:
    """Holm step-down correction, monotone and clipped to 1."""
    m = p_values.size
    order = np.argsort(p_values, kind="stable")
    out = np.empty(m)
    running = 0.0
    for rank, idx in enumerate(order):
        running = max(running, p_values[idx] * (m - rank))
        out[idx] = min(1.0, running)
    return out


def mood_all(records: list[SimulationRecord]) -> list[MoodTestResult]:
    """Mood tests over all measure pairs, Holm-corrected jointly."""
    pairs = list(combinations(ALL_KINDS, 2))
    raw = np.array(
        [mood_median_p(defined_r(records, a), defined_r(records, b)) for a, b in pairs]
    )
    corrected = _holm(raw)
    return [MoodTestResult(pair=p, p_value=float(c)) for p, c in zip(pairs, corrected)]


def mood_pairwise(
    records: list[SimulationRecord], measure_a: MeasureKind, measure_b: MeasureKind
) -> MoodTestResult:
    """The corrected result for one pair (computed jointly over all pairs)."""
    if measure_a is measure_b:
        raise ValueError("need two distinct measures")
    for result in mood_all(records):
        if result.matches(measure_a, measure_b):
            return result
    raise AssertionError("unreachable: pair not found")


# ---------------------------------------------------------------------------
# CSV I/O (UTF-8, header row, decimal point)
# ---------------------------------------------------------------------------


def write_results_csv(records: list[SimulationRecord], fh: io.TextIOBase) -> None:
    """One row per (sim_id, measure): factors, r (empty when undefined), flag."""
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(
        ["sim_id", "tau", "n_s", "d", "epsilon", "phi", "measure", "r", "defined"]
    )
    for rec in records:
        f = rec.factors
        for kind in ALL_KINDS:
            r = rec.r_by_measure.get(kind)
            writer.writerow(
                [
                    f.sim_id,
                    f.tau,
                    f.n_s,
                    f.d,
                    f.epsilon,
                    f.phi,
                    kind.value,
                    "" if r is None else repr(r),
                    "true" if r is not None else "false",
                ]
            )


def read_results_csv(path) -> list[SimulationRecord]:
    """Rebuild records (without wall times) from a results CSV."""
    by_sim: dict[int, SimulationRecord] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            sim_id = int(row["sim_id"])
            if sim_id not in by_sim:
                factors = FactorSample(
                    tau=int(row["tau"]),
                    n_s=int(row["n_s"]),
                    d=int(row["d"]),
                    epsilon=int(row["epsilon"]),
                    phi=int(row["phi"]),
                    sim_id=sim_id,
                    master_seed=0,
                )
                by_sim[sim_id] = SimulationRecord(factors=factors, r_by_measure={})
            kind = MeasureKind(row["measure"])
            r = float(row["r"]) if row["defined"] == "true" and row["r"] else None
            by_sim[sim_id].r_by_measure[kind] = r
    if not by_sim:
        raise ValueError(f"{path}: no simulation rows")
    return [by_sim[k] for k in sorted(by_sim)]


def write_summary_csv(
    summaries: dict[MeasureKind, MeasureSummary], fh: io.TextIOBase
) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(
        [
            "measure",
            "n_defined",
            "n_undefined",
            "median_r",
            "q1_r",
            "q3_r",
            "frac_negative",
            "frac_undefined",
        ]
    )
    for kind in ALL_KINDS:
        s = summaries[kind]
        writer.writerow(
            [
                kind.value,
                s.n_defined,
                s.n_undefined,
                repr(s.median_r),
                repr(s.q1_r),
                repr(s.q3_r),
                repr(s.frac_negative),
                repr(s.frac_undefined),
            ]
        )


def write_mood_csv(results: list[MoodTestResult], fh: io.TextIOBase) -> None:
    """Symmetric matrix of corrected p-values; diagonal cells stay empty."""
    lookup: dict[frozenset, float] = {
        frozenset(res.pair): res.p_value for res in results
    }
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["measure"] + [k.value for k in ALL_KINDS])
    for a in ALL_KINDS:
        row: list[str] = [a.value]
        for b in ALL_KINDS:
            row.append("" if a is b else repr(lookup[frozenset((a, b))]))
        writer.writerow(row)
