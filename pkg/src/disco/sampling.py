"""Random and Sobol' quasi-random sampling of the unit hypercube.

Two generators behind one interface: a seeded PCG64 stream for plain Monte
Carlo, and the Sobol' low-discrepancy sequence (scipy's engine, Joe-Kuo
direction numbers up to 21201 dimensions, optional Owen scrambling).

Convention: the unscrambled Sobol' sequence is returned from its natural
start, so the first point is the origin and the first one-dimensional
column of four points reads (0, 0.5, 0.75, 0.25).  Keeping the initial
point preserves the dyadic balance of every 2^m-point prefix: each interval
[j/2^m, (j+1)/2^m) holds exactly one point in every coordinate.  Scrambled
streams never emit the origin, so no special casing is needed there.

`build_design_pair` assembles the stacked A / A_Bk pick-freeze design used
by the Jansen total-order estimator next to a plain matrix of the same
total run count, so both consume an identical model-evaluation budget.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np
from scipy.stats import qmc

__all__ = [
    "SamplerMethod",
    "SamplerKind",
    "DesignPair",
    "SOBOL_MAX_DIM",
    "generate",
    "build_design_pair",
    "save_points_csv",
    "load_points_csv",
]

#: Dimension limit of the shipped Sobol' direction numbers.
SOBOL_MAX_DIM = 21201


class SamplerMethod(Enum):
    RANDOM = "random"
    SOBOL = "sobol"


@dataclass(frozen=True)
class SamplerKind:
    """A generator choice plus the seed state that makes it reproducible.

    `scrambling` only applies to the Sobol' method and is ignored for the
    random stream.
    """

    method: SamplerMethod
    seed: int = 0
    scrambling: bool = False


@dataclass(frozen=True)
class DesignPair:
    """The Jansen pick-freeze design and its budget-matched plain twin.

    `jansen` stacks the A block followed by d blocks A_Bk, where block k
    copies A except column k-1, which is taken from the independent B
    block.  `discrepancy` is an independent plain sample with the same
    n_base * (dim + 1) row count.
    """

    jansen: np.ndarray
    discrepancy: np.ndarray
    n_base: int
    dim: int

    def __post_init__(self):
        rows = self.n_base * (self.dim + 1)
        if self.jansen.shape != (rows, self.dim):
            raise ValueError("jansen block has the wrong shape")
        if self.discrepancy.shape != (rows, self.dim):
            raise ValueError("discrepancy block has the wrong shape")


def _check_shape(n: int, d: int) -> None:
    if n < 1:
        raise ValueError(f"need n >= 1 points, got {n}")
    if d < 1:
        raise ValueError(f"need d >= 1 dimensions, got {d}")


def _generate(kind: SamplerKind, n: int, d: int, stream: int) -> np.ndarray:
    """Draw an (n, d) matrix from the sub-stream `stream` of kind's seed."""
    _check_shape(n, d)
    seed_seq = np.random.SeedSequence((int(kind.seed), stream))
    if kind.method is SamplerMethod.RANDOM:
        return np.random.default_rng(seed_seq).random((n, d))
    if d > SOBOL_MAX_DIM:
        raise ValueError(
            f"Sobol' direction numbers cover {SOBOL_MAX_DIM} dimensions, "
            f"requested d={d}"
        )
    engine = qmc.Sobol(
        d=d,
        scramble=kind.scrambling,
        seed=np.random.default_rng(seed_seq),
    )
    with warnings.catch_warnings():
        # Arbitrary run counts are intentional here (matched design budgets),
        # so the power-of-two balance hint does not apply.
        warnings.filterwarnings(
            "ignore", message="The balance properties of Sobol"
        )
        return engine.random(n)


def generate(kind: SamplerKind, n: int, d: int) -> np.ndarray:
    """Produce an (n, d) matrix of points in [0, 1).

    Deterministic in (kind, n, d): the same arguments always return a
    bit-identical matrix.
    """
    return _generate(kind, n, d, stream=0)


def build_design_pair(kind: SamplerKind, n_base: int, d: int) -> DesignPair:
    """Build the stacked pick-freeze design plus its plain counterpart.

    A and B come from one (n_base, 2d) draw split column-wise, so under
    Sobol' sampling the pair is jointly low-discrepancy.  The plain matrix
    comes from an independent sub-stream of the same seed.
    """
    if n_base < 2:
        raise ValueError(f"need n_base >= 2, got {n_base}")
    _check_shape(n_base, d)
    ab = _generate(kind, n_base, 2 * d, stream=1)
    a, b = ab[:, :d], ab[:, d:]
    blocks = [a]
    for k in range(d):
        abk = a.copy()
        abk[:, k] = b[:, k]
        blocks.append(abk)
    jansen = np.vstack(blocks)
    plain = _generate(kind, n_base * (d + 1), d, stream=2)
    return DesignPair(jansen=jansen, discrepancy=plain, n_base=n_base, dim=d)


def unscrambled(kind: SamplerKind) -> SamplerKind:
    """The same sampler with scrambling switched off (deterministic tests)."""
    return replace(kind, scrambling=False)


def save_points_csv(path, points: np.ndarray) -> None:
    """Write a sample matrix as headerless CSV, one run per row.

    Uses shortest round-trip float formatting, so identical matrices give
    byte-identical files.
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2:
        raise ValueError("expected an (n, d) matrix")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for row in pts:
            fh.write(",".join(repr(float(v)) for v in row))
            fh.write("\n")


def load_points_csv(path) -> np.ndarray:
    """Read a headerless CSV of points into an (n, d) float matrix."""
    pts = np.loadtxt(path, delimiter=",", dtype=np.float64, ndmin=2)
    if pts.size == 0:
        raise ValueError(f"{path}: empty points file")
    return pts
