"""L2-family discrepancy measures and the grid-occupancy ersatz.

Seven measures of how far a point set in the unit hypercube deviates from
the uniform distribution.  The six closed-form measures (star L2,
unanchored L2, modified, centered, symmetric, wrap-around) are reported in
their squared analytic form, with no outer square root, so small hand-derived
fixtures evaluate to exact rationals.  Each costs Theta(n^2 * d) kernel
evaluations.

The seventh measure, the ersatz, applies only to two-column samples (an
input column paired with a response column): the unit square is cut into a
ceil(sqrt(n)) x ceil(sqrt(n)) grid and the score is the number of occupied
cells divided by n.  It is oriented the opposite way from the rest: larger
values mean a more uniform scatter, and the value always lies in [1/n, 1].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np

__all__ = [
    "MeasureKind",
    "DiscrepancyValue",
    "star_l2",
    "unanchored_l2",
    "modified_l2",
    "centered_l2",
    "symmetric_l2",
    "wraparound_l2",
    "s_ersatz",
    "compute",
]

# Rows per block in the pairwise kernel loop; keeps each (block, n)
# intermediate around 32 MB of float64 regardless of n.
_BLOCK_ELEMS = 1 << 22


class MeasureKind(Enum):
    """The seven supported uniformity measures, keyed by their CLI names."""

    STAR_L2 = "star_l2"
    L2 = "l2"
    MODIFIED = "modified"
    CENTERED = "centered"
    SYMMETRIC = "symmetric"
    WRAPAROUND = "wraparound"
    S_ERSATZ = "ersatz"

    @property
    def larger_is_more_uniform(self) -> bool:
        return self is MeasureKind.S_ERSATZ


#: The six measures with an n x n closed-form kernel (everything but the ersatz).
CLOSED_FORM_KINDS = (
    MeasureKind.STAR_L2,
    MeasureKind.L2,
    MeasureKind.MODIFIED,
    MeasureKind.CENTERED,
    MeasureKind.SYMMETRIC,
    MeasureKind.WRAPAROUND,
)

ALL_KINDS = CLOSED_FORM_KINDS + (MeasureKind.S_ERSATZ,)


@dataclass(frozen=True)
class DiscrepancyValue:
    """A measure value together with the sample shape it was computed on."""

    kind: MeasureKind
    value: float
    n: int
    d: int


def _as_points(m) -> np.ndarray:
    """Validate and return an (n, d) float matrix with entries in [0, 1]."""
    x = np.asarray(m, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, None]
    if x.ndim != 2:
        raise ValueError(f"expected a 2-D sample matrix, got ndim={x.ndim}")
    if x.shape[0] < 1 or x.shape[1] < 1:
        raise ValueError("empty sample matrix")
    if not np.isfinite(x).all():
        raise ValueError("sample matrix contains non-finite entries")
    if (x < 0.0).any() or (x > 1.0).any():
        raise ValueError("sample matrix entries must lie in [0, 1]")
    return x


# ---------------------------------------------------------------------------
# Closed-form measures
#
# Every closed-form value decomposes as
#
#   const(d) - row_coef(n, d) * sum_i prod_k row(x_ik)
#            + pair_coef(n, d) * sum_ij prod_k kernel(x_ik, x_jk)
#
# which is what `_MeasureForm` captures.  The same forms drive the fast
# per-input projection sweep in `sensitivity`.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _MeasureForm:
    const: Callable[[int], float]
    row: Callable[[np.ndarray], np.ndarray] | None
    row_coef: Callable[[int, int], float]
    kernel: Callable[[np.ndarray, np.ndarray], np.ndarray]
    pair_coef: Callable[[int, int], float]


def _k_star(a, b):
    return 1.0 - np.maximum(a, b)


def _k_unanchored(a, b):
    return np.minimum(a, b) - a * b


def _k_modified(a, b):
    return 2.0 - np.maximum(a, b)


def _k_centered(a, b):
    return (
        1.0
        + 0.5 * np.abs(a - 0.5)
        + 0.5 * np.abs(b - 0.5)
        - 0.5 * np.abs(a - b)
    )


def _k_symmetric(a, b):
    return 1.0 - np.abs(a - b)


def _k_wraparound(a, b):
    t = np.abs(a - b)
    return 1.5 - t * (1.0 - t)


_FORMS: dict[MeasureKind, _MeasureForm] = {
    MeasureKind.STAR_L2: _MeasureForm(
        const=lambda d: 3.0**-d,
        row=lambda x: 1.0 - x * x,
        row_coef=lambda n, d: 2.0 ** (1 - d) / n,
        kernel=_k_star,
        pair_coef=lambda n, d: 1.0 / (n * n),
    ),
    MeasureKind.L2: _MeasureForm(
        const=lambda d: 12.0**-d,
        row=lambda x: x * (1.0 - x),
        row_coef=lambda n, d: 2.0 ** (1 - d) / n,
        kernel=_k_unanchored,
        pair_coef=lambda n, d: 1.0 / (n * n),
    ),
    MeasureKind.MODIFIED: _MeasureForm(
        const=lambda d: (4.0 / 3.0) ** d,
        row=lambda x: 3.0 - x * x,
        row_coef=lambda n, d: 2.0 ** (1 - d) / n,
        kernel=_k_modified,
        pair_coef=lambda n, d: 1.0 / (n * n),
    ),
    MeasureKind.CENTERED: _MeasureForm(
        const=lambda d: (13.0 / 12.0) ** d,
        row=lambda x: 1.0 + 0.5 * np.abs(x - 0.5) - 0.5 * (x - 0.5) ** 2,
        row_coef=lambda n, d: 2.0 / n,
        kernel=_k_centered,
        pair_coef=lambda n, d: 1.0 / (n * n),
    ),
    MeasureKind.SYMMETRIC: _MeasureForm(
        const=lambda d: (4.0 / 3.0) ** d,
        row=lambda x: 1.0 + 2.0 * x - 2.0 * x * x,
        row_coef=lambda n, d: 2.0 / n,
        kernel=_k_symmetric,
        pair_coef=lambda n, d: 2.0**d / (n * n),
    ),
    MeasureKind.WRAPAROUND: _MeasureForm(
        const=lambda d: -((4.0 / 3.0) ** d),
        row=None,
        row_coef=lambda n, d: 0.0,
        kernel=_k_wraparound,
        pair_coef=lambda n, d: 1.0 / (n * n),
    ),
}


def _pair_sum(x: np.ndarray, kernel) -> float:
    """sum_ij prod_k kernel(x_ik, x_jk), blocked over rows.

    Block partials are reduced with math.fsum so the n^2 accumulation stays
    exact regardless of block size.
    """
    n, d = x.shape
    block = max(1, _BLOCK_ELEMS // n)
    parts = []
    for s in range(0, n, block):
        xi = x[s : s + block]
        prod = kernel(xi[:, 0][:, None], x[:, 0][None, :])
        for k in range(1, d):
            prod *= kernel(xi[:, k][:, None], x[:, k][None, :])
        parts.append(float(prod.sum()))
    return math.fsum(parts)


def _closed_form(kind: MeasureKind, m) -> float:
    x = _as_points(m)
    n, d = x.shape
    form = _FORMS[kind]
    value = form.const(d) + form.pair_coef(n, d) * _pair_sum(x, form.kernel)
    if form.row is not None:
        value -= form.row_coef(n, d) * float(np.prod(form.row(x), axis=1).sum())
    return value


def star_l2(m) -> float:
    """Squared L2 discrepancy over boxes anchored at the origin.

    In one dimension this equals the Cramer-von Mises distance between the
    empirical CDF and the uniform CDF.
    """
    return _closed_form(MeasureKind.STAR_L2, m)


def unanchored_l2(m) -> float:
    """Squared L2 discrepancy over all axis-aligned boxes [a, b)."""
    return _closed_form(MeasureKind.L2, m)


def modified_l2(m) -> float:
    """Origin-anchored squared L2 discrepancy summed over all sub-projections."""
    return _closed_form(MeasureKind.MODIFIED, m)


def centered_l2(m) -> float:
    """Squared L2 discrepancy over boxes anchored at the nearest corner,
    summed over all sub-projections.  Invariant under x -> 1 - x."""
    return _closed_form(MeasureKind.CENTERED, m)


def symmetric_l2(m) -> float:
    """Squared L2 discrepancy summed over boxes anchored at every corner
    (both the [0, t) and [t, 1) system in each coordinate), scaled by 2^d."""
    return _closed_form(MeasureKind.SYMMETRIC, m)


def wraparound_l2(m) -> float:
    """Squared L2 discrepancy over periodically wrapped boxes, summed over
    all sub-projections.  Translation modulo 1 leaves it unchanged."""
    return _closed_form(MeasureKind.WRAPAROUND, m)


def ersatz_grid_side(n: int) -> int:
    """Side length ceil(sqrt(n)) of the occupancy grid for an n-point sample."""
    if n < 1:
        raise ValueError("need at least one point")
    r = math.isqrt(n)
    return r if r * r == n else r + 1


def ersatz_cell_indices(v: np.ndarray, side: int) -> np.ndarray:
    """1-based cell index per coordinate: ceil(v * side), rounded up to 1 at 0."""
    idx = np.ceil(v * side).astype(np.int64)
    np.maximum(idx, 1, out=idx)
    return idx


def s_ersatz(x, y) -> float:
    """Fraction of occupied grid cells over n for a 2-D scatter.

    Both coordinate vectors must already lie in [0, 1].  The grid side is
    ceil(sqrt(n)); a point lands in cell (ceil(x*s), ceil(y*s)) with zero
    coordinates rounded up to cell 1.  Occupancy is tracked as a set of cell
    codes, so memory stays O(n) even for large grids.
    """
    xv = np.atleast_1d(np.asarray(x, dtype=np.float64))
    yv = np.atleast_1d(np.asarray(y, dtype=np.float64))
    if xv.ndim != 1 or yv.ndim != 1:
        raise ValueError("ersatz expects two 1-D coordinate vectors")
    if xv.size != yv.size:
        raise ValueError(f"length mismatch: {xv.size} != {yv.size}")
    n = xv.size
    if n < 1:
        raise ValueError("empty sample")
    for name, v in (("x", xv), ("y", yv)):
        if not np.isfinite(v).all() or (v < 0.0).any() or (v > 1.0).any():
            raise ValueError(f"{name} coordinates must lie in [0, 1]")
    side = ersatz_grid_side(n)
    codes = (ersatz_cell_indices(xv, side) - 1) * np.int64(side)
    codes += ersatz_cell_indices(yv, side) - 1
    occupied = np.unique(codes).size
    return occupied / n


def compute(kind: MeasureKind, m) -> DiscrepancyValue:
    """Score a sample matrix with the requested measure.

    The ersatz requires exactly two columns (input coordinate, response);
    every closed-form measure accepts any d >= 1.
    """
    if kind is MeasureKind.S_ERSATZ:
        x = _as_points(m)
        if x.shape[1] != 2:
            raise ValueError(
                f"the ersatz measure needs exactly 2 columns, got {x.shape[1]}"
            )
        value = s_ersatz(x[:, 0], x[:, 1])
        return DiscrepancyValue(kind, value, x.shape[0], 2)
    x = _as_points(m)
    return DiscrepancyValue(kind, _closed_form(kind, x), x.shape[0], x.shape[1])
