"""Input importance from scatterplot discrepancy and from variance shares.

Two routes to a per-input importance vector:

* `jansen_total_order` estimates variance-based total-order indices from
  the stacked A / A_Bk design (first-order effect plus all interactions).
* `discrepancy_importance` scores each input by the discrepancy of the
  2-D projection (input coordinate, normalized output): the sharper the
  scatter shape, the less uniform the projection, the more influential
  the input.

`agreement` compares the two rankings through savage scores (harmonic rank
scores that emphasize top ranks) and the Pearson correlation between them.

Projections are taken against the untransformed unit-hypercube coordinate
(the sample axis must itself be uniform for discrepancy to mean anything)
and the output is min-max normalized onto [0, 1].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .discrepancy import (
    ALL_KINDS,
    MeasureKind,
    _BLOCK_ELEMS,
    _FORMS,
    _as_points,
    s_ersatz,
)

__all__ = [
    "TotalOrderIndices",
    "ImportanceVector",
    "AgreementResult",
    "jansen_total_order",
    "discrepancy_importance",
    "importance_profile",
    "savage_scores",
    "pearson_r",
    "agreement",
    "normalize_output",
]


@dataclass(frozen=True)
class TotalOrderIndices:
    """Total-order estimates plus the output variance they were scaled by.

    When the A-block variance is zero the indices are undefined: `t` is all
    NaN and `defined` is False, never silently propagated NaN arithmetic.
    """

    t: np.ndarray
    variance: float
    n_base: int
    defined: bool = True


@dataclass(frozen=True)
class ImportanceVector:
    """Per-input scores oriented so that larger always means more influential.

    Classic measures already grow with scatter structure; the ersatz shrinks
    with it, so its scores are negated at construction.
    """

    kind: MeasureKind
    scores: np.ndarray
    defined: bool = True


@dataclass(frozen=True)
class AgreementResult:
    kind: MeasureKind
    r: float
    defined: bool = True


def jansen_total_order(y_jansen, n_base: int, d: int) -> TotalOrderIndices:
    """Total-order indices from outputs laid out as block A then A_B1..A_Bd.

    T_k = mean((y_A - y_ABk)^2) / (2 * V(y_A)) with the population variance
    of the A block.  Invariant under affine maps of y; values can exceed 1
    for strongly interactive models.
    """
    y = np.asarray(y_jansen, dtype=np.float64).ravel()
    if n_base < 2 or d < 1:
        raise ValueError("need n_base >= 2 and d >= 1")
    if y.size != n_base * (d + 1):
        raise ValueError(
            f"expected {n_base * (d + 1)} outputs for n_base={n_base}, d={d}, "
            f"got {y.size}"
        )
    ya = y[:n_base]
    variance = float(ya.var())
    if variance == 0.0 or not np.isfinite(variance):
        return TotalOrderIndices(
            t=np.full(d, np.nan), variance=variance, n_base=n_base, defined=False
        )
    yb = y[n_base:].reshape(d, n_base)
    t = ((ya[None, :] - yb) ** 2).mean(axis=1) / (2.0 * variance)
    return TotalOrderIndices(t=t, variance=variance, n_base=n_base)


def normalize_output(y) -> np.ndarray | None:
    """Min-max normalize y onto [0, 1]; None if y is constant."""
    v = np.asarray(y, dtype=np.float64).ravel()
    lo, hi = v.min(), v.max()
    if not (np.isfinite(lo) and np.isfinite(hi)) or hi == lo:
        return None
    return (v - lo) / (hi - lo)


def importance_profile(
    m, y, kinds: Iterable[MeasureKind] = ALL_KINDS
) -> dict[MeasureKind, ImportanceVector]:
    """Importance vectors for several measures from one (matrix, output) pass.

    The response-side kernel of each closed-form measure depends only on y,
    so it is materialized once and reused across all d input projections;
    the input-side kernels share their pairwise max / abs-difference blocks.
    Results are identical to calling `discrepancy.compute` per projection.
    """
    x = _as_points(m)
    n, d = x.shape
    if n < 2:
        raise ValueError("need at least 2 runs")
    kinds = list(kinds)
    yh = normalize_output(y)
    if yh is None:
        return {
            k: ImportanceVector(k, np.full(d, np.nan), defined=False) for k in kinds
        }
    if yh.size != n:
        raise ValueError(f"output length {yh.size} does not match {n} runs")

    classic = [k for k in kinds if k is not MeasureKind.S_ERSATZ]
    gy: dict[MeasureKind, np.ndarray] = {}
    ry: dict[MeasureKind, np.ndarray | None] = {}
    consts: dict[MeasureKind, tuple[float, float, float]] = {}
    for k in classic:
        form = _FORMS[k]
        gy[k] = form.kernel(yh[:, None], yh[None, :])
        ry[k] = None if form.row is None else form.row(yh)
        consts[k] = (form.const(2), form.row_coef(n, 2), form.pair_coef(n, 2))

    need_max = any(k in (MeasureKind.STAR_L2, MeasureKind.MODIFIED) for k in classic)
    need_abs = any(
        k in (MeasureKind.CENTERED, MeasureKind.SYMMETRIC, MeasureKind.WRAPAROUND)
        for k in classic
    )
    need_l2 = MeasureKind.L2 in classic
    block = max(1, _BLOCK_ELEMS // n)

    scores: dict[MeasureKind, np.ndarray] = {k: np.empty(d) for k in kinds}
    for col in range(d):
        xc = x[:, col]
        if classic:
            cx = np.abs(xc - 0.5) if MeasureKind.CENTERED in classic else None
            parts: dict[MeasureKind, list[float]] = {k: [] for k in classic}
            for s in range(0, n, block):
                xi = xc[s : s + block][:, None]
                xr = xc[None, :]
                mx = np.maximum(xi, xr) if need_max else None
                ab = np.abs(xi - xr) if need_abs else None
                for k in classic:
                    if k is MeasureKind.STAR_L2:
                        fx = 1.0 - mx
                    elif k is MeasureKind.MODIFIED:
                        fx = 2.0 - mx
                    elif k is MeasureKind.L2:
                        fx = np.minimum(xi, xr) - xi * xr
                    elif k is MeasureKind.CENTERED:
                        fx = 1.0 + 0.5 * np.add.outer(cx[s : s + block], cx) - 0.5 * ab
                    elif k is MeasureKind.SYMMETRIC:
                        fx = 1.0 - ab
                    else:  # WRAPAROUND
                        fx = 1.5 - ab * (1.0 - ab)
                    parts[k].append(
                        float(np.einsum("ij,ij->", fx, gy[k][s : s + block]))
                    )
            for k in classic:
                const, row_coef, pair_coef = consts[k]
                value = const + pair_coef * math.fsum(parts[k])
                if ry[k] is not None:
                    form = _FORMS[k]
                    value -= row_coef * float(np.dot(form.row(xc), ry[k]))
                scores[k][col] = value
        if MeasureKind.S_ERSATZ in kinds:
            scores[MeasureKind.S_ERSATZ][col] = -s_ersatz(xc, yh)

    return {k: ImportanceVector(k, scores[k]) for k in kinds}


def discrepancy_importance(kind: MeasureKind, m, y) -> ImportanceVector:
    """Score every input of an (N, d) unit-hypercube matrix for one measure."""
    return importance_profile(m, y, [kind])[kind]


def savage_scores(values, larger_is_first: bool = True) -> np.ndarray:
    """Harmonic rank scores: rank 1 receives sum_{j=1}^{d} 1/j, rank d gets 1/d.

    Tied values receive the mean of the scores of the positions they span,
    so the scores always sum to d.
    """
    v = np.asarray(values, dtype=np.float64).ravel()
    d = v.size
    if d < 1:
        raise ValueError("need at least one value")
    harmonic = 1.0 / np.arange(1, d + 1)
    base = np.cumsum(harmonic[::-1])[::-1]  # base[i] = sum_{j=i+1}^{d} 1/j
    key = -v if larger_is_first else v
    order = np.argsort(key, kind="stable")
    sorted_key = key[order]
    scores = np.empty(d)
    i = 0
    while i < d:
        j = i + 1
        while j < d and sorted_key[j] == sorted_key[i]:
            j += 1
        scores[order[i:j]] = base[i:j].mean()
        i = j
    return scores


def pearson_r(a, b) -> float:
    """Product-moment correlation; NaN when either vector has zero variance."""
    x = np.asarray(a, dtype=np.float64).ravel()
    y = np.asarray(b, dtype=np.float64).ravel()
    if x.size != y.size:
        raise ValueError(f"length mismatch: {x.size} != {y.size}")
    if x.size < 2:
        raise ValueError("need at least 2 values")
    xc = x - x.mean()
    yc = y - y.mean()
    denom = math.sqrt(float(xc @ xc) * float(yc @ yc))
    if denom == 0.0:
        return float("nan")
    return float(np.clip((xc @ yc) / denom, -1.0, 1.0))


def agreement(t: TotalOrderIndices, imp: ImportanceVector) -> AgreementResult:
    """Pearson correlation between the savage-scored rankings of T and D."""
    if t.t.size != imp.scores.size:
        raise ValueError("dimension mismatch between index vectors")
    if not t.defined or not imp.defined:
        return AgreementResult(imp.kind, float("nan"), defined=False)
    r = pearson_r(savage_scores(t.t), savage_scores(imp.scores))
    return AgreementResult(imp.kind, r, defined=bool(np.isfinite(r)))
