"""Independent defining-integral oracles for the closed-form measures.

Each closed-form discrepancy is, by definition, an integral of the squared
local discrepancy (empirical fraction minus volume) over a family of
regions.  These oracles evaluate that integral directly by exact piecewise
quadrature: the region-parameter axes are cut at every data coordinate, on
each cell the point count is constant and the volume term is a polynomial,
so every cell integrates in closed form and the only error left is float
rounding.  Nothing here shares code or kernel algebra with the production
implementation.

Region families (per coordinate):

* anchored      [0, t)            - star L2 (full dimension only)
* anchored      summed over all nonempty coordinate subsets - modified
* nearest corner [0,t) / [t,1]    - centered (summed over subsets)
* both anchors  [0,t) and [t,1]   - symmetric (all 2^d branch choices,
                                    full dimension, scaled by 2^d)
* plain interval [a, b), a <= b   - unanchored L2 (full dimension only)
* wrapped interval [t,e) mod 1    - wrap-around (summed over subsets)

Supports d in {1, 2}, which is what the toolkit's projections use.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product

import numpy as np


@dataclass
class CellSystem:
    """Cells along one region-parameter axis (or axis pair) of one coordinate.

    mem[c, p] says whether point p lies inside the region for every
    parameter value in cell c; m0/m1/m2 integrate 1, vol, vol^2 over the
    cell's parameter measure.
    """

    mem: np.ndarray  # (cells, n) bool
    m0: np.ndarray
    m1: np.ndarray
    m2: np.ndarray


def _breaks(c: np.ndarray, extra: tuple[float, ...] = ()) -> np.ndarray:
    b = np.unique(np.concatenate([[0.0, 1.0], np.asarray(c, float), list(extra)]))
    return b[(b >= 0.0) & (b <= 1.0)]


def _power_moments(b: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-segment integrals of 1, t, t^2 between consecutive breakpoints."""
    w = np.diff(b)
    r1 = np.diff(b**2) / 2.0
    r2 = np.diff(b**3) / 3.0
    return w, r1, r2


def anchored_system(c: np.ndarray) -> CellSystem:
    """Regions [0, t); a point is inside for every t in a segment iff it
    does not exceed the segment's left endpoint."""
    b = _breaks(c)
    w, r1, r2 = _power_moments(b)
    mem = c[None, :] <= b[:-1, None]
    return CellSystem(mem=mem, m0=w, m1=r1, m2=r2)


def anti_system(c: np.ndarray) -> CellSystem:
    """Regions [t, 1]; inside for every t in a segment iff the point is at
    or beyond the segment's right endpoint."""
    b = _breaks(c)
    w, r1, r2 = _power_moments(b)
    mem = c[None, :] >= b[1:, None]
    s1 = w - r1  # integral of (1 - t)
    s2 = w - 2.0 * r1 + r2  # integral of (1 - t)^2
    return CellSystem(mem=mem, m0=w, m1=s1, m2=s2)


def nearest_corner_system(c: np.ndarray) -> CellSystem:
    """Anchored behaviour below 0.5, anti behaviour above it."""
    b = _breaks(c, extra=(0.5,))
    w, r1, r2 = _power_moments(b)
    lo = b[1:] <= 0.5 + 1e-15  # segment entirely in the lower half
    mem_lo = c[None, :] <= b[:-1, None]
    mem_hi = c[None, :] >= b[1:, None]
    mem = np.where(lo[:, None], mem_lo, mem_hi)
    m1 = np.where(lo, r1, w - r1)
    m2 = np.where(lo, r2, w - 2.0 * r1 + r2)
    return CellSystem(mem=mem, m0=w, m1=m1, m2=m2)


def interval_system(c: np.ndarray) -> CellSystem:
    """Regions [a, b) over the unnormalized triangle 0 <= a <= b <= 1."""
    b = _breaks(c)
    w, r1, r2 = _power_moments(b)
    m = w.size
    cells_mem, m0, m1, m2 = [], [], [], []
    inside_lo = c[None, :] >= b[1:, None]  # a <= point for all a in segment i
    inside_hi = c[None, :] <= b[:-1, None]  # point < b for all b in segment j
    for i in range(m):
        for j in range(i, m):
            if i == j:
                cells_mem.append(np.zeros(c.size, dtype=bool))
                m0.append(w[i] ** 2 / 2.0)
                m1.append(w[i] ** 3 / 6.0)
                m2.append(w[i] ** 4 / 12.0)
            else:
                cells_mem.append(inside_lo[i] & inside_hi[j])
                m0.append(w[i] * w[j])
                m1.append(w[i] * r1[j] - r1[i] * w[j])
                m2.append(w[i] * r2[j] - 2.0 * r1[i] * r1[j] + r2[i] * w[j])
    return CellSystem(
        mem=np.array(cells_mem),
        m0=np.array(m0),
        m1=np.array(m1),
        m2=np.array(m2),
    )


def wrapped_system(c: np.ndarray) -> CellSystem:
    """Regions [t, e) on the circle (wrapping through 1 == 0 when e < t).

    Parameterized by (t, e) uniform over the unit square; the wrapped
    volume is e - t, or 1 - t + e on wrapped cells.  Coordinates are folded
    so that 1 is identified with 0.
    """
    c = np.where(np.asarray(c, float) == 1.0, 0.0, c)
    b = _breaks(c)
    w, r1, r2 = _power_moments(b)
    s1 = w - r1
    s2 = w - 2.0 * r1 + r2
    m = w.size
    at_or_after = c[None, :] >= b[1:, None]  # t <= point for all t in segment
    before = c[None, :] <= b[:-1, None]  # point < e for all e in segment
    cells_mem, m0, m1, m2 = [], [], [], []
    for i in range(m):  # t segment
        for j in range(m):  # e segment
            if i < j:  # plain interval
                cells_mem.append(at_or_after[i] & before[j])
                m0.append(w[i] * w[j])
                m1.append(w[i] * r1[j] - r1[i] * w[j])
                m2.append(w[i] * r2[j] - 2.0 * r1[i] * r1[j] + r2[i] * w[j])
            elif i > j:  # wrapped through the seam
                cells_mem.append(at_or_after[i] | before[j])
                m0.append(w[i] * w[j])
                m1.append(w[i] * w[j] - r1[i] * w[j] + w[i] * r1[j])
                m2.append(s2[i] * w[j] + 2.0 * s1[i] * r1[j] + w[i] * r2[j])
            else:  # diagonal: split into the two triangles
                wi = w[i]
                cells_mem.append(np.zeros(c.size, dtype=bool))  # t < e
                m0.append(wi**2 / 2.0)
                m1.append(wi**3 / 6.0)
                m2.append(wi**4 / 12.0)
                cells_mem.append(np.ones(c.size, dtype=bool))  # e < t: wrapped
                m0.append(wi**2 / 2.0)
                m1.append(wi**2 / 2.0 - wi**3 / 6.0)
                m2.append(wi**2 / 2.0 - wi**3 / 3.0 + wi**4 / 12.0)
    return CellSystem(
        mem=np.array(cells_mem),
        m0=np.array(m0),
        m1=np.array(m1),
        m2=np.array(m2),
    )


def _integrate(systems: list[CellSystem], n: int) -> float:
    """Integral of (count/n - vol)^2 for the product region of the systems."""
    if len(systems) == 1:
        s = systems[0]
        cnt = s.mem.sum(axis=1).astype(np.float64)
        return float(
            np.sum((cnt / n) ** 2 * s.m0 - 2.0 * (cnt / n) * s.m1 + s.m2)
        )
    if len(systems) == 2:
        s1, s2 = systems
        counts = s1.mem.astype(np.float64) @ s2.mem.astype(np.float64).T
        sq = float(np.einsum("ij,ij,i,j->", counts, counts, s1.m0, s2.m0))
        cross = float(np.einsum("ij,i,j->", counts, s1.m1, s2.m1))
        vol2 = float(s1.m2.sum() * s2.m2.sum())
        return sq / n**2 - 2.0 * cross / n + vol2
    raise NotImplementedError("oracles support d <= 2")


def _pts(points) -> np.ndarray:
    p = np.asarray(points, dtype=np.float64)
    if p.ndim == 1:
        p = p[:, None]
    if p.shape[1] > 2:
        raise NotImplementedError("oracles support d <= 2")
    return p


def _subset_sum(points, system_factory) -> float:
    p = _pts(points)
    n, d = p.shape
    total = 0.0
    for size in range(1, d + 1):
        for subset in combinations(range(d), size):
            total += _integrate([system_factory(p[:, k]) for k in subset], n)
    return total


def oracle_star(points) -> float:
    p = _pts(points)
    return _integrate([anchored_system(p[:, k]) for k in range(p.shape[1])], p.shape[0])


def oracle_modified(points) -> float:
    return _subset_sum(points, anchored_system)


def oracle_centered(points) -> float:
    return _subset_sum(points, nearest_corner_system)


def oracle_symmetric(points) -> float:
    p = _pts(points)
    n, d = p.shape
    total = 0.0
    for branches in product((anchored_system, anti_system), repeat=d):
        total += _integrate([branches[k](p[:, k]) for k in range(d)], n)
    return 2.0**d * total


def oracle_wraparound(points) -> float:
    return _subset_sum(points, wrapped_system)


def oracle_unanchored(points) -> float:
    p = _pts(points)
    return _integrate([interval_system(p[:, k]) for k in range(p.shape[1])], p.shape[0])


def cramer_von_mises_star(points_1d) -> float:
    """Order-statistic closed form of the 1-D star L2 discrepancy:
    1/(12 n^2) + (1/n) sum_i ((2i-1)/(2n) - x_(i))^2."""
    x = np.sort(np.asarray(points_1d, dtype=np.float64).ravel())
    n = x.size
    i = np.arange(1, n + 1)
    return float(1.0 / (12.0 * n * n) + np.mean(((2.0 * i - 1.0) / (2.0 * n) - x) ** 2))


def grid_star(points, grid: int = 200) -> float:
    """Literal midpoint-grid quadrature of the star integral (d <= 2)."""
    p = _pts(points)
    n, d = p.shape
    t = (np.arange(grid) + 0.5) / grid
    if d == 1:
        counts = (p[:, 0][:, None] < t[None, :]).sum(axis=0)
        return float(np.mean((counts / n - t) ** 2))
    tx, ty = np.meshgrid(t, t, indexing="ij")
    inside = (p[:, 0][:, None, None] < tx[None]) & (p[:, 1][:, None, None] < ty[None])
    counts = inside.sum(axis=0)
    return float(np.mean((counts / n - tx * ty) ** 2))
