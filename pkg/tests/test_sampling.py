"""Generator contracts: ranges, determinism, balance, and design structure."""

import numpy as np
import pytest

from disco.discrepancy import star_l2
from disco.sampling import (
    SOBOL_MAX_DIM,
    DesignPair,
    SamplerKind,
    SamplerMethod,
    build_design_pair,
    generate,
    load_points_csv,
    save_points_csv,
)

SOBOL = SamplerKind(SamplerMethod.SOBOL, seed=0)
SOBOL_SCRAMBLED = SamplerKind(SamplerMethod.SOBOL, seed=0, scrambling=True)
RANDOM = SamplerKind(SamplerMethod.RANDOM, seed=0)


def test_sobol_first_points_1d():
    # Leading unscrambled points, origin kept by convention.
    col = generate(SOBOL, 4, 1).ravel()
    assert col.tolist() == [0.0, 0.5, 0.75, 0.25]


def test_random_single_row_in_range():
    row = generate(SamplerKind(SamplerMethod.RANDOM, seed=9), 1, 3)
    assert row.shape == (1, 3)
    assert ((row >= 0.0) & (row < 1.0)).all()


@pytest.mark.parametrize("kind", [SOBOL, SOBOL_SCRAMBLED, RANDOM])
def test_range_and_determinism(kind):
    a = generate(kind, 37, 5)
    b = generate(kind, 37, 5)
    assert ((a >= 0.0) & (a < 1.0)).all()
    assert np.array_equal(a, b)


def test_different_seeds_differ():
    a = generate(SamplerKind(SamplerMethod.RANDOM, seed=1), 10, 2)
    b = generate(SamplerKind(SamplerMethod.RANDOM, seed=2), 10, 2)
    assert not np.array_equal(a, b)
    s1 = generate(SamplerKind(SamplerMethod.SOBOL, seed=1, scrambling=True), 10, 2)
    s2 = generate(SamplerKind(SamplerMethod.SOBOL, seed=2, scrambling=True), 10, 2)
    assert not np.array_equal(s1, s2)


@pytest.mark.parametrize("m", [1, 3, 6, 8])
def test_sobol_dyadic_balance(m):
    """Every 2^m-point unscrambled prefix puts one point per dyadic interval
    in every coordinate."""
    n = 2**m
    pts = generate(SOBOL, n, 4)
    for col in range(4):
        cells = np.floor(pts[:, col] * n).astype(int)
        assert sorted(cells.tolist()) == list(range(n))


def test_sobol_quality_beats_random_star_l2():
    sobol = generate(SOBOL, 64, 2)
    rand_scores = [
        star_l2(generate(SamplerKind(SamplerMethod.RANDOM, seed=s), 64, 2))
        for s in range(50)
    ]
    assert star_l2(sobol) < np.mean(rand_scores)


def test_sobol_capacity_error():
    with pytest.raises(ValueError, match="direction numbers"):
        generate(SOBOL, 2, SOBOL_MAX_DIM + 1)


def test_generate_validation():
    with pytest.raises(ValueError):
        generate(SOBOL, 0, 2)
    with pytest.raises(ValueError):
        generate(SOBOL, 4, 0)


def test_design_pair_structure():
    pair = build_design_pair(RANDOM, 10, 3)
    assert pair.jansen.shape == (40, 3)
    assert pair.discrepancy.shape == (40, 3)
    a = pair.jansen[:10]
    for k in range(3):
        block = pair.jansen[10 * (k + 1) : 10 * (k + 2)]
        same = [c for c in range(3) if c != k]
        assert np.array_equal(block[:, same], a[:, same])
        assert not np.array_equal(block[:, k], a[:, k])


def test_design_pair_determinism():
    a = build_design_pair(SamplerKind(SamplerMethod.RANDOM, seed=5), 5, 2)
    b = build_design_pair(SamplerKind(SamplerMethod.RANDOM, seed=5), 5, 2)
    assert np.array_equal(a.jansen, b.jansen)
    assert np.array_equal(a.discrepancy, b.discrepancy)


def test_design_pair_independent_blocks():
    pair = build_design_pair(SamplerKind(SamplerMethod.SOBOL, seed=3), 8, 4)
    assert pair.discrepancy.shape == (40, 4)
    assert not np.array_equal(pair.discrepancy, pair.jansen)


def test_design_pair_validation():
    with pytest.raises(ValueError):
        build_design_pair(RANDOM, 1, 3)
    with pytest.raises(ValueError):
        DesignPair(np.zeros((4, 2)), np.zeros((6, 2)), n_base=2, dim=2)


def test_csv_round_trip(tmp_path):
    pts = generate(SOBOL_SCRAMBLED, 12, 3)
    path = tmp_path / "pts.csv"
    save_points_csv(path, pts)
    back = load_points_csv(path)
    assert np.array_equal(back, pts)
    save_points_csv(tmp_path / "again.csv", pts)
    assert (tmp_path / "again.csv").read_bytes() == path.read_bytes()
