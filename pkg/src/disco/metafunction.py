"""Seeded synthetic test models built from a catalogue of univariate shapes.

A model is assembled by assigning each input one of 13 basis functions on
[0, 1] (linear through periodic, step, bump, and a pure no-effect), then
adding second- and third-order interaction terms between the assigned
basis values.  Coefficients are standard normal draws thinned by a fair
coin, which concentrates influence on a minority of inputs, mirroring the
few-factors-matter structure typical of real models.

Everything is frozen after construction: evaluation never mutates state,
and the same (dimension, seed) pair always rebuilds the identical model.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

__all__ = [
    "BASIS_FUNCTIONS",
    "MetaFunction",
    "build_metafunction",
    "evaluate",
    "evaluate_matrix",
    "PAIR_FRACTION",
    "TRIPLE_FRACTION",
]

#: Number of pairwise interaction terms as a fraction of the dimension.
PAIR_FRACTION = 0.5
#: Number of three-way interaction terms as a fraction of the dimension.
TRIPLE_FRACTION = 0.2


def _inverse_offset(x):
    # 1/(x + 0.1) rescaled so the range on [0, 1] is exactly [0, 1].
    lo = 1.0 / 1.1
    return (1.0 / (x + 0.1) - lo) / (10.0 - lo)


def _damped_sine(x):
    # sin(2*pi*x) / (2*pi*x) with the x -> 0 limit equal to 1.
    return np.sinc(2.0 * np.asarray(x, dtype=np.float64))


#: The swappable catalogue: id -> (name, vectorized function on [0, 1]).
BASIS_FUNCTIONS: dict[int, tuple[str, object]] = {
    1: ("linear", lambda x: np.asarray(x, dtype=np.float64) + 0.0),
    2: ("quadratic", lambda x: x**2),
    3: ("cubic", lambda x: x**3),
    4: ("quartic", lambda x: x**4),
    5: ("exponential", lambda x: np.expm1(x) / (np.e - 1.0)),
    6: ("inverse_offset", _inverse_offset),
    7: ("periodic", lambda x: np.sin(2.0 * np.pi * x)),
    8: ("damped_sine", _damped_sine),
    9: ("cosine", lambda x: np.cos(2.0 * np.pi * x)),
    10: ("step", lambda x: (np.asarray(x) > 0.5).astype(np.float64)),
    11: ("bump", lambda x: 4.0 * (np.asarray(x) - 0.5) ** 2),
    12: ("logarithmic", lambda x: np.log1p(9.0 * np.asarray(x)) / np.log(10.0)),
    13: ("no_effect", lambda x: np.zeros_like(np.asarray(x, dtype=np.float64))),
}


def _round_half_up(v: float) -> int:
    return int(v + 0.5)


@dataclass(frozen=True)
class MetaFunction:
    """A frozen model: per-input basis ids, first-order coefficients, and
    sparse pair / triple interaction terms (0-based, strictly increasing
    index tuples)."""

    dim: int
    assignment: tuple[int, ...]
    alpha: tuple[float, ...]
    pairs: tuple[tuple[int, int, float], ...]
    triples: tuple[tuple[int, int, int, float], ...]
    epsilon_seed: int
    name: str = field(default="metafunction", compare=False)

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be >= 1")
        if len(self.assignment) != self.dim or len(self.alpha) != self.dim:
            raise ValueError("assignment/alpha length must equal dim")
        for a in self.assignment:
            if not 1 <= a <= len(BASIS_FUNCTIONS):
                raise ValueError(f"basis id {a} outside the catalogue")
        for i, j, _ in self.pairs:
            if not 0 <= i < j < self.dim:
                raise ValueError(f"bad pair indices ({i}, {j})")
        for i, j, k, _ in self.triples:
            if not 0 <= i < j < k < self.dim:
                raise ValueError(f"bad triple indices ({i}, {j}, {k})")

    # -- serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "epsilon_seed": self.epsilon_seed,
            "assignment": list(self.assignment),
            "alpha": list(self.alpha),
            "pairs": [[i, j, b] for i, j, b in self.pairs],
            "triples": [[i, j, k, g] for i, j, k, g in self.triples],
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, doc: dict) -> "MetaFunction":
        return cls(
            dim=int(doc["dim"]),
            assignment=tuple(int(a) for a in doc["assignment"]),
            alpha=tuple(float(a) for a in doc["alpha"]),
            pairs=tuple((int(i), int(j), float(b)) for i, j, b in doc["pairs"]),
            triples=tuple(
                (int(i), int(j), int(k), float(g)) for i, j, k, g in doc["triples"]
            ),
            epsilon_seed=int(doc["epsilon_seed"]),
        )

    @classmethod
    def from_json(cls, text: str) -> "MetaFunction":
        return cls.from_dict(json.loads(text))


def build_metafunction(d: int, epsilon_seed: int) -> MetaFunction:
    """Draw a model of dimension d, fully determined by (d, epsilon_seed).

    Basis ids are uniform over the catalogue.  The number of pair terms is
    round(0.5 * d) and of triple terms round(0.2 * d) (half-up rounding),
    each capped by the number of distinct index tuples and sampled without
    replacement.  Coefficients are standard normal times a Bernoulli(0.5)
    mask, drawn in a fixed order: assignment, pairs, triples, then the
    alpha / beta / gamma blocks.
    """
    if d < 1:
        raise ValueError("dimension must be >= 1")
    rng = np.random.default_rng(np.random.SeedSequence((int(epsilon_seed), int(d))))
    assignment = tuple(int(a) for a in rng.integers(1, len(BASIS_FUNCTIONS) + 1, size=d))

    all_pairs = list(combinations(range(d), 2))
    all_triples = list(combinations(range(d), 3))
    n_pairs = min(_round_half_up(PAIR_FRACTION * d), len(all_pairs))
    n_triples = min(_round_half_up(TRIPLE_FRACTION * d), len(all_triples))
    pair_idx = sorted(rng.choice(len(all_pairs), size=n_pairs, replace=False)) if n_pairs else []
    triple_idx = (
        sorted(rng.choice(len(all_triples), size=n_triples, replace=False)) if n_triples else []
    )

    alpha = rng.standard_normal(d) * rng.integers(0, 2, size=d)
    beta = rng.standard_normal(n_pairs) * rng.integers(0, 2, size=n_pairs)
    gamma = rng.standard_normal(n_triples) * rng.integers(0, 2, size=n_triples)

    return MetaFunction(
        dim=d,
        assignment=assignment,
        alpha=tuple(float(a) for a in alpha),
        pairs=tuple(
            (all_pairs[p][0], all_pairs[p][1], float(b)) for p, b in zip(pair_idx, beta)
        ),
        triples=tuple(
            (all_triples[t][0], all_triples[t][1], all_triples[t][2], float(g))
            for t, g in zip(triple_idx, gamma)
        ),
        epsilon_seed=int(epsilon_seed),
    )


def evaluate_matrix(f: MetaFunction, m) -> np.ndarray:
    """Evaluate the model on every row of an (N, dim) matrix."""
    x = np.asarray(m, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != f.dim:
        raise ValueError(
            f"expected an (N, {f.dim}) matrix, got shape {np.shape(m)}"
        )
    n = x.shape[0]
    if n == 0:
        return np.zeros(0)
    basis = np.empty_like(x)
    for col, a in enumerate(f.assignment):
        basis[:, col] = BASIS_FUNCTIONS[a][1](x[:, col])
    y = basis @ np.asarray(f.alpha)
    if f.pairs:
        ii = np.array([p[0] for p in f.pairs])
        jj = np.array([p[1] for p in f.pairs])
        bb = np.array([p[2] for p in f.pairs])
        y += (basis[:, ii] * basis[:, jj]) @ bb
    if f.triples:
        ii = np.array([t[0] for t in f.triples])
        jj = np.array([t[1] for t in f.triples])
        kk = np.array([t[2] for t in f.triples])
        gg = np.array([t[3] for t in f.triples])
        y += (basis[:, ii] * basis[:, jj] * basis[:, kk]) @ gg
    return y


def evaluate(f: MetaFunction, x) -> float:
    """Evaluate the model at a single point of length dim."""
    v = np.asarray(x, dtype=np.float64)
    if v.ndim != 1 or v.size != f.dim:
        raise ValueError(f"expected a vector of length {f.dim}, got shape {v.shape}")
    if not np.isfinite(v).all():
        raise ValueError("input point must be finite")
    return float(evaluate_matrix(f, v[None, :])[0])
