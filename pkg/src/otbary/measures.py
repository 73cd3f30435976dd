"""Discrete probability measures, ensembles, sampling and JSON round-trips.

A :class:`DiscreteMeasure` is a weighted atom list over a ground space.
Weights live on the probability simplex: a sum within 1e-9 of 1 is accepted
at construction and renormalized to machine precision; anything further off
is rejected.  Atoms may repeat; :func:`merge_atoms` produces the canonical
sorted, duplicate-free form used by equality checks and by the exact solvers.

All randomness uses numpy's PCG64 generator, so results are reproducible
from the integer seed alone.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatch,
    NegativeWeight,
    WeightSumOutOfTolerance,
)
from .spaces import Euclidean, MetricMatrix, Space, as_atoms, as_point

WEIGHT_SUM_TOL = 1e-9
MERGE_TOL = 1e-12


def _simplex_weights(weights, count: int, what: str) -> np.ndarray:
    w = np.asarray(weights, dtype=float).ravel()
    if w.shape[0] != count:
        raise DimensionMismatch(f"{what}: {w.shape[0]} weights for {count} items")
    if w.size == 0:
        raise DimensionMismatch(f"{what}: empty weight vector")
    if np.any(w < -1e-15):
        raise NegativeWeight(f"{what}: negative weight {w.min():.3e}")
    w = np.clip(w, 0.0, None)
    total = w.sum()
    if abs(total - 1.0) > WEIGHT_SUM_TOL:
        raise WeightSumOutOfTolerance(
            f"{what}: weights sum to {total!r}, off by more than {WEIGHT_SUM_TOL}"
        )
    # renormalize only when off by more than 1e-12 so validation is a
    # bit-level fixed point after one pass
    if abs(total - 1.0) > 1e-12:
        w = w / total
    return w


@dataclass(frozen=True)
class DiscreteMeasure:
    """Finitely supported probability measure on a ground space."""

    space: Space
    atoms: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        atoms = as_atoms(self.space, self.atoms)
        weights = _simplex_weights(self.weights, atoms.shape[0], "measure weights")
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "weights", weights)

    @property
    def n_atoms(self) -> int:
        return self.atoms.shape[0]


def validate_measure(m: DiscreteMeasure, space: Space) -> DiscreteMeasure:
    """Re-validate ``m`` against ``space``; weights come back renormalized."""
    if m.space != space:
        raise DimensionMismatch("measure was built over a different space")
    return DiscreteMeasure(space, m.atoms, m.weights)


def merge_atoms(m: DiscreteMeasure, tol: float = MERGE_TOL) -> DiscreteMeasure:
    """Canonical form: atoms sorted, duplicates within ``tol`` merged,
    zero-weight atoms dropped."""
    if isinstance(m.space, MetricMatrix):
        labels = np.unique(m.atoms)
        w = np.zeros(labels.shape[0])
        for k, lab in enumerate(labels):
            w[k] = m.weights[m.atoms == lab].sum()
        keep = w > 0
        return DiscreteMeasure(m.space, labels[keep], w[keep])
    order = np.lexsort(m.atoms.T[::-1])
    atoms = m.atoms[order]
    weights = m.weights[order]
    out_atoms: list[np.ndarray] = []
    out_w: list[float] = []
    for a, w in zip(atoms, weights):
        if out_atoms and np.max(np.abs(a - out_atoms[-1])) <= tol:
            out_w[-1] += w
        else:
            out_atoms.append(a)
            out_w.append(w)
    atoms = np.array(out_atoms)
    weights = np.array(out_w)
    keep = weights > 0
    return DiscreteMeasure(m.space, atoms[keep], weights[keep])


def measures_equal(a: DiscreteMeasure, b: DiscreteMeasure, tol: float = 1e-9) -> bool:
    """Equality up to atom order, duplicate atoms and ``tol``."""
    if a.space != b.space:
        return False
    ca, cb = merge_atoms(a), merge_atoms(b)
    if ca.n_atoms != cb.n_atoms:
        return False
    if isinstance(a.space, MetricMatrix):
        return bool(
            np.array_equal(ca.atoms, cb.atoms)
            and np.max(np.abs(ca.weights - cb.weights)) <= tol
        )
    return bool(
        np.max(np.abs(ca.atoms - cb.atoms)) <= tol
        and np.max(np.abs(ca.weights - cb.weights)) <= tol
    )


def pushforward(m: DiscreteMeasure, mapping) -> DiscreteMeasure:
    """Image measure: atoms mapped pointwise, weights untouched.

    ``mapping`` takes the (n, d) atom array and returns an array of the
    same shape (Euclidean spaces only).
    """
    if isinstance(m.space, MetricMatrix):
        raise DimensionMismatch("pushforward maps act on Euclidean atoms")
    new_atoms = np.asarray(mapping(m.atoms), dtype=float)
    if new_atoms.shape != m.atoms.shape:
        raise DimensionMismatch(
            f"map changed atom array shape {m.atoms.shape} -> {new_atoms.shape}"
        )
    return DiscreteMeasure(m.space, new_atoms, m.weights.copy())


def sample_empirical(m: DiscreteMeasure, n: int, seed: int) -> DiscreteMeasure:
    """Empirical measure of n i.i.d. draws from m, each atom carrying 1/n.

    Draws are multinomial over the atoms; deterministic for a given seed.
    Duplicates are kept (merge with :func:`merge_atoms` when needed).
    """
    if n < 1:
        raise DimensionMismatch(f"sample size must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    idx = rng.choice(m.n_atoms, size=n, p=m.weights)
    return DiscreteMeasure(m.space, m.atoms[idx], np.full(n, 1.0 / n))


def pth_moment(m: DiscreteMeasure, x0, p: float) -> float:
    """Sum_i w_i d(atom_i, x0)^p."""
    x0 = as_point(m.space, x0)
    if isinstance(m.space, MetricMatrix):
        d = m.space.dist[m.atoms, x0]
    else:
        d = np.linalg.norm(m.atoms - x0[None, :], axis=1)
    return float(np.dot(m.weights, d**p))


@dataclass(frozen=True)
class MeasureEnsemble:
    """Finitely supported law on measure space: sum_j lambda_j delta_{mu_j}."""

    measures: list[DiscreteMeasure] = field(default_factory=list)
    lam: np.ndarray = None

    def __post_init__(self):
        if not self.measures:
            raise DimensionMismatch("ensemble needs at least one measure")
        lam = _simplex_weights(self.lam, len(self.measures), "ensemble lambda")
        space = self.measures[0].space
        for m in self.measures[1:]:
            if m.space != space:
                raise DimensionMismatch("ensemble measures live on different spaces")
        object.__setattr__(self, "lam", lam)

    @property
    def space(self) -> Space:
        return self.measures[0].space

    @property
    def size(self) -> int:
        return len(self.measures)


# ---------------------------------------------------------------------------
# JSON formats
# ---------------------------------------------------------------------------

def space_to_dict(space: Space) -> dict:
    if isinstance(space, Euclidean):
        return {"type": "euclidean", "dim": space.dim}
    return {
        "type": "metric_matrix",
        "dist": space.dist.tolist(),
        "labels": space.labels,
    }


def space_from_dict(d: dict) -> Space:
    kind = d.get("type")
    if kind == "euclidean":
        return Euclidean(int(d["dim"]))
    if kind == "metric_matrix":
        return MetricMatrix(d["dist"], d.get("labels"))
    raise DimensionMismatch(f"unknown space type {kind!r}")


def measure_to_dict(m: DiscreteMeasure) -> dict:
    return {
        "space": space_to_dict(m.space),
        "atoms": m.atoms.tolist(),
        "weights": m.weights.tolist(),
    }


def measure_from_dict(d: dict) -> DiscreteMeasure:
    space = space_from_dict(d["space"])
    return DiscreteMeasure(space, d["atoms"], d["weights"])


def ensemble_to_dict(e: MeasureEnsemble) -> dict:
    return {
        "lambda": e.lam.tolist(),
        "measures": [measure_to_dict(m) for m in e.measures],
    }


def ensemble_from_dict(d: dict) -> MeasureEnsemble:
    return MeasureEnsemble([measure_from_dict(m) for m in d["measures"]], d["lambda"])


def save_measure(m: DiscreteMeasure, path) -> None:
    with open(path, "w") as fh:
        json.dump(measure_to_dict(m), fh)
        fh.write("\n")


def load_measure(path) -> DiscreteMeasure:
    with open(path) as fh:
        return measure_from_dict(json.load(fh))


def save_ensemble(e: MeasureEnsemble, path) -> None:
    with open(path, "w") as fh:
        json.dump(ensemble_to_dict(e), fh)
        fh.write("\n")


def load_ensemble(path) -> MeasureEnsemble:
    with open(path) as fh:
        return ensemble_from_dict(json.load(fh))
