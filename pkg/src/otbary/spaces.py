"""Ground spaces: Euclidean R^d and explicit finite metric matrices.

Points in a :class:`Euclidean` space are real coordinate vectors; points in a
:class:`MetricMatrix` space are integer labels into the matrix.  A metric
matrix is validated at construction (zero diagonal, symmetry, triangle
inequality over every triple).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, UnsupportedSpace

TRIANGLE_TOL = 1e-9


@dataclass(frozen=True)
class Euclidean:
    """d-dimensional Euclidean space."""

    dim: int

    def __post_init__(self):
        if self.dim < 1:
            raise DimensionMismatch(f"Euclidean dim must be >= 1, got {self.dim}")


class MetricMatrix:
    """Finite metric space given by an explicit distance matrix.

    Distances and barycenters are restricted to the listed points; no
    geodesic interpolation is available.
    """

    def __init__(self, dist, labels=None):
        dist = np.asarray(dist, dtype=float)
        if dist.ndim != 2 or dist.shape[0] != dist.shape[1]:
            raise DimensionMismatch(f"metric matrix must be square, got {dist.shape}")
        if not np.all(np.isfinite(dist)):
            raise DimensionMismatch("metric matrix has non-finite entries")
        if np.any(dist < 0):
            raise DimensionMismatch("metric matrix has negative entries")
        if np.any(np.abs(np.diag(dist)) > TRIANGLE_TOL):
            raise DimensionMismatch("metric matrix diagonal must be zero")
        if np.any(np.abs(dist - dist.T) > TRIANGLE_TOL):
            raise DimensionMismatch("metric matrix must be symmetric")
        # d(i,j) <= min_k d(i,k) + d(k,j), checked for every triple
        through = (dist[:, :, None] + dist[None, :, :]).min(axis=1)
        if np.any(dist > through + TRIANGLE_TOL):
            raise DimensionMismatch("metric matrix violates the triangle inequality")
        self.dist = dist
        self.labels = list(labels) if labels is not None else list(range(dist.shape[0]))
        if len(self.labels) != dist.shape[0]:
            raise DimensionMismatch("label count does not match matrix size")

    @property
    def n_points(self) -> int:
        return self.dist.shape[0]

    def __eq__(self, other):
        return (
            isinstance(other, MetricMatrix)
            and self.dist.shape == other.dist.shape
            and np.array_equal(self.dist, other.dist)
            and self.labels == other.labels
        )

    def __repr__(self):
        return f"MetricMatrix(n={self.n_points})"


Space = Euclidean | MetricMatrix


def as_point(space: Space, x) -> np.ndarray | int:
    """Coerce and validate a single point of ``space``."""
    if isinstance(space, Euclidean):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if x.ndim != 1 or x.shape[0] != space.dim:
            raise DimensionMismatch(
                f"point has shape {x.shape}, expected ({space.dim},)"
            )
        if not np.all(np.isfinite(x)):
            raise DimensionMismatch("point has non-finite coordinates")
        return x
    i = int(x)
    if not 0 <= i < space.n_points:
        raise DimensionMismatch(f"label {i} out of range [0, {space.n_points})")
    return i


def as_atoms(space: Space, atoms) -> np.ndarray:
    """Coerce an array of points: (n, d) floats or (n,) integer labels."""
    if isinstance(space, Euclidean):
        a = np.asarray(atoms, dtype=float)
        if a.ndim == 1:
            if space.dim != 1:
                raise DimensionMismatch("flat atom list only valid in dimension 1")
            a = a[:, None]
        if a.ndim != 2 or a.shape[1] != space.dim:
            raise DimensionMismatch(
                f"atoms have shape {a.shape}, expected (n, {space.dim})"
            )
        if not np.all(np.isfinite(a)):
            raise DimensionMismatch("atoms have non-finite coordinates")
        return a
    a = np.asarray(atoms)
    if a.ndim != 1:
        raise DimensionMismatch("metric-matrix atoms must be a flat label list")
    a = a.astype(np.intp)
    if a.size and (a.min() < 0 or a.max() >= space.n_points):
        raise DimensionMismatch("atom label out of range")
    return a


def distance(space: Space, a, b) -> float:
    """Ground distance d(a, b)."""
    if isinstance(space, Euclidean):
        a = as_point(space, a)
        b = as_point(space, b)
        return float(np.linalg.norm(a - b))
    return float(space.dist[as_point(space, a), as_point(space, b)])


def pairwise_distances(space: Space, xs, ys) -> np.ndarray:
    """Matrix of distances between two atom arrays."""
    xs = as_atoms(space, xs)
    ys = as_atoms(space, ys)
    if isinstance(space, Euclidean):
        diff = xs[:, None, :] - ys[None, :, :]
        return np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    return space.dist[np.ix_(xs, ys)]


def midpoint(space: Space, a, b) -> np.ndarray:
    """Euclidean mid-point (a + b) / 2.

    Raises:
        UnsupportedSpace: metric-matrix spaces expose no interpolation.
    """
    if not isinstance(space, Euclidean):
        raise UnsupportedSpace("midpoint requires a Euclidean space")
    return (as_point(space, a) + as_point(space, b)) / 2.0
