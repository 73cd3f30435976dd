"""Exact multi-marginal optimal transport and the pushforward barycenter.

The production path (:func:`solve_multimarginal`) flattens the product
support into one equality-form LP (one marginal row per atom; the redundant
rows are dropped automatically during phase one) and solves it with the
in-house simplex.  :func:`brute_force_multimarginal` is the independent
oracle: it assembles the same LP entry by entry and hands it to
``scipy.optimize.linprog`` (HiGHS), sharing no solver code with the
production path.

The cost of an index tuple is the infimum over the ground space of the
weighted d^p sum, i.e. the Fréchet-mean objective of the tuple's atoms; the
minimizer itself is the barycenter-map image used by
:func:`pushforward_barycenter`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.optimize

from .errors import DimensionMismatch, InfeasibleWeights, ProductSizeExceeded
from .frechet import frechet_mean
from .measures import DiscreteMeasure, MeasureEnsemble, merge_atoms
from .simplex import solve_lp
from .spaces import Euclidean, MetricMatrix, Space

DEFAULT_PRODUCT_CAP = 10**6
BRUTE_FORCE_CAP = 10**4
MARGINAL_TOL = 1e-9


@dataclass
class MultiCoupling:
    """Sparse J-way coupling: (index tuple, mass) entries plus objective."""

    entries: list[tuple[tuple[int, ...], float]]
    objective: float
    shape: tuple[int, ...]

    def marginals(self) -> list[np.ndarray]:
        out = [np.zeros(n) for n in self.shape]
        for idx, mass in self.entries:
            for j, i in enumerate(idx):
                out[j][i] += mass
        return out


def mm_cost(space: Space, p: float, lam, atoms: tuple) -> tuple[float, np.ndarray | int]:
    """Cost inf_x sum_j lam_j d(atom_j, x)^p and its minimizing point."""
    lam = np.asarray(lam, dtype=float).ravel()
    if len(atoms) != lam.shape[0]:
        raise DimensionMismatch(f"{len(atoms)} atoms with {lam.shape[0]} weights")
    if isinstance(space, MetricMatrix):
        pts = list(atoms)
    else:
        pts = np.array([np.atleast_1d(np.asarray(a, dtype=float)) for a in atoms])
    res = frechet_mean(space, p, pts, lam)
    return res.objective, res.point


def _merged(ens: MeasureEnsemble) -> list[DiscreteMeasure]:
    return [merge_atoms(m) for m in ens.measures]


def _index_grid(shape: tuple[int, ...]) -> np.ndarray:
    # (N, J) integer tuples in C order.
    return np.indices(shape).reshape(len(shape), -1).T


def _cost_vector(space, p, lam, measures, idx) -> np.ndarray:
    if isinstance(space, Euclidean) and p == 2:
        # sum_j lam_j |x_j - mean|^2 = sum_j lam_j |x_j|^2 - |mean|^2
        mean = np.zeros((idx.shape[0], space.dim))
        sq = np.zeros(idx.shape[0])
        for j, m in enumerate(measures):
            xj = m.atoms[idx[:, j]]
            mean += lam[j] * xj
            sq += lam[j] * np.einsum("ik,ik->i", xj, xj)
        return np.clip(sq - np.einsum("ik,ik->i", mean, mean), 0.0, None)
    if isinstance(space, MetricMatrix):
        # Exhaustive candidate minimization, vectorized over the grid.
        objs = np.zeros((space.n_points, idx.shape[0]))
        for j, m in enumerate(measures):
            objs += lam[j] * space.dist[:, m.atoms[idx[:, j]]] ** p
        return objs.min(axis=0)
    costs = np.empty(idx.shape[0])
    for k, row in enumerate(idx):
        atoms = tuple(measures[j].atoms[i] for j, i in enumerate(row))
        costs[k], _ = mm_cost(space, p, lam, atoms)
    return costs


def _marginal_system(measures, idx):
    shape = tuple(m.n_atoms for m in measures)
    total_rows = sum(shape)
    N = idx.shape[0]
    A = np.zeros((total_rows, N))
    b = np.concatenate([m.weights for m in measures])
    offset = 0
    cols = np.arange(N)
    for j, n_j in enumerate(shape):
        A[offset + idx[:, j], cols] = 1.0
        offset += n_j
    return A, b


def solve_multimarginal(
    space: Space,
    p: float,
    ens: MeasureEnsemble,
    *,
    max_product_size: int = DEFAULT_PRODUCT_CAP,
) -> MultiCoupling:
    """Optimal vertex of the multi-marginal transportation polytope.

    Raises:
        ProductSizeExceeded: product support larger than ``max_product_size``.
    """
    if ens.space != space:
        raise DimensionMismatch("ensemble does not live on the given space")
    measures = _merged(ens)
    shape = tuple(m.n_atoms for m in measures)
    if np.prod([float(n) for n in shape]) > max_product_size:
        raise ProductSizeExceeded(
            f"product support {shape} exceeds cap {max_product_size}"
        )
    if abs(ens.lam.sum() - 1.0) > MARGINAL_TOL:
        raise InfeasibleWeights("ensemble weights are not a probability vector")
    idx = _index_grid(shape)
    costs = _cost_vector(space, p, ens.lam, measures, idx)
    if len(measures) == 1:
        entries = [((i,), float(w)) for i, w in enumerate(measures[0].weights)]
        return MultiCoupling(entries=entries, objective=0.0, shape=shape)
    A, b = _marginal_system(measures, idx)
    res = solve_lp(costs, A, b)
    entries = [
        (tuple(int(i) for i in idx[k]), float(res.x[k]))
        for k in np.flatnonzero(res.x > 1e-15)
    ]
    return MultiCoupling(entries=entries, objective=res.objective, shape=shape)


def pushforward_barycenter(
    space: Space, p: float, ens: MeasureEnsemble, gamma: MultiCoupling
) -> DiscreteMeasure:
    """Image of the coupling under the barycenter map: one atom per
    positive-mass entry, located at the tuple's Fréchet mean."""
    measures = _merged(ens)
    if gamma.shape != tuple(m.n_atoms for m in measures):
        raise DimensionMismatch("coupling shape does not match the ensemble")
    atoms = []
    masses = []
    for idx, mass in gamma.entries:
        if mass <= 0:
            continue
        tup = tuple(measures[j].atoms[i] for j, i in enumerate(idx))
        if isinstance(space, Euclidean) and p == 2:
            point = ens.lam @ np.asarray(tup, dtype=float).reshape(len(idx), -1)
        else:
            _, point = mm_cost(space, p, ens.lam, tup)
        atoms.append(point)
        masses.append(mass)
    masses = np.asarray(masses)
    if isinstance(space, MetricMatrix):
        atoms = np.asarray(atoms, dtype=np.intp)
    else:
        atoms = np.asarray(atoms, dtype=float)
    return merge_atoms(DiscreteMeasure(space, atoms, masses / masses.sum()))


def brute_force_multimarginal(
    space: Space,
    p: float,
    ens: MeasureEnsemble,
    *,
    max_product_size: int = BRUTE_FORCE_CAP,
) -> MultiCoupling:
    """Independent oracle: same LP, assembled entry by entry and solved by
    scipy's HiGHS backend.  No solver code shared with
    :func:`solve_multimarginal`."""
    measures = [merge_atoms(m) for m in ens.measures]
    shape = tuple(m.n_atoms for m in measures)
    if np.prod([float(n) for n in shape]) > max_product_size:
        raise ProductSizeExceeded(
            f"product support {shape} exceeds brute-force cap {max_product_size}"
        )
    tuples = list(np.ndindex(*shape))
    costs = []
    for tup in tuples:
        atoms = tuple(measures[j].atoms[i] for j, i in enumerate(tup))
        value, _ = mm_cost(space, p, ens.lam, atoms)
        costs.append(value)
    rows = sum(shape)
    A_eq = np.zeros((rows, len(tuples)))
    b_eq = []
    r = 0
    for j, m in enumerate(measures):
        for i in range(m.n_atoms):
            for k, tup in enumerate(tuples):
                if tup[j] == i:
                    A_eq[r, k] = 1.0
            b_eq.append(m.weights[i])
            r += 1
    res = scipy.optimize.linprog(
        np.asarray(costs), A_eq=A_eq, b_eq=np.asarray(b_eq), method="highs"
    )
    if not res.success:
        raise InfeasibleWeights(f"oracle LP failed: {res.message}")
    entries = [
        (tuple(int(i) for i in tuples[k]), float(res.x[k]))
        for k in np.flatnonzero(res.x > 1e-15)
    ]
    return MultiCoupling(entries=entries, objective=float(res.fun), shape=shape)
