"""Barycenters and variance of finitely supported measure ensembles.

Two routes: the exact multi-marginal construction (barycenter = pushforward
of the optimal multi-coupling under the Fréchet map) and a fixed-support
fallback that optimizes weights on a given grid as one joint LP.  The LP's
shared barycenter weights are eliminated by substitution (w = row sums of
the first plan), so a single exact solve covers all J couplings at once.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, NumericalFailure
from .measures import DiscreteMeasure, MeasureEnsemble, merge_atoms
from .multimarginal import (
    DEFAULT_PRODUCT_CAP,
    pushforward_barycenter,
    solve_multimarginal,
)
from .simplex import solve_lp
from .spaces import MetricMatrix, Space, as_atoms, pairwise_distances
from .transport import wasserstein


@dataclass
class BarycenterResult:
    measure: DiscreteMeasure
    objective: float
    method: str
    per_measure_costs: list[float] = field(default_factory=list)


def ensemble_objective(
    space: Space, p: float, ens: MeasureEnsemble, nu: DiscreteMeasure
) -> float:
    """sum_j lam_j W_p^p(nu, mu_j)."""
    total = 0.0
    for lam_j, mu_j in zip(ens.lam, ens.measures):
        w, _ = wasserstein(space, p, nu, mu_j)
        total += lam_j * w**p
    return total


def _per_measure(space, p, ens, nu) -> list[float]:
    return [wasserstein(space, p, nu, mu_j)[0] ** p for mu_j in ens.measures]


def barycenter_finite(
    space: Space,
    p: float,
    ens: MeasureEnsemble,
    *,
    max_product_size: int = DEFAULT_PRODUCT_CAP,
) -> BarycenterResult:
    """Exact barycenter via the multi-marginal coupling pushforward."""
    gamma = solve_multimarginal(space, p, ens, max_product_size=max_product_size)
    nu = pushforward_barycenter(space, p, ens, gamma)
    costs = _per_measure(space, p, ens, nu)
    return BarycenterResult(
        measure=nu,
        objective=float(np.dot(ens.lam, costs)),
        method="multimarginal",
        per_measure_costs=costs,
    )


def barycenter_fixed_support(
    space: Space, p: float, ens: MeasureEnsemble, support
) -> BarycenterResult:
    """Best measure supported on ``support``: one joint LP over J coupled
    transport plans sharing their first marginal."""
    support = as_atoms(space, support)
    S = support.shape[0]
    if S == 0:
        raise DimensionMismatch("support must be nonempty")
    measures = [merge_atoms(m) for m in ens.measures]
    J = len(measures)
    sizes = [m.n_atoms for m in measures]
    blocks = np.concatenate([[0], np.cumsum([S * n for n in sizes])])
    n_vars = int(blocks[-1])

    c = np.zeros(n_vars)
    for j, m in enumerate(measures):
        Cj = pairwise_distances(space, support, m.atoms) ** p
        c[blocks[j] : blocks[j + 1]] = ens.lam[j] * Cj.ravel()

    # Rows: column sums of each plan fixed to the target weights, plus
    # row-sum agreement of every plan with plan 0 (eliminated shared w).
    rows = sum(sizes) + S * (J - 1)
    A = np.zeros((rows, n_vars))
    b = np.zeros(rows)
    r = 0
    for j, m in enumerate(measures):
        for i in range(m.n_atoms):
            cols = blocks[j] + np.arange(S) * m.n_atoms + i
            A[r, cols] = 1.0
            b[r] = m.weights[i]
            r += 1
    for j in range(1, J):
        for s in range(S):
            A[r, blocks[0] + s * sizes[0] : blocks[0] + (s + 1) * sizes[0]] = 1.0
            A[r, blocks[j] + s * sizes[j] : blocks[j] + (s + 1) * sizes[j]] -= 1.0
            b[r] = 0.0
            r += 1
    res = solve_lp(c, A, b)
    pi0 = res.x[blocks[0] : blocks[1]].reshape(S, sizes[0])
    w = np.clip(pi0.sum(axis=1), 0.0, None)
    if w.sum() <= 0:
        raise NumericalFailure("fixed-support LP returned zero total mass")
    nu = merge_atoms(DiscreteMeasure(space, support, w / w.sum()))
    costs = _per_measure(space, p, ens, nu)
    return BarycenterResult(
        measure=nu,
        objective=float(np.dot(ens.lam, costs)),
        method="fixed-support",
        per_measure_costs=costs,
    )


def variance(
    space: Space,
    p: float,
    ens: MeasureEnsemble,
    *,
    max_product_size: int = DEFAULT_PRODUCT_CAP,
) -> float:
    """Spread of the ensemble around its barycenter:
    inf_nu sum_j lam_j W_p^p(nu, mu_j)."""
    return barycenter_finite(
        space, p, ens, max_product_size=max_product_size
    ).objective


def quantize(m: DiscreteMeasure, k: int, seed: int = 0) -> DiscreteMeasure:
    """Support reduction to at most k atoms: greedy farthest-first center
    selection over the atoms, mass assigned to the nearest center.

    Centers are nested in k, so the quantization error is nonincreasing.
    Selection is deterministic; ``seed`` is accepted for interface stability
    but unused.
    """
    if k < 1:
        raise DimensionMismatch(f"k must be >= 1, got {k}")
    m = merge_atoms(m)
    if k >= m.n_atoms:
        return m
    D = pairwise_distances(m.space, m.atoms, m.atoms)
    start = int(np.argmax(m.weights))
    centers = [start]
    nearest = D[:, start].copy()
    while len(centers) < k:
        nxt = int(np.argmax(nearest))
        centers.append(nxt)
        nearest = np.minimum(nearest, D[:, nxt])
    centers = sorted(centers)
    assign = np.argmin(D[:, centers], axis=1)
    weights = np.zeros(len(centers))
    for atom_idx, c_idx in enumerate(assign):
        weights[c_idx] += m.weights[atom_idx]
    keep = weights > 0
    atoms = m.atoms[np.asarray(centers)][keep]
    if isinstance(m.space, MetricMatrix):
        atoms = atoms.astype(np.intp)
    return merge_atoms(DiscreteMeasure(m.space, atoms, weights[keep]))
