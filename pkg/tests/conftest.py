import numpy as np
import pytest

from otbary import DiscreteMeasure, Euclidean, MeasureEnsemble


def random_measure(rng, space, max_atoms=10, scale=2.0, uniform=False):
    n = int(rng.integers(1, max_atoms + 1))
    atoms = scale * rng.normal(size=(n, space.dim))
    if uniform:
        weights = np.full(n, 1.0 / n)
    else:
        weights = rng.random(n) + 0.05
        weights /= weights.sum()
    return DiscreteMeasure(space, atoms, weights)


def random_ensemble(rng, space, n_measures, max_atoms=4, uniform_lam=False, **kw):
    measures = [random_measure(rng, space, max_atoms=max_atoms, **kw) for _ in range(n_measures)]
    if uniform_lam:
        lam = np.full(n_measures, 1.0 / n_measures)
    else:
        lam = rng.random(n_measures) + 0.1
        lam /= lam.sum()
    return MeasureEnsemble(measures, lam)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def line():
    return Euclidean(1)


@pytest.fixture
def plane():
    return Euclidean(2)
