import os

import hypothesis
import numpy as np
import pytest

from setgrad.models.hull import HullSet
from setgrad.oracles import MaxAffineOracle, builtin

np.seterr(all="warn")

hypothesis.settings.register_profile("default", max_examples=100, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=5, deadline=None)
hypothesis.settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(autouse=True)
def _no_seed_override(monkeypatch):
    monkeypatch.delenv("SETGRAD_SEED", raising=False)


@pytest.fixture
def valley():
    return builtin("valley", alpha=0.01)


@pytest.fixture
def valley_hull():
    return HullSet.of((1.0, 0.01), (-1.0, 0.01))


@pytest.fixture
def skewed_hull():
    return HullSet.of((1.0, -1.0), (1.0, 1.0))


@pytest.fixture
def half_max_hull():
    return HullSet.of((1.0, 0.0), (0.0, 1.0))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def make_max_affine():
    """Factory for max-affine oracles with Gaussian slopes and offsets."""

    def factory(rng, dim=2, pieces=4):
        return MaxAffineOracle(rng.normal(size=(pieces, dim)), rng.normal(scale=0.5, size=pieces))

    return factory
