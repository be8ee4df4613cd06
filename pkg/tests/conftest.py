import numpy as np
import pytest

from tprabi import ModelParams, Sector


@pytest.fixture
def params_fig3() -> ModelParams:
    """The generic reference point kappa=1/2, mu=1/3 (even sector)."""
    return ModelParams(kappa=0.5, mu=1.0 / 3.0)


@pytest.fixture
def params_fig4() -> ModelParams:
    """kappa=1/2, mu=1: carries an exact quasi-degenerate pair at chi=2."""
    return ModelParams(kappa=0.5, mu=1.0)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)
