import numpy as np
import pytest

from pendulon.params import ChainParams, ConfiningPotential
from pendulon.perturbation import ExpansionParams


@pytest.fixture
def generic_chain():
    """A chain with every coupling switched on and no special symmetry."""
    return ChainParams(M=1.3, m=0.6, R=1.1, r=0.5, kappa_t=0.7, kappa_s=1.9,
                      g=0.9, delta=0.8)


@pytest.fixture
def exp_params():
    return ExpansionParams(A=1.0, Mhat=1.0, Khat=1.0, g=1.0, v0=0.3, v1=0.1,
                           r1=0.4, r2=0.1, m1=0.5, m2=0.2, k1=0.3, k2=0.1,
                           h_spec=ConfiningPotential(family="quadratic",
                                                     c2=2.0))


@pytest.fixture
def exp_params_wide():
    # A != 1 exercises the (1 - A^2) k1 terms that vanish in the default
    return ExpansionParams(A=1.3, Mhat=0.9, Khat=1.1, g=1.0, v0=0.25,
                           v1=0.05, r1=0.3, r2=0.05, m1=0.4, m2=0.1,
                           k1=0.2, k2=0.05,
                           h_spec=ConfiningPotential(family="quadratic",
                                                     c2=1.5))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
