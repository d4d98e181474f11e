"""Shared fixtures and builders for the test suite."""

import numpy as np
import pytest

from chargebit import DotSystem, TunnelRates
from chargebit.kernels import Delta, Gaussian
from chargebit.leads import LeadParams


def make_system(kt_source, kt_drain, bias, gamma_source, kernel=Delta()):
    """Dot system with the drain pinned at zero chemical potential.

    The tunnel rates are entered directly as the coupling ratios, so the
    total rate is exactly 1 (handy for dynamics tests where times are in
    units of 1/Gamma_tot).
    """
    return DotSystem(LeadParams(kt_source, bias), LeadParams(kt_drain, 0.0),
                     TunnelRates(gamma_source, 1.0 - gamma_source), kernel)


def random_system(rng, kernel=None):
    """Log-uniform sample over three decades of every energy scale."""
    kt_s, kt_d = 10.0 ** rng.uniform(-3, 0, 2)
    bias = 10.0 ** rng.uniform(-1, 2)
    gamma_s = rng.uniform(0.05, 0.95)
    if kernel is None:
        kernel = Gaussian(10.0 ** rng.uniform(-1, 2))
    return make_system(kt_s, kt_d, bias, gamma_s, kernel)


@pytest.fixture
def rng():
    return np.random.default_rng(20260823)
