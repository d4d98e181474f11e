"""Lifetime-broadening kernels: delta (none), Gaussian and Lorentzian.

All kernels are symmetric about 0 with median exactly 0. The width parameter
carries the broadening energy hbar*Gamma_tot: the Gaussian's standard
deviation and the Lorentzian's half-width both equal that energy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from scipy.special import ndtr, ndtri


class DeltaKernelError(ValueError):
    """Pointwise density/quantile requested for the unbroadened (delta) kernel."""


@dataclass(frozen=True)
class Delta:
    """No broadening; the identity element for cross-correlation."""


@dataclass(frozen=True)
class Gaussian:
    sigma: float

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValueError("sigma must be strictly positive")


@dataclass(frozen=True)
class Lorentzian:
    scale: float  # half-width at half maximum

    def __post_init__(self):
        if self.scale <= 0:
            raise ValueError("scale must be strictly positive")


BroadeningKernel = Union[Delta, Gaussian, Lorentzian]


def kernel_width(k: BroadeningKernel) -> float:
    """Characteristic energy width (0 for the delta kernel)."""
    if isinstance(k, Gaussian):
        return k.sigma
    if isinstance(k, Lorentzian):
        return k.scale
    return 0.0


def kernel_density(x: float, k: BroadeningKernel) -> float:
    if isinstance(k, Gaussian):
        z = x / k.sigma
        if abs(z) > 38.0:
            return 0.0
        return math.exp(-0.5 * z * z) / (k.sigma * math.sqrt(2.0 * math.pi))
    if isinstance(k, Lorentzian):
        return k.scale / (math.pi * (k.scale * k.scale + x * x))
    raise DeltaKernelError("delta kernel has no pointwise density")


def kernel_cdf(x: float, k: BroadeningKernel) -> float:
    """P(X <= x) for the kernel; step at 0 (value 1/2) for the delta kernel."""
    if isinstance(k, Gaussian):
        return float(ndtr(x / k.sigma))
    if isinstance(k, Lorentzian):
        return 0.5 + math.atan(x / k.scale) / math.pi
    if x < 0.0:
        return 0.0
    if x > 0.0:
        return 1.0
    return 0.5


def kernel_mad(k: BroadeningKernel) -> float:
    """Mean absolute deviation about the (zero) median; inf if divergent."""
    if isinstance(k, Gaussian):
        return k.sigma * math.sqrt(2.0 / math.pi)
    if isinstance(k, Lorentzian):
        return math.inf
    return 0.0


def kernel_quantile(p: float, k: BroadeningKernel) -> float:
    """Upper-tail quantile: the x with P(X > x) = p."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"probability must lie strictly in (0, 1), got {p}")
    if isinstance(k, Gaussian):
        return k.sigma * float(ndtri(1.0 - p))
    if isinstance(k, Lorentzian):
        return k.scale * math.tan(math.pi * (0.5 - p))
    raise DeltaKernelError("delta kernel has no continuous quantile")
