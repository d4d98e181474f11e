"""Two-electrode quantum-dot device model.

The steady-state occupation is the tunnelling-ratio-weighted sum of the two
Fermi functions; lifetime broadening enters as a cross-correlation with the
kernel. The cross-correlation is evaluated per lead after integration by
parts, so the integrand always carries an exponential (logistic) factor and
is safe to truncate even for the heavy-tailed Lorentzian kernel:

    (g (x) f)(mu) = integral of KernelCDF(u) * logistic_density(u - c) du,

with c = mu_lead - mu. At T = 0 the logistic density collapses to a delta
and the value is KernelCDF(mu_lead - mu) exactly.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .kernels import (BroadeningKernel, Delta, kernel_cdf, kernel_density,
                      kernel_width)
from .leads import LeadParams, fermi_derivative_density, fermi_occupation
from .numerics import DEFAULT_CONFIG, NumericsConfig, find_root, integrate


class PureStep(ValueError):
    """Occupation distribution is purely atomic (T = 0 leads, no broadening)."""


class AmbiguousMedianWarning(UserWarning):
    """p = 1/2 holds on an extended plateau; the midpoint was returned."""


@dataclass(frozen=True)
class TunnelRates:
    rate_source: float
    rate_drain: float

    def __post_init__(self):
        if self.rate_source < 0 or self.rate_drain < 0:
            raise ValueError("tunnelling rates must be non-negative")
        if self.rate_source + self.rate_drain <= 0:
            raise ValueError("total tunnelling rate must be positive")

    @property
    def total(self) -> float:
        return self.rate_source + self.rate_drain

    @property
    def gamma_source(self) -> float:
        return self.rate_source / self.total

    @property
    def gamma_drain(self) -> float:
        return 1.0 - self.gamma_source


@dataclass(frozen=True)
class DotSystem:
    source: LeadParams
    drain: LeadParams
    rates: TunnelRates
    kernel: BroadeningKernel

    def __post_init__(self):
        if self.source.chemical_potential < self.drain.chemical_potential:
            raise ValueError("convention requires mu_source >= mu_drain")

    @property
    def bias(self) -> float:
        return self.source.chemical_potential - self.drain.chemical_potential


def dominant_scale(sys: DotSystem) -> float:
    """Largest smoothing energy scale (thermal or broadening); 1.0 fallback."""
    s = max(sys.source.thermal_energy, sys.drain.thermal_energy,
            kernel_width(sys.kernel))
    return s if s > 0.0 else 1.0


def is_atomic(sys: DotSystem) -> bool:
    """True when the occupation is a pure double step (both T = 0, no kernel)."""
    return (isinstance(sys.kernel, Delta)
            and sys.source.thermal_energy == 0.0
            and sys.drain.thermal_energy == 0.0)


def unbroadened_occupation(mu: float, sys: DotSystem) -> float:
    """Steady-state occupation without broadening: gS*fS(mu) + gD*fD(mu)."""
    return (sys.rates.gamma_source * fermi_occupation(mu, sys.source)
            + sys.rates.gamma_drain * fermi_occupation(mu, sys.drain))


def _correlated_occupation(mu: float, lead: LeadParams,
                           kernel: BroadeningKernel,
                           cfg: NumericsConfig) -> float:
    # (g (x) f_lead)(mu) for a non-delta kernel
    c = lead.chemical_potential - mu
    kt = lead.thermal_energy
    if kt == 0.0:
        return kernel_cdf(c, kernel)
    half = cfg.tail_cutoff_exponential * kt
    w = kernel_width(kernel)
    pts = [0.0, -cfg.tail_cutoff_gaussian * w, cfg.tail_cutoff_gaussian * w, c]
    f = lambda u: kernel_cdf(u, kernel) * fermi_derivative_density(mu + u, lead)
    return integrate(f, c - half, c + half, cfg, breakpoints=pts).value


def occupation(mu: float, sys: DotSystem,
               cfg: NumericsConfig = DEFAULT_CONFIG) -> float:
    """Broadened steady-state occupation p(mu)."""
    if isinstance(sys.kernel, Delta):
        return unbroadened_occupation(mu, sys)
    p = (sys.rates.gamma_source
         * _correlated_occupation(mu, sys.source, sys.kernel, cfg)
         + sys.rates.gamma_drain
         * _correlated_occupation(mu, sys.drain, sys.kernel, cfg))
    # quadrature roundoff can overshoot the probability range by ~1e-15
    return min(1.0, max(0.0, p))


def _correlated_density(mu: float, lead: LeadParams,
                        kernel: BroadeningKernel,
                        cfg: NumericsConfig) -> float:
    # (g (x) f'_lead)(mu) for a non-delta kernel
    c = lead.chemical_potential - mu
    kt = lead.thermal_energy
    if kt == 0.0:
        return kernel_density(c, kernel)
    half = cfg.tail_cutoff_exponential * kt
    w = kernel_width(kernel)
    pts = [0.0, -cfg.tail_cutoff_gaussian * w, cfg.tail_cutoff_gaussian * w, c]
    f = lambda u: kernel_density(u, kernel) * fermi_derivative_density(mu + u, lead)
    return integrate(f, c - half, c + half, cfg, breakpoints=pts).value


def occupation_derivative_density(mu: float, sys: DotSystem,
                                  cfg: NumericsConfig = DEFAULT_CONFIG) -> float:
    """-dp/dmu, computed analytically as a cross-correlation of densities."""
    if is_atomic(sys):
        raise PureStep("occupation distribution is atomic; no pointwise density")
    if isinstance(sys.kernel, Delta):
        total = 0.0
        for gamma, lead in ((sys.rates.gamma_source, sys.source),
                            (sys.rates.gamma_drain, sys.drain)):
            if lead.thermal_energy > 0.0:
                total += gamma * fermi_derivative_density(mu, lead)
            # a T = 0 lead contributes an atom; its density part is zero
            # everywhere except exactly at its chemical potential
        return total
    return (sys.rates.gamma_source
            * _correlated_density(mu, sys.source, sys.kernel, cfg)
            + sys.rates.gamma_drain
            * _correlated_density(mu, sys.drain, sys.kernel, cfg))


def half_occupation_level(sys: DotSystem,
                          cfg: NumericsConfig = DEFAULT_CONFIG) -> float:
    """The gate level mu_1/2 with p(mu_1/2) = 1/2.

    For the all-atomic device this is the median of the two-atom distribution;
    the degenerate gamma_S = 1/2 case has a whole plateau at p = 1/2 and the
    midpoint is returned with a warning.
    """
    mu_s = sys.source.chemical_potential
    mu_d = sys.drain.chemical_potential
    if is_atomic(sys):
        g_s = sys.rates.gamma_source
        if g_s < 0.5:
            return mu_d
        if g_s > 0.5:
            return mu_s
        warnings.warn("p = 1/2 on the whole bias window; returning midpoint",
                      AmbiguousMedianWarning, stacklevel=2)
        return 0.5 * (mu_s + mu_d)
    scale = dominant_scale(sys)
    lo = mu_d - 60.0 * scale
    hi = mu_s + 60.0 * scale
    root_cfg = NumericsConfig(
        rel_tol=cfg.rel_tol, abs_tol=cfg.abs_tol,
        max_subdivisions=cfg.max_subdivisions,
        tail_cutoff_exponential=cfg.tail_cutoff_exponential,
        tail_cutoff_gaussian=cfg.tail_cutoff_gaussian,
        root_tol=cfg.root_tol * scale)
    return find_root(lambda mu: occupation(mu, sys, cfg) - 0.5,
                     lo, hi, root_cfg)
