"""Optimal erasure work costs, characteristic energy scales and the bound.

W0 (erase to empty) and W1 (erase to full) are the quasistatic-ramp-plus-
quench limits. For a broadened device they are evaluated as single integrals
over the kernel by exchanging the order of integration:

    W0 = integral g(u) * P0(mu_half + u) du,
    P0(y) = integral of the unbroadened occupation over [y, inf),

where P0 has a softplus closed form per lead (exact ramps at T = 0). The
kernel-free and T = 0 cases fall out of the same expressions. The Lorentzian
kernel makes both integrals diverge and is reported as such; eta-erasure is
the supported finite-cost alternative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .dot_model import (DotSystem, dominant_scale, half_occupation_level,
                        occupation, occupation_derivative_density)
from .kernels import Delta, Lorentzian, kernel_density, kernel_mad
from .leads import (fermi_derivative_density, occupied_weight_above,
                    vacancy_weight_below)
from .numerics import DEFAULT_CONFIG, NumericsConfig, find_root, integrate


class DivergentInput(ValueError):
    """Bound check received a divergent (Lorentzian exact-erasure) quantity."""


@dataclass(frozen=True)
class ErasureCosts:
    w_zero: float
    w_one: float
    w_bar: float
    mu_half: float
    divergent: bool
    mad_discrepancy: float | None = None  # |w_bar - MAD/2| when cross-checked


@dataclass(frozen=True)
class EnergyScales:
    e_therm: float
    e_bias: float
    e_broad: float  # inf for Lorentzian broadening


@dataclass(frozen=True)
class BoundReport:
    lower: float
    upper: float
    w_bar: float
    satisfied: bool
    margin_lower: float
    margin_upper: float


def energy_scales(sys: DotSystem) -> EnergyScales:
    g_s = sys.rates.gamma_source
    g_d = sys.rates.gamma_drain
    e_therm = math.log(2.0) * (g_s * sys.source.thermal_energy
                               + g_d * sys.drain.thermal_energy)
    e_bias = 0.5 * min(g_s, g_d) * sys.bias
    e_broad = 0.5 * kernel_mad(sys.kernel)
    return EnergyScales(e_therm, e_bias, e_broad)


def _unbroadened_tail_above(y: float, sys: DotSystem) -> float:
    # integral of p0 over [y, inf)
    return (sys.rates.gamma_source * occupied_weight_above(y, sys.source)
            + sys.rates.gamma_drain * occupied_weight_above(y, sys.drain))


def _unbroadened_tail_below(y: float, sys: DotSystem) -> float:
    # integral of (1 - p0) over (-inf, y]
    return (sys.rates.gamma_source * vacancy_weight_below(y, sys.source)
            + sys.rates.gamma_drain * vacancy_weight_below(y, sys.drain))


def _kernel_weighted(inner, sys: DotSystem, mu_half: float,
                     cfg: NumericsConfig) -> float:
    # integral of g(u) * inner(mu_half + u) du for a Gaussian kernel
    sigma = sys.kernel.sigma
    span = (sys.bias
            + cfg.tail_cutoff_exponential * max(sys.source.thermal_energy,
                                                sys.drain.thermal_energy)
            + abs(sys.source.chemical_potential - mu_half)
            + abs(sys.drain.chemical_potential - mu_half))
    half = cfg.tail_cutoff_gaussian * sigma + span
    pts = [0.0, -cfg.tail_cutoff_gaussian * sigma,
           cfg.tail_cutoff_gaussian * sigma]
    for lead in (sys.source, sys.drain):
        c = lead.chemical_potential - mu_half
        # bracket the lead's thermal transition so a feature much narrower
        # than the kernel span cannot slip between quadrature nodes
        edge = cfg.tail_cutoff_exponential * lead.thermal_energy
        pts.extend([c, c - edge, c + edge])
    f = lambda u: kernel_density(u, sys.kernel) * inner(mu_half + u)
    return integrate(f, -half, half, cfg, breakpoints=pts).value


def absolute_deviation_integral(sys: DotSystem, point: float,
                                cfg: NumericsConfig = DEFAULT_CONFIG) -> float:
    """integral of |mu - point| * p'(mu) dmu, by direct quadrature over mu.

    Independent of the softplus route used for W0/W1: the integrand is the
    derivative-density cross-correlation evaluated pointwise.
    """
    if isinstance(sys.kernel, Lorentzian):
        return math.inf
    if isinstance(sys.kernel, Delta):
        # atoms from T = 0 leads contribute exactly; thermal leads by quadrature
        total = 0.0
        for gamma, lead in ((sys.rates.gamma_source, sys.source),
                            (sys.rates.gamma_drain, sys.drain)):
            if lead.thermal_energy == 0.0:
                total += gamma * abs(lead.chemical_potential - point)
            else:
                kt = lead.thermal_energy
                reach = cfg.tail_cutoff_exponential * kt
                lo = min(lead.chemical_potential, point) - reach
                hi = max(lead.chemical_potential, point) + reach
                f = lambda mu: (abs(mu - point)
                                * fermi_derivative_density(mu, lead))
                # bracket the thermal peak so it cannot hide between nodes
                # when the interval is much wider than kT
                total += gamma * integrate(
                    f, lo, hi, cfg,
                    breakpoints=[point, lead.chemical_potential,
                                 lead.chemical_potential - reach,
                                 lead.chemical_potential + reach]).value
        return total
    kt_max = max(sys.source.thermal_energy, sys.drain.thermal_energy)
    reach = (cfg.tail_cutoff_exponential * kt_max
             + cfg.tail_cutoff_gaussian * sys.kernel.sigma)
    lo = min(sys.drain.chemical_potential, point) - reach
    hi = max(sys.source.chemical_potential, point) + reach
    f = lambda mu: abs(mu - point) * occupation_derivative_density(mu, sys, cfg)
    pts = [point]
    for lead in (sys.source, sys.drain):
        # each lead's smoothed peak has width ~ max(kT, sigma); bracket it
        half_width = (cfg.tail_cutoff_exponential * lead.thermal_energy
                      + cfg.tail_cutoff_gaussian * sys.kernel.sigma)
        pts.extend([lead.chemical_potential,
                    lead.chemical_potential - half_width,
                    lead.chemical_potential + half_width])
    return integrate(f, lo, hi, cfg, breakpoints=pts).value


def erasure_costs(sys: DotSystem, cfg: NumericsConfig = DEFAULT_CONFIG,
                  mad_check: bool = True) -> ErasureCosts:
    """W0, W1 and their average for optimal (quasistatic) erasure.

    With ``mad_check`` the mean-absolute-deviation form of the average cost
    is also integrated directly and the discrepancy recorded; disable it in
    large parameter sweeps where only w_bar is needed.
    """
    mu_half = half_occupation_level(sys, cfg)
    if isinstance(sys.kernel, Lorentzian):
        return ErasureCosts(math.inf, math.inf, math.inf, mu_half, True)
    if isinstance(sys.kernel, Delta):
        w0 = _unbroadened_tail_above(mu_half, sys)
        w1 = _unbroadened_tail_below(mu_half, sys)
    else:
        w0 = _kernel_weighted(lambda y: _unbroadened_tail_above(y, sys),
                              sys, mu_half, cfg)
        w1 = _kernel_weighted(lambda y: _unbroadened_tail_below(y, sys),
                              sys, mu_half, cfg)
    w_bar = 0.5 * (w0 + w1)
    discrepancy = None
    if mad_check:
        mad = absolute_deviation_integral(sys, mu_half, cfg)
        discrepancy = abs(w_bar - 0.5 * mad)
    return ErasureCosts(w0, w1, w_bar, mu_half, False, discrepancy)


def check_bound(costs: ErasureCosts, scales: EnergyScales,
                slack_rel: float = 1e-9) -> BoundReport:
    """Two-sided sandwich max(scales) <= w_bar <= sum(scales), with slack."""
    values = (costs.w_bar, scales.e_therm, scales.e_bias, scales.e_broad)
    if costs.divergent or any(not math.isfinite(v) for v in values):
        raise DivergentInput("bound check requires finite costs and scales")
    lower = max(scales.e_therm, scales.e_bias, scales.e_broad)
    upper = scales.e_therm + scales.e_bias + scales.e_broad
    slack = slack_rel * upper
    satisfied = (lower - slack <= costs.w_bar <= upper + slack)
    return BoundReport(lower, upper, costs.w_bar, satisfied,
                       costs.w_bar - lower, upper - costs.w_bar)


def _lorentzian_eta_closed_form(scale: float, eta: float) -> float:
    sec = 1.0 / math.cos(math.pi * (0.5 - eta))
    return scale / (2.0 * math.pi) * math.log(sec * sec)


def eta_erasure_work(sys: DotSystem, eta: float,
                     cfg: NumericsConfig = DEFAULT_CONFIG) -> float:
    """Work to drive the occupation from 1/2 down to eta and reset the level.

    W = integral of p over [mu_half, mu_eta] minus (mu_eta - mu_half)*eta.
    Finite for every kernel, which is the point: it is the supported erasure
    notion when exact erasure diverges (Lorentzian broadening). For the
    zero-bias, T = 0 Lorentzian device the closed form
    (scale/2pi) * ln sec^2(pi(1/2 - eta)) is evaluated as well and the two
    routes are required to agree.
    """
    if not 0.0 < eta < 0.5:
        raise ValueError(f"eta must lie strictly in (0, 1/2), got {eta}")
    mu_half = half_occupation_level(sys, cfg)
    scale = dominant_scale(sys)
    hi = sys.source.chemical_potential + 60.0 * scale
    while occupation(hi, sys, cfg) > eta:
        hi = mu_half + 2.0 * (hi - mu_half)
    mu_eta = find_root(lambda mu: occupation(mu, sys, cfg) - eta,
                       mu_half, hi, cfg)
    if mu_eta <= mu_half:
        return 0.0
    raise_work = integrate(lambda mu: occupation(mu, sys, cfg),
                           mu_half, mu_eta, cfg,
                           breakpoints=[sys.source.chemical_potential]).value
    work = raise_work - (mu_eta - mu_half) * occupation(mu_eta, sys, cfg)
    if (isinstance(sys.kernel, Lorentzian) and sys.bias == 0.0
            and sys.source.thermal_energy == 0.0
            and sys.drain.thermal_energy == 0.0):
        exact = _lorentzian_eta_closed_form(sys.kernel.scale, eta)
        if abs(work - exact) > 1e-8 * max(abs(exact), 1e-300):
            raise ArithmeticError(
                f"eta-erasure routes disagree: numeric {work}, exact {exact}")
    return work
