"""Transverse-instability coefficient by four independent routes, and per-family verdicts."""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass

import numpy as np

from .dispersion import FluidParams, RegionTag, classify_region, scaled_dispersion
from .exceptions import RegionError, ResonanceError
from .expansion import (
    WaveFamily,
    _k2_bracket,
    c_of_kstar,
    k2_coefficient,
    resonance_margin,
)
from .linop import ell_eps_estimate

logger = logging.getLogger(__name__)

LARGE_K = 15.0


class Sign(str, enum.Enum):
    NEGATIVE = "negative"
    POSITIVE = "positive"
    NEAR_ZERO = "near_zero"


class Verdict(str, enum.Enum):
    UNSTABLE = "TransverselyUnstable"
    INCONCLUSIVE = "Inconclusive"
    RESONANT = "ResonantExcluded"


def _ab(family: WaveFamily) -> tuple[float, float]:
    k, b = family.k_star, family.params.beta
    with np.errstate(over="ignore"):
        lead = 4 * b * k * np.sinh(k) ** 2 + 2 * k
        s2 = np.sinh(2 * k)
    return float(lead - s2), float(lead + s2)


def m21_via_k2(family: WaveFamily, k2: float) -> float:
    """``-4 k (A/B) k2`` with ``A, B = 4 beta k sinh^2 k + 2k -/+ sinh 2k``."""
    A, B = _ab(family)
    return -4.0 * family.k_star * (A / B) * k2


def tilde_to_m21(family: WaveFamily, m_tilde: float) -> float:
    """Rescale the reduced coefficient into the canonical one (a positive factor)."""
    _, B = _ab(family)
    return family.k_star**4 / (8 * family.params.alpha) / B * m_tilde


def m21_tilde_direct(family: WaveFamily) -> float:
    """Hyperbolic closed form of the reduced coefficient in ``k*``, ``alpha``, ``beta``, ``c``."""
    k = family.k_star
    c = c_of_kstar(family)
    return float(-_k2_bracket(k, family.params.alpha, family.params.beta, c))


def sigma_t(family: WaveFamily) -> tuple[float, float]:
    """``(tanh k*, beta k*^2 / alpha)``."""
    k = family.k_star
    return math.tanh(k), family.params.beta * k * k / family.params.alpha


def a_coefficients(sigma) -> tuple:
    """The four cubic-in-``T`` numerator coefficients ``(a0, a1, a2, a3)`` as polynomials in ``sigma``."""
    s2 = np.asarray(sigma, dtype=float) ** 2
    s4, s6 = s2 * s2, s2 * s2 * s2
    a0 = -2 * s6 + 13 * s4 - 12 * s2 + 9
    a1 = -6 * s6 + 33 * s4 - 62 * s2 + 36
    a2 = -6 * s6 + 30 * s4 - 55 * s2 + 33
    a3 = -2 * s6 + 10 * s4 - 14 * s2 + 6
    if s2.ndim == 0:
        return float(a0), float(a1), float(a2), float(a3)
    return a0, a1, a2, a3


def _sigma_denominator(family: WaveFamily) -> float:
    s, T = sigma_t(family)
    den = s * s - T * (3 - s * s)
    val, thr = resonance_margin(family)
    if val < thr:
        raise ResonanceError(f"sigma form singular at k*={family.k_star:.12g}")
    return den


def m21_tilde_sigma(family: WaveFamily) -> float:
    """Rational form of the reduced coefficient in ``sigma = tanh k*`` and ``T = beta k*^2/alpha``."""
    s, T = sigma_t(family)
    den = _sigma_denominator(family)
    a0, a1, a2, a3 = a_coefficients(s)
    num = ((a3 * T + a2) * T + a1) * T + a0
    return 8 * family.k_star / ((1 + T) ** 2 * (1 - s * s) ** 2) * num / den


def chi_davey_stewartson(family: WaveFamily) -> float:
    """Cubic modulation coefficient (unit depth)."""
    s, T = sigma_t(family)
    den = _sigma_denominator(family)
    q = 1 - s * s
    br = ((q * (9 - s * s) + T * (3 - s * s) * (7 - s * s)) / den
          + 8 * s * s - 2 * q * q * (1 + T) - 3 * s * s * T / (1 + T))
    return br / (4 * math.sqrt(s * (1 + T)))


def m21_tilde_from_chi(family: WaveFamily, chi: float) -> float:
    if math.isnan(chi):
        return math.nan
    s, T = sigma_t(family)
    return 32 * family.k_star * math.sqrt(s * (1 + T)) / ((1 + T) * (1 - s * s) ** 2) * chi


def sign_via_dispersion(family: WaveFamily) -> Sign:
    """Sign of ``-D(2k*)``, or ``near_zero`` inside the resonance threshold."""
    val, thr = resonance_margin(family)
    if val < thr:
        return Sign.NEAR_ZERO
    return Sign.NEGATIVE if scaled_dispersion(2 * family.k_star, family.params) > 0 else Sign.POSITIVE


def _sign_of(x: float) -> Sign:
    return Sign.NEGATIVE if x < 0 else Sign.POSITIVE if x > 0 else Sign.NEAR_ZERO


@dataclass(frozen=True)
class StabilityReport:
    family: WaveFamily
    sigma: float
    t_tilde: float
    a_coeffs: tuple[float, float, float, float]
    k2: float
    m21_via_k2: float
    m21_tilde_direct: float
    m21_tilde_sigma: float
    chi_ds: float
    m21_2: float
    sign: Sign
    verdict: Verdict
    ell_coeff: float | None

    def route_values(self) -> dict[str, float]:
        """The four routes on the canonical scale."""
        f = self.family
        return {
            "via_k2": self.m21_via_k2,
            "direct": tilde_to_m21(f, self.m21_tilde_direct),
            "sigma": tilde_to_m21(f, self.m21_tilde_sigma),
            "chi": tilde_to_m21(f, m21_tilde_from_chi(f, self.chi_ds)),
        }

    def route_spread(self) -> dict[str, float]:
        """Pairwise relative differences between the routes (NaN for skipped routes)."""
        vals = self.route_values()
        names = list(vals)
        out = {}
        for i, p in enumerate(names):
            for q in names[i + 1:]:
                x, y = vals[p], vals[q]
                scale = max(abs(x), abs(y))
                out[f"{p}|{q}"] = abs(x - y) / scale if scale else 0.0
        return out

    def to_dict(self) -> dict:
        return {
            "family": self.family.family_index,
            "k_star": self.family.k_star,
            "sigma": self.sigma,
            "t_tilde": self.t_tilde,
            "a_coeffs": list(self.a_coeffs),
            "k2": self.k2,
            "m21_via_k2": self.m21_via_k2,
            "m21_tilde_direct": self.m21_tilde_direct,
            "m21_tilde_sigma": self.m21_tilde_sigma,
            "chi_ds": self.chi_ds,
            "m21_2": self.m21_2,
            "routes": self.route_values(),
            "route_spread": self.route_spread(),
            "sign": self.sign.value,
            "verdict": self.verdict.value,
            "ell_coeff": self.ell_coeff,
        }


def stability_report(family: WaveFamily, roots: tuple[float, ...] | None = None) -> StabilityReport:
    """Evaluate every route for one family and attach its verdict.

    ``roots`` are the positive roots of the dispersion relation; with two of
    them, family 1 is unstable only when ``2 k1 > k2``.
    """
    s, T = sigma_t(family)
    sign = sign_via_dispersion(family)
    if sign is Sign.NEAR_ZERO:
        nan = math.nan
        return StabilityReport(family, s, T, a_coefficients(s), nan, nan, nan, nan, nan, nan,
                               sign, Verdict.RESONANT, None)
    k2 = k2_coefficient(family)
    m21 = m21_via_k2(family, k2)
    direct = m21_tilde_direct(family)
    if family.k_star > LARGE_K:
        logger.info("k*=%.6g > %g: sigma and chi routes skipped (sech^2 underflow)",
                    family.k_star, LARGE_K)
        sig = chi = math.nan
    else:
        sig = m21_tilde_sigma(family)
        chi = chi_davey_stewartson(family)
    verdict = Verdict.UNSTABLE if m21 < 0 else Verdict.INCONCLUSIVE
    if roots is not None and len(roots) == 2 and family.family_index == 1:
        # the sign rule and the root geometry must tell the same story
        geometric = 2 * roots[0] > roots[1]
        if geometric != (m21 < 0):
            logger.warning("sign of m21 disagrees with 2k1 > k2 at %s", family.params)
    ell = math.sqrt(-m21) if m21 < 0 else None
    return StabilityReport(family, s, T, a_coefficients(s), k2, m21, direct, sig, chi, m21,
                           _sign_of(m21), verdict, ell)


def classify_transverse_stability(params: FluidParams, tol: float = 1e-9, m_max: int = 4,
                                  k_max: float | None = None) -> list[StabilityReport]:
    """One report per bifurcating family; raises :class:`RegionError` off Regions I and II."""
    region = classify_region(params, tol=tol, m_max=m_max, k_max=k_max)
    if region.tag not in (RegionTag.REGION_I, RegionTag.REGION_II):
        raise RegionError(f"no bifurcating wave families: {region.label}", region)
    roots = region.roots.roots
    families = [WaveFamily(k, params, i) for i, k in enumerate(roots, start=1)]
    reports = [stability_report(f, roots) for f in families]
    if region.resonant:
        reports = [
            StabilityReport(**{**r.__dict__, "verdict": Verdict.RESONANT}) for r in reports
        ]
    return reports


def ell_coefficient(report: StabilityReport, eps: float) -> float:
    return ell_eps_estimate(eps, report.m21_2)
