"""Deterministic quasi-random parameter samples for the verification suites."""

from __future__ import annotations

from functools import lru_cache

from scipy.stats import qmc

from .dispersion import (
    FluidParams,
    beta_gamma_m_of_alpha,
    beta_gamma_of_alpha,
    positive_roots,
)
from .expansion import WaveFamily

REGION_I_ALPHA = (0.05, 0.95)
REGION_I_BETA = (0.3, 3.0)
REGION_II_ALPHA = (1.05, 1.4)
# fraction of the double-root value beta_Gamma(alpha); spans both sides of Gamma_2
REGION_II_BETA_FRACTION = (0.86, 0.995)
GAMMA2_EXCLUSION = 1e-6


def _halton(n: int, skip: int = 1):
    # the unscrambled sequence is fully deterministic; its first point is the origin
    return qmc.Halton(d=2, scramble=False).random(n + skip)[skip:]


def _lerp(lo_hi, u):
    lo, hi = lo_hi
    return lo + (hi - lo) * float(u)


@lru_cache(maxsize=8)
def region_i_params(n: int = 40) -> tuple[FluidParams, ...]:
    return tuple(FluidParams(_lerp(REGION_I_ALPHA, u), _lerp(REGION_I_BETA, v))
                 for u, v in _halton(n))


@lru_cache(maxsize=8)
def region_ii_params(n: int = 40) -> tuple[FluidParams, ...]:
    """Nonresonant Region II points, none within ``GAMMA2_EXCLUSION`` of the 2:1 curve."""
    out: list[FluidParams] = []
    m = n
    while len(out) < n:
        out.clear()
        for u, v in _halton(m):
            a = _lerp(REGION_II_ALPHA, u)
            b = beta_gamma_of_alpha(a) * _lerp(REGION_II_BETA_FRACTION, v)
            if any(abs(b - beta_gamma_m_of_alpha(mm, a)) < GAMMA2_EXCLUSION for mm in (2, 3, 4)):
                continue
            out.append(FluidParams(a, b))
        m += n - len(out)
    return tuple(out[:n])


def families_of(params: FluidParams) -> list[WaveFamily]:
    roots = positive_roots(params).roots
    return [WaveFamily(k, params, i) for i, k in enumerate(roots, start=1)]


@lru_cache(maxsize=8)
def sample_families(n_i: int = 40, n_ii: int = 40) -> tuple[WaveFamily, ...]:
    """Region I families followed by both families of every Region II sample."""
    fams: list[WaveFamily] = []
    for p in region_i_params(n_i) + region_ii_params(n_ii):
        fams.extend(families_of(p))
    return tuple(fams)
