"""Linear dispersion relation of gravity-capillary waves on unit depth.

    D(k) = (alpha + beta k^2) sinh|k| - |k| cosh k

Positive roots of ``D`` are the wavenumbers at which two-dimensional periodic
waves bifurcate from the flat state. This module finds and counts them,
samples the double-root curve Gamma and the resonance curves Gamma_m, and
classifies points of the (alpha, beta) plane.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .exceptions import DegenerateError, ParameterError, RootSearchError

S_FLOOR = 1e-4
SCAN_POINTS = 2048
DEFAULT_KMAX = 20.0
CURVE_TOL = 1e-9
DEFAULT_MMAX = 4


@dataclass(frozen=True)
class FluidParams:
    """Dimensionless pair: ``alpha`` = g h / c^2, ``beta`` = T / (rho h c^2)."""

    alpha: float
    beta: float

    def __post_init__(self):
        for name in ("alpha", "beta"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float, np.floating)) and math.isfinite(v) and v > 0):
                raise ParameterError(f"{name} must be a finite positive real, got {v!r}")
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "beta", float(self.beta))


# --------------------------------------------------------------------------
# the dispersion function


def dispersion(k, params: FluidParams):
    """Evaluate ``D(k)``; even in ``k`` and vectorised over ``k``."""
    k = np.abs(np.asarray(k, dtype=float))
    out = (params.alpha + params.beta * k * k) * np.sinh(k) - k * np.cosh(k)
    return float(out) if out.ndim == 0 else out


def dispersion_derivative(k, params: FluidParams):
    """Analytic ``D'(k)``, odd in ``k``."""
    k = np.asarray(k, dtype=float)
    a = np.abs(k)
    d = (2 * params.beta * a * np.sinh(a) + (params.alpha + params.beta * a * a) * np.cosh(a)
         - np.cosh(a) - a * np.sinh(a))
    out = np.sign(k) * d
    return float(out) if out.ndim == 0 else out


def dispersion_second_derivative(k, params: FluidParams):
    """Analytic ``D''(k)`` for ``k >= 0`` (even extension)."""
    a = np.abs(np.asarray(k, dtype=float))
    b = params.beta
    out = (2 * b * np.sinh(a) + 4 * b * a * np.cosh(a) + (params.alpha + b * a * a) * np.sinh(a)
           - 2 * np.sinh(a) - a * np.cosh(a))
    return float(out) if out.ndim == 0 else out


def scaled_dispersion(k, params: FluidParams):
    """``D(k) / cosh(k)`` = (alpha + beta k^2) tanh|k| - |k|.

    Same roots and signs as ``D`` but free of overflow, so the root scan can
    reach the large second root that appears for small ``beta``.
    """
    k = np.abs(np.asarray(k, dtype=float))
    out = (params.alpha + params.beta * k * k) * np.tanh(k) - k
    return float(out) if out.ndim == 0 else out


def scaled_dispersion_derivative(k, params: FluidParams):
    k = np.abs(np.asarray(k, dtype=float))
    sech2 = 1.0 / np.cosh(k) ** 2
    out = 2 * params.beta * k * np.tanh(k) + (params.alpha + params.beta * k * k) * sech2 - 1.0
    return float(out) if out.ndim == 0 else out


def root_upper_bound(params: FluidParams) -> float:
    """Every positive root lies below this bound.

    A root needs ``alpha + beta k^2 = k coth k < k + 1``, impossible once
    ``beta k^2 > k + 1``.
    """
    b = params.beta
    return (1.0 + math.sqrt(1.0 + 4.0 * b)) / (2.0 * b)


# --------------------------------------------------------------------------
# roots


class Multiplicity(str, enum.Enum):
    SIMPLE = "simple"
    DOUBLE = "double"


@dataclass(frozen=True)
class DispersionRootSet:
    roots: tuple[float, ...]
    multiplicities: tuple[Multiplicity, ...]
    tolerance: float

    def __len__(self):
        return len(self.roots)

    @property
    def count(self) -> int:
        return len(self.roots)

    @property
    def all_simple(self) -> bool:
        return all(m is Multiplicity.SIMPLE for m in self.multiplicities)


def _polish(f, fp, k, lo, hi, steps=2):
    for _ in range(steps):
        d = fp(k)
        if d == 0.0:
            break
        step = f(k) / d
        k_new = k - step
        if not (lo <= k_new <= hi):
            break
        k = k_new
    return k


def _is_double(k, params):
    # relative test on the unscaled derivatives
    d1 = scaled_dispersion_derivative(k, params) * math.cosh(k)
    d2 = dispersion_second_derivative(k, params)
    return abs(d1) < 1e-8 * (1.0 + abs(d2))


def positive_roots(params: FluidParams, k_max: float | None = None,
                   tol: float = 1e-10) -> DispersionRootSet:
    """All roots of ``D`` in ``(0, k_max]``.

    Uniform scan of the scaled dispersion function on :data:`SCAN_POINTS`
    nodes, Brent's method on each sign change, then two Newton steps.
    Grid-local extrema of the scaled function that touch zero without a sign
    change are refined and reported as double roots.

    ``k_max`` defaults to the larger of 20 and :func:`root_upper_bound`, so no
    root is missed for small ``beta``.
    """
    if k_max is None:
        k_max = max(DEFAULT_KMAX, 1.0001 * root_upper_bound(params))
    if not (k_max > 0 and tol > 0):
        raise ParameterError("k_max and tol must be positive")

    f = lambda k: scaled_dispersion(k, params)  # noqa: E731
    fp = lambda k: scaled_dispersion_derivative(k, params)  # noqa: E731

    grid = np.linspace(k_max / SCAN_POINTS, k_max, SCAN_POINTS)
    vals = scaled_dispersion(grid, params)

    found: list[tuple[float, Multiplicity]] = []
    for i in range(len(grid) - 1):
        a, b = grid[i], grid[i + 1]
        fa, fb = vals[i], vals[i + 1]
        if fa == 0.0:
            found.append((a, Multiplicity.DOUBLE if _is_double(a, params) else Multiplicity.SIMPLE))
            continue
        if fa * fb < 0:
            r = brentq(f, a, b, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
            r = _polish(f, fp, r, a, b)
            mult = Multiplicity.DOUBLE if _is_double(r, params) else Multiplicity.SIMPLE
            found.append((r, mult))
    if vals[-1] == 0.0:
        found.append((grid[-1], Multiplicity.SIMPLE))

    # tangential contacts: interior extrema of the scan with no sign change nearby
    for i in range(1, len(grid) - 1):
        v0, v1, v2 = vals[i - 1], vals[i], vals[i + 1]
        if not ((abs(v1) <= abs(v0)) and (abs(v1) <= abs(v2))):
            continue
        if v0 * v1 <= 0 or v1 * v2 <= 0:
            continue
        res = minimize_scalar(lambda k: abs(f(k)), bounds=(grid[i - 1], grid[i + 1]),
                              method="bounded", options={"xatol": 1e-14})
        kc = float(res.x)
        fc = f(kc)
        if fc * v1 < 0:
            raise RootSearchError(
                f"two roots near k={kc:.6g} fall inside one scan cell; parameters are "
                "too close to the double-root curve to bracket them")
        # Newton on D' to sit exactly on the extremum
        kc = _polish(fp, lambda k: (fp(k + 1e-7) - fp(k - 1e-7)) / 2e-7, kc,
                     grid[i - 1], grid[i + 1], steps=3)
        fc = f(kc)
        if abs(fc) < tol:
            if not any(abs(kc - r) < 1e-6 for r, _ in found):
                found.append((kc, Multiplicity.DOUBLE))
        elif abs(fc) < 1e3 * tol:
            raise RootSearchError(
                f"near-double root at k={kc:.6g} (|D|/cosh={abs(fc):.3g}) cannot be resolved "
                f"at tol={tol:g}")

    found.sort()
    # a double root sampled as two sign changes a hair apart is one root
    merged: list[tuple[float, Multiplicity]] = []
    for r, mult in found:
        if (merged and mult is Multiplicity.DOUBLE and merged[-1][1] is Multiplicity.DOUBLE
                and abs(r - merged[-1][0]) < 1e-6 * max(1.0, r)):
            merged[-1] = (0.5 * (r + merged[-1][0]), Multiplicity.DOUBLE)
        else:
            merged.append((r, mult))
    found = merged
    return DispersionRootSet(tuple(r for r, _ in found), tuple(m for _, m in found), tol)


# --------------------------------------------------------------------------
# curves


@dataclass(frozen=True)
class CurveSample:
    s: float
    params: FluidParams
    m: int | None = None


def _check_s(s):
    if not (math.isfinite(s) and s >= S_FLOOR):
        raise ParameterError(
            f"curve parameter s={s!r} is below the floor {S_FLOOR:g}; use the limit point "
            "(alpha, beta) = (1, 1/3)")


def gamma_alpha_beta(s: float) -> tuple[float, float]:
    """Raw parametrisation of the double-root curve Gamma."""
    sh = math.sinh(s)
    th = math.tanh(s)
    alpha = s * s / (2 * sh * sh) + s / (2 * th)
    beta = -1.0 / (2 * sh * sh) + 1.0 / (2 * s * th)
    return alpha, beta


def gamma_point(s: float) -> CurveSample:
    """Point of Gamma: the parameters for which ``k = s`` is a double root."""
    _check_s(s)
    return CurveSample(float(s), FluidParams(*gamma_alpha_beta(s)))


GAMMA_LIMIT = (1.0, 1.0 / 3.0)


def gamma_m_alpha_beta(m: int, s: float) -> tuple[float, float]:
    q = 1.0 - m * m
    t1 = math.tanh(s)
    tm = math.tanh(m * s)
    alpha = -m * m * s / (q * t1) + m * s / (q * tm)
    beta = 1.0 / (q * s * t1) - m / (q * s * tm)
    return alpha, beta


def gamma_m_point(m: int, s: float) -> CurveSample:
    """Point of Gamma_m, where the two roots are ``s`` and ``m s``."""
    if int(m) != m or m < 2:
        raise ParameterError(f"m must be an integer >= 2, got {m!r}")
    _check_s(s)
    return CurveSample(float(s), FluidParams(*gamma_m_alpha_beta(int(m), s)), int(m))


def _invert_alpha(alpha_of_s, alpha: float) -> float:
    lo = S_FLOOR
    a_lo = alpha_of_s(lo)
    if alpha <= a_lo:
        raise DegenerateError(
            f"alpha={alpha!r} is within roundoff of the curve's limit point; s below floor")
    hi = 1.0
    while alpha_of_s(hi) < alpha:
        hi *= 2.0
        if hi > 1e6:
            raise DegenerateError(f"cannot bracket alpha={alpha!r} on the curve")
    return brentq(lambda s: alpha_of_s(s) - alpha, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)


def beta_gamma_of_alpha(alpha: float, tol: float = 1e-14) -> float:
    """``beta`` such that ``(alpha, beta)`` lies on Gamma; ``alpha > 1``.

    Bracketed root finding on ``s -> alpha_Gamma(s)``, which is increasing.
    Close to ``alpha = 1`` the curve is resolved below the parameter floor by
    the small-``s`` series of the parametrisation.
    """
    if not alpha > 1.0:
        raise ParameterError(f"beta_gamma_of_alpha needs alpha > 1, got {alpha!r}")
    try:
        s = _invert_alpha(lambda s: gamma_alpha_beta(s)[0], alpha)
    except DegenerateError:
        # alpha - 1 = s^4/45 + O(s^6), beta - 1/3 = -2 s^2/45 + O(s^4)
        s2 = math.sqrt(45.0 * (alpha - 1.0))
        return 1.0 / 3.0 - 2.0 * s2 / 45.0
    return gamma_alpha_beta(s)[1]


def beta_gamma_m_of_alpha(m: int, alpha: float) -> float:
    """``beta`` on Gamma_m at the given ``alpha > 1``."""
    if not alpha > 1.0:
        raise ParameterError(f"Gamma_m only exists for alpha > 1, got {alpha!r}")
    s = _invert_alpha(lambda s: gamma_m_alpha_beta(m, s)[0], alpha)
    return gamma_m_alpha_beta(m, s)[1]


# --------------------------------------------------------------------------
# classification


class RegionTag(str, enum.Enum):
    REGION_I = "RegionI"
    REGION_II = "RegionII"
    ALPHA_ONE = "AlphaOneBoundary"
    ON_GAMMA = "OnGamma"
    ON_GAMMA_M = "OnGammaM"
    NO_BIFURCATION = "NoBifurcation"


@dataclass(frozen=True)
class RegionClass:
    tag: RegionTag
    m: int | None = None
    resonant: bool = False
    detail: float = math.inf  # nearest curve distance in beta at fixed alpha
    roots: DispersionRootSet | None = field(default=None, compare=False)

    @property
    def label(self) -> str:
        if self.tag is RegionTag.ON_GAMMA_M:
            return f"OnGammaM({self.m})"
        return self.tag.value


def nonresonance_check(roots, tol: float = CURVE_TOL) -> bool:
    """True iff ``k2/k1`` stays further than ``tol`` from every integer ``m >= 2``."""
    if isinstance(roots, DispersionRootSet):
        if len(roots) != 2 or not roots.all_simple:
            raise ParameterError("nonresonance_check needs exactly two simple roots")
        k1, k2 = roots.roots
    else:
        if len(roots) != 2:
            raise ParameterError("nonresonance_check needs exactly two roots")
        k1, k2 = sorted(roots)
    ratio = k2 / k1
    m = max(2, round(ratio))
    return abs(ratio - m) > tol


@lru_cache(maxsize=4096)
def _cached_beta_gamma(alpha):
    return beta_gamma_of_alpha(alpha)


def classify_region(params: FluidParams, tol: float = CURVE_TOL, m_max: int = DEFAULT_MMAX,
                    k_max: float | None = None) -> RegionClass:
    """Place ``params`` in the case list of positive roots of ``D``.

    Curve proximity is measured in ``beta`` at fixed ``alpha``; the on-curve
    tags win over the open-region tags.
    """
    a, b = params.alpha, params.beta
    if abs(a - 1.0) < tol:
        return RegionClass(RegionTag.ALPHA_ONE, detail=abs(a - 1.0))
    if a < 1.0:
        return RegionClass(RegionTag.REGION_I, detail=1.0 - a,
                           roots=positive_roots(params, k_max))
    bg = _cached_beta_gamma(a)
    dist = abs(b - bg)
    if dist < tol:
        return RegionClass(RegionTag.ON_GAMMA, detail=dist)
    if b > bg:
        return RegionClass(RegionTag.NO_BIFURCATION, detail=dist)
    for m in range(2, m_max + 1):
        dm = abs(b - beta_gamma_m_of_alpha(m, a))
        dist = min(dist, dm)
        if dm < tol:
            return RegionClass(RegionTag.ON_GAMMA_M, m=m, resonant=True, detail=dm)
    roots = positive_roots(params, k_max)
    resonant = not nonresonance_check(roots, tol)
    return RegionClass(RegionTag.REGION_II, resonant=resonant, detail=dist, roots=roots)
