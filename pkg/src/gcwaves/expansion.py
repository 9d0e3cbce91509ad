"""Two-term small-amplitude expansion of the bifurcating periodic waves.

In the scaled variable ``x`` (period 2*pi, physical ``X = k_eps x``)

    k_eps   = k* + eps^2 k2
    eta(x)  = eps sinh(k*) cos x + eps^2 [ (k*/4)(c+1) sinh(2k*) cos 2x - k*^2/(4 alpha) ]
    Phi(x,y)= eps cosh(k* y) sin x
              + eps^2 (k*/4) [ c cosh(2k* y) + 2 sinh(k*) y sinh(k* y) ] sin 2x

with ``c = c(k*)`` and ``k2`` in closed form. The amplitude normalisation is
fixed by ``eta_1 = sinh(k*) cos x``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .dispersion import (
    FluidParams,
    RegionTag,
    classify_region,
    scaled_dispersion,
)
from .exceptions import DegenerateError, ParameterError, RegionError, ResonanceError
from .profiles import ModeComponent, Profile


VALIDITY_RADIUS = 0.2


@dataclass(frozen=True)
class WaveFamily:
    """One family of periodic waves, labelled by the root ``k_star`` it bifurcates from."""

    k_star: float
    params: FluidParams
    family_index: int = 1

    def __post_init__(self):
        if not (math.isfinite(self.k_star) and self.k_star > 0):
            raise ParameterError(f"k_star must be positive, got {self.k_star!r}")
        if self.family_index not in (1, 2):
            raise ParameterError("family_index must be 1 or 2")

    @property
    def dispersion_residual(self) -> float:
        """``|D(k*)| / cosh(k*)``."""
        return abs(scaled_dispersion(self.k_star, self.params))


def wave_families(params: FluidParams, tol: float = 1e-9, m_max: int = 4) -> list[WaveFamily]:
    """The families bifurcating at ``params`` (one in Region I, two in Region II)."""
    region = classify_region(params, tol=tol, m_max=m_max)
    if region.tag not in (RegionTag.REGION_I, RegionTag.REGION_II):
        raise RegionError(f"no bifurcating families for region {region.label}", region)
    return [WaveFamily(k, params, i) for i, k in enumerate(region.roots.roots, start=1)]


# --------------------------------------------------------------------------
# coefficients


def resonance_margin(family: WaveFamily) -> tuple[float, float]:
    """``(|D(2k*)|, threshold)`` both divided by ``cosh(2k*)``.

    The threshold is ``1e-8 (1 + alpha k* cosh 2k*)``.
    """
    k = family.k_star
    a = family.params.alpha
    with np.errstate(over="ignore"):
        sech2 = 1.0 / np.cosh(2 * k)
    return abs(scaled_dispersion(2 * k, family.params)), 1e-8 * (sech2 + a * k)


def c_of_kstar(family: WaveFamily) -> float:
    """``c(k*) = -1 - k*(cosh 2k* + 2) / D(2k*)``."""
    k = family.k_star
    val, thr = resonance_margin(family)
    if val < thr:
        raise ResonanceError(
            f"second-harmonic resonance: D(2k*) ~ 0 at k*={k:.12g} "
            f"(|D(2k*)|/cosh(2k*)={val:.3g} < {thr:.3g})")
    with np.errstate(over="ignore"):
        sech2 = 1.0 / np.cosh(2 * k)
    return float(-1.0 - k * (1.0 + 2.0 * sech2) / scaled_dispersion(2 * k, family.params))


def d_of_kstar(family: WaveFamily) -> float:
    """``d(k*) = 32 alpha (2 beta k*(cosh 2k* - 1) + 2k* - sinh 2k*)``."""
    k = family.k_star
    a, b = family.params.alpha, family.params.beta
    with np.errstate(over="ignore"):
        core = 2 * b * k * (np.cosh(2 * k) - 1) + 2 * k - np.sinh(2 * k)
        scale = 2 * b * k * (np.cosh(2 * k) - 1) + 2 * k + np.sinh(2 * k)
    if abs(core) < 1e-12 * scale:
        raise DegenerateError(f"d(k*) vanishes at k*={k:.12g}")
    return float(32 * a * core)


def _k2_bracket(k, a, b, c):
    # the bracket shared by k2 and (with a sign flip) by the direct m21 formula
    with np.errstate(over="ignore", invalid="ignore"):
        return ((9 * a * b + 16) * k - 12 * a * b * k * np.cosh(2 * k)
                + 3 * a * b * k * np.cosh(4 * k)
                - 8 * a * (2 * c - 1) * np.sinh(2 * k) - 4 * a * (c + 2) * np.sinh(4 * k))


def k2_coefficient(family: WaveFamily) -> float:
    """Closed-form second-order wavenumber correction ``k2``."""
    k = family.k_star
    a, b = family.params.alpha, family.params.beta
    c = c_of_kstar(family)
    d = d_of_kstar(family)
    return float(k**3 / d * _k2_bracket(k, a, b, c))


# --------------------------------------------------------------------------
# the expansion itself


@dataclass(frozen=True)
class WaveExpansion:
    family: WaveFamily
    c_k: float
    d_k: float
    k2: float

    @property
    def k_star(self) -> float:
        return self.family.k_star

    @property
    def params(self) -> FluidParams:
        return self.family.params

    @property
    def eta1_amp(self) -> float:
        return math.sinh(self.k_star)

    @property
    def eta2_amp(self) -> float:
        k = self.k_star
        return k / 4 * (self.c_k + 1) * math.sinh(2 * k)

    @property
    def eta2_mean(self) -> float:
        return -self.k_star**2 / (4 * self.params.alpha)

    # modal pieces -----------------------------------------------------------

    def eta1(self) -> list[ModeComponent]:
        return [ModeComponent.scalar(1, "cos", self.eta1_amp)]

    def phi1(self) -> list[ModeComponent]:
        return [ModeComponent.field_(1, "sin", Profile.cosh(self.k_star))]

    def eta2(self) -> list[ModeComponent]:
        return [ModeComponent.scalar(2, "cos", self.eta2_amp),
                ModeComponent.scalar(0, "cos", self.eta2_mean)]

    def phi2(self) -> list[ModeComponent]:
        k = self.k_star
        prof = (Profile.cosh(2 * k, coef=k / 4 * self.c_k)
                + Profile.sinh(k, coef=k / 2 * math.sinh(k), power=1))
        return [ModeComponent.field_(2, "sin", prof)]

    def phi1_amp_fn(self, y):
        return np.cosh(self.k_star * np.asarray(y, dtype=float))

    def phi2_fn(self, y):
        return self.phi2()[0].parts["sin"](y)


def expand(family: WaveFamily) -> WaveExpansion:
    """Compute ``c(k*)``, ``d(k*)`` and ``k2`` for ``family``."""
    return WaveExpansion(family, c_of_kstar(family), d_of_kstar(family), k2_coefficient(family))


def _check_eps(eps, radius):
    if abs(eps) >= radius:
        warnings.warn(f"|eps|={abs(eps):g} is outside the nominal validity radius {radius:g}; "
                      "the truncated expansion may be inaccurate", stacklevel=3)


def k_epsilon(exp: WaveExpansion, eps: float, radius: float = VALIDITY_RADIUS) -> float:
    """Truncated wavenumber ``k* + eps^2 k2``."""
    _check_eps(eps, radius)
    return exp.k_star + eps * eps * exp.k2


def _eval(components, x, y=0.0):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    out = np.zeros(np.broadcast(x, y).shape)
    for comp in components:
        out = out + comp(x, y)
    return out


def _dx(components):
    return [c.dx() for c in components]


def _dy(components):
    return [c.dy() for c in components]


def _at(components, y0):
    return [c.at(y0) for c in components]


# --------------------------------------------------------------------------
# sampled profiles


@dataclass(frozen=True)
class SurfaceGrid:
    """Sampled field with its grids; arrays are read-only after construction."""

    values: np.ndarray
    x: np.ndarray
    X: np.ndarray | None = None
    y: np.ndarray | None = None
    z: np.ndarray | None = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        for name in ("values", "x", "X", "y", "z"):
            arr = getattr(self, name)
            if arr is not None:
                arr = np.array(arr, dtype=float)
                arr.setflags(write=False)
                object.__setattr__(self, name, arr)
        if not np.all(np.isfinite(self.values)):
            raise ValueError("surface values must be finite")


def scaled_grid(nx: int) -> np.ndarray:
    """``nx`` uniform nodes on one period ``[0, 2 pi)``."""
    return 2 * np.pi * np.arange(nx) / nx


def eta_tilde(exp: WaveExpansion, eps: float, x):
    """Truncated surface elevation; even in ``x``."""
    return eps * _eval(exp.eta1(), x) + eps * eps * _eval(exp.eta2(), x)


def phi_tilde(exp: WaveExpansion, eps: float, x, y):
    """Truncated potential; odd in ``x``."""
    return eps * _eval(exp.phi1(), x, y) + eps * eps * _eval(exp.phi2(), x, y)


def surface_profile(exp: WaveExpansion, eps: float, x_grid=None,
                    radius: float = VALIDITY_RADIUS) -> SurfaceGrid:
    if x_grid is None:
        x_grid = scaled_grid(128)
    x = np.asarray(x_grid, dtype=float)
    keps = k_epsilon(exp, eps, radius)
    return SurfaceGrid(eta_tilde(exp, eps, x), x, X=keps * x,
                       metadata={"eps": eps, "k_star": exp.k_star, "k_eps": keps,
                                 "family": exp.family.family_index})


def potential_profile(exp: WaveExpansion, eps: float, x_grid, y_grid,
                      radius: float = VALIDITY_RADIUS) -> SurfaceGrid:
    x = np.asarray(x_grid, dtype=float)
    y = np.asarray(y_grid, dtype=float)
    keps = k_epsilon(exp, eps, radius)
    vals = phi_tilde(exp, eps, x[None, :], y[:, None])
    return SurfaceGrid(vals, x, X=keps * x, y=y,
                       metadata={"eps": eps, "k_star": exp.k_star, "k_eps": keps})


def doubly_periodic_surface(exp: WaveExpansion, eps: float, delta: float, ell: float,
                            x_grid, z_grid, radius: float = VALIDITY_RADIUS) -> SurfaceGrid:
    """Leading-order doubly periodic surface ``eta(x) + delta sinh(k*) cos x cos(ell z)``.

    ``values[j, i]`` is the elevation at ``(x[i], z[j])``.
    """
    if not ell > 0:
        raise ParameterError("ell must be positive")
    x = np.asarray(x_grid, dtype=float)
    z = np.asarray(z_grid, dtype=float)
    base = eta_tilde(exp, eps, x)
    vals = base[None, :] + delta * exp.eta1_amp * np.cos(x)[None, :] * np.cos(ell * z)[:, None]
    keps = k_epsilon(exp, eps, radius)
    return SurfaceGrid(vals, x, X=keps * x, z=z,
                       metadata={"eps": eps, "delta": delta, "ell": ell, "k_star": exp.k_star,
                                 "k_eps": keps, "z_period": 2 * np.pi / ell})


# --------------------------------------------------------------------------
# residuals of the order-by-order systems


def _residual_grids(nx, ny):
    if nx < 16 or ny < 16:
        raise ParameterError("residual grids need at least 16x16 nodes")
    x = scaled_grid(nx)
    y = np.linspace(0.0, 1.0, ny)
    return x[None, :], y[:, None], x


def residual_order1(exp: WaveExpansion, nx: int = 32, ny: int = 32) -> dict[str, float]:
    """Sup-norm residuals of the order-eps system for ``(eta_1, Phi_1)``.

    Rows: Laplace in the strip, bottom and top kinematic conditions, Bernoulli.
    """
    X, Y, x = _residual_grids(nx, ny)
    k = exp.k_star
    a, b = exp.params.alpha, exp.params.beta
    eta, phi = exp.eta1(), exp.phi1()
    laplace = k * k * _eval(_dx(_dx(phi)), X, Y) + _eval(_dy(_dy(phi)), X, Y)
    bottom = _eval(_at(_dy(phi), 0.0), x)
    top = _eval(_at(_dy(phi), 1.0), x) + k * _eval(_dx(eta), x)
    bern = a * _eval(eta, x) - k * _eval(_at(_dx(phi), 1.0), x) - b * k * k * _eval(_dx(_dx(eta)), x)
    return {name: float(np.max(np.abs(v))) for name, v in
            (("laplace", laplace), ("bottom", bottom), ("kinematic", top), ("bernoulli", bern))}


def order2_forcing(exp: WaveExpansion, X, Y, x) -> dict[str, np.ndarray]:
    """Right-hand sides of the order-eps^2 system in their reduced mode-2 form."""
    k = exp.k_star
    sh, chk = math.sinh(k), math.cosh(k)
    return {
        "laplace": k * k * sh * np.sin(2 * X) * (np.cosh(k * Y) - 1.5 * k * Y * np.sinh(k * Y)),
        "bottom": np.zeros_like(x),
        "kinematic": (k / 2 * sh * sh - k * k / 2 * sh * chk) * np.sin(2 * x),
        "bernoulli": -k * k / 4 * math.cosh(2 * k) * np.cos(2 * x) - k * k / 4,
    }


def residual_order2(exp: WaveExpansion, nx: int = 32, ny: int = 32) -> dict[str, float]:
    """Sup-norm residuals of the order-eps^2 system for ``(eta_2, Phi_2)``."""
    X, Y, x = _residual_grids(nx, ny)
    k = exp.k_star
    a, b = exp.params.alpha, exp.params.beta
    eta, phi = exp.eta2(), exp.phi2()
    rhs = order2_forcing(exp, X, Y, x)
    lhs = {
        "laplace": k * k * _eval(_dx(_dx(phi)), X, Y) + _eval(_dy(_dy(phi)), X, Y),
        "bottom": _eval(_at(_dy(phi), 0.0), x),
        "kinematic": _eval(_at(_dy(phi), 1.0), x) + k * _eval(_dx(eta), x),
        "bernoulli": (a * _eval(eta, x) - b * k * k * _eval(_dx(_dx(eta)), x)
                      - k * _eval(_at(_dx(phi), 1.0), x)),
    }
    return {name: float(np.max(np.abs(lhs[name] - rhs[name]))) for name in lhs}


def order2_forcing_products(exp: WaveExpansion, X, Y, x) -> dict[str, np.ndarray]:
    """The same forcing assembled from products of the order-eps fields.

    Independent of :func:`order2_forcing`; used to cross-check its reduction.
    """
    k = exp.k_star
    e1, p1 = exp.eta1(), exp.phi1()
    e1_, e1x, e1xx = _eval(e1, X), _eval(_dx(e1), X), _eval(_dx(_dx(e1)), X)
    p1yy = _eval(_dy(_dy(p1)), X, Y)
    p1xy = _eval(_dx(_dy(p1)), X, Y)
    p1y = _eval(_dy(p1), X, Y)
    lap = 2 * e1_ * p1yy + 2 * k * k * Y * e1x * p1xy + k * k * Y * e1xx * p1y
    s1, s1x = _eval(e1, x), _eval(_dx(e1), x)
    p1x_top, p1y_top = _eval(_at(_dx(p1), 1.0), x), _eval(_at(_dy(p1), 1.0), x)
    kin = k * k * s1x * p1x_top - k * s1 * s1x
    bern = -k * s1x * p1y_top - 0.5 * (k * k * p1x_top**2 + p1y_top**2)
    return {"laplace": lap, "bottom": np.zeros_like(x), "kinematic": kin, "bernoulli": bern}


__all__ = [
    "VALIDITY_RADIUS", "WaveFamily", "WaveExpansion", "SurfaceGrid", "wave_families",
    "c_of_kstar", "d_of_kstar", "k2_coefficient", "expand", "k_epsilon", "eta_tilde",
    "phi_tilde", "surface_profile", "potential_profile", "doubly_periodic_surface",
    "residual_order1", "residual_order2", "order2_forcing", "order2_forcing_products",
    "resonance_margin", "scaled_grid",
]
