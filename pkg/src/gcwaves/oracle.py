"""Quadrature oracles for the third-order compatibility condition and the inner-product ledger.

Both oracles avoid the closed-form algebra they check: ``k2`` is recovered
from an affine solve of the compatibility identity, and the ledger integrals
are evaluated by tensor Gauss-Legendre quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .exceptions import DegenerateError, ParameterError
from .expansion import WaveFamily, c_of_kstar

DEFAULT_QUAD = 64


@lru_cache(maxsize=32)
def _nodes(order: int, lo: float, hi: float) -> tuple[np.ndarray, np.ndarray]:
    if order < 16:
        raise ParameterError("quadrature order must be at least 16")
    t, w = np.polynomial.legendre.leggauss(order)
    half = 0.5 * (hi - lo)
    return lo + half * (t + 1.0), half * w


@dataclass(frozen=True)
class SolvabilityData:
    """Mode-1 forcing of the third-order system; every piece is affine in ``k2``."""

    family: WaveFamily
    c_k: float

    def F3(self, y, k2: float):
        k, a, c = self.family.k_star, self.family.params.alpha, self.c_k
        sh = math.sinh(k)
        y = np.asarray(y, dtype=float)
        return ((k * k * sh * sh / 4 - k**4 / (2 * a) - k**3 / 4 * (c + 1) * math.sinh(2 * k)
                 + 2 * k * k2) * np.cosh(k * y)
                + k**3 * sh * sh / 2 * y * np.sinh(k * y)
                + k**3 * c * sh * np.cosh(2 * k * y)
                + 3 * k**4 * c * sh / 4 * y * np.sinh(2 * k * y))

    def f3(self, k2: float) -> float:
        k, a, c = self.family.k_star, self.family.params.alpha, self.c_k
        return (-k * k * c / 16 * math.cosh(k)
                + (-k**3 * c / 4 + k**3 / 16 - k**3 / (4 * a) + k2) * math.sinh(k)
                + k * k * c / 16 * math.cosh(3 * k) - 3 / 16 * k**3 * math.sinh(3 * k))

    def g3(self, k2: float) -> float:
        k, b, c = self.family.k_star, self.family.params.beta, self.c_k
        return ((k**3 / 16 - k**3 * c / 4 + k2) * math.cosh(k)
                + (-9 / 32 * b * k**4 - 2 * b * k * k2) * math.sinh(k)
                - k**3 / 16 * math.cosh(3 * k) + 3 / 32 * b * k**4 * math.sinh(3 * k))


def solvability_data(family: WaveFamily) -> SolvabilityData:
    return SolvabilityData(family, c_of_kstar(family))


def _solvability_terms(data: SolvabilityData, k2: float, quad_order: int):
    k = data.family.k_star
    y, w = _nodes(quad_order, 0.0, 1.0)
    boundary = data.f3(k2) * math.cosh(k) + data.g3(k2) * math.sinh(k)
    integrand = data.F3(y, k2) * np.cosh(k * y)
    return boundary, float(np.dot(w, integrand)), float(np.dot(w, np.abs(integrand)))


def solvability_residual(family: WaveFamily, k2: float, quad_order: int = DEFAULT_QUAD,
                         relative: bool = False) -> float:
    """``|f3 cosh k + g3 sinh k - int_0^1 F3 cosh(k y) dy|``.

    With ``relative`` the residual is divided by the sum of the absolute sizes
    of the three contributions.
    """
    data = solvability_data(family)
    boundary, integral, abs_integral = _solvability_terms(data, k2, quad_order)
    res = abs(boundary - integral)
    if relative:
        k = family.k_star
        scale = (abs(data.f3(k2) * math.cosh(k)) + abs(data.g3(k2) * math.sinh(k))
                 + abs_integral)
        return res / scale if scale else res
    return res


def k2_from_solvability(family: WaveFamily, quad_order: int = DEFAULT_QUAD) -> float:
    """The ``k2`` that zeroes the compatibility identity (two-point affine solve)."""
    data = solvability_data(family)

    def signed(k2):
        b, i, _ = _solvability_terms(data, k2, quad_order)
        return b - i

    r0, r1 = signed(0.0), signed(1.0)
    slope = r1 - r0
    if abs(slope) <= 1e-14 * max(abs(r0), abs(r1), 1.0):
        raise DegenerateError("compatibility identity does not depend on k2")
    return -r0 / slope


@dataclass(frozen=True)
class InnerProductLedger:
    denom: float
    denom_closed: float
    lhs_term: float
    duk_term: float
    duk_closed: float
    reconstructed_m21: float

    @property
    def denom_rel_diff(self) -> float:
        return abs(self.denom - self.denom_closed) / abs(self.denom_closed)


def denom_closed_form(k: float, beta: float) -> float:
    return math.pi * (0.5 + math.cosh(k) * math.sinh(k) / (2 * k) + beta * math.sinh(k) ** 2)


def inner_product_ledger(family: WaveFamily, k2: float,
                         quad_order: int = DEFAULT_QUAD) -> InnerProductLedger:
    """Scalar products that assemble the reduced coefficient from ``k2``.

    The adjoint kernel vector is ``(0, sinh k cos x, 0, cosh(k y) sin x)``;
    products are L2 over the surface components on ``(0, 2 pi)`` plus the
    interior components on ``(0, 2 pi) x (0, 1)``.
    """
    k, b = family.k_star, family.params.beta
    sh, ch = math.sinh(k), math.cosh(k)
    x, wx = _nodes(quad_order, 0.0, 2 * math.pi)
    y, wy = _nodes(quad_order, 0.0, 1.0)
    X, Y = np.meshgrid(x, y, indexing="xy")
    W = np.outer(wy, wx)

    adj_surface = sh * np.cos(x)
    adj_interior = np.cosh(k * Y) * np.sin(X)

    # generalised eigenvector: omega = beta sinh k cos x, xi = cosh(k y) sin x
    denom = (np.dot(wx, b * sh * np.cos(x) * adj_surface)
             + np.sum(W * np.cosh(k * Y) * np.sin(X) * adj_interior))

    # second derivative of the vector field in (U, k) applied to (U1, k2)
    eta1_xx = -sh * np.cos(x)
    phi1_x_top = ch * np.cos(x)
    phi1_xx = -np.cosh(k * Y) * np.sin(X)
    duk_surface = k2 * (-2 * b * k * eta1_xx - phi1_x_top)
    duk_interior = k2 * (-2 * k * phi1_xx)
    duk = np.dot(wx, duk_surface * adj_surface) + np.sum(W * duk_interior * adj_interior)

    lhs = math.pi * k2 * math.sinh(2 * k)
    duk_closed = math.pi * k2 * (2 * b * k * sh * sh + k)
    return InnerProductLedger(float(denom), denom_closed_form(k, b), lhs, float(duk), duk_closed,
                              float((lhs - 2 * duk) / denom))
