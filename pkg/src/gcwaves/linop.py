"""Linearised operator at the trivial state, applied one Fourier mode at a time.

States are four-component vectors ``(eta, omega, Phi(y), xi(y))``; each
component is a :class:`~gcwaves.profiles.ModeComponent` so the operator acts
with exact derivatives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .dispersion import FluidParams
from .exceptions import NoImaginaryPairError, ParameterError
from .profiles import ModeComponent, Profile

ELL_FLOOR = 0.05

_NAMES = ("eta", "omega", "phi", "xi")


@dataclass(frozen=True)
class StateVector4:
    n: int
    eta: ModeComponent
    omega: ModeComponent
    phi: ModeComponent
    xi: ModeComponent

    @classmethod
    def zero(cls, n: int) -> "StateVector4":
        z = ModeComponent.zero(n)
        return cls(n, z, z, z, z)

    def components(self) -> tuple[ModeComponent, ...]:
        return (self.eta, self.omega, self.phi, self.xi)

    def __sub__(self, other: "StateVector4") -> "StateVector4":
        return StateVector4(self.n, *(a - b for a, b in zip(self.components(), other.components())))

    def parities(self) -> dict[str, frozenset[str]]:
        return {name: c.trigs for name, c in zip(_NAMES, self.components())}

    def reflected(self) -> "StateVector4":
        """Image under ``x -> -x`` combined with ``(Phi, xi) -> -(Phi, xi)``."""

        def flip(c: ModeComponent, sign: float) -> ModeComponent:
            parts = {t: p * (sign if t == "cos" else -sign) for t, p in c.parts.items()}
            return ModeComponent(c.n, parts)

        return StateVector4(self.n, flip(self.eta, 1.0), flip(self.omega, 1.0),
                            flip(self.phi, -1.0), flip(self.xi, -1.0))

    def sup_norm(self, x, y) -> float:
        """Largest absolute value of any component on the grid ``x`` by ``y``."""
        X, Y = np.asarray(x)[None, :], np.asarray(y)[:, None]
        vals = [np.max(np.abs(self.eta(x))), np.max(np.abs(self.omega(x))),
                np.max(np.abs(self.phi(X, Y))), np.max(np.abs(self.xi(X, Y)))]
        return float(max(vals))


@dataclass(frozen=True)
class L0Image:
    image: StateVector4
    bottom: ModeComponent
    top: ModeComponent

    def sup_norm(self, x, y) -> float:
        return max(self.image.sup_norm(x, y),
                   float(np.max(np.abs(self.bottom(x)))), float(np.max(np.abs(self.top(x)))))


def l0_apply(state: StateVector4, k_star: float, params: FluidParams) -> L0Image:
    """Apply the operator and return the image plus the two boundary mismatches.

    Image rows: ``omega/beta``, ``alpha eta - beta k^2 eta_xx - k Phi_x(1)``,
    ``xi``, ``-k^2 Phi_xx - Phi_yy``. Boundary data ``Phi_y + k y eta_x`` at
    ``y = 0`` and ``y = 1``.
    """
    k = k_star
    a, b = params.alpha, params.beta
    eta, omega, phi, xi = state.components()
    row1 = omega * (1.0 / b)
    row2 = eta * a - eta.dx().dx() * (b * k * k) - phi.dx().at(1.0) * k
    row4 = phi.dx().dx() * (-k * k) - phi.dy().dy()
    bottom = phi.dy().at(0.0)
    top = phi.dy().at(1.0) + eta.dx() * k
    return L0Image(StateVector4(state.n, row1, row2, xi, row4), bottom, top)


@dataclass(frozen=True)
class EigenBasis0:
    zeta0: StateVector4
    zeta_minus: StateVector4
    zeta_plus: StateVector4
    psi0: StateVector4
    psi_minus: StateVector4
    psi_plus: StateVector4

    def chains(self):
        return (("zeta0", self.zeta0, "psi0", self.psi0),
                ("zeta_minus", self.zeta_minus, "psi_minus", self.psi_minus),
                ("zeta_plus", self.zeta_plus, "psi_plus", self.psi_plus))


def eigen_basis(k_star: float, params: FluidParams) -> EigenBasis0:
    k, b = k_star, params.beta
    sh = math.sinh(k)
    ch_y = Profile.cosh(k)
    z0, z1 = ModeComponent.zero(0), ModeComponent.zero(1)
    return EigenBasis0(
        zeta0=StateVector4(0, z0, z0, ModeComponent.scalar(0, "cos", 1.0), z0),
        zeta_minus=StateVector4(1, ModeComponent.scalar(1, "sin", -sh), z1,
                                ModeComponent.field_(1, "cos", ch_y), z1),
        zeta_plus=StateVector4(1, ModeComponent.scalar(1, "cos", sh), z1,
                               ModeComponent.field_(1, "sin", ch_y), z1),
        psi0=StateVector4(0, z0, z0, z0, ModeComponent.scalar(0, "cos", 1.0)),
        psi_minus=StateVector4(1, z1, ModeComponent.scalar(1, "sin", -b * sh), z1,
                               ModeComponent.field_(1, "cos", ch_y)),
        psi_plus=StateVector4(1, z1, ModeComponent.scalar(1, "cos", b * sh), z1,
                              ModeComponent.field_(1, "sin", ch_y)),
    )


def jordan_chain_residuals(k_star: float, params: FluidParams, nx: int = 64, ny: int = 32,
                           x0: float = 0.0) -> dict[str, float]:
    """Sup-norm residuals of ``L0 zeta = 0`` and ``L0 psi = zeta`` for the three chains."""
    if nx < 32 or ny < 16:
        raise ParameterError("Jordan-chain grids need at least 32 x 16 nodes")
    x = x0 + 2 * np.pi * np.arange(nx) / nx
    y = np.linspace(0.0, 1.0, ny)
    basis = eigen_basis(k_star, params)
    out: dict[str, float] = {}
    for zname, zeta, pname, psi in basis.chains():
        out[zname] = l0_apply(zeta, k_star, params).sup_norm(x, y)
        img = l0_apply(psi, k_star, params)
        out[pname] = L0Image(img.image - zeta, img.bottom, img.top).sup_norm(x, y)
    return out


# --------------------------------------------------------------------------
# transverse spectrum


def transverse_mode_det(n: int, ell, k_star: float, params: FluidParams):
    """``(alpha + beta s^2) s sinh s - n^2 k^2 cosh s`` with ``s^2 = n^2 k^2 + ell^2``."""
    ell = np.asarray(ell, dtype=float)
    s = np.sqrt((n * k_star) ** 2 + ell * ell)
    with np.errstate(over="ignore"):
        val = (params.alpha + params.beta * s * s) * s * np.sinh(s) - (n * k_star) ** 2 * np.cosh(s)
    return float(val) if val.ndim == 0 else val


def _scaled_mode_det(n, ell, k_star, params):
    # the determinant divided by cosh(s); same zeros, no overflow
    s = np.sqrt((n * k_star) ** 2 + np.asarray(ell, dtype=float) ** 2)
    return (params.alpha + params.beta * s * s) * s * np.tanh(s) - (n * k_star) ** 2


def transverse_spectrum_scan(k_star: float, params: FluidParams, n_max: int = 5,
                             ell_max: float = 10.0, grid_density: int = 4000,
                             ell_floor: float = ELL_FLOOR) -> list[tuple[int, float]]:
    """All sign-change zeros ``(n, ell)`` of the transverse determinant with ``ell >= ell_floor``."""
    if n_max < 2 or not ell_max > ell_floor:
        raise ParameterError("need n_max >= 2 and ell_max > ell_floor")
    ell = np.linspace(ell_floor, ell_max, grid_density)
    zeros: list[tuple[int, float]] = []
    for n in range(n_max + 1):
        v = _scaled_mode_det(n, ell, k_star, params)
        if v[0] == 0.0:
            zeros.append((n, float(ell[0])))
        idx = np.nonzero(np.sign(v[:-1]) * np.sign(v[1:]) < 0)[0]
        for i in idx:
            r = brentq(lambda t: _scaled_mode_det(n, t, k_star, params), ell[i], ell[i + 1],
                       xtol=1e-14)
            zeros.append((n, float(r)))
    return zeros


# --------------------------------------------------------------------------
# reduced two-by-two model


@dataclass(frozen=True)
class ReducedMatrixModel:
    """Leading-order reduced matrix ``[[0, 1], [m21 eps^2, 0]]``."""

    m21_2: float
    eps: float

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[0.0, 1.0], [self.m21_2 * self.eps**2, 0.0]])

    @property
    def trace(self) -> float:
        return 0.0

    @property
    def det_m(self) -> float:
        return -self.m21_2 * self.eps**2

    @property
    def kind(self) -> str:
        d = self.det_m
        if d > 0:
            return "imaginary"
        if d < 0:
            return "real"
        return "nilpotent"

    @property
    def eigen_pair(self) -> tuple[complex, complex]:
        d = self.det_m
        if d > 0:
            r = math.sqrt(d)
            return complex(0.0, r), complex(0.0, -r)
        r = math.sqrt(-d)
        return complex(r, 0.0), complex(-r, 0.0)


def reduced_matrix(eps: float, m21_2: float) -> ReducedMatrixModel:
    return ReducedMatrixModel(float(m21_2), float(eps))


def ell_eps_estimate(eps: float, m21_2: float) -> float:
    """Leading-order transverse wavenumber ``|eps| sqrt(-m21)``."""
    if not m21_2 < 0:
        raise NoImaginaryPairError(
            f"m21 = {m21_2:.6g} >= 0: no purely imaginary pair at leading order")
    return abs(eps) * math.sqrt(-m21_2)
