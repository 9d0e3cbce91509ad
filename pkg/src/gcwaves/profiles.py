"""Closed-form y-profiles and single-Fourier-mode fields on the strip.

Every vertical profile that appears in the small-amplitude wave and in the
kernel of the linearised operator is a finite sum of terms

    coef * y**power * cosh(rate * y)   or   coef * y**power * sinh(rate * y),

a family closed under differentiation. Keeping them symbolic lets every
residual be computed with exact derivatives, so residuals sit at roundoff.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

_KINDS = ("cosh", "sinh")
TRIGS = ("cos", "sin")


@dataclass(frozen=True)
class Term:
    coef: float
    power: int
    kind: str
    rate: float

    def __call__(self, y):
        y = np.asarray(y, dtype=float)
        f = np.cosh if self.kind == "cosh" else np.sinh
        return self.coef * y**self.power * f(self.rate * y)


@dataclass(frozen=True)
class Profile:
    """A finite sum of :class:`Term` objects, callable on arrays of ``y``."""

    terms: tuple[Term, ...] = ()

    @classmethod
    def constant(cls, value: float) -> "Profile":
        return cls((Term(float(value), 0, "cosh", 0.0),)) if value else cls()

    @classmethod
    def cosh(cls, rate: float, coef: float = 1.0, power: int = 0) -> "Profile":
        return cls((Term(float(coef), power, "cosh", float(rate)),))

    @classmethod
    def sinh(cls, rate: float, coef: float = 1.0, power: int = 0) -> "Profile":
        return cls((Term(float(coef), power, "sinh", float(rate)),))

    def __call__(self, y):
        y = np.asarray(y, dtype=float)
        out = np.zeros_like(y)
        for t in self.terms:
            out = out + t(y)
        return out

    def derivative(self) -> "Profile":
        out: list[Term] = []
        for t in self.terms:
            if t.power:
                out.append(Term(t.coef * t.power, t.power - 1, t.kind, t.rate))
            # d/dy cosh(ay) = a sinh(ay); the sinh(0) term vanishes identically
            if t.rate:
                other = "sinh" if t.kind == "cosh" else "cosh"
                out.append(Term(t.coef * t.rate, t.power, other, t.rate))
        return Profile(tuple(out))

    def __add__(self, other: "Profile") -> "Profile":
        return Profile(self.terms + other.terms)

    def __neg__(self) -> "Profile":
        return self * -1.0

    def __sub__(self, other: "Profile") -> "Profile":
        return self + (-other)

    def __mul__(self, scalar: float) -> "Profile":
        return Profile(tuple(Term(t.coef * scalar, t.power, t.kind, t.rate) for t in self.terms))

    __rmul__ = __mul__

    def at(self, y0: float) -> "Profile":
        """Freeze the profile at ``y = y0`` (a constant profile)."""
        return Profile.constant(float(self(y0)))


@dataclass(frozen=True)
class ModeComponent:
    """A field ``sum_trig profile_trig(y) * trig(n x)`` in a single Fourier mode ``n``.

    Scalar (surface) components simply carry constant profiles.
    """

    n: int
    parts: Mapping[str, Profile] = field(default_factory=dict)

    @classmethod
    def zero(cls, n: int) -> "ModeComponent":
        return cls(n, {})

    @classmethod
    def scalar(cls, n: int, trig: str, amp: float) -> "ModeComponent":
        return cls(n, {trig: Profile.constant(amp)})

    @classmethod
    def field_(cls, n: int, trig: str, profile: Profile) -> "ModeComponent":
        return cls(n, {trig: profile})

    @property
    def trigs(self) -> frozenset[str]:
        return frozenset(t for t, p in self.parts.items() if p.terms)

    def _combine(self, other: "ModeComponent", sign: float) -> "ModeComponent":
        if self.n != other.n and self.parts and other.parts:
            raise ValueError("cannot add components from different Fourier modes")
        parts = dict(self.parts)
        for trig, prof in other.parts.items():
            prof = prof * sign
            parts[trig] = parts[trig] + prof if trig in parts else prof
        return ModeComponent(self.n if self.parts else other.n, parts)

    def __add__(self, other: "ModeComponent") -> "ModeComponent":
        return self._combine(other, 1.0)

    def __sub__(self, other: "ModeComponent") -> "ModeComponent":
        return self._combine(other, -1.0)

    def __mul__(self, scalar: float) -> "ModeComponent":
        return ModeComponent(self.n, {t: p * scalar for t, p in self.parts.items()})

    __rmul__ = __mul__

    def dx(self) -> "ModeComponent":
        # d/dx cos(nx) = -n sin(nx), d/dx sin(nx) = n cos(nx)
        parts: dict[str, Profile] = {}
        if "cos" in self.parts:
            parts["sin"] = self.parts["cos"] * (-self.n)
        if "sin" in self.parts:
            parts["cos"] = self.parts["sin"] * self.n
        return ModeComponent(self.n, parts)

    def dy(self) -> "ModeComponent":
        return ModeComponent(self.n, {t: p.derivative() for t, p in self.parts.items()})

    def at(self, y0: float) -> "ModeComponent":
        return ModeComponent(self.n, {t: p.at(y0) for t, p in self.parts.items()})

    def __call__(self, x, y=0.0):
        """Evaluate on broadcast arrays ``x`` and ``y``."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        out = np.zeros(np.broadcast(x, y).shape)
        for trig, prof in self.parts.items():
            basis = np.cos(self.n * x) if trig == "cos" else np.sin(self.n * x)
            out = out + prof(y) * basis
        return out
