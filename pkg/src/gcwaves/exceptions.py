class GCWavesError(Exception):
    """Base class for errors raised by this package."""


class ParameterError(GCWavesError, ValueError):
    """Invalid physical or numerical parameters."""


class RootSearchError(GCWavesError, RuntimeError):
    """The root scan could not resolve the roots (parameters too close to the double-root curve)."""


class ResonanceError(GCWavesError, ArithmeticError):
    """Second-harmonic resonance: the dispersion relation vanishes at twice the carrier wavenumber."""


class DegenerateError(GCWavesError, ArithmeticError):
    """A closed form has a vanishing denominator or an affine solve has zero slope."""


class RegionError(GCWavesError, ValueError):
    """Parameters lie outside the regions where the wave families are defined.

    The offending region classification is available as ``region``.
    """

    def __init__(self, message, region=None):
        super().__init__(message)
        self.region = region


class NoImaginaryPairError(GCWavesError, ValueError):
    """The leading-order reduced matrix has no purely imaginary eigenvalue pair."""
