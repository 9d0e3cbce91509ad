"""Transverse instability of two-dimensional gravity-capillary periodic water waves."""

__version__ = "0.1.0"

from .dispersion import (
    FluidParams,
    RegionTag,
    beta_gamma_of_alpha,
    classify_region,
    dispersion,
    gamma_m_point,
    gamma_point,
    positive_roots,
)
from .estimator import StabilityFeatures, TransverseInstabilityClassifier
from .expansion import WaveFamily, expand, wave_families
from .stability import Verdict, classify_transverse_stability

__all__ = [
    "FluidParams", "RegionTag", "beta_gamma_of_alpha", "classify_region", "dispersion",
    "gamma_m_point", "gamma_point", "positive_roots", "StabilityFeatures",
    "TransverseInstabilityClassifier", "WaveFamily", "expand", "wave_families", "Verdict",
    "classify_transverse_stability", "__version__",
]
