"""Scikit-learn style front end: rows of ``(alpha, beta)`` in, features or verdicts out."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .dispersion import CURVE_TOL, DEFAULT_MMAX, FluidParams, RegionTag, classify_region
from .stability import Verdict, classify_transverse_stability

REGION_CODES = {tag: i for i, tag in enumerate(RegionTag)}
FEATURE_NAMES = ("region_code", "n_roots", "k1", "k2", "m21_family1", "m21_family2")


@dataclass(frozen=True)
class PointSummary:
    alpha: float
    beta: float
    region: str
    region_code: int
    n_roots: int
    roots: tuple[float, ...]
    verdicts: tuple[str, ...]
    m21: tuple[float, ...]


def evaluate_point(params: FluidParams, tol: float = CURVE_TOL, m_max: int = DEFAULT_MMAX,
                   k_max: float | None = None) -> PointSummary:
    """Region, roots and per-family verdicts at one parameter point."""
    region = classify_region(params, tol=tol, m_max=m_max, k_max=k_max)
    roots = region.roots.roots if region.roots is not None else ()
    verdicts: tuple[str, ...] = ()
    m21: tuple[float, ...] = ()
    if region.tag in (RegionTag.REGION_I, RegionTag.REGION_II):
        reports = classify_transverse_stability(params, tol=tol, m_max=m_max, k_max=k_max)
        verdicts = tuple(r.verdict.value for r in reports)
        m21 = tuple(r.m21_2 for r in reports)
    return PointSummary(params.alpha, params.beta, region.label, REGION_CODES[region.tag],
                        len(roots), tuple(roots), verdicts, m21)


def _validate(X) -> np.ndarray:
    X = check_array(X, dtype=float, ensure_min_features=2)
    if X.shape[1] != 2:
        raise ValueError(f"expected 2 columns (alpha, beta), got {X.shape[1]}")
    if np.any(X <= 0):
        raise ValueError("alpha and beta must be positive")
    return X


class StabilityFeatures(TransformerMixin, BaseEstimator):
    """Map ``(alpha, beta)`` rows to region code, root count, roots and coefficients.

    Missing entries (no second family, excluded regions) are NaN.
    """

    def __init__(self, tol: float = CURVE_TOL, m_max: int = DEFAULT_MMAX):
        self.tol = tol
        self.m_max = m_max

    def fit(self, X, y=None):
        X = _validate(X)
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X) -> np.ndarray:
        check_is_fitted(self, "n_features_in_")
        X = _validate(X)
        out = np.full((X.shape[0], len(FEATURE_NAMES)), np.nan)
        for i, (a, b) in enumerate(X):
            s = evaluate_point(FluidParams(a, b), self.tol, self.m_max)
            out[i, 0], out[i, 1] = s.region_code, s.n_roots
            out[i, 2:2 + len(s.roots)] = s.roots[:2]
            out[i, 4:4 + len(s.m21)] = s.m21[:2]
        return out

    def get_feature_names_out(self, input_features=None):
        return np.asarray(FEATURE_NAMES, dtype=object)


class TransverseInstabilityClassifier(ClassifierMixin, BaseEstimator):
    """Predict the transverse-stability verdict of one wave family per ``(alpha, beta)`` row.

    Rows with no such family predict ``"NoFamily"``. Nothing is learned:
    ``fit`` only validates the input and records the label set.
    """

    def __init__(self, family: int = 1, tol: float = CURVE_TOL, m_max: int = DEFAULT_MMAX):
        self.family = family
        self.tol = tol
        self.m_max = m_max

    def fit(self, X, y=None):
        if self.family not in (1, 2):
            raise ValueError("family must be 1 or 2")
        X = _validate(X)
        self.n_features_in_ = X.shape[1]
        self.classes_ = np.array(sorted([v.value for v in Verdict] + ["NoFamily"]))
        return self

    def _summaries(self, X):
        check_is_fitted(self, "classes_")
        return [evaluate_point(FluidParams(a, b), self.tol, self.m_max) for a, b in _validate(X)]

    def predict(self, X) -> np.ndarray:
        idx = self.family - 1
        return np.array([s.verdicts[idx] if len(s.verdicts) > idx else "NoFamily"
                         for s in self._summaries(X)])

    def predict_region(self, X) -> np.ndarray:
        return np.array([s.region for s in self._summaries(X)])

    def decision_function(self, X) -> np.ndarray:
        """The coefficient ``m21`` of the chosen family (negative means unstable); NaN if absent."""
        idx = self.family - 1
        return np.array([s.m21[idx] if len(s.m21) > idx else math.nan
                         for s in self._summaries(X)])
