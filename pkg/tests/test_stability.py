import logging
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gcwaves.dispersion import (
    FluidParams,
    beta_gamma_m_of_alpha,
    beta_gamma_of_alpha,
    gamma_m_point,
    positive_roots,
    scaled_dispersion,
)
from gcwaves.exceptions import RegionError, ResonanceError
from gcwaves.expansion import WaveFamily, wave_families
from gcwaves.stability import (
    Sign,
    Verdict,
    a_coefficients,
    chi_davey_stewartson,
    classify_transverse_stability,
    m21_tilde_direct,
    m21_tilde_from_chi,
    m21_tilde_sigma,
    m21_via_k2,
    sign_via_dispersion,
    stability_report,
    tilde_to_m21,
)

# 40-digit reference value at (alpha, beta) = (0.5, 1)
M21_REF = -1.3210771705671198


def test_reference_report(ref_params):
    (r,) = classify_transverse_stability(ref_params)
    assert r.m21_2 == pytest.approx(M21_REF, rel=1e-12)
    assert r.verdict is Verdict.UNSTABLE and r.sign is Sign.NEGATIVE
    assert r.ell_coeff == pytest.approx(math.sqrt(-M21_REF))
    assert 0 < r.sigma < 1 and r.t_tilde > 0


def test_m21_via_k2_linear(ref_params):
    f = wave_families(ref_params)[0]
    assert m21_via_k2(f, 0.0) == 0.0
    assert m21_via_k2(f, 2.0) == pytest.approx(2 * m21_via_k2(f, 1.0))
    assert math.copysign(1, m21_via_k2(f, -1.0)) == -math.copysign(1, m21_via_k2(f, 1.0))


def test_a_coefficients():
    assert a_coefficients(0.0) == (9.0, 36.0, 33.0, 6.0)
    grid = np.linspace(0, 1, 10_001)[1:-1]
    for a in a_coefficients(grid):
        assert np.all(a > 0)


def test_four_routes_agree(families):
    assert len(families) >= 100
    for f in families:
        r = stability_report(f)
        assert max(r.route_spread().values()) < 1e-8, f


def test_sign_coherence(families):
    for f in families:
        r = stability_report(f)
        expected = sign_via_dispersion(f)
        for name, v in r.route_values().items():
            assert (v < 0) == (expected is Sign.NEGATIVE), (f, name)
        assert math.copysign(1, r.chi_ds) == math.copysign(1, r.m21_tilde_direct)
        assert (r.verdict is Verdict.UNSTABLE) == (r.sign is Sign.NEGATIVE)


def test_region_i_negative(region_i):
    for p in region_i:
        (r,) = classify_transverse_stability(p)
        assert r.m21_2 < 0 and r.verdict is Verdict.UNSTABLE
        assert sign_via_dispersion(r.family) is Sign.NEGATIVE


def test_region_ii_verdicts(region_ii):
    for p in region_ii:
        r1, r2 = classify_transverse_stability(p)
        k1, k2 = positive_roots(p).roots
        assert r2.verdict is Verdict.UNSTABLE
        expected = Verdict.UNSTABLE if 2 * k1 > k2 else Verdict.INCONCLUSIVE
        assert r1.verdict is expected


def test_between_gamma2_and_gamma_both_unstable():
    a = 1.4
    b = 0.5 * (beta_gamma_of_alpha(a) + beta_gamma_m_of_alpha(2, a))
    assert all(r.verdict is Verdict.UNSTABLE for r in classify_transverse_stability(FluidParams(a, b)))
    b_left = 0.9 * beta_gamma_m_of_alpha(2, a)
    r1, r2 = classify_transverse_stability(FluidParams(a, b_left))
    assert r1.verdict is Verdict.INCONCLUSIVE and r1.sign is Sign.POSITIVE
    assert r2.verdict is Verdict.UNSTABLE


def test_boundary_flip_tracks_root_geometry():
    a = 1.3
    b2 = beta_gamma_m_of_alpha(2, a)
    for b in np.linspace(b2 - 5e-3, b2 + 5e-3, 101):
        p = FluidParams(a, float(b))
        if abs(b - b2) < 1e-6:
            continue
        k1, k2 = positive_roots(p).roots
        r1 = classify_transverse_stability(p)[0]
        assert (r1.verdict is Verdict.UNSTABLE) == (2 * k1 > k2)


def test_direct_route_diverges_near_gamma2():
    a = 1.3
    b2 = beta_gamma_m_of_alpha(2, a)
    mags = []
    for d in (1e-2, 1e-3, 1e-4):
        p = FluidParams(a, b2 * (1 - d))
        mags.append(abs(m21_tilde_direct(WaveFamily(positive_roots(p).roots[0], p, 1))))
    assert mags[0] < mags[1] < mags[2]
    assert mags[2] > 50 * mags[0]


def test_resonant_family_reported():
    cs = gamma_m_point(2, 1.1)
    fam = WaveFamily(1.1, cs.params, 1)
    assert sign_via_dispersion(fam) is Sign.NEAR_ZERO
    r = stability_report(fam)
    assert r.verdict is Verdict.RESONANT and math.isnan(r.m21_2) and r.ell_coeff is None
    for fn in (m21_tilde_sigma, chi_davey_stewartson, m21_tilde_direct):
        with pytest.raises(ResonanceError):
            fn(fam)


def test_outside_regions_rejected():
    with pytest.raises(RegionError) as err:
        classify_transverse_stability(FluidParams(2.0, 1.0))
    assert err.value.region.label == "NoBifurcation"
    with pytest.raises(RegionError):
        classify_transverse_stability(gamma_m_point(2, 1.0).params)


def test_large_k_skips_sigma_routes(caplog):
    p = FluidParams(2.0, 0.02)
    with caplog.at_level(logging.INFO, logger="gcwaves.stability"):
        r1, r2 = classify_transverse_stability(p)
    assert r2.family.k_star > 15
    assert math.isnan(r2.m21_tilde_sigma) and math.isnan(r2.chi_ds)
    assert r2.verdict is Verdict.UNSTABLE
    assert "skipped" in caplog.text
    assert r1.route_spread()["via_k2|direct"] < 1e-10


@given(a=st.floats(0.05, 0.95), b=st.floats(0.3, 3.0))
def test_conversion_and_chi_identities(a, b):
    f = wave_families(FluidParams(a, b))[0]
    direct = m21_tilde_direct(f)
    assert m21_tilde_sigma(f) == pytest.approx(direct, rel=1e-9)
    assert m21_tilde_from_chi(f, chi_davey_stewartson(f)) == pytest.approx(direct, rel=1e-8)
    assert tilde_to_m21(f, direct) == pytest.approx(stability_report(f).m21_via_k2, rel=1e-9)
    assert scaled_dispersion(2 * f.k_star, f.params) > 0
