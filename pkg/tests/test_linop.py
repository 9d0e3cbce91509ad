import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.optimize import brentq

from gcwaves.dispersion import FluidParams, dispersion, positive_roots
from gcwaves.exceptions import NoImaginaryPairError, ParameterError
from gcwaves.linop import (
    eigen_basis,
    ell_eps_estimate,
    jordan_chain_residuals,
    l0_apply,
    reduced_matrix,
    transverse_mode_det,
    transverse_spectrum_scan,
)
from gcwaves.verify import transverse_zeros_expected

X = 2 * np.pi * np.arange(64) / 64
Y = np.linspace(0, 1, 32)


@pytest.fixture
def ref(ref_params):
    return positive_roots(ref_params).roots[0], ref_params


def test_kernel_vectors(ref):
    k, p = ref
    basis = eigen_basis(k, p)
    for zeta in (basis.zeta0, basis.zeta_minus, basis.zeta_plus):
        assert l0_apply(zeta, k, p).sup_norm(X, Y) < 1e-13


def test_psi_plus_maps_to_zeta_plus(ref):
    k, p = ref
    basis = eigen_basis(k, p)
    img = l0_apply(basis.psi_plus, k, p)
    np.testing.assert_allclose(img.image.eta(X), basis.zeta_plus.eta(X), atol=1e-15)
    np.testing.assert_allclose(img.image.phi(X[None, :], Y[:, None]),
                               basis.zeta_plus.phi(X[None, :], Y[:, None]), atol=1e-15)
    assert np.max(np.abs(img.image.omega(X))) < 1e-15


def test_parity_blocks_preserved(ref):
    k, p = ref
    basis = eigen_basis(k, p)
    for state in (basis.zeta_plus, basis.psi_plus, basis.zeta_minus, basis.psi_minus):
        img = l0_apply(state, k, p).image
        before, after = state.parities(), img.parities()
        # eta/omega rows share parity with eta/omega, phi/xi rows with phi/xi
        surface = before["eta"] | before["omega"] | before["phi"] | before["xi"]
        for name in ("eta", "omega", "phi", "xi"):
            assert after[name] <= surface


def test_reflection_signs(ref):
    k, p = ref
    b = eigen_basis(k, p)

    def same(u, v, sign):
        return all(np.allclose(cu(X, 0.4), sign * cv(X, 0.4))
                   for cu, cv in zip(u.components(), v.components()))

    assert same(b.zeta_plus.reflected(), b.zeta_plus, 1)
    assert same(b.zeta_minus.reflected(), b.zeta_minus, -1)
    assert same(b.zeta0.reflected(), b.zeta0, -1)
    # the reflection commutes with the operator, so each chain shares one sign
    assert same(b.psi_plus.reflected(), b.psi_plus, 1)
    assert same(b.psi_minus.reflected(), b.psi_minus, -1)
    assert same(b.psi0.reflected(), b.psi0, -1)


def test_jordan_chains_on_samples(families):
    for f in families[:20] + families[-20:]:
        r = jordan_chain_residuals(f.k_star, f.params, 64, 32)
        assert set(r) == {"zeta0", "psi0", "zeta_minus", "psi_minus", "zeta_plus", "psi_plus"}
        assert max(r.values()) < 1e-10


def test_detuned_chain(ref):
    k, p = ref
    r = jordan_chain_residuals(k + 0.05, p)
    assert r["zeta_plus"] == pytest.approx(abs(dispersion(k + 0.05, p)), rel=1e-10)
    assert r["zeta0"] == 0 and r["psi0"] == 0


def test_translation_invariance_of_constant_modes(ref):
    k, p = ref
    a = jordan_chain_residuals(k, p, x0=0.0)
    b = jordan_chain_residuals(k, p, x0=1.234)
    assert a["zeta0"] == b["zeta0"] and a["psi0"] == b["psi0"]
    with pytest.raises(ParameterError):
        jordan_chain_residuals(k, p, nx=16)


def test_mode_det_examples(ref):
    k, p = ref
    assert transverse_mode_det(1, 0.0, k, p) == pytest.approx(k * dispersion(k, p), abs=1e-14)
    ell = 1.3
    assert transverse_mode_det(0, ell, k, p) == pytest.approx(
        (p.alpha + p.beta * ell**2) * ell * math.sinh(ell))
    assert transverse_mode_det(0, ell, k, p) > 0
    d2 = transverse_mode_det(2, 0.0, k, p)
    assert d2 == pytest.approx(2 * k * dispersion(2 * k, p))
    assert d2 > 0


@given(n=st.integers(0, 5), ell=st.floats(0, 5), a=st.floats(0.1, 3), b=st.floats(0.1, 3),
       k=st.floats(0.1, 3))
def test_mode_det_identity(n, ell, a, b, k):
    p = FluidParams(a, b)
    s = math.hypot(n * k, ell)
    assert transverse_mode_det(n, ell, k, p) == pytest.approx(
        s * dispersion(s, p) + ell**2 * math.cosh(s), rel=1e-9, abs=1e-9)


def test_scan_region_i(region_i):
    for p in region_i:
        k = positive_roots(p).roots[0]
        assert transverse_spectrum_scan(k, p, n_max=5, ell_max=10) == []


def test_scan_characterisation_region_ii(families):
    for f in families:
        zeros = transverse_spectrum_scan(f.k_star, f.params)
        if transverse_zeros_expected(f):
            assert zeros and all(n >= 2 for n, _ in zeros)
        else:
            assert zeros == []


def test_scan_finds_constructed_zero():
    p = FluidParams(1.2, 0.2)
    k1 = positive_roots(p).roots[0]
    zeros = transverse_spectrum_scan(k1, p)
    n, ell = zeros[0]
    assert n == 2
    # bisection oracle on the n = 2 branch
    ref = brentq(lambda t: transverse_mode_det(2, t, k1, p), 0.05, 2.0, xtol=1e-14)
    assert ell == pytest.approx(ref, rel=1e-10)
    with pytest.raises(ParameterError):
        transverse_spectrum_scan(k1, p, n_max=1)


def test_reduced_matrix():
    m0 = reduced_matrix(0.0, -2.0)
    np.testing.assert_array_equal(m0.matrix, [[0, 1], [0, 0]])
    assert m0.kind == "nilpotent" and m0.eigen_pair == (0j, 0j)
    m = reduced_matrix(0.1, -2.0)
    assert m.kind == "imaginary"
    lam = m.eigen_pair
    assert lam[0].real == 0 and abs(lam[0].imag) == pytest.approx(0.1 * math.sqrt(2))
    np.testing.assert_allclose(sorted(np.linalg.eigvals(m.matrix), key=lambda z: z.imag),
                               sorted(lam, key=lambda z: z.imag), atol=1e-15)
    assert reduced_matrix(0.1, 3.0).kind == "real"


@given(eps=st.floats(-0.5, 0.5).filter(lambda e: abs(e) > 1e-6), m21=st.floats(-10, 10).filter(lambda v: abs(v) > 1e-6))
def test_reduced_trichotomy(eps, m21):
    m = reduced_matrix(eps, m21)
    assert np.trace(m.matrix) == 0
    assert m.det_m == pytest.approx(np.linalg.det(m.matrix), abs=1e-15)
    assert (m.kind == "imaginary") == (m21 < 0)


def test_ell_estimate():
    assert ell_eps_estimate(0.0, -2.0) == 0.0
    assert ell_eps_estimate(0.1, -2.0) == ell_eps_estimate(-0.1, -2.0) == pytest.approx(0.1 * math.sqrt(2))
    with pytest.raises(NoImaginaryPairError):
        ell_eps_estimate(0.1, 0.5)
