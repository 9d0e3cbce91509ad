"""Acceptance criteria, each printed as one PASS/FAIL line at its stated tolerance."""

import io
from contextlib import redirect_stdout

import numpy as np
import pytest

from gcwaves.cli import gamma_rows, main, map_rows
from gcwaves.dispersion import (
    RegionTag,
    classify_region,
    dispersion,
    dispersion_derivative,
    gamma_alpha_beta,
    gamma_m_point,
    gamma_point,
    positive_roots,
    scaled_dispersion,
)
from gcwaves.expansion import (
    eta_tilde,
    expand,
    phi_tilde,
    residual_order1,
    residual_order2,
    scaled_grid,
)
from gcwaves.linop import jordan_chain_residuals, transverse_spectrum_scan
from gcwaves.oracle import inner_product_ledger, k2_from_solvability, solvability_residual
from gcwaves.stability import stability_report
from gcwaves.verify import expected_root_count, region_grid, transverse_zeros_expected

CURVE_S = (0.25, 0.5, 1.0, 2.0, 5.0)


def rel(a, b):
    return abs(a - b) / max(abs(a), abs(b))


@pytest.mark.xfail(strict=True, reason=(
    "resonance curve m=3 at s=5: the two terms of D(15) are ~2.4e7, so one rounding unit "
    "is ~3.7e-9 and the absolute 1e-10 bound is below double-precision resolution"))
def test_c1_curve_identities(acceptance):
    worst = 0.0
    failures = []
    for s in CURVE_S:
        p = gamma_point(s).params
        for val in (dispersion(s, p), dispersion_derivative(s, p)):
            worst = max(worst, abs(val))
            if abs(val) >= 1e-10:
                failures.append(("Gamma", s))
        for m in (2, 3, 4):
            p = gamma_m_point(m, s).params
            for val in (dispersion(s, p), dispersion(m * s, p)):
                worst = max(worst, abs(val))
                if abs(val) >= 1e-10:
                    failures.append((f"Gamma_{m}", s))
    a, b = gamma_alpha_beta(1e-3)
    limit = max(abs(a - 1.0), abs(b - 1.0 / 3.0))
    ok = not failures and limit < 1e-6
    acceptance("1 curve identities", ok,
               f"worst |D| {worst:.2e}; failing {failures}; limit-point distance {limit:.1e}")
    assert ok


def test_c2_root_region_consistency(acceptance):
    grid = region_grid(50)
    on_curve = sum(classify_region(p).tag not in (RegionTag.REGION_I, RegionTag.REGION_II,
                                                  RegionTag.NO_BIFURCATION) for p in grid)
    mismatches = sum(positive_roots(p).count != expected_root_count(p) for p in grid)
    ok = mismatches == 0 and on_curve == 0
    acceptance("2 root/region consistency", ok,
               f"50x50 grid, {mismatches} mismatches, {on_curve} on-curve cells")
    assert ok


def test_c3_four_route_agreement(acceptance, families):
    worst = max(max(stability_report(f).route_spread().values()) for f in families)
    ok = len(families) >= 100 and worst < 1e-8
    acceptance("3 four-route agreement", ok, f"{len(families)} families, worst rel {worst:.2e}")
    assert ok


def _gamma2_beta_of_alpha():
    rows = [r for r in gamma_rows(2, 0.05, 4.0, 400) if r[0] == "Gamma_2"]
    alphas = np.array([r[4] for r in rows])
    betas = np.array([r[3] for r in rows])
    return lambda a: float(np.interp(a, alphas, betas))


def test_c4_sign_theorem(acceptance, families):
    bad = []
    for f in families:
        r = stability_report(f)
        disp_sign = -np.sign(scaled_dispersion(2 * f.k_star, f.params))
        if np.sign(r.m21_2) != disp_sign:
            bad.append(("sign", f))
        roots = positive_roots(f.params).roots
        if len(roots) == 1 and not r.m21_2 < 0:
            bad.append(("region I", f))
        if len(roots) == 2:
            between = 2 * roots[0] > roots[1]
            if f.family_index == 2 and not r.m21_2 < 0:
                bad.append(("family 2", f))
            if f.family_index == 1 and (r.m21_2 < 0) != between:
                bad.append(("family 1", f))
    # flips of the family-1 verdict against the exported 2:1 polyline
    beta2 = _gamma2_beta_of_alpha()
    n_beta = 60
    rows = map_rows((1.1, 1.6, 6), (0.12, 0.3, n_beta), 1e-9, 4)
    cell = (0.3 - 0.12) / (n_beta - 1)
    flip_err = 0.0
    for a in np.linspace(1.1, 1.6, 6):
        line = [r for r in rows if r[0] == a and r[2] == "RegionII"]
        unstable = [r[5] == "TransverselyUnstable" and r[4] == "TransverselyUnstable" for r in line]
        flips = [i for i in range(1, len(line)) if unstable[i] != unstable[i - 1]]
        if len(flips) != 1:
            bad.append(("flip count", a))
            continue
        i = flips[0]
        flip_beta = 0.5 * (line[i - 1][1] + line[i][1])
        flip_err = max(flip_err, abs(flip_beta - beta2(a)) / cell)
    ok = not bad and flip_err <= 1.0
    acceptance("4 sign theorem", ok, f"{len(bad)} violations, verdict flip within "
               f"{flip_err:.2f} cells of the 2:1 polyline")
    assert ok


def test_c5_solvability_oracle(acceptance, families):
    res = k2 = 0.0
    for f in families:
        e = expand(f)
        res = max(res, solvability_residual(f, e.k2, relative=True))
        k2 = max(k2, rel(k2_from_solvability(f), e.k2))
    ok = res < 1e-10 and k2 < 1e-9
    acceptance("5 solvability oracle", ok, f"relative residual {res:.2e}, k2 mismatch {k2:.2e}")
    assert ok


def test_c6_inner_product_oracle(acceptance, families):
    den = rec = 0.0
    for f in families:
        r = stability_report(f)
        led = inner_product_ledger(f, r.k2)
        den = max(den, led.denom_rel_diff)
        rec = max(rec, rel(led.reconstructed_m21, r.m21_2))
    ok = den < 1e-12 and rec < 1e-10
    acceptance("6 inner-product oracle", ok, f"denominator {den:.2e}, reconstruction {rec:.2e}")
    assert ok


def test_c7_jordan_chains(acceptance, families):
    worst = max(max(jordan_chain_residuals(f.k_star, f.params, 64, 32).values())
                for f in families[:20])
    ok = worst < 1e-10
    acceptance("7a Jordan chains (20 samples, 64x32)", ok, f"worst {worst:.2e}")
    assert ok


@pytest.mark.xfail(strict=True, reason=(
    "for family 1 with 2 k1 < k2 the n=2 transverse determinant changes sign: it equals "
    "2 k1 D(2 k1) < 0 at ell=0 and grows like cosh, so a zero with ell > 0.05 exists"))
def test_c7_transverse_scan_literal(acceptance, families):
    hits = [f for f in families
            if transverse_spectrum_scan(f.k_star, f.params, n_max=5, ell_max=10.0)]
    ok = not hits
    acceptance("7b transverse scan, no zeros on every sample", ok,
               f"{len(hits)} of {len(families)} families have zeros; all are family 1 with "
               f"2k1<k2: {all(transverse_zeros_expected(f) for f in hits)}")
    assert ok


def test_c7_transverse_scan_characterised(acceptance, families):
    bad = 0
    for f in families:
        zeros = transverse_spectrum_scan(f.k_star, f.params, n_max=5, ell_max=10.0)
        if transverse_zeros_expected(f):
            bad += not zeros or any(n < 2 for n, _ in zeros)
        else:
            bad += bool(zeros)
    ok = bad == 0
    acceptance("7c transverse scan, zeros exactly for family 1 left of the 2:1 curve", ok,
               f"{bad} violations")
    assert ok


def test_c8_expansion_residuals_and_symmetry(acceptance, families):
    worst = 0.0
    exact = True
    shift = 0.0
    x = scaled_grid(64)
    y = np.linspace(0.0, 1.0, 17)
    for f in families:
        e = expand(f)
        worst = max(worst, *residual_order1(e).values(), *residual_order2(e).values())
        for eps in (0.15, -0.07):
            exact &= bool(np.array_equal(eta_tilde(e, eps, x), eta_tilde(e, eps, -x)))
            exact &= bool(np.array_equal(phi_tilde(e, eps, x[None, :], y[:, None]),
                                         -phi_tilde(e, eps, -x[None, :], y[:, None])))
            xs = x + np.pi
            amp = abs(eps) * e.eta1_amp + eps * eps * (abs(e.eta2_amp) + abs(e.eta2_mean))
            # rounding budget: a few units of the amplitude plus the rounding of x + pi
            # propagated through cos x and cos 2x
            slope = abs(eps) * e.eta1_amp + 2 * eps * eps * abs(e.eta2_amp)
            budget = 4 * np.spacing(amp) + slope * np.spacing(np.max(np.abs(xs)))
            d = np.max(np.abs(eta_tilde(e, eps, x) - eta_tilde(e, -eps, xs)))
            shift = max(shift, float(d / budget))
    ok = worst < 1e-10 and exact and shift <= 1
    acceptance("8 expansion residuals and symmetries", ok,
               f"worst residual {worst:.2e}; even/odd exact {exact}; half-period shift "
               f"at {shift:.2f} of its rounding budget")
    assert ok


def _capture(argv):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main(argv)
    return code, buf.getvalue().encode()


def test_c9_determinism(acceptance, tmp_path):
    v1 = _capture(["verify", "--json"])
    v2 = _capture(["verify", "--json"])
    m_args = ["map", "--alpha-range", "0.2", "2.4", "12", "--beta-range", "0.05", "1.5", "12"]
    m1 = _capture(m_args)
    m2 = _capture(m_args)
    ok = v1 == v2 and m1 == m2 and v1[0] == 0 and m1[0] == 0
    acceptance("9 determinism (verify, map)", ok,
               f"verify identical {v1 == v2}, map identical {m1 == m2}")
    assert ok
