"""The built-in verification suite behind ``gcwaves verify``."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dispersion import (
    FluidParams,
    RegionTag,
    beta_gamma_of_alpha,
    classify_region,
    dispersion,
    dispersion_derivative,
    gamma_alpha_beta,
    gamma_m_point,
    gamma_point,
    positive_roots,
)
from .expansion import (
    eta_tilde,
    expand,
    phi_tilde,
    residual_order1,
    residual_order2,
    scaled_grid,
)
from .linop import jordan_chain_residuals, transverse_spectrum_scan
from .oracle import inner_product_ledger, k2_from_solvability, solvability_residual
from .samples import sample_families
from .stability import Sign, a_coefficients, sign_via_dispersion, stability_report

CURVE_S = (0.25, 0.5, 1.0, 2.0, 5.0)


@dataclass
class Check:
    name: str
    passed: bool
    worst: float
    threshold: float
    detail: str = ""

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "worst": self.worst,
                "threshold": self.threshold, "detail": self.detail}


@dataclass
class VerifyResult:
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failed(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {"passed": self.passed, "checks": [c.to_dict() for c in self.checks]}


def _rel(a: float, b: float) -> float:
    scale = max(abs(a), abs(b))
    return abs(a - b) / scale if scale else 0.0


def _cancellation_scale(k: float, p: FluidParams) -> float:
    # size of the two terms whose difference is D(k)
    return (p.alpha + p.beta * k * k) * math.sinh(k) + k * math.cosh(k)


def check_curves(tol: float) -> Check:
    """Curve identities relative to the size of the cancelling terms."""
    worst = 0.0
    for s in CURVE_S:
        p = gamma_point(s).params
        worst = max(worst, abs(dispersion(s, p)) / _cancellation_scale(s, p),
                    abs(dispersion_derivative(s, p)) / _cancellation_scale(s, p))
        for m in (2, 3, 4):
            p = gamma_m_point(m, s).params
            worst = max(worst, abs(dispersion(s, p)) / _cancellation_scale(s, p),
                        abs(dispersion(m * s, p)) / _cancellation_scale(m * s, p))
    limit = max(abs(a - b) for a, b in zip(gamma_alpha_beta(1e-3), (1.0, 1.0 / 3.0)))
    return Check("curve_identities", worst < tol and limit < 1e-6, worst, tol,
                 f"limit-point distance {limit:.3g}")


def region_grid(n: int = 50) -> list[FluidParams]:
    """Cell-centred ``n x n`` grid on ``(0, 1.5] x (0, 2.5]`` in ``(beta, alpha)``."""
    betas = 1.5 * (np.arange(n) + 0.5) / n
    alphas = 2.5 * (np.arange(n) + 0.5) / n
    return [FluidParams(float(a), float(b)) for a in alphas for b in betas]


def expected_root_count(p: FluidParams) -> int | None:
    if p.alpha < 1:
        return 1
    bg = beta_gamma_of_alpha(p.alpha)
    return 2 if p.beta < bg else 0


def check_root_counts(n: int = 50) -> Check:
    mismatches = 0
    for p in region_grid(n):
        if positive_roots(p).count != expected_root_count(p):
            mismatches += 1
    return Check("root_region_consistency", mismatches == 0, float(mismatches), 0.0,
                 f"{n}x{n} grid")


def check_routes(families, tol: float) -> Check:
    worst = 0.0
    for f in families:
        r = stability_report(f)
        worst = max(worst, max(r.route_spread().values()))
    return Check("four_route_agreement", worst < tol, worst, tol, f"{len(families)} families")


def check_signs(families) -> Check:
    bad = 0
    for f in families:
        r = stability_report(f)
        expected = sign_via_dispersion(f)
        route_signs = {Sign.NEGATIVE if v < 0 else Sign.POSITIVE for v in r.route_values().values()}
        roots = positive_roots(f.params).roots
        if route_signs != {expected}:
            bad += 1
        elif len(roots) == 1 and expected is not Sign.NEGATIVE:
            bad += 1
        elif len(roots) == 2:
            negative = f.family_index == 2 or 2 * roots[0] > roots[1]
            if negative != (expected is Sign.NEGATIVE):
                bad += 1
    grid = np.linspace(1e-4, 1 - 1e-4, 10_000)
    if min(float(np.min(a)) for a in a_coefficients(grid)) <= 0:
        bad += 1
    return Check("sign_theorem", bad == 0, float(bad), 0.0)


def check_solvability(families, k2_shift: float = 0.0) -> Check:
    worst_res = worst_k2 = 0.0
    for f in families:
        k2 = expand(f).k2 * (1.0 + k2_shift)
        worst_res = max(worst_res, solvability_residual(f, k2, relative=True))
        worst_k2 = max(worst_k2, _rel(k2_from_solvability(f), k2))
    ok = worst_res < 1e-10 and worst_k2 < 1e-9
    return Check("solvability_oracle", ok, max(worst_res, worst_k2), 1e-9,
                 f"residual {worst_res:.3g}, k2 mismatch {worst_k2:.3g}")


def check_ledger(families) -> Check:
    worst_den = worst_m = 0.0
    for f in families:
        r = stability_report(f)
        led = inner_product_ledger(f, r.k2)
        worst_den = max(worst_den, led.denom_rel_diff)
        worst_m = max(worst_m, _rel(led.reconstructed_m21, r.m21_2))
    ok = worst_den < 1e-12 and worst_m < 1e-10
    return Check("inner_product_ledger", ok, max(worst_den, worst_m), 1e-10,
                 f"denominator {worst_den:.3g}, reconstruction {worst_m:.3g}")


def check_jordan(families, tol: float = 1e-10) -> Check:
    worst = 0.0
    for f in families[:20]:
        worst = max(worst, max(jordan_chain_residuals(f.k_star, f.params, 64, 32).values()))
    return Check("jordan_chains", worst < tol, worst, tol, "64x32 grid")


def transverse_zeros_expected(f) -> bool:
    """Zeros with ``n >= 2`` appear exactly for family 1 when ``2 k1 < k2``."""
    roots = positive_roots(f.params).roots
    return len(roots) == 2 and f.family_index == 1 and 2 * roots[0] < roots[1]


def check_transverse(families) -> Check:
    bad = 0
    for f in families:
        zeros = transverse_spectrum_scan(f.k_star, f.params, n_max=5, ell_max=10.0)
        if transverse_zeros_expected(f):
            if not zeros or any(n < 2 for n, _ in zeros):
                bad += 1
        elif zeros:
            bad += 1
    return Check("transverse_scan", bad == 0, float(bad), 0.0,
                 "no zeros except n>=2 for family 1 with 2k1<k2")


def check_residuals(families, tol: float = 1e-10) -> Check:
    worst = 0.0
    sym = 0.0
    x = scaled_grid(64)
    y = np.linspace(0.0, 1.0, 17)
    for f in families:
        e = expand(f)
        worst = max(worst, *residual_order1(e).values(), *residual_order2(e).values())
        eps = 0.1
        sym = max(sym,
                  float(np.max(np.abs(eta_tilde(e, eps, x) - eta_tilde(e, eps, -x)))),
                  float(np.max(np.abs(phi_tilde(e, eps, x[None, :], y[:, None])
                                      + phi_tilde(e, eps, -x[None, :], y[:, None])))),
                  float(np.max(np.abs(eta_tilde(e, eps, x) - eta_tilde(e, -eps, x + np.pi)))))
    # the half-period identity holds to the rounding of cos(x + pi)
    return Check("expansion_residuals", worst < tol and sym < 1e-12, max(worst, sym), tol,
                 f"residual {worst:.3g}, symmetry {sym:.3g}")


def run_verification(tol: float = 1e-8, k2_shift: float = 0.0) -> VerifyResult:
    """Run every suite on the built-in samples; ``k2_shift`` is a relative fault injection."""
    fams = sample_families()
    res = VerifyResult()
    res.checks.append(check_curves(1e-12))
    res.checks.append(check_root_counts())
    res.checks.append(check_routes(fams, tol))
    res.checks.append(check_signs(fams))
    res.checks.append(check_solvability(fams, k2_shift))
    res.checks.append(check_ledger(fams))
    res.checks.append(check_jordan(fams))
    res.checks.append(check_transverse(fams))
    res.checks.append(check_residuals(fams))
    region = classify_region(FluidParams(0.5, 1.0))
    res.checks.append(Check("reference_region", region.tag is RegionTag.REGION_I, 0.0, 0.0,
                            "(0.5, 1) is Region I"))
    return res
