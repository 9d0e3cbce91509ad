"""Command-line interface: ``gcwaves {roots,gamma,wave,stability,map,surface,verify}``.

Exit codes: 0 success, 1 verification failure, 2 usage or validation error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .dispersion import (
    CURVE_TOL,
    DEFAULT_MMAX,
    FluidParams,
    RegionTag,
    S_FLOOR,
    classify_region,
    dispersion,
    dispersion_derivative,
    gamma_m_point,
    gamma_point,
    positive_roots,
)
from .estimator import evaluate_point
from .exceptions import GCWavesError, NoImaginaryPairError
from .expansion import (
    doubly_periodic_surface,
    eta_tilde,
    expand,
    k_epsilon,
    phi_tilde,
    scaled_grid,
    surface_profile,
    wave_families,
)
from .linop import ell_eps_estimate
from .stability import classify_transverse_stability, stability_report
from .verify import run_verification

logger = logging.getLogger("gcwaves")

EXIT_OK, EXIT_VERIFY, EXIT_USAGE = 0, 1, 2
CSV_FLOAT = "%.16e"


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------
# serialisation


def _clean(obj):
    """Replace non-finite floats by ``None`` so the JSON stays strict."""
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.floating):
        return _clean(float(obj))
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


@dataclass
class ReportEnvelope:
    command: str
    inputs: dict
    result: dict
    tool_version: str = __version__
    timestamp: str | None = field(
        default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds"))

    def to_json(self) -> str:
        body = {"tool": "gcwaves", "tool_version": self.tool_version, "command": self.command,
                "inputs": self.inputs, "result": self.result}
        if self.timestamp is not None:
            body["timestamp"] = self.timestamp
        return json.dumps(_clean(body), indent=2, sort_keys=True, allow_nan=False)

    @classmethod
    def from_json(cls, text: str) -> "ReportEnvelope":
        d = json.loads(text)
        return cls(d["command"], d["inputs"], d["result"], d["tool_version"], d.get("timestamp"))


def _fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return CSV_FLOAT % v
    return str(v)


def write_csv(header, rows, out: str | None) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    _emit(buf.getvalue(), out)


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
        return
    try:
        Path(out).write_text(text if text.endswith("\n") else text + "\n", encoding="utf-8",
                             newline="\n")
    except OSError as exc:
        raise UsageError(f"cannot write {out}: {exc}") from exc


# --------------------------------------------------------------------------
# argument helpers


def _params(args) -> FluidParams:
    try:
        return FluidParams(args.alpha, args.beta)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _positive(text: str) -> float:
    v = float(text)
    if not (math.isfinite(v) and v > 0):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return v


def _count(text: str) -> int:
    v = int(text)
    if v < 2:
        raise argparse.ArgumentTypeError("counts must be at least 2")
    return v


def _family(args, params):
    fams = wave_families(params, tol=args.tol, m_max=args.mmax)
    if args.family > len(fams):
        raise UsageError(f"family {args.family} does not exist here ({len(fams)} families)")
    return fams[args.family - 1]


def _region_dict(region) -> dict:
    out = {"tag": region.label, "resonant": region.resonant, "detail": region.detail}
    if region.roots is not None:
        out["roots"] = list(region.roots.roots)
        out["multiplicities"] = [m.value for m in region.roots.multiplicities]
    return out


# --------------------------------------------------------------------------
# commands


def cmd_roots(args) -> int:
    p = _params(args)
    roots = positive_roots(p, k_max=args.kmax, tol=args.tol_root)
    region = classify_region(p, tol=args.tol, m_max=args.mmax, k_max=args.kmax)
    result = {"roots": list(roots.roots), "multiplicities": [m.value for m in roots.multiplicities],
              "count": roots.count, "region": _region_dict(region)}
    if args.json:
        print(ReportEnvelope("roots", {"alpha": p.alpha, "beta": p.beta, "kmax": args.kmax},
                             result).to_json())
    else:
        print(f"region: {region.label}")
        for r, m in zip(roots.roots, roots.multiplicities):
            print(f"  k = {r!r} ({m.value})")
        if not roots.count:
            print("  no positive roots")
    return EXIT_OK


def gamma_rows(m_max: int, s_min: float, s_max: float, count: int, check_tol: float = 1e-12):
    """Rows ``(curve, m, s, beta, alpha)``; each one is re-validated before it is returned."""
    if s_min < S_FLOOR or not s_max > s_min:
        raise UsageError(f"need {S_FLOOR} <= s_min < s_max")
    rows = []
    for s in np.linspace(s_min, s_max, count):
        s = float(s)
        samples = [("Gamma", 1, gamma_point(s))] + [
            (f"Gamma_{m}", m, gamma_m_point(m, s)) for m in range(2, m_max + 1)]
        for name, m, cs in samples:
            p = cs.params
            second = (dispersion_derivative(s, p), s) if m == 1 else (dispersion(m * s, p), m * s)
            for val, k in ((dispersion(s, p), s), second):
                scale = (p.alpha + p.beta * k * k) * math.sinh(k) + k * math.cosh(k)
                if abs(val) > check_tol * scale:
                    raise GCWavesError(f"{name} row at s={s!r} fails its self-check")
            rows.append((name, m, s, p.beta, p.alpha))
    return rows


def cmd_gamma(args) -> int:
    rows = gamma_rows(args.mmax, args.s_min, args.s_max, args.count)
    if args.format == "json":
        data = [dict(zip(("curve", "m", "s", "beta", "alpha"), r)) for r in rows]
        _emit(json.dumps(_clean(data), indent=1, allow_nan=False), args.out)
    else:
        write_csv(("curve", "m", "s", "beta", "alpha"), rows, args.out)
    return EXIT_OK


def cmd_wave(args) -> int:
    p = _params(args)
    fam = _family(args, p)
    exp = expand(fam)
    x = scaled_grid(args.grid_nx)
    prof = surface_profile(exp, args.eps, x)
    y = np.linspace(0.0, 1.0, 9)
    even = bool(np.array_equal(eta_tilde(exp, args.eps, x), eta_tilde(exp, args.eps, -x)))
    odd = bool(np.array_equal(phi_tilde(exp, args.eps, x[None, :], y[:, None]),
                              -phi_tilde(exp, args.eps, -x[None, :], y[:, None])))
    result = {"family": fam.family_index, "k_star": fam.k_star, "c_k": exp.c_k, "d_k": exp.d_k,
              "k2": exp.k2, "k_eps": k_epsilon(exp, args.eps), "eta1_amp": exp.eta1_amp,
              "eta2_amp": exp.eta2_amp, "eta2_mean": exp.eta2_mean,
              "symmetry": {"eta_even": even, "phi_odd": odd}}
    if args.out:
        write_csv(("x", "X", "eta"), zip(prof.x, prof.X, prof.values), args.out)
    print(ReportEnvelope("wave", {"alpha": p.alpha, "beta": p.beta, "family": args.family,
                                  "eps": args.eps, "grid_nx": args.grid_nx}, result).to_json())
    return EXIT_OK


def cmd_stability(args) -> int:
    p = _params(args)
    region = classify_region(p, tol=args.tol, m_max=args.mmax)
    inputs = {"alpha": p.alpha, "beta": p.beta, "tol": args.tol, "mmax": args.mmax}
    result: dict = {"region": _region_dict(region), "reports": []}
    if region.tag not in (RegionTag.REGION_I, RegionTag.REGION_II):
        logger.warning("no bifurcating families at %s: %s", p, region.label)
        result["note"] = f"excluded: {region.label}"
    else:
        reports = classify_transverse_stability(p, tol=args.tol, m_max=args.mmax)
        result["reports"] = [r.to_dict() for r in reports]
        if region.resonant:
            logger.warning("resonant root ratio; verdicts excluded")
    print(ReportEnvelope("stability", inputs, result).to_json())
    return EXIT_OK


MAP_HEADER = ("alpha", "beta", "region", "n_roots", "verdict_1", "verdict_2", "m21_1", "m21_2")


def map_rows(alpha_range, beta_range, tol: float, m_max: int):
    """Row-major over ``alpha`` (outer) and ``beta`` (inner); each row is re-validated."""
    alphas = np.linspace(*alpha_range[:2], int(alpha_range[2]))
    betas = np.linspace(*beta_range[:2], int(beta_range[2]))
    expected = {"RegionI": 1, "RegionII": 2, "NoBifurcation": 0}
    rows = []
    for a in alphas:
        for b in betas:
            s = evaluate_point(FluidParams(float(a), float(b)), tol, m_max)
            if s.region in expected and s.n_roots != expected[s.region]:
                raise GCWavesError(f"map row ({a!r}, {b!r}) fails its root-count self-check")
            v = list(s.verdicts) + [""] * (2 - len(s.verdicts))
            m = list(s.m21) + [math.nan] * (2 - len(s.m21))
            rows.append((float(a), float(b), s.region, s.n_roots, v[0], v[1], m[0], m[1]))
    return rows


def _range(values, name):
    lo, hi, n = values
    if not (0 < lo < hi) or int(n) != n or n < 2:
        raise UsageError(f"{name} needs 0 < min < max and an integer count >= 2")
    return lo, hi, int(n)


def cmd_map(args) -> int:
    rows = map_rows(_range(args.alpha_range, "--alpha-range"),
                    _range(args.beta_range, "--beta-range"), args.tol, args.mmax)
    if args.format == "json":
        data = [dict(zip(MAP_HEADER, r)) for r in rows]
        _emit(json.dumps(_clean(data), indent=1, allow_nan=False), args.out)
    else:
        write_csv(MAP_HEADER, rows, args.out)
    return EXIT_OK


def cmd_surface(args) -> int:
    p = _params(args)
    fam = _family(args, p)
    exp = expand(fam)
    report = stability_report(fam)
    ell = args.ell
    if ell is None:
        try:
            ell = ell_eps_estimate(args.eps, report.m21_2)
        except NoImaginaryPairError as exc:
            raise UsageError(f"no dimension-breaking pair at leading order ({exc})") from exc
    x = scaled_grid(args.grid_nx)
    z = np.linspace(0.0, 2 * np.pi / ell, args.grid_nz)
    surf = doubly_periodic_surface(exp, args.eps, args.delta, ell, x, z)
    rows = ((xi, zj, surf.values[j, i]) for j, zj in enumerate(z) for i, xi in enumerate(x))
    write_csv(("x", "z", "eta"), rows, args.out)
    if args.out:
        meta = {k: v for k, v in surf.metadata.items()}
        meta["m21_2"] = report.m21_2
        print(ReportEnvelope("surface", {"alpha": p.alpha, "beta": p.beta, "family": args.family,
                                         "eps": args.eps, "delta": args.delta, "ell": args.ell},
                             meta).to_json())
    return EXIT_OK


def cmd_verify(args) -> int:
    shift = 1e-3 if args.inject_fault else 0.0
    res = run_verification(tol=args.tol, k2_shift=shift)
    if args.json:
        env = ReportEnvelope("verify", {"tol": args.tol}, res.to_dict(), timestamp=None)
        print(env.to_json())
    else:
        width = max(len(c.name) for c in res.checks)
        for c in res.checks:
            status = "PASS" if c.passed else "FAIL"
            print(f"{status}  {c.name:<{width}}  worst={c.worst:.3e}  {c.detail}")
        print("all checks passed" if res.passed else "failed: " + ", ".join(res.failed))
    return EXIT_OK if res.passed else EXIT_VERIFY


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gcwaves", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, point=True):
        if point:
            p.add_argument("--alpha", type=float, required=True)
            p.add_argument("--beta", type=float, required=True)
        p.add_argument("--tol", type=_positive, default=CURVE_TOL)
        p.add_argument("--mmax", type=int, default=DEFAULT_MMAX)

    p = sub.add_parser("roots", help="positive roots of the dispersion relation")
    common(p)
    p.add_argument("--kmax", type=_positive, default=None)
    p.add_argument("--tol-root", type=_positive, default=1e-10)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_roots)

    p = sub.add_parser("gamma", help="double-root and resonance curves as polylines")
    common(p, point=False)
    p.add_argument("--s-min", type=_positive, default=0.01)
    p.add_argument("--s-max", type=_positive, default=3.0)
    p.add_argument("--count", type=_count, default=200)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_gamma)

    p = sub.add_parser("wave", help="two-term expansion of a wave family")
    common(p)
    p.add_argument("--family", type=int, choices=(1, 2), default=1)
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--grid-nx", type=_count, default=128)
    p.add_argument("--out", default=None, help="CSV file for the surface profile")
    p.set_defaults(func=cmd_wave)

    p = sub.add_parser("stability", help="transverse-instability report per family")
    common(p)
    p.add_argument("--json", action="store_true", help="accepted for symmetry; output is JSON")
    p.set_defaults(func=cmd_stability)

    p = sub.add_parser("map", help="parameter-plane sweep")
    common(p, point=False)
    p.add_argument("--alpha-range", type=float, nargs=3, metavar=("MIN", "MAX", "COUNT"),
                   default=(0.05, 2.5, 50))
    p.add_argument("--beta-range", type=float, nargs=3, metavar=("MIN", "MAX", "COUNT"),
                   default=(0.03, 1.5, 50))
    p.add_argument("--eps", type=float, default=0.1, help="recorded only")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_map)

    p = sub.add_parser("surface", help="leading-order doubly periodic surface")
    common(p)
    p.add_argument("--family", type=int, choices=(1, 2), default=1)
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--delta", type=float, default=0.01)
    p.add_argument("--ell", type=_positive, default=None)
    p.add_argument("--grid-nx", type=_count, default=64)
    p.add_argument("--grid-nz", type=_count, default=64)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_surface)

    p = sub.add_parser("verify", help="run the built-in verification suite")
    p.add_argument("--tol", type=_positive, default=1e-8)
    p.add_argument("--json", action="store_true")
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (UsageError, GCWavesError, ValueError) as exc:
        print(f"gcwaves {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
