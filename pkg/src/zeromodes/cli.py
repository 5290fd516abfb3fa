"""Command-line interface.

Every output starts with ``#`` metadata lines (CSV) or ``argv``/``params``
fields (JSON) that echo the canonical argument vector, so re-running with those
arguments reproduces the payload byte for byte. Numbers are written with 12
significant digits.

Exit codes: 0 success, 1 validation error, 2 verification failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import shlex
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import analytic, kernels, numeric
from .analytic import ModeError
from .model import (
    Branch,
    InvalidRegimeError,
    PotentialParams,
    Regime,
    classify_regime,
    effective_potential,
    effective_potential_from_v,
    potential_value,
    scarf_parameters,
    scarf_potential_value,
)

SCHEMA_VERSION = 1
HBAR_EV_S = 6.582119569e-16
FERMI_VELOCITY_M_S = 1.0e6
# hbar * v_F in meV nm
HBAR_VF_MEV_NM = HBAR_EV_S * FERMI_VELOCITY_M_S * 1e9 * 1e3
GRID_ENV = "ZEROMODES_GRID_HALFWIDTH"

EXIT_OK, EXIT_INVALID, EXIT_FAILED = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if v == 0.0:
            v = 0.0  # drop the sign of negative zero
        return f"{v:.12g}"
    return str(value)


def _json_value(value):
    if isinstance(value, (float, np.floating)):
        return float(fmt(value)) if math.isfinite(value) else None
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    return value


@dataclass
class OutputRecord:
    command: str
    argv: list[str]
    params: dict
    columns: list[str]
    rows: list[list]
    schema_version: int = SCHEMA_VERSION

    def render(self, fmt_name: str) -> str:
        if fmt_name == "json":
            doc = {
                "schema_version": self.schema_version,
                "command": self.command,
                "argv": self.argv,
                "params": {k: _json_value(v) for k, v in self.params.items()},
                "columns": self.columns,
                "rows": [[_json_value(v) for v in row] for row in self.rows],
            }
            return json.dumps(doc, separators=(",", ":")) + "\n"
        lines = [
            f"# schema_version: {self.schema_version}",
            f"# command: {self.command}",
            f"# argv: {shlex.join(self.argv)}",
        ]
        lines += [f"# {k}: {fmt(v)}" for k, v in self.params.items()]
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        writer.writerows([fmt(v) for v in row] for row in self.rows)
        return "\n".join(lines) + "\n" + buf.getvalue()


def _canonical_argv(command: str, spec: list[tuple[str, object]]) -> list[str]:
    out = [command]
    for flag, value in spec:
        if isinstance(value, bool):
            if value:
                out.append(flag)
        elif isinstance(value, (list, tuple)):
            out += [flag] + [fmt(v) for v in value]
        else:
            out += [flag, fmt(value)]
    return out


def _emit(args, record: OutputRecord) -> None:
    text = record.render(args.format)
    if args.output and args.output != "-":
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _params(args) -> PotentialParams:
    p = PotentialParams(args.lam, args.mu)
    if classify_regime(p) is Regime.INVALID:
        raise InvalidRegimeError(
            f"lambda = 0 is the Invalid regime ({Regime.INVALID.value}): no sech well")
    return p


def _half_width(default: float = 25.0) -> float:
    raw = os.environ.get(GRID_ENV)
    if not raw:
        return default
    value = float(raw)
    if value <= 0:
        raise UsageError(f"{GRID_ENV} must be positive, got {raw!r}")
    return value


def _x_grid(args) -> np.ndarray:
    if not args.x_min < args.x_max:
        raise UsageError("--x-min must be smaller than --x-max")
    if args.points < 2:
        raise UsageError("--points must be at least 2")
    return np.linspace(args.x_min, args.x_max, args.points)


# ---------------------------------------------------------------- spectrum

def cmd_spectrum(args) -> int:
    p = _params(args)
    rows = [[m.n, m.ky, m.kappa, m.regime.value] for m in analytic.zero_mode_spectrum(p)]
    argv = _canonical_argv("spectrum", [("--lambda", p.lam), ("--mu", p.mu),
                                        ("--format", args.format)])
    _emit(args, OutputRecord("spectrum", argv,
                             {"lambda": p.lam, "mu": p.mu, "regime": classify_regime(p).value},
                             ["n", "k_y", "kappa", "regime"], rows))
    return EXIT_OK


# ------------------------------------------------------------ wavefunction

def cmd_wavefunction(args) -> int:
    p = _params(args)
    m = analytic.zero_mode(p, args.n)
    sign = 1 if args.ky_sign in ("+", "plus") else -1
    x = _x_grid(args)
    sample = analytic.spinor_value(p, m, sign, x)
    norm = None
    if args.normalize:
        half = max(_half_width(), abs(args.x_min), abs(args.x_max))
        _, norm = analytic.normalized_spinor(p, m, sign, numeric.Grid.from_spacing(-half, half, 0.01))
        sample = sample.scaled(1.0 / norm)
    rows = [[xi, a.real, a.imag, b.real, b.imag]
            for xi, a, b in zip(x, sample.psiA, sample.psiB)]
    argv = _canonical_argv("wavefunction", [
        ("--lambda", p.lam), ("--mu", p.mu), ("--n", args.n),
        ("--ky-sign", "+" if sign == 1 else "-"), ("--x-min", args.x_min),
        ("--x-max", args.x_max), ("--points", args.points),
        ("--normalize", bool(args.normalize)), ("--format", args.format)])
    meta = {"lambda": p.lam, "mu": p.mu, "n": m.n, "k_y": sign * m.ky, "kappa": m.kappa,
            "regime": m.regime.value, "normalized": bool(args.normalize), "norm": norm}
    _emit(args, OutputRecord("wavefunction", argv, meta,
                             ["x", "re_psiA", "im_psiA", "re_psiB", "im_psiB"], rows))
    return EXIT_OK


# --------------------------------------------------------------- potential

def cmd_potential(args) -> int:
    p = PotentialParams(args.lam, args.mu)
    x = _x_grid(args)
    v = potential_value(p, x)
    v_tilde = potential_value(PotentialParams(args.lam, 0.0), x)
    argv = _canonical_argv("potential", [
        ("--lambda", p.lam), ("--mu", p.mu), ("--x-min", args.x_min),
        ("--x-max", args.x_max), ("--points", args.points), ("--format", args.format)])
    _emit(args, OutputRecord("potential", argv, {"lambda": p.lam, "mu": p.mu},
                             ["x", "V", "V_tilde"], [list(r) for r in zip(x, v, v_tilde)]))
    return EXIT_OK


# ------------------------------------------------------------------ verify

PROFILES = {
    "fast": {"residual": 1e-8, "oracle": 1e-6, "spacing": 0.01},
    "strict": {"residual": 1e-10, "oracle": 1e-7, "spacing": 0.002},
}


@dataclass
class Check:
    name: str
    measured: float
    tolerance: float
    passed: bool
    comparison: str = "<="


def _le(name, measured, tol) -> Check:
    return Check(name, float(measured), float(tol), bool(measured <= tol))


def _ge(name, measured, tol) -> Check:
    return Check(name, float(measured), float(tol), bool(measured >= tol), ">=")


def run_checks(p: PotentialParams, profile: str = "strict", scale: float = 1.0) -> list[Check]:
    """Every invariant for one (lambda, mu), measured against the profile."""
    prof = PROFILES[profile]
    res_tol = prof["residual"] * scale
    oracle_tol = prof["oracle"] * scale
    half = _half_width()
    grid = numeric.Grid.from_spacing(-half, half, prof["spacing"])
    x = grid.points()
    checks: list[Check] = []

    modes = analytic.zero_mode_spectrum(p)
    ky_scale = max([1.0] + [m.ky for m in modes])
    pot_scale = max(1.0, p.lam**2 + p.mu**2 + ky_scale**2)

    xs = np.linspace(-10, 10, 2001)
    worst = 0.0
    for br in Branch:
        ky = modes[0].ky if modes else 1.0
        worst = max(worst, np.max(np.abs(effective_potential(p, br, ky, xs)
                                          - effective_potential_from_v(p, br, ky, xs))))
    checks.append(_le("effective potential closed form vs -V^2 -+ iV' + ky^2",
                      worst, 1e-12 * pot_scale * scale))

    worst = 0.0
    for br in Branch:
        for s in scarf_parameters(p, br):
            diff = (scarf_potential_value(s, xs) + 1.0 - p.mu**2
                    - effective_potential(p, br, 1.0, xs))
            worst = max(worst, np.max(np.abs(diff)))
    checks.append(_le("Scarf II reconstruction, cases a-d, both branches",
                      worst, 1e-12 * pot_scale * scale))

    pt_dev = np.max(np.abs(np.conj(effective_potential(p, Branch.PLUS, 1.0, -xs))
                           - effective_potential(p, Branch.PLUS, 1.0, xs)))
    if p.mu == 0.0:
        checks.append(_le("PT symmetry conj(V1(-x)) = V1(x) at mu = 0", pt_dev,
                          1e-12 * pot_scale * scale))
    else:
        # the deviation is -2i mu sech^2 + 4 lam mu sech tanh, at least 2|mu| at x = 0
        checks.append(_ge("PT symmetry broken for mu != 0", pt_dev, abs(p.mu) / scale))

    ky_max = abs(p.lam) + abs(p.mu) + 1.0
    shot = numeric.shoot_spectrum(p, ky_max, grid=grid, tol=min(1e-10, oracle_tol / 10))
    checks.append(Check("oracle root count equals analytic mode count",
                        float(len(shot)), float(len(modes)), len(shot) == len(modes), "=="))
    if not modes:
        checks.append(Check("empty-spectrum agreement", float(len(shot)), 0.0,
                            len(shot) == 0, "=="))
    if len(shot) == len(modes) and modes:
        dk = max(abs(a.ky - b.ky) for a, b in zip(sorted(modes, key=lambda m: m.ky), shot))
        checks.append(_le("oracle ky agreement |dky|", dk, oracle_tol))

    if modes:
        mirror = analytic.zero_mode_spectrum(PotentialParams(-p.lam, p.mu))
        dm = max(abs(a - b) for a, b in zip(sorted(m.ky for m in modes),
                                                  sorted(m.ky for m in mirror))) \
            if len(mirror) == len(modes) else math.inf
        checks.append(_le("electron/hole mirror spectrum", dm, 1e-12 * scale))

    for m in modes:
        tag = f"n={m.n}"
        plus = analytic.spinor_value(p, m, 1, x)
        amp = max(1.0, float(np.max(np.abs(plus.psiA) + np.abs(plus.psiB))))
        checks.append(_le(f"{tag} Dirac residual (+ky)",
                          numeric.dirac_residual(p, m.ky, plus) / amp, res_tol))
        checks.append(_le(f"{tag} Dirac residual (-ky, swapped spinor)",
                          numeric.dirac_residual(p, -m.ky, analytic.spinor_value(p, m, -1, x)) / amp,
                          res_tol))
        f1, d1, dd1 = analytic.psi1_derivatives(p, m, x)
        f2, d2, dd2 = analytic.psi2_derivatives(p, m, x)
        a1 = max(1.0, float(np.max(np.abs(f1))))
        checks.append(_le(f"{tag} Schrodinger residual psi1 (V1)",
                          numeric.schrodinger_residual(p, Branch.PLUS, m.ky, x, f1, dd1) / a1,
                          res_tol * 100))
        checks.append(_le(f"{tag} Schrodinger residual psi2 (V2)",
                          numeric.schrodinger_residual(p, Branch.MINUS, m.ky, x, f2, dd2) / a1,
                          res_tol * 100))
        r7, r8 = numeric.intertwining_residuals(p, m.ky, x, f1, d1, f2, d2)
        checks.append(_le(f"{tag} intertwining (V - i d/dx) psi1 + i ky psi2",
                          np.max(np.abs(r7)) / a1, res_tol))
        checks.append(_le(f"{tag} intertwining (V + i d/dx) psi2 - i ky psi1",
                          np.max(np.abs(r8)) / a1, res_tol))
        fa, fb = analytic.spinor_factored_form(p, m, x)
        checks.append(_le(f"{tag} factored spinor form vs (psi1 +- psi2)/2",
                          max(np.max(np.abs(fa - plus.psiA)), np.max(np.abs(fb - plus.psiB))) / amp,
                          res_tol))
        tail = min(8.0, 0.4 * half)
        for side in ("right", "left"):
            fitted = numeric.estimate_decay_rate(plus, tail, side)
            checks.append(_le(f"{tag} decay rate ({side} tail) relative error vs kappa",
                              abs(fitted - m.kappa) / m.kappa, 0.01 * scale))
        if m.kappa >= 0.5:
            norms = []
            for w in (30.0, 40.0):
                g = numeric.Grid.from_spacing(-w, w, 0.01)
                norms.append(analytic.normalized_spinor(p, m, 1, g)[1])
            checks.append(_le(f"{tag} L2 norm stable from [-30,30] to [-40,40]",
                              abs(norms[1] - norms[0]) / norms[1], 1e-8 * scale))
    return checks


def cmd_verify(args) -> int:
    p = _params(args)
    if args.scale_tolerances <= 0:
        raise UsageError("--scale-tolerances must be positive")
    checks = run_checks(p, args.profile, args.scale_tolerances)
    ok = all(c.passed for c in checks)
    argv = _canonical_argv("verify", [
        ("--lambda", p.lam), ("--mu", p.mu), ("--profile", args.profile),
        ("--scale-tolerances", args.scale_tolerances), ("--format", args.format)])
    meta = {"lambda": p.lam, "mu": p.mu, "regime": classify_regime(p).value,
            "profile": args.profile, "modes": analytic.zero_mode_count(p),
            "backend": kernels.BACKEND, "all_passed": ok}
    rows = [[c.name, c.measured, c.comparison, c.tolerance, "PASS" if c.passed else "FAIL"]
            for c in checks]
    _emit(args, OutputRecord("verify", argv, meta,
                             ["check", "measured", "comparison", "tolerance", "status"], rows))
    if args.output and args.output != "-":
        sys.stderr.write(f"{sum(c.passed for c in checks)}/{len(checks)} checks passed\n")
    return EXIT_OK if ok else EXIT_FAILED


# -------------------------------------------------------------------- scan

def _scan_cell(lam: float, mu: float, oracle: bool):
    p = PotentialParams(lam, mu)
    regime = classify_regime(p)
    if regime is Regime.INVALID:
        row = [lam, mu, regime.value, 0, None, None]
        return row + ([0] if oracle else [])
    kys = [m.ky for m in analytic.zero_mode_spectrum(p)]
    row = [lam, mu, regime.value, len(kys), min(kys, default=None), max(kys, default=None)]
    if oracle:
        shot = numeric.shoot_spectrum(p, abs(lam) + abs(mu) + 1.0, grid=numeric.DEFAULT_GRID)
        row.append(len(shot))
    return row


def cmd_scan(args) -> int:
    if args.lambda_steps < 1 or args.mu_steps < 1:
        raise UsageError("--lambda-steps and --mu-steps must be at least 1")
    lams = np.linspace(*args.lambda_range, args.lambda_steps)
    mus = np.linspace(*args.mu_range, args.mu_steps)
    cells = [(float(lam), float(mu)) for lam in lams for mu in mus]
    with ThreadPoolExecutor(max_workers=args.workers) as pool:
        rows = list(pool.map(lambda c: _scan_cell(c[0], c[1], args.oracle), cells))
    rows.sort(key=lambda r: (r[0], r[1]))
    columns = ["lambda", "mu", "regime", "mode_count", "ky_min", "ky_max"]
    if args.oracle:
        columns.append("oracle_count")
    argv = _canonical_argv("scan", [
        ("--lambda-range", args.lambda_range), ("--mu-range", args.mu_range),
        ("--lambda-steps", args.lambda_steps), ("--mu-steps", args.mu_steps),
        ("--oracle", bool(args.oracle)), ("--format", args.format)])
    meta = {"lambda_min": args.lambda_range[0], "lambda_max": args.lambda_range[1],
            "mu_min": args.mu_range[0], "mu_max": args.mu_range[1]}
    _emit(args, OutputRecord("scan", argv, meta, columns, rows))
    return EXIT_OK


# ------------------------------------------------------------------- units

def convert_units(ky_dimensionless: float, length_scale_nm: float) -> tuple[float, float]:
    """Return ``(E_meV, ky_per_nm)`` for x measured in units of ``length_scale_nm``."""
    if not length_scale_nm > 0:
        raise ValueError(f"length scale must be positive, got {length_scale_nm}")
    ky_per_nm = ky_dimensionless / length_scale_nm
    return HBAR_VF_MEV_NM * ky_per_nm, ky_per_nm


def cmd_units(args) -> int:
    try:
        energy, ky_nm = convert_units(args.ky, args.length_scale_nm)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    argv = _canonical_argv("units", [("--ky", args.ky),
                                     ("--length-scale-nm", args.length_scale_nm),
                                     ("--format", args.format)])
    _emit(args, OutputRecord("units", argv, {"hbar_vF_meV_nm": HBAR_VF_MEV_NM},
                             ["k_y", "length_scale_nm", "ky_per_nm", "E_meV"],
                             [[args.ky, args.length_scale_nm, ky_nm, energy]]))
    return EXIT_OK


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="zeromodes",
        description="Zero-energy bound states of graphene in V(x) = -lambda sech x + mu tanh x.",
        epilog=f"Environment: {GRID_ENV} overrides the half-width (default 25) of the "
               "verification and normalisation grids.",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, with_params=True):
        if with_params:
            sp.add_argument("--lambda", dest="lam", type=float, required=True)
            sp.add_argument("--mu", type=float, required=True)
        sp.add_argument("--format", choices=["csv", "json"], default="csv")
        sp.add_argument("-o", "--output", help="output file (default: stdout)")

    def x_range(sp, x_min=-10.0, x_max=10.0, points=401):
        sp.add_argument("--x-min", type=float, default=x_min)
        sp.add_argument("--x-max", type=float, default=x_max)
        sp.add_argument("--points", type=int, default=points)

    sp = sub.add_parser("spectrum", help="closed-form zero-mode spectrum (n, k_y, kappa, regime)")
    common(sp)
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("wavefunction", help="sample the spinor (psi_A, psi_B) of one mode")
    common(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--ky-sign", choices=["+", "-", "plus", "minus"], default="+")
    x_range(sp)
    sp.add_argument("--normalize", action="store_true",
                    help="scale to unit L2 norm (quadrature over the wider of the sample "
                         "range and the verification grid)")
    sp.set_defaults(func=cmd_wavefunction)

    sp = sub.add_parser("potential", help="V(x) and its mu = 0 counterpart for plotting")
    common(sp)
    x_range(sp)
    sp.set_defaults(func=cmd_potential)

    sp = sub.add_parser("verify", help="run every invariant check; exit 2 on any failure")
    common(sp)
    sp.add_argument("--profile", choices=sorted(PROFILES), default="strict")
    sp.add_argument("--scale-tolerances", type=float, default=1.0,
                    help="multiply every tolerance (values << 1 exercise the failure path)")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("scan", help="regime and mode count over a (lambda, mu) grid")
    common(sp, with_params=False)
    sp.add_argument("--lambda-range", type=float, nargs=2, required=True, metavar=("LO", "HI"))
    sp.add_argument("--mu-range", type=float, nargs=2, default=[0.0, 0.0], metavar=("LO", "HI"))
    sp.add_argument("--lambda-steps", type=int, default=11)
    sp.add_argument("--mu-steps", type=int, default=1)
    sp.add_argument("--oracle", action="store_true", help="add the shooting-oracle root count")
    sp.add_argument("--workers", type=int, default=None)
    sp.set_defaults(func=cmd_scan)

    sp = sub.add_parser("units", help="convert a dimensionless k_y to meV and 1/nm")
    common(sp, with_params=False)
    sp.add_argument("--ky", type=float, required=True)
    sp.add_argument("--length-scale-nm", type=float, required=True)
    sp.set_defaults(func=cmd_units)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InvalidRegimeError, ModeError, UsageError, ValueError) as exc:
        sys.stderr.write(f"zeromodes {args.command}: error: {exc}\n")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
