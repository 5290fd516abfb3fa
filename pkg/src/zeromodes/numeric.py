"""Numerical oracle: residuals, shooting for ky, quadrature and decay fits.

The shooting solver works on the real form of the zero-energy Dirac system
(``psi_A = u``, ``psi_B = -i w``)::

    u' =  ky u - V w
    w' =  V u - ky w

Nothing in this module uses the closed-form solutions.
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import kernels
from .model import Branch, PotentialParams, SpinorSample, effective_potential, potential_value

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Grid:
    x_min: float
    x_max: float
    n_points: int

    def __post_init__(self):
        if not self.x_min < self.x_max:
            raise ValueError(f"need x_min < x_max, got [{self.x_min}, {self.x_max}]")
        if self.n_points < 3:
            raise ValueError("a grid needs at least 3 points")

    @classmethod
    def from_spacing(cls, x_min: float, x_max: float, spacing: float) -> "Grid":
        """Uniform grid whose spacing does not exceed ``spacing``."""
        if spacing <= 0:
            raise ValueError("spacing must be positive")
        n = math.ceil((x_max - x_min) / spacing - 1e-9) + 1
        return cls(float(x_min), float(x_max), max(n, 3))

    @property
    def spacing(self) -> float:
        return (self.x_max - self.x_min) / (self.n_points - 1)

    def points(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n_points)


DEFAULT_GRID = Grid.from_spacing(-25.0, 25.0, 0.01)
SHOOTING_GRID = Grid.from_spacing(-25.0, 25.0, 0.001)


@dataclass(frozen=True)
class ShootingResult:
    ky: float
    matching_residual: float
    iterations: int
    bracket: tuple[float, float]
    confirmation_residual: float = float("nan")


def dirac_residual(p: PotentialParams, ky: float, samples: SpinorSample) -> float:
    """Largest pointwise residual of the two zero-energy Dirac equations."""
    x = np.atleast_1d(samples.x)
    if x.size == 0:
        raise ValueError("dirac_residual needs at least one sample")
    v = potential_value(p, x)
    a, b = np.atleast_1d(samples.psiA), np.atleast_1d(samples.psiB)
    da, db = np.atleast_1d(samples.dpsiA), np.atleast_1d(samples.dpsiB)
    r1 = v * a - 1j * (db + ky * b)
    r2 = v * b - 1j * (da - ky * a)
    return float(np.max(np.maximum(np.abs(r1), np.abs(r2))))


def schrodinger_residual(p: PotentialParams, br: Branch, ky: float, x, psi, d2psi) -> float:
    """max |-psi'' + V_br psi| where V_br already includes ky^2."""
    x, psi, d2psi = (np.atleast_1d(np.asarray(a)) for a in (x, psi, d2psi))
    if not (x.shape == psi.shape == d2psi.shape):
        raise ValueError(f"length mismatch: {x.shape}, {psi.shape}, {d2psi.shape}")
    return float(np.max(np.abs(-d2psi + effective_potential(p, br, ky, x) * psi), initial=0.0))


def intertwining_residuals(p: PotentialParams, ky: float, x, psi1, dpsi1, psi2, dpsi2):
    """Pointwise residuals of the first-order relations linking psi_1, psi_2::

        (V - i d/dx) psi_1 + i ky psi_2
        (V + i d/dx) psi_2 - i ky psi_1
    """
    v = potential_value(p, np.asarray(x, dtype=float))
    r1 = v * psi1 - 1j * dpsi1 + 1j * ky * psi2
    r2 = v * psi2 + 1j * dpsi2 - 1j * ky * psi1
    return r1, r2


class _Shooter:
    """Potential sampled on the half-step grid, shared by every ky evaluation."""

    def __init__(self, p: PotentialParams, grid: Grid):
        self.p = p
        self.grid = grid
        self.h = grid.spacing
        x_half = grid.x_min + 0.5 * self.h * np.arange(2 * grid.n_points - 1)
        self.v_half = np.ascontiguousarray(potential_value(p, x_half), dtype=float)
        self.i_match = int(round(-grid.x_min / self.h))
        if not 0 < self.i_match < grid.n_points - 1:
            raise ValueError("the grid must contain x = 0 strictly inside")
        # asymptotic limits of V at -inf and +inf
        self.v_left, self.v_right = -p.mu, p.mu

    def match(self, ks) -> np.ndarray:
        ks = np.ascontiguousarray(ks, dtype=float)
        return kernels.matching_function(ks, self.v_half, self.h, self.i_match,
                                         self.v_left, self.v_right)

    def spinor(self, ky: float) -> SpinorSample:
        """Glued left/right shooting solution, peak amplitude 1.

        Derivatives come from fourth-order finite differences, so feeding the
        result to :func:`dirac_residual` is a genuine check of the match.
        """
        u, w, s, (ur, wr, sr) = kernels.integrate_path(
            ky, self.v_half, self.h, self.i_match, self.v_left, self.v_right)
        i = self.i_match
        left = slice(0, i + 1)
        right = slice(i + 1, None)
        fac = np.empty_like(s)
        fac[left] = np.exp(s[left] - s[i])
        fac[right] = np.exp(s[right] - sr)
        lm = np.array([u[i], w[i]])
        rm = np.array([ur, wr])
        fac[right] *= lm @ rm / (rm @ rm)
        u = u * fac
        w = w * fac
        peak = np.max(np.hypot(u, w))
        u, w = u / peak, w / peak
        x = self.grid.points()
        psiA = u.astype(complex)
        psiB = -1j * w
        return SpinorSample(x, psiA, psiB, _fd4(psiA, self.h), _fd4(psiB, self.h))


def _fd4(f: np.ndarray, h: float) -> np.ndarray:
    d = np.empty_like(f)
    d[2:-2] = (f[:-4] - 8 * f[1:-3] + 8 * f[3:-1] - f[4:]) / (12 * h)
    d[:2] = (f[1:3] - f[0:2]) / h
    d[-2:] = (f[-2:] - f[-3:-1]) / h
    return d


def _refine(shooter: _Shooter, brackets, tol: float, points: int = 8):
    """Multisection on all brackets at once until each is narrower than tol."""
    lo = np.array([b[0] for b in brackets], dtype=float)
    hi = np.array([b[1] for b in brackets], dtype=float)
    flo = shooter.match(lo)
    fhi = shooter.match(hi)
    iterations = 0
    frac = np.arange(1, points + 1) / (points + 1)
    while np.any(hi - lo > tol) and iterations < 200:
        iterations += 1
        inner = lo[:, None] + (hi - lo)[:, None] * frac[None, :]
        f_inner = shooter.match(inner.ravel()).reshape(inner.shape)
        xs = np.concatenate([lo[:, None], inner, hi[:, None]], axis=1)
        fs = np.concatenate([flo[:, None], f_inner, fhi[:, None]], axis=1)
        change = np.signbit(fs[:, :-1]) != np.signbit(fs[:, 1:])
        idx = np.argmax(change, axis=1)
        rows = np.arange(len(lo))
        lo, hi = xs[rows, idx], xs[rows, idx + 1]
        flo, fhi = fs[rows, idx], fs[rows, idx + 1]
    # final secant step inside the bracket
    denom = fhi - flo
    roots = np.where(denom != 0, lo - flo * (hi - lo) / np.where(denom != 0, denom, 1.0),
                     0.5 * (lo + hi))
    return roots, iterations


def shoot_spectrum(p: PotentialParams, ky_max: float, grid: Grid | None = None,
                   tol: float = 1e-10, scan_step: float = 0.01,
                   confirm_tol: float | None = None) -> list[ShootingResult]:
    """All ky in (|mu|, ky_max] with a solution decaying at both ends.

    The ky axis is scanned with steps of at most ``scan_step``; each sign
    change of the matching determinant is refined to width ``tol`` and then
    confirmed by the Dirac residual of the glued shooting solution. Roots
    whose decay rate sqrt(ky^2 - mu^2) is below about ``scan_step`` can be
    missed. Runs for any lambda != 0; it does not consult a regime.
    """
    p.require_valid()
    if ky_max <= abs(p.mu):
        raise ValueError(f"ky_max must exceed |mu| = {abs(p.mu):g}, got {ky_max:g}")
    grid = grid or SHOOTING_GRID
    shooter = _Shooter(p, grid)

    n_scan = max(2, math.ceil((ky_max - abs(p.mu)) / scan_step))
    ks = np.linspace(abs(p.mu), ky_max, n_scan + 1)
    ks[0] = abs(p.mu) + min(1e-6, 0.1 * (ks[1] - ks[0]))
    fs = shooter.match(ks)

    exact = [(k, k) for k, f in zip(ks, fs) if f == 0.0]
    brackets = [(ks[i], ks[i + 1]) for i in range(len(ks) - 1)
                if fs[i] != 0.0 and fs[i + 1] != 0.0 and np.signbit(fs[i]) != np.signbit(fs[i + 1])]
    if not brackets and not exact:
        return []

    roots: list[tuple[float, tuple[float, float], int]] = [(k, b, 0) for k, b in exact]
    if brackets:
        refined, iters = _refine(shooter, brackets, tol)
        roots += [(float(r), (float(b[0]), float(b[1])), iters) for r, b in zip(refined, brackets)]
    roots.sort()

    if confirm_tol is None:
        confirm_tol = 1e-6 + (grid.spacing * ky_max) ** 4
    residuals = np.abs(shooter.match([r[0] for r in roots]))
    results = []
    for (k, bracket, iters), res in zip(roots, residuals):
        conf = dirac_residual(p, k, shooter.spinor(k))
        if conf > confirm_tol:
            log.warning("discarding ky=%.10g: glued solution residual %.3g > %.3g",
                        k, conf, confirm_tol)
            continue
        results.append(ShootingResult(k, float(res), iters, bracket, conf))
    return results


def shooting_spinor(p: PotentialParams, ky: float, grid: Grid | None = None) -> SpinorSample:
    """Numerical spinor for a given ky, glued at x = 0 (peak amplitude 1)."""
    p.require_valid()
    return _Shooter(p, grid or SHOOTING_GRID).spinor(ky)


def shoot_many(params: list[PotentialParams], ky_max, grid: Grid | None = None,
               tol: float = 1e-10, workers: int | None = None) -> list[list[ShootingResult]]:
    """Run :func:`shoot_spectrum` over several parameter cells, order preserved.

    ``ky_max`` is a number or a callable of the cell. The compiled kernel
    releases the GIL, so threads give real parallelism.
    """
    def one(p):
        top = ky_max(p) if callable(ky_max) else ky_max
        return shoot_spectrum(p, top, grid, tol)

    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, params))


def l2_normalize(samples: SpinorSample, grid: Grid | None = None) -> tuple[SpinorSample, float]:
    """Scale so that the trapezoidal integral of |psi_A|^2 + |psi_B|^2 is 1.

    Returns the scaled samples and the original norm (square root of the
    integral).
    """
    x = np.asarray(samples.x, dtype=float)
    if grid is not None and x.shape != (grid.n_points,):
        raise ValueError(f"samples ({x.shape}) are not on the grid ({grid.n_points} points)")
    dens = np.abs(samples.psiA) ** 2 + np.abs(samples.psiB) ** 2
    norm = math.sqrt(float(np.trapezoid(dens, x)))
    if norm < 1e-300:
        raise ValueError("norm is numerically zero")
    return samples.scaled(1.0 / norm), norm


def estimate_decay_rate(samples: SpinorSample, tail_start: float, side: str = "right") -> float:
    """Least-squares slope of -log(|psi_A| + |psi_B|) against |x| on a tail."""
    x = np.asarray(samples.x, dtype=float)
    amp = np.abs(samples.psiA) + np.abs(samples.psiB)
    if side == "right":
        mask = x > tail_start
        dist = x
    elif side == "left":
        mask = x < -tail_start
        dist = -x
    else:
        raise ValueError("side must be 'right' or 'left'")
    if np.count_nonzero(mask) < 8:
        raise ValueError(f"fewer than 8 samples beyond tail_start={tail_start}")
    ok = mask & (amp > 1e-300)
    if np.count_nonzero(ok) < 8:
        raise ValueError("tail amplitude underflowed")
    slope, _ = np.polyfit(dist[ok], -np.log(amp[ok]), 1)
    return float(slope)
