"""Closed-form zero-energy modes of the sech/tanh well.

Sign conventions, fixed by the Dirac system at energy zero::

    V psi_A - i (d/dx + ky) psi_B = 0
    V psi_B - i (d/dx - ky) psi_A = 0

With ``psi_1 = psi_A + psi_B`` and ``psi_2 = psi_A - psi_B`` these become::

    (V - i d/dx) psi_1 + i ky psi_2 = 0
    (V + i d/dx) psi_2 - i ky psi_1 = 0

so ``psi_2 = (psi_1' + i V psi_1) / ky``. Every component below has the form
``coef * sech(x)**p * exp(c * atan(sinh x)) * P_n^{(a,b)}(i sinh x)``.

The partner coefficient carries ``ky`` in its denominator. The variant with
the decay rate ``kappa`` there instead (``denominator="kappa"``) is kept for
comparison; it differs from the true partner by the factor ``ky / kappa``
(electrons) or ``-ky / kappa`` (holes), which is 1 only for ``mu = 0``
electrons.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import (
    PotentialParams,
    Regime,
    ScarfParams,
    SpinorSample,
    classify_regime,
)
from .specfun import (
    JacobiParams,
    gudermannian_phase,
    jacobi_poly,
    jacobi_poly_derivative,
    log_sech,
)


class ModeError(ValueError):
    """Requested mode is not admissible for the given potential."""


@dataclass(frozen=True)
class ZeroMode:
    n: int
    ky: float
    regime: Regime
    kappa: float


@dataclass(frozen=True)
class _Component:
    coef: complex
    power: float
    phase: complex
    jacobi: JacobiParams


def zero_mode_count(p: PotentialParams) -> int:
    regime = classify_regime(p)
    if not regime.has_modes:
        return 0
    # strict inequality n < |lam| - 1/2: the marginal integer is excluded
    return max(0, math.ceil(abs(p.lam) - 0.5))


def zero_mode(p: PotentialParams, n: int) -> ZeroMode:
    p.require_valid()
    count = zero_mode_count(p)
    if not 0 <= n < count:
        bound = abs(p.lam) - 0.5
        raise ModeError(
            f"n must satisfy n < {bound:g} (valid n: 0..{count - 1})" if count
            else f"no zero modes for lambda={p.lam:g}: n must satisfy n < {bound:g}")
    regime = classify_regime(p)
    if regime is Regime.ELECTRON_BOUND:
        kappa = p.lam - 0.5 - n
    else:
        kappa = -p.lam - 0.5 - n
    return ZeroMode(n=n, ky=math.hypot(p.mu, kappa), regime=regime, kappa=kappa)


def zero_mode_spectrum(p: PotentialParams) -> list[ZeroMode]:
    """All admissible modes, ordered by ``n``; empty outside the bound regimes."""
    p.require_valid()
    return [zero_mode(p, n) for n in range(zero_mode_count(p))]


def _check(p: PotentialParams, m: ZeroMode) -> None:
    regime = classify_regime(p)
    if m.regime is not regime:
        raise ModeError(f"mode regime {m.regime.value} does not match {regime.value}")
    if not 0 <= m.n < zero_mode_count(p):
        raise ModeError(f"n={m.n} is not admissible for lambda={p.lam:g}")


def partner_coefficient(p: PotentialParams, m: ZeroMode, denominator: str = "ky") -> complex:
    lam, mu, n = p.lam, p.mu, m.n
    if m.regime is Regime.ELECTRON_BOUND:
        num = 1j * (n - lam + 1j * mu + 0.5)
        kappa_den = lam - n - 0.5
    else:
        num = (n + lam + 1j * mu + 0.5) / 1j
        kappa_den = lam + n + 0.5
    if denominator == "ky":
        return num / m.ky
    if denominator == "kappa":
        return num / kappa_den
    raise ValueError(f"denominator must be 'ky' or 'kappa', got {denominator!r}")


def _components(p: PotentialParams, m: ZeroMode, denominator: str = "ky"):
    lam, mu, n = p.lam, p.mu, m.n
    coef2 = partner_coefficient(p, m, denominator)
    if m.regime is Regime.ELECTRON_BOUND:
        power = lam - 0.5
        c1 = _Component(1.0, power, -mu + 0.5j, JacobiParams(-lam - 1j * mu - 0.5, -lam + 1j * mu + 0.5, n))
        c2 = _Component(coef2, power, -(mu + 0.5j), JacobiParams(-lam - 1j * mu + 0.5, -lam + 1j * mu - 0.5, n))
    else:
        power = -(lam + 0.5)
        c1 = _Component(1.0, power, mu - 0.5j, JacobiParams(lam + 1j * mu + 0.5, lam - 1j * mu - 0.5, n))
        c2 = _Component(coef2, power, mu + 0.5j, JacobiParams(lam + 1j * mu - 0.5, lam - 1j * mu + 0.5, n))
    return c1, c2


def _evaluate(comp: _Component, x, derivs: int = 0):
    """Value and up to two x-derivatives of one envelope-times-Jacobi component."""
    x = np.asarray(x, dtype=float)
    sh = np.sinh(x)
    z = 1j * sh
    g = gudermannian_phase(x)
    env = comp.coef * np.exp(comp.power * log_sech(x) + comp.phase * g)
    P = jacobi_poly(comp.jacobi, z)
    out = [env * P]
    if derivs == 0:
        return out
    s = 1.0 / np.cosh(x)
    t = np.tanh(x)
    ch = np.cosh(x)
    u = -comp.power * t + comp.phase * s
    dP = jacobi_poly_derivative(comp.jacobi, z)
    out.append(env * (u * P + 1j * ch * dP))
    if derivs == 1:
        return out
    du = -comp.power * s * s - comp.phase * s * t
    d2P = jacobi_poly_derivative(comp.jacobi, z, order=2)
    out.append(env * ((u * u + du) * P + 2j * u * ch * dP + 1j * sh * dP - ch * ch * d2P))
    return out


def psi1_value(p: PotentialParams, m: ZeroMode, x):
    _check(p, m)
    return _evaluate(_components(p, m)[0], x)[0]


def psi2_value(p: PotentialParams, m: ZeroMode, x, denominator: str = "ky"):
    _check(p, m)
    return _evaluate(_components(p, m, denominator)[1], x)[0]


def psi1_derivatives(p: PotentialParams, m: ZeroMode, x):
    """``(psi_1, psi_1', psi_1'')`` in closed form."""
    _check(p, m)
    return tuple(_evaluate(_components(p, m)[0], x, derivs=2))


def psi2_derivatives(p: PotentialParams, m: ZeroMode, x):
    _check(p, m)
    return tuple(_evaluate(_components(p, m)[1], x, derivs=2))


def spinor_value(p: PotentialParams, m: ZeroMode, ky_sign: int, x) -> SpinorSample:
    """Spinor ``(psi_A, psi_B)`` with closed-form derivatives, unnormalised.

    ``ky_sign=-1`` returns the swapped spinor, which solves the Dirac system
    with ``ky -> -ky``.
    """
    if ky_sign not in (1, -1):
        raise ValueError("ky_sign must be +1 or -1")
    _check(p, m)
    c1, c2 = _components(p, m)
    f1, d1 = _evaluate(c1, x, derivs=1)
    f2, d2 = _evaluate(c2, x, derivs=1)
    sample = SpinorSample(np.asarray(x, dtype=float), (f1 + f2) / 2, (f1 - f2) / 2,
                          (d1 + d2) / 2, (d1 - d2) / 2)
    return sample if ky_sign == 1 else sample.swapped()


def spinor_factored_form(p: PotentialParams, m: ZeroMode, x, denominator: str = "ky"):
    """``(psi_A, psi_B)`` written with the common prefactor pulled out::

        1/2 sech^p exp(c2 g) [exp(+-i g) P1 +- coef P2]

    Equal to :func:`spinor_value` when ``denominator="ky"``.
    """
    _check(p, m)
    c1, c2 = _components(p, m, denominator)
    x = np.asarray(x, dtype=float)
    g = gudermannian_phase(x)
    z = 1j * np.sinh(x)
    pre = 0.5 * np.exp(c2.power * log_sech(x) + c2.phase * g)
    inner = np.exp((c1.phase - c2.phase) * g) * jacobi_poly(c1.jacobi, z)
    other = c2.coef * jacobi_poly(c2.jacobi, z)
    return pre * (inner + other), pre * (inner - other)


def normalized_spinor(p: PotentialParams, m: ZeroMode, ky_sign: int, grid) -> tuple[SpinorSample, float]:
    """Spinor on ``grid`` scaled to unit L2 norm; also returns the raw norm."""
    from .numeric import l2_normalize

    return l2_normalize(spinor_value(p, m, ky_sign, grid.points()), grid)


def normalizable(s: ScarfParams) -> bool:
    """Envelope sech(x)**A decays only when Re A > 0."""
    return s.A.real > 0


def swap_scarf(s: ScarfParams) -> ScarfParams:
    """The A + 1/2 <-> B image of a Scarf parameter set (second solution set)."""
    return ScarfParams(s.B - 0.5, s.A + 0.5, s.case_label + "'")
