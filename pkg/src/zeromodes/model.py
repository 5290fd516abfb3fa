"""The sech/tanh well, its effective complex potentials and Scarf II mapping.

Conventions (dimensionless, energy fixed to zero)::

    V(x)   = -lam sech x + mu tanh x
    V1, V2 = -V^2 -+ i V' + ky^2          (branch Plus / Minus)
    U_S(x) = -(B^2 + A^2 + A) sech^2 x + i B (2A + 1) sech x tanh x

With these, ``V1 = U_S + ky^2 - mu^2`` for the Scarf parameters returned by
:func:`scarf_parameters`.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .specfun import sech


class Branch(enum.Enum):
    PLUS = "+"
    MINUS = "-"

    @property
    def sign(self) -> int:
        return 1 if self is Branch.PLUS else -1


class Regime(enum.Enum):
    ELECTRON_BOUND = "ElectronBound"
    HOLE_BOUND = "HoleBound"
    NO_BOUND_STATES = "NoBoundStates"
    INVALID = "Invalid"

    @property
    def has_modes(self) -> bool:
        return self in (Regime.ELECTRON_BOUND, Regime.HOLE_BOUND)


class InvalidRegimeError(ValueError):
    """Raised when a solve is requested for lambda = 0."""


@dataclass(frozen=True)
class PotentialParams:
    lam: float
    mu: float

    def __post_init__(self):
        if not (math.isfinite(self.lam) and math.isfinite(self.mu)):
            raise ValueError(f"lambda and mu must be finite, got ({self.lam}, {self.mu})")
        object.__setattr__(self, "lam", float(self.lam))
        object.__setattr__(self, "mu", float(self.mu))

    def require_valid(self) -> None:
        if self.lam == 0.0:
            raise InvalidRegimeError(
                "lambda = 0 is the Invalid regime: no sech well, nothing to solve")


@dataclass(frozen=True)
class ScarfParams:
    A: complex
    B: complex
    case_label: str


@dataclass(frozen=True)
class SpinorSample:
    """Spinor components and their x-derivatives at one or many positions.

    Fields are scalars or equally shaped numpy arrays.
    """

    x: np.ndarray
    psiA: np.ndarray
    psiB: np.ndarray
    dpsiA: np.ndarray
    dpsiB: np.ndarray

    def swapped(self) -> "SpinorSample":
        return SpinorSample(self.x, self.psiB, self.psiA, self.dpsiB, self.dpsiA)

    def scaled(self, factor) -> "SpinorSample":
        return SpinorSample(self.x, self.psiA * factor, self.psiB * factor,
                            self.dpsiA * factor, self.dpsiB * factor)


def potential_value(p: PotentialParams, x):
    return -p.lam * sech(x) + p.mu * np.tanh(x)


def potential_derivative(p: PotentialParams, x):
    s = sech(x)
    return p.lam * s * np.tanh(x) + p.mu * s * s


def effective_potential(p: PotentialParams, br: Branch, ky: float, x):
    """Closed form of V1 (Plus) or V2 (Minus) after expanding in sech/tanh."""
    sgn = br.sign
    s = sech(x)
    t = np.tanh(x)
    lam, mu = p.lam, p.mu
    return ((mu * mu - sgn * 1j * mu - lam * lam) * s * s
            + lam * (2 * mu - sgn * 1j) * s * t + ky * ky - mu * mu)


def effective_potential_from_v(p: PotentialParams, br: Branch, ky: float, x):
    """The same potential built directly as -V^2 -+ i V' + ky^2."""
    v = potential_value(p, x)
    return -v * v - br.sign * 1j * potential_derivative(p, x) + ky * ky


def scarf_potential_value(s: ScarfParams, x):
    A, B = s.A, s.B
    sh = sech(x)
    return -(B * B + A * A + A) * sh * sh + 1j * B * (2 * A + 1) * sh * np.tanh(x)


def scarf_parameters(p: PotentialParams, br: Branch = Branch.PLUS) -> list[ScarfParams]:
    """All four (A, B) identifications of the effective potential with U_S.

    V2 is the complex conjugate of V1 for real parameters, and conj(U_S(A, B))
    equals U_S(conj A, -conj B), so the Minus branch maps each case to
    ``(conj A, -conj B)``. No admissibility filtering.
    """
    lam, mu = p.lam, p.mu
    cases = [
        ScarfParams(lam - 0.5 + 0j, -0.5 - 1j * mu, "a"),
        ScarfParams(-lam - 0.5 + 0j, 0.5 + 1j * mu, "b"),
        ScarfParams(1j * mu, -lam + 0j, "c"),
        ScarfParams(-1.0 - 1j * mu, lam + 0j, "d"),
    ]
    if br is Branch.MINUS:
        cases = [ScarfParams(c.A.conjugate(), -c.B.conjugate(), c.case_label) for c in cases]
    return cases


def classify_regime(p: PotentialParams) -> Regime:
    if p.lam == 0.0:
        return Regime.INVALID
    if p.lam > 0.5:
        return Regime.ELECTRON_BOUND
    if p.lam < -0.5:
        return Regime.HOLE_BOUND
    return Regime.NO_BOUND_STATES
