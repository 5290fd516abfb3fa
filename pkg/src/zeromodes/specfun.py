"""Special functions: hyperbolic kernels, the phase atan(sinh x), and Jacobi
polynomials with complex parameters evaluated at complex arguments.

Everything here accepts scalars or numpy arrays and broadcasts.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_SINH_GUARD = 700.0


@dataclass(frozen=True)
class JacobiParams:
    """Superscripts ``(a, b)`` and degree ``n`` of ``P_n^{(a,b)}``."""

    a: complex
    b: complex
    n: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 0:
            raise ValueError(f"Jacobi degree must be a nonnegative integer, got {self.n!r}")
        if not (np.isfinite(complex(self.a)) and np.isfinite(complex(self.b))):
            raise ValueError("Jacobi parameters must be finite")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "a", complex(self.a))
        object.__setattr__(self, "b", complex(self.b))


def sech(x):
    return 1.0 / np.cosh(np.clip(x, -_SINH_GUARD, _SINH_GUARD))


def log_sech(x):
    """log(sech x) without overflow for large |x|."""
    ax = np.abs(x)
    return np.log(2.0) - ax - np.log1p(np.exp(-2.0 * ax))


def gudermannian_phase(x):
    """Return atan(sinh x), which lies in (-pi/2, pi/2).

    sinh overflows past |x| ~ 710; beyond |x| > 700 the phase equals +-pi/2
    to double precision, so the argument is clipped there.
    """
    return np.arctan(np.sinh(np.clip(x, -_SINH_GUARD, _SINH_GUARD)))


def _binomial(alpha, m: int):
    """Generalised binomial coefficient C(alpha, m) for complex alpha."""
    out = 1.0 + 0j
    for j in range(m):
        out = out * (alpha - j) / (j + 1)
    return out


def _jacobi_binomial_sum(a, b, n, z):
    # P_n = sum_s C(n+a, n-s) C(n+b, s) ((z-1)/2)^s ((z+1)/2)^(n-s); finite for all a, b
    zm = (z - 1.0) / 2.0
    zp = (z + 1.0) / 2.0
    total = 0.0 + 0j
    for s in range(n + 1):
        total = total + _binomial(n + a, n - s) * _binomial(n + b, s) * zm**s * zp ** (n - s)
    return total


def jacobi_poly(p: JacobiParams, z):
    """Evaluate ``P_n^{(a,b)}(z)`` by the three-term recurrence in ``n``.

    Parameter sets that make a recurrence denominator vanish (for example
    ``a + b = -k`` with ``k <= n``) are routed through the explicit binomial
    sum instead, which is finite for every complex ``a, b``.
    """
    a, b, n = p.a, p.b, p.n
    z = np.asarray(z, dtype=complex)
    if n == 0:
        return np.ones_like(z) if z.ndim else complex(1.0)
    ab = a + b
    for k in range(2, n + 1):
        if abs(2 * k * (k + ab) * (2 * k + ab - 2)) < 1e-13 * max(1.0, abs(ab)) ** 3:
            out = _jacobi_binomial_sum(a, b, n, z)
            return out if z.ndim else complex(out)

    prev = np.ones_like(z)
    cur = (a - b) / 2.0 + (ab + 2.0) * z / 2.0
    for k in range(2, n + 1):
        c = 2 * k + ab
        lead = 2 * k * (k + ab) * (c - 2)
        nxt = ((c - 1) * (c * (c - 2) * z + a * a - b * b) * cur
               - 2 * (k + a - 1) * (k + b - 1) * c * prev) / lead
        prev, cur = cur, nxt
    return cur if z.ndim else complex(cur)


def jacobi_poly_derivative(p: JacobiParams, z, order: int = 1):
    """``d^order/dz^order P_n^{(a,b)}(z)``.

    Uses d/dz P_n^{(a,b)} = (n+a+b+1)/2 * P_{n-1}^{(a+1,b+1)} repeatedly.
    """
    if order < 0:
        raise ValueError("derivative order must be nonnegative")
    z = np.asarray(z, dtype=complex)
    if order > p.n:
        return np.zeros_like(z) if z.ndim else 0j
    scale = 1.0 + 0j
    for j in range(1, order + 1):
        scale *= (p.n + p.a + p.b + j) / 2.0
    if order == 0:
        return jacobi_poly(p, z)
    shifted = JacobiParams(p.a + order, p.b + order, p.n - order)
    return scale * jacobi_poly(shifted, z)
