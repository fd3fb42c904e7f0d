"""Exact solutions of the projector master equation in the Pauli picture.

With ``u = (sin a, 0, cos a)`` and ``v = (sin b, 0, cos b)`` the component of
``m`` along ``u``, of ``n`` along ``v`` and the bilinear ``u^T c v`` are
conserved, while everything orthogonal to them decays as ``exp(-lam t)``:

    m(t) = e m0 + (1 - e) (u . m0) u
    n(t) = e n0 + (1 - e) (v . n0) v
    c(t) = e c0 + (1 - e) (u^T c0 v) u v^T,        e = exp(-lam t)

Mode A is ``a = b = 0``, mode B is ``b = 0``.
"""
import math
from dataclasses import dataclass

import numpy as np

from .decoherence import Mode, canonical_angles
from .errors import DomainError, NumericError
from .pauli import PauliDecomposition

RADICAND_CLAMP = 1e-12

# Test hook: added to every evolved c entry when nonzero (fault injection).
_FAULT_OFFSET = 0.0


def axis_vector(angle):
    return np.array([math.sin(angle), 0.0, math.cos(angle)])


@dataclass(frozen=True)
class AnalyticSolution:
    mode: Mode
    alpha: float
    beta: float
    lam: float
    initial: PauliDecomposition

    def __post_init__(self):
        mode, alpha, beta = canonical_angles(self.mode, self.alpha, self.beta)
        object.__setattr__(self, "mode", mode)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)
        if not math.isfinite(self.lam) or self.lam < 0:
            raise DomainError(f"decoherence rate must be finite and >= 0, got {self.lam!r}")

    def at(self, t):
        return evolve_analytic(self, t)


@dataclass(frozen=True, eq=False)
class AsymptoticResult:
    c_infinity: np.ndarray
    w: float
    correlation_vector: tuple


def evolve_analytic(sol, t):
    if not math.isfinite(t) or t < 0:
        raise DomainError(f"time must be finite and >= 0, got {t!r}")
    d0 = sol.initial
    if t == 0:
        return d0
    e = math.exp(-sol.lam * t)
    f = -math.expm1(-sol.lam * t)
    u = axis_vector(sol.alpha)
    v = axis_vector(sol.beta)
    m = e * d0.m + f * (u @ d0.m) * u
    n = e * d0.n + f * (v @ d0.n) * v
    c = e * d0.c + f * (u @ d0.c @ v) * np.outer(u, v)
    if _FAULT_OFFSET:
        c = c + _FAULT_OFFSET
    return PauliDecomposition(m, n, c)


def asymptotic(sol):
    """Infinite-time correlation matrix ``w u v^T`` with ``w = u^T c0 v``."""
    u = axis_vector(sol.alpha)
    v = axis_vector(sol.beta)
    w = float(u @ sol.initial.c @ v)
    return AsymptoticResult(w * np.outer(u, v), w, (0.0, 0.0, abs(w)))


def relative_angle(mode, alpha, beta):
    mode, alpha, beta = canonical_angles(mode, alpha, beta)
    return alpha - beta


def _check_time(lam, t):
    if not math.isfinite(t) or t < 0:
        raise DomainError(f"time must be finite and >= 0, got {t!r}")
    if not math.isfinite(lam) or lam < 0:
        raise DomainError(f"decoherence rate must be finite and >= 0, got {lam!r}")


def _clamped_sqrt(x):
    if x < 0:
        if x < -RADICAND_CLAMP:
            raise NumericError(f"negative radicand {x:.3e}")
        return 0.0
    return math.sqrt(x)


def bell_singlet_singular_values(mode, alpha, beta, lam, t):
    """Singular values of the decohered singlet correlation matrix.

    The nested-radical expression is evaluated after multiplying through by
    ``exp(-2 lam t)`` so that no positive exponential appears; the returned
    ``(c1, c2, c3)`` follow the minus/plus branch order of the formula.
    """
    _check_time(lam, t)
    delta = relative_angle(mode, alpha, beta)
    e = math.exp(-lam * t)
    f = -math.expm1(-lam * t)
    cd = math.cos(delta)
    cos2 = math.cos(2 * delta)
    base = 3 * e * e + 2 * cd * cd - cos2 * e * e
    inner_sq = e * e * (5 - 3 * cos2) + 2 * (2 * e + 1) * cd * cd
    inner = math.sqrt(2) * f * cd * _clamped_sqrt(inner_sq)
    c2 = 0.5 * _clamped_sqrt(base - inner)
    c3 = 0.5 * _clamped_sqrt(base + inner)
    return (e, c2, c3)


def bell_singlet_expansion(alpha, lam, t):
    """Second-order small-angle approximations of the last two singular values."""
    _check_time(lam, t)
    e = math.exp(-lam * t)
    # (e/2) (1 - exp(lam t)) / (1 + exp(lam t)) written without exp(+lam t)
    g = 0.5 * e * (e - 1) / (e + 1)
    c2 = e + g * alpha**2
    c3 = 1 + 0.5 * (e - 1) / (e + 1) * (2 * e + 1) * alpha**2
    return (c2, c3)


def bell_singlet_eigenvalues(mode, alpha, beta, lam, t):
    _check_time(lam, t)
    delta = relative_angle(mode, alpha, beta)
    e = math.exp(-lam * t)
    return (-e, -e, -math.cos(delta) ** 2 - e * math.sin(delta) ** 2)
