"""When does two-sided (mode C) decoherence look like one-sided (mode B)?

For initial states with ``m = n = 0`` and correlation matrices of the form

    [[ k1, 0, k2],
     [  0, k3, 0],
     [-k2, 0, k1]]

the mode-C correlation vector depends on the two rotation angles only through
their difference, and equals the mode-B vector at that difference. The
checks below test this structurally and numerically; they never assume the
structural condition is also sufficient.
"""
import math
from dataclasses import dataclass

import numpy as np

from .closed_form import AnalyticSolution, evolve_analytic
from .decoherence import Mode
from .errors import DomainError
from .geometry import membership, svd3
from .pauli import PauliDecomposition

STRUCT_TOL = 1e-10
EQUIV_TOL = 1e-9
GRID_SIZE = 12
RESIDUAL_LAM_T = 1.0


def angle_grid(size=GRID_SIZE):
    return [2 * math.pi * i / size for i in range(size)]


@dataclass(frozen=True)
class EquivalenceSeed:
    k1: float
    k2: float
    k3: float

    @property
    def radius(self):
        return math.hypot(self.k1, self.k2)

    def satisfies_bound(self, atol=1e-12):
        """The tetrahedron-facing bound 2 sqrt(k1^2 + k2^2) + k3 <= 1."""
        return 2 * self.radius + self.k3 <= 1 + atol

    def is_physical(self, atol=1e-12):
        """Whether the state with m = n = 0 and this matrix is a valid state."""
        return membership(svd3(seed_to_matrix(self)), atol).in_tetrahedron


def seed_to_matrix(s):
    return np.array([[s.k1, 0.0, s.k2], [0.0, s.k3, 0.0], [-s.k2, 0.0, s.k1]])


@dataclass(frozen=True)
class ConditionReport:
    trace_condition_ok: bool
    det_condition_ok: bool
    trace_residual: float
    det_residual: float
    singular_value_residual: float

    @property
    def residuals(self):
        return (self.trace_residual, self.det_residual)


def _correlations_only(c0):
    return PauliDecomposition(np.zeros(3), np.zeros(3), c0)


def _mode_pair(c0, alpha, beta, lam, t):
    """Correlation matrices after mode C at (alpha, beta) and mode B at alpha - beta."""
    init = _correlations_only(c0)
    mode_c = evolve_analytic(AnalyticSolution(Mode.C, alpha, beta, lam, init), t).c
    mode_b = evolve_analytic(AnalyticSolution(Mode.B, alpha - beta, 0.0, lam, init), t).c
    return mode_b, mode_c


def functional_residuals(c0, grid=None, lam_t=RESIDUAL_LAM_T):
    """Max |Tr B - Tr A|, |det B - det A| and singular-value gap over an angle grid.

    A is the mode-B matrix at the angle difference, B the mode-C matrix.
    """
    grid = angle_grid() if grid is None else grid
    tr = det = sv = 0.0
    for a in grid:
        for b in grid:
            mat_a, mat_b = _mode_pair(c0, a, b, 1.0, lam_t)
            tr = max(tr, abs(np.trace(mat_b) - np.trace(mat_a)))
            det = max(det, abs(np.linalg.det(mat_b) - np.linalg.det(mat_a)))
            sv = max(sv, float(np.max(np.abs(svd3(mat_b).magnitudes - svd3(mat_a).magnitudes))))
    return float(tr), float(det), sv


def check_conditions(c0, atol=STRUCT_TOL, grid=None, lam_t=RESIDUAL_LAM_T):
    c0 = np.asarray(c0, dtype=np.float64)
    if c0.shape != (3, 3):
        raise DomainError("expected a 3x3 correlation matrix")
    trace_ok = abs(c0[0, 0] - c0[2, 2]) <= atol and abs(c0[0, 2] + c0[2, 0]) <= atol
    det_ok = bool(np.all(np.abs([c0[0, 1], c0[1, 0], c0[1, 2], c0[2, 1]]) <= atol))
    tr, det, sv = functional_residuals(c0, grid, lam_t)
    return ConditionReport(bool(trace_ok), det_ok, tr, det, sv)


def max_singular_value_gap(c0, lam, t, grid):
    """Largest difference of mode-C and mode-B singular values over ``grid`` x ``grid``."""
    c0 = np.asarray(c0, dtype=np.float64)
    gap = 0.0
    for a in grid:
        for b in grid:
            mat_a, mat_b = _mode_pair(c0, a, b, lam, t)
            gap = max(gap, float(np.max(np.abs(svd3(mat_b).magnitudes - svd3(mat_a).magnitudes))))
    return gap


def verify_equivalence(s, lam, t, grid=None, tol=EQUIV_TOL):
    if not s.is_physical():
        raise DomainError(f"seed {s} does not describe a physical state")
    grid = angle_grid() if grid is None else grid
    return max_singular_value_gap(seed_to_matrix(s), lam, t, grid) <= tol
