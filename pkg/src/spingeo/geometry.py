"""Spin-geometry picture: correlation vectors, tetrahedron and octahedron.

A correlation matrix ``c`` is brought to diagonal form ``P diag(values) Q^T``
with ``P, Q`` proper rotations. Because rotations cannot change the sign of
``det c``, a negative determinant leaves one negative value; it is put on the
entry of smallest magnitude. The signed values are the correlation vector.
"""
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .closed_form import asymptotic, evolve_analytic
from .errors import ConvergenceError, DomainError

MAX_SWEEPS = 50
ZERO_REL = 1e-12
MEMBERSHIP_TOL = 1e-12
CROSSING_GRID = 0.01
CROSSING_MAX = 50.0
CROSSING_TOL = 1e-10
# margin a trajectory must exceed to count as inside; above round-off of ~1e-16
ENTRY_MARGIN = 1e-12


@dataclass(frozen=True, eq=False)
class CorrelationVector:
    values: np.ndarray
    left_factor: np.ndarray
    right_factor: np.ndarray

    @property
    def magnitudes(self):
        return np.abs(self.values)

    def matrix(self):
        return self.left_factor @ np.diag(self.values) @ self.right_factor.T


@dataclass(frozen=True)
class MembershipVerdict:
    in_tetrahedron: bool
    in_octahedron: bool
    tetra_margin: float
    octa_margin: float


def _unit_orthogonal_to(p0):
    k = int(np.argmin(np.abs(p0)))
    e = np.zeros(3)
    e[k] = 1.0
    w = e - (e @ p0) * p0
    return w / np.linalg.norm(w)


def svd3(c):
    c = np.asarray(c, dtype=np.float64)
    if c.shape != (3, 3) or not np.all(np.isfinite(c)):
        raise DomainError("svd3 needs a finite 3x3 matrix")
    u, v, sweeps = kernels.svd3_sweeps(np.ascontiguousarray(c), MAX_SWEEPS)
    if sweeps < 0:
        raise ConvergenceError(f"one-sided Jacobi did not converge in {MAX_SWEEPS} sweeps")
    sigma = np.sqrt(np.sum(u * u, axis=0))
    order = np.argsort(-sigma, kind="stable")
    sigma, u, v = sigma[order], u[:, order], v[:, order]
    if np.linalg.det(v) < 0:
        # same column on both sides: the product is unchanged
        v[:, 0] = -v[:, 0]
        u[:, 0] = -u[:, 0]

    if sigma[0] > 0:
        p0 = u[:, 0] / sigma[0]
    else:
        p0 = np.array([1.0, 0.0, 0.0])
    if sigma[1] > ZERO_REL * sigma[0]:
        p1 = u[:, 1] - (u[:, 1] @ p0) * p0
        p1 /= np.linalg.norm(p1)
    else:
        p1 = _unit_orthogonal_to(p0)
    p2 = np.cross(p0, p1)
    sign = -1.0 if u[:, 2] @ p2 < 0 else 1.0

    values = np.array([sigma[0], sigma[1], sign * sigma[2]])
    left = np.column_stack([p0, p1, p2])
    for a in (values, left, v):
        a.flags.writeable = False
    return CorrelationVector(values, left, v)


def _values(v):
    vals = v.values if isinstance(v, CorrelationVector) else v
    vals = np.asarray(vals, dtype=np.float64)
    if vals.shape != (3,):
        raise DomainError("correlation vector must have three components")
    return vals


def tetrahedron_slacks(values):
    """Four times the Bell-diagonal eigenvalues of the state with this vector."""
    c1, c2, c3 = _values(values)
    return np.array([1 - c1 - c2 - c3, 1 - c1 + c2 + c3, 1 + c1 - c2 + c3, 1 + c1 + c2 - c3])


def membership(v, atol=MEMBERSHIP_TOL):
    vals = _values(v)
    tetra = float(np.min(tetrahedron_slacks(vals)))
    octa = float(1.0 - np.sum(np.abs(vals)))
    inside_tetra = tetra >= -atol
    return MembershipVerdict(inside_tetra, inside_tetra and octa >= -atol, tetra, octa)


def octahedron_margin_at(sol, lam_t):
    t = lam_t / sol.lam
    return membership(svd3(evolve_analytic(sol, t).c)).octa_margin


@dataclass(frozen=True, eq=False)
class CrossingResult:
    """Outcome of a separability-crossing search.

    ``status`` is ``"crossing"`` (finite ``lambda_t``), ``"already-separable"``
    (``lambda_t == 0``) or ``"none"``; ``asymptotic_boundary`` marks the case
    where the octahedron surface is only reached as ``t -> infinity``.
    """

    status: str
    lambda_t: float | None
    asymptotic_boundary: bool
    vector: CorrelationVector | None


def separability_crossing(sol, grid_step=CROSSING_GRID, lam_t_max=CROSSING_MAX, tol=CROSSING_TOL):
    """First ``lam * t`` at which the correlation vector enters the octahedron."""
    if sol.initial.has_local_parameters():
        raise DomainError("separability crossing requires vanishing local parameters m = n = 0")
    start = svd3(sol.initial.c)
    if membership(start).octa_margin >= -MEMBERSHIP_TOL:
        return CrossingResult("already-separable", 0.0, False, start)
    asym = membership(np.asarray(asymptotic(sol).correlation_vector))
    on_boundary = abs(asym.octa_margin) <= 1e-9
    if sol.lam == 0:
        return CrossingResult("none", None, False, None)

    n = int(round(lam_t_max / grid_step))
    lo = 0.0
    hi = None
    for i in range(1, n + 1):
        x = i * grid_step
        if octahedron_margin_at(sol, x) >= ENTRY_MARGIN:
            hi = x
            break
        lo = x
    if hi is None:
        return CrossingResult("none", None, on_boundary, None)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if octahedron_margin_at(sol, mid) >= ENTRY_MARGIN:
            hi = mid
        else:
            lo = mid
    lam_t = 0.5 * (lo + hi)
    return CrossingResult("crossing", lam_t, False, svd3(evolve_analytic(sol, lam_t / sol.lam).c))


def trajectory_points(sol, t_grid):
    t_grid = [float(t) for t in t_grid]
    if any(t < 0 or not math.isfinite(t) for t in t_grid):
        raise DomainError("time grid must be finite and nonnegative")
    if any(b < a for a, b in zip(t_grid, t_grid[1:])):
        raise DomainError("time grid must be sorted ascending")
    return [svd3(evolve_analytic(sol, t).c) for t in t_grid]
