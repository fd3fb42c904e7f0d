"""Projector-generated pure decoherence and its RK4 integration.

The dissipator for four rank-1 projectors summing to the identity and a single
rate ``lam`` is ``D(rho) = lam (rho - sum_k P_k rho P_k)``; the state obeys
``d(rho)/dt = -D(rho)``. The mode-A projectors are the product eigenprojectors
of sigma_z; modes B and C rotate them about the y axis on the first qubit, or
independently on both.
"""
import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DomainError, IntegrationDriftError, ValidationError
from .pauli import IDENTITY2, SIGMA_Z, as_matrix
from .states import DensityMatrix, validate

PROJECTOR_TOL = 1e-12
DEFAULT_STEP = 1e-3  # in units of lam * t


class Mode(str, enum.Enum):
    A = "A"
    B = "B"
    C = "C"


def canonical_angles(mode, alpha, beta):
    """Force the angles a mode ignores to zero."""
    mode = Mode(mode)
    if mode is Mode.A:
        return mode, 0.0, 0.0
    if mode is Mode.B:
        return mode, float(alpha), 0.0
    return mode, float(alpha), float(beta)


@dataclass(frozen=True)
class RotationSpec:
    """Rotation by ``angle`` about the fixed y axis."""

    angle: float

    @property
    def axis(self):
        return (0.0, 1.0, 0.0)

    def unitary(self):
        return rotation_unitary(self.angle)


def rotation_unitary(angle):
    h = 0.5 * angle
    return np.array([[math.cos(h), -math.sin(h)], [math.sin(h), math.cos(h)]], dtype=np.complex128)


_UP = 0.5 * (IDENTITY2 + SIGMA_Z)
_DOWN = 0.5 * (IDENTITY2 - SIGMA_Z)
# k = 1..4 <-> |00>, |01>, |10>, |11>
_SINGLE_QUBIT = ((_UP, _UP), (_UP, _DOWN), (_DOWN, _UP), (_DOWN, _DOWN))


@dataclass(frozen=True, eq=False)
class ProjectorSet:
    mode: Mode
    alpha: float
    beta: float
    projectors: np.ndarray

    def __post_init__(self):
        p = np.array(self.projectors, dtype=np.complex128, copy=True)
        p.flags.writeable = False
        object.__setattr__(self, "projectors", p)

    def __iter__(self):
        return iter(self.projectors)

    def check(self, atol=PROJECTOR_TOL):
        """True when the set is a complete family of orthogonal projectors."""
        p = self.projectors
        if np.max(np.abs(p.sum(axis=0) - np.eye(4))) > atol:
            return False
        for k in range(4):
            if np.max(np.abs(p[k] - p[k].conj().T)) > atol:
                return False
            for l in range(4):
                expect = p[k] if k == l else 0.0
                if np.max(np.abs(p[k] @ p[l] - expect)) > atol:
                    return False
        return True


def build_projectors(mode, alpha=0.0, beta=0.0):
    mode, alpha, beta = canonical_angles(mode, alpha, beta)
    u1 = rotation_unitary(alpha)
    u2 = rotation_unitary(beta)
    out = np.empty((4, 4, 4), dtype=np.complex128)
    for k, (p1, p2) in enumerate(_SINGLE_QUBIT):
        out[k] = np.kron(u1 @ p1 @ u1.conj().T, u2 @ p2 @ u2.conj().T)
    return ProjectorSet(mode, alpha, beta, out)


@dataclass(frozen=True)
class DecoherenceConfig:
    lam: float
    projector_set: ProjectorSet

    def __post_init__(self):
        if not math.isfinite(self.lam) or self.lam < 0:
            raise DomainError(f"decoherence rate must be finite and >= 0, got {self.lam!r}")


def dissipator(rho, cfg):
    mat = as_matrix(rho)
    return -kernels.dissipator_rhs(np.ascontiguousarray(mat), cfg.projector_set.projectors, float(cfg.lam))


def integrate(rho0, cfg, t, dt=None):
    """Evolve ``rho0`` to time ``t`` with fixed-step RK4.

    ``dt`` defaults to ``1e-3 / lam``; when ``t`` is not a multiple of ``dt``
    a final shorter step lands exactly on ``t``.
    """
    if not math.isfinite(t) or t < 0:
        raise DomainError(f"time must be finite and >= 0, got {t!r}")
    if dt is None:
        dt = DEFAULT_STEP / cfg.lam if cfg.lam > 0 else DEFAULT_STEP
    if not math.isfinite(dt) or dt <= 0:
        raise DomainError(f"step must be positive, got {dt!r}")
    mat = as_matrix(rho0)
    if t == 0 or cfg.lam == 0:
        return rho0 if isinstance(rho0, DensityMatrix) else validate(mat)
    n_steps = int(math.floor(t / dt))
    last = t - n_steps * dt
    if last <= 1e-9 * dt:
        last = 0.0
    out = kernels.rk4_propagate(
        np.ascontiguousarray(mat), cfg.projector_set.projectors, float(cfg.lam), float(dt), n_steps, float(last)
    )
    try:
        return validate(out)
    except ValidationError as exc:
        raise IntegrationDriftError(f"integrated state left the state space: {exc}") from exc


def integrate_many(jobs, workers=None):
    """Run ``integrate(*job)`` for each job tuple; results keep job order."""
    jobs = list(jobs)
    if workers is None or workers <= 1:
        return [integrate(*job) for job in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda job: integrate(*job), jobs))
