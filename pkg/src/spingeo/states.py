"""Validated two-qubit density matrices, canonical states and state metrics."""
import enum
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import (
    ConvergenceError,
    DomainError,
    NotHermitianError,
    NotPositiveError,
    TraceError,
)
from .pauli import PAULI, SIGMA_Y, as_matrix

ATOL = 1e-9
MAX_SWEEPS = 50

_SPIN_FLIP = np.kron(SIGMA_Y, SIGMA_Y)


def eigh(mat):
    """Eigen-decomposition of a Hermitian matrix by cyclic Jacobi."""
    mat = as_matrix(mat)
    w, v, sweeps = kernels.jacobi_eigh(np.ascontiguousarray(mat), MAX_SWEEPS)
    if sweeps < 0:
        raise ConvergenceError(f"Jacobi eigensolver did not converge in {MAX_SWEEPS} sweeps")
    return w, v


def eigvalsh(mat):
    return eigh(mat)[0]


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A 4x4 state that has passed :func:`validate`.

    Construct through :func:`validate`; the constructor only freezes the array.
    """

    mat: np.ndarray

    def __post_init__(self):
        mat = np.array(self.mat, dtype=np.complex128, copy=True)
        if mat.shape != (4, 4):
            raise DomainError(f"density matrix must be 4x4, got shape {mat.shape}")
        mat.flags.writeable = False
        object.__setattr__(self, "mat", mat)

    def __array__(self, dtype=None, copy=None):
        return self.mat if dtype is None else self.mat.astype(dtype)


@dataclass(frozen=True)
class StateMetrics:
    purity: float
    concurrence: float
    ppt_separable: bool
    min_pt_eigenvalue: float


def validate(mat, atol=ATOL):
    """Check Hermiticity, unit trace and positivity; return a :class:`DensityMatrix`."""
    mat = as_matrix(mat)
    if mat.shape != (4, 4):
        raise DomainError(f"density matrix must be 4x4, got shape {mat.shape}")
    if not np.all(np.isfinite(mat)):
        raise DomainError("density matrix has non-finite entries")
    herm = np.max(np.abs(mat - mat.conj().T))
    if herm > atol:
        raise NotHermitianError(f"matrix is not Hermitian (max |rho - rho^dag| = {herm:.3e})")
    tr = np.trace(mat)
    if abs(tr - 1.0) > atol:
        raise TraceError(f"trace is {tr.real:.12g}, expected 1")
    lowest = eigvalsh(0.5 * (mat + mat.conj().T))[0]
    if lowest < -atol:
        raise NotPositiveError(f"matrix has negative eigenvalue {lowest:.3e}")
    return DensityMatrix(mat)


class BellState(str, enum.Enum):
    PSI_PLUS = "psi+"
    PSI_MINUS = "psi-"
    PHI_PLUS = "phi+"
    PHI_MINUS = "phi-"


# unnormalised; the norm is sqrt(2)
_BELL_KETS = {
    BellState.PSI_PLUS: np.array([0, 1, 1, 0]),
    BellState.PSI_MINUS: np.array([0, 1, -1, 0]),
    BellState.PHI_PLUS: np.array([1, 0, 0, 1]),
    BellState.PHI_MINUS: np.array([1, 0, 0, -1]),
}


def bell_ket(which):
    return _BELL_KETS[BellState(which)].astype(np.complex128) / np.sqrt(2)


def bell_state(which):
    # entries come out exactly +-1/2
    ket = _BELL_KETS[BellState(which)]
    return DensityMatrix(0.5 * np.outer(ket, ket.conj()).astype(np.complex128))


def maximally_mixed():
    return DensityMatrix(np.eye(4) / 4)


def werner_state(x):
    """x |psi-><psi-| + (1 - x) 1/4, for 0 <= x <= 1."""
    if not np.isfinite(x) or not 0.0 <= x <= 1.0:
        raise DomainError(f"Werner weight must lie in [0, 1], got {x!r}")
    singlet = bell_state(BellState.PSI_MINUS).mat
    return DensityMatrix(x * singlet + (1.0 - x) * np.eye(4) / 4)


def partial_transpose(mat):
    """Partial transpose over the second qubit."""
    t = as_matrix(mat).reshape(2, 2, 2, 2)
    return t.transpose(0, 3, 2, 1).reshape(4, 4)


def purity(rho):
    mat = as_matrix(rho)
    return float(np.real(np.trace(mat @ mat)))


def _psd_sqrt(mat):
    w, v = eigh(mat)
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.conj().T


def concurrence(rho):
    """Wootters concurrence via the spin-flipped state.

    Uses the Hermitian form sqrt(rho) rho~ sqrt(rho), whose eigenvalues are
    those of rho rho~.
    """
    mat = as_matrix(rho)
    flipped = _SPIN_FLIP @ mat.conj() @ _SPIN_FLIP
    root = _psd_sqrt(mat)
    herm = root @ flipped @ root
    mu = eigvalsh(0.5 * (herm + herm.conj().T))
    lam = np.sqrt(np.clip(mu, 0.0, None))[::-1]
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def metrics(rho, atol=ATOL):
    mat = as_matrix(rho)
    pt_min = float(eigvalsh(partial_transpose(mat))[0])
    return StateMetrics(
        purity=purity(mat),
        concurrence=concurrence(mat),
        ppt_separable=pt_min >= -atol,
        min_pt_eigenvalue=pt_min,
    )


def su2_to_so3(u, atol=1e-9):
    """Rotation O with U (n . sigma) U^dag = (O n) . sigma."""
    u = np.asarray(u, dtype=np.complex128)
    if u.shape != (2, 2):
        raise DomainError("expected a 2x2 matrix")
    if np.max(np.abs(u @ u.conj().T - np.eye(2))) > atol:
        raise DomainError("matrix is not unitary")
    if abs(np.linalg.det(u) - 1.0) > atol:
        raise DomainError("unitary does not have determinant 1")
    sig = PAULI[1:]
    # O_ij = 1/2 Tr(sigma_i U sigma_j U^dag)
    rotated = np.einsum("ab,jbc,dc->jad", u, sig, u.conj())
    return np.einsum("iab,jba->ij", sig, rotated).real / 2


def local_unitary(state, u1, u2):
    """Apply U1 (x) U2 by conjugation."""
    big = np.kron(u1, u2)
    return big @ as_matrix(state) @ big.conj().T


def random_density_matrix(rng, rank=4):
    """Ginibre-ensemble state of the given rank."""
    g = rng.normal(size=(4, rank)) + 1j * rng.normal(size=(4, rank))
    mat = g @ g.conj().T
    mat /= np.trace(mat).real
    return DensityMatrix(0.5 * (mat + mat.conj().T))


def random_su2(rng):
    q = rng.normal(size=4)
    a, b, c, d = q / np.linalg.norm(q)
    return np.array([[a + 1j * b, -c + 1j * d], [c + 1j * d, a - 1j * b]])
