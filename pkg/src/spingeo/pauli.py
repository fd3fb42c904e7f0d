"""Product-Pauli basis and the (m, n, c) decomposition of two-qubit operators.

A two-qubit density matrix is written as

    rho = 1/4 (1 x 1 + m . sigma x 1 + n . 1 x sigma + c_ij sigma_i x sigma_j)

with index 0 the identity and 1, 2, 3 the Pauli matrices x, y, z.
"""
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NumericConsistencyError

IMAG_TOL = 1e-9

IDENTITY2 = np.eye(2, dtype=np.complex128)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)

# PAULI[0] is the identity, PAULI[1:] are sigma_x, sigma_y, sigma_z.
PAULI = np.stack([IDENTITY2, SIGMA_X, SIGMA_Y, SIGMA_Z])
# BASIS[a, b] = PAULI[a] kron PAULI[b]
BASIS = np.einsum("aij,bkl->abikjl", PAULI, PAULI).reshape(4, 4, 4, 4)

for _arr in (IDENTITY2, SIGMA_X, SIGMA_Y, SIGMA_Z, PAULI, BASIS):
    _arr.flags.writeable = False


def _frozen(a, dtype=np.float64):
    out = np.array(a, dtype=dtype, copy=True)
    out.flags.writeable = False
    return out


def as_matrix(x):
    """Return the raw complex ndarray behind a matrix-like value."""
    mat = getattr(x, "mat", x)
    return np.asarray(mat, dtype=np.complex128)


def mat_close(a, b, atol):
    """Entry-wise equality of two matrices within an absolute tolerance."""
    a = as_matrix(a)
    b = as_matrix(b)
    return a.shape == b.shape and bool(np.max(np.abs(a - b), initial=0.0) <= atol)


@dataclass(frozen=True, eq=False)
class PauliDecomposition:
    """Local Bloch vectors ``m``, ``n`` and the 3x3 correlation matrix ``c``."""

    m: np.ndarray
    n: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        m = _frozen(self.m)
        n = _frozen(self.n)
        c = _frozen(self.c)
        if m.shape != (3,) or n.shape != (3,) or c.shape != (3, 3):
            raise DomainError("m and n must be 3-vectors and c a 3x3 matrix")
        if not (np.all(np.isfinite(m)) and np.all(np.isfinite(n)) and np.all(np.isfinite(c))):
            raise DomainError("decomposition entries must be finite")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "c", c)

    @classmethod
    def zero(cls):
        return cls(np.zeros(3), np.zeros(3), np.zeros((3, 3)))

    @classmethod
    def from_vector(cls, v):
        v = np.asarray(v, dtype=np.float64)
        return cls(v[0:3], v[3:6], v[6:15].reshape(3, 3))

    def as_vector(self):
        """15 components in the order m, n, c (row-major)."""
        return np.concatenate([self.m, self.n, self.c.ravel()])

    def allclose(self, other, atol):
        return bool(np.max(np.abs(self.as_vector() - other.as_vector())) <= atol)

    def has_local_parameters(self, atol=1e-12):
        return bool(np.max(np.abs(self.m)) > atol or np.max(np.abs(self.n)) > atol)


def pauli_basis_element(i, j):
    """Kronecker product ``PAULI[i] (x) PAULI[j]`` as a 4x4 complex matrix."""
    for idx in (i, j):
        if isinstance(idx, bool) or not isinstance(idx, (int, np.integer)) or not 0 <= idx <= 3:
            raise DomainError(f"Pauli index must be an integer in 0..3, got {idx!r}")
    return BASIS[i, j].copy()


def pauli_coefficients(mat, imag_tol=IMAG_TOL):
    """All 16 traces ``Tr(B_ab mat)`` as a real 4x4 table."""
    mat = as_matrix(mat)
    if mat.shape != (4, 4):
        raise DomainError(f"expected a 4x4 matrix, got shape {mat.shape}")
    table = np.einsum("abij,ji->ab", BASIS, mat)
    worst = np.max(np.abs(table.imag))
    if worst > imag_tol:
        raise NumericConsistencyError(
            f"Pauli trace has imaginary part {worst:.3e} > {imag_tol:.1e}; input is not Hermitian"
        )
    return table.real


def decompose(rho, imag_tol=IMAG_TOL):
    table = pauli_coefficients(rho, imag_tol)
    return PauliDecomposition(table[1:, 0], table[0, 1:], table[1:, 1:])


def reconstruct(d):
    table = np.zeros((4, 4))
    table[0, 0] = 1.0
    table[1:, 0] = d.m
    table[0, 1:] = d.n
    table[1:, 1:] = d.c
    return 0.25 * np.einsum("ab,abij->ij", table, BASIS)


def spin_operator(direction):
    """``direction . sigma`` for a real 3-vector."""
    direction = np.asarray(direction, dtype=np.float64)
    return np.einsum("i,ijk->jk", direction, PAULI[1:])


def joint_correlation(d, a, b, atol=1e-9):
    """Expectation of the joint spin measurement along ``a`` and ``b``: a^T c b."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    for name, vec in (("a", a), ("b", b)):
        if vec.shape != (3,) or abs(np.linalg.norm(vec) - 1.0) > atol:
            raise DomainError(f"direction {name} must be a unit 3-vector")
    return float(a @ d.c @ b)
