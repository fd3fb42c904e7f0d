"""Independent reference computations and random-input generators.

Nothing here calls the Jacobi kernels or the closed-form propagator; these
routines exist to check them.
"""
import math

import numpy as np

from .closed_form import AnalyticSolution
from .equivalence import EquivalenceSeed
from .states import DensityMatrix, bell_ket


def symmetric3_eigvals(s, polish=3):
    """Eigenvalues of a real symmetric 3x3 matrix from its characteristic
    polynomial (trigonometric cubic roots, then Newton polishing), descending."""
    s = np.asarray(s, dtype=np.float64)
    a2 = -np.trace(s)
    a1 = 0.5 * (np.trace(s) ** 2 - np.trace(s @ s))
    a0 = -np.linalg.det(s)
    # x^3 + a2 x^2 + a1 x + a0 = 0, shift x = y - a2/3
    p = a1 - a2 * a2 / 3
    q = 2 * a2**3 / 27 - a2 * a1 / 3 + a0
    shift = -a2 / 3
    if abs(p) < 1e-300:
        roots = np.full(3, shift + np.cbrt(-q))
    else:
        r = math.sqrt(max(-p / 3, 0.0))
        arg = 0.0 if r == 0 else -q / (2 * r**3)
        phi = math.acos(min(1.0, max(-1.0, arg)))
        roots = np.array([shift + 2 * r * math.cos((phi - 2 * math.pi * k) / 3) for k in range(3)])
    for _ in range(polish):
        f = roots**3 + a2 * roots**2 + a1 * roots + a0
        df = 3 * roots**2 + 2 * a2 * roots + a1
        step = np.where(np.abs(df) > 1e-300, f / np.where(df == 0, 1.0, df), 0.0)
        roots = roots - step
    return np.sort(roots)[::-1]


def _cofactors(c):
    return np.array([[np.linalg.det(np.delete(np.delete(c, i, 0), j, 1)) for j in range(3)] for i in range(3)])


def charpoly_singular_values(c):
    """Singular values of a 3x3 matrix from the characteristic polynomial of c^T c, descending.

    The largest comes from the cubic. The other two solve a quadratic built
    from the remaining coefficients, ||adj c||^2 and det(c)^2, taken directly
    from c so that small values do not inherit sqrt(round-off).
    """
    c = np.asarray(c, dtype=np.float64)
    s1_sq = max(symmetric3_eigvals(c.T @ c)[0], 0.0)
    if s1_sq == 0.0:
        return np.zeros(3)
    a1 = float(np.sum(_cofactors(c) ** 2))  # s1^2 s2^2 + s1^2 s3^2 + s2^2 s3^2
    prod = np.linalg.det(c) ** 2 / s1_sq  # s2^2 s3^2
    total = max((a1 - prod) / s1_sq, 0.0)  # s2^2 + s3^2
    s2_sq = 0.5 * (total + math.sqrt(max(total * total - 4 * prod, 0.0)))
    s3_sq = prod / s2_sq if s2_sq > 0 else 0.0
    return np.sqrt(np.array([s1_sq, s2_sq, s3_sq]))


def random_bell_diagonal(rng):
    weights = rng.dirichlet(np.ones(4))
    mat = sum(w * np.outer(bell_ket(b), bell_ket(b).conj()) for w, b in zip(weights, ("psi+", "psi-", "phi+", "phi-")))
    return DensityMatrix(mat)


def random_physical_seed(rng):
    while True:
        seed = EquivalenceSeed(*rng.uniform(-1, 1, size=3))
        if seed.is_physical():
            return seed


def random_angles(rng, n=2):
    return tuple(rng.uniform(0, 2 * math.pi, size=n))


def random_solution(rng, initial, lam=1.0):
    mode = rng.choice(["A", "B", "C"])
    alpha, beta = random_angles(rng)
    return AnalyticSolution(mode, alpha, beta, lam, initial)
