"""Hot numeric kernels.

Each kernel is written once, in a subset of numpy that numba understands.
``_accel.jit`` compiles it, or leaves it as plain Python when numba is
disabled (``SPINGEO_DISABLE_NUMBA=1``). Wrappers in the domain modules turn
the status codes returned here into exceptions.
"""
import numpy as np

from ._accel import jit

HERMITIAN_TOL = 1e-14
SVD_TOL = 1e-15
SVD_NEGLIGIBLE = 1e-34  # squared norm, relative to ||a||^2


@jit
def jacobi_eigh(a, max_sweeps):
    """Cyclic Jacobi diagonalisation of a complex Hermitian matrix.

    Each pivot first rotates the phase of column ``q`` so that ``a[p, q]``
    becomes real, then applies a real Givens rotation. Sweep order is the
    fixed row-cyclic order, so results are reproducible.

    Returns
    -------
    w : (n,) float64, ascending eigenvalues
    v : (n, n) complex128, eigenvectors in columns
    sweeps : int, number of sweeps used, or -1 if not converged
    """
    n = a.shape[0]
    a = a.astype(np.complex128).copy()
    v = np.eye(n, dtype=np.complex128)
    scale = 0.0
    for i in range(n):
        for j in range(n):
            scale += a[i, j].real ** 2 + a[i, j].imag ** 2
    scale = np.sqrt(scale)
    sweeps = -1
    for sweep in range(max_sweeps + 1):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                off += a[p, q].real ** 2 + a[p, q].imag ** 2
        if np.sqrt(off) <= HERMITIAN_TOL * scale:
            sweeps = sweep
            break
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                g = np.abs(apq)
                if g < 1e-300:
                    continue
                ph = apq / g
                cph = np.conj(ph)
                for k in range(n):
                    a[k, q] = a[k, q] * cph
                for k in range(n):
                    a[q, k] = a[q, k] * ph
                for k in range(n):
                    v[k, q] = v[k, q] * cph
                tau = (a[q, q].real - a[p, p].real) / (2.0 * g)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * akq
                    a[k, q] = s * akp + c * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * aqk
                    a[q, k] = s * apk + c * aqk
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = c * vkp - s * vkq
                    v[k, q] = s * vkp + c * vkq
                a[p, q] = 0.0
                a[q, p] = 0.0
    w = np.empty(n)
    for i in range(n):
        w[i] = a[i, i].real
    order = np.argsort(w)
    w_sorted = np.empty(n)
    v_sorted = np.empty((n, n), dtype=np.complex128)
    for j in range(n):
        w_sorted[j] = w[order[j]]
        for i in range(n):
            v_sorted[i, j] = v[i, order[j]]
    return w_sorted, v_sorted, sweeps


@jit
def svd3_sweeps(a, max_sweeps):
    """One-sided (Hestenes) Jacobi on a real 3x3 matrix.

    Orthogonalises the columns of ``a @ v`` by plane rotations accumulated
    into ``v``. On return the column norms of ``u`` are the singular values
    and ``v`` is a product of rotations, hence ``det(v) == +1``.
    """
    u = a.astype(np.float64).copy()
    v = np.eye(3)
    fro2 = 0.0
    for k in range(3):
        for m in range(3):
            fro2 += u[k, m] * u[k, m]
    # columns below 1e-17 * ||a|| count as zero; otherwise a column parallel
    # to a large one can shrink into denormals without ever converging
    floor = SVD_NEGLIGIBLE * fro2
    for sweep in range(max_sweeps):
        rotated = False
        for i in range(2):
            for j in range(i + 1, 3):
                alpha = 0.0
                beta = 0.0
                gamma = 0.0
                for k in range(3):
                    alpha += u[k, i] * u[k, i]
                    beta += u[k, j] * u[k, j]
                    gamma += u[k, i] * u[k, j]
                if gamma == 0.0 or alpha <= floor or beta <= floor:
                    continue
                if abs(gamma) <= SVD_TOL * np.sqrt(alpha) * np.sqrt(beta):
                    continue
                rotated = True
                zeta = (beta - alpha) / (2.0 * gamma)
                if zeta >= 0.0:
                    t = 1.0 / (zeta + np.sqrt(1.0 + zeta * zeta))
                else:
                    t = -1.0 / (-zeta + np.sqrt(1.0 + zeta * zeta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = c * t
                for k in range(3):
                    ui = u[k, i]
                    uj = u[k, j]
                    u[k, i] = c * ui - s * uj
                    u[k, j] = s * ui + c * uj
                    vi = v[k, i]
                    vj = v[k, j]
                    v[k, i] = c * vi - s * vj
                    v[k, j] = s * vi + c * vj
        if not rotated:
            return u, v, sweep
    return u, v, -1


@jit
def dissipator_rhs(rho, projectors, lam):
    """Right-hand side of d(rho)/dt = -lam * (rho - sum_k P_k rho P_k)."""
    acc = rho.copy()
    for k in range(projectors.shape[0]):
        p = projectors[k]
        acc -= p @ rho @ p
    return -lam * acc


@jit
def rk4_propagate(rho, projectors, lam, dt, n_steps, last_dt):
    """Classical fourth-order Runge-Kutta with ``n_steps`` steps of ``dt``
    followed by one step of ``last_dt`` (skipped when zero)."""
    y = rho.astype(np.complex128).copy()
    for step in range(n_steps + 1):
        h = dt
        if step == n_steps:
            h = last_dt
            if h <= 0.0:
                break
        k1 = dissipator_rhs(y, projectors, lam)
        k2 = dissipator_rhs(y + (0.5 * h) * k1, projectors, lam)
        k3 = dissipator_rhs(y + (0.5 * h) * k2, projectors, lam)
        k4 = dissipator_rhs(y + h * k3, projectors, lam)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return y
