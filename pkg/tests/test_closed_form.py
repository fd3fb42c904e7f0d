import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import angles, density_matrices, lam_ts
from spingeo.closed_form import (
    AnalyticSolution,
    asymptotic,
    bell_singlet_eigenvalues,
    bell_singlet_expansion,
    bell_singlet_singular_values,
    evolve_analytic,
)
from spingeo.decoherence import DecoherenceConfig, build_projectors, integrate
from spingeo.errors import DomainError
from spingeo.geometry import svd3
from spingeo.pauli import PauliDecomposition, decompose
from spingeo.states import bell_state, random_density_matrix

modes = st.sampled_from(["A", "B", "C"])


@given(density_matrices(), modes, angles, angles)
def test_time_zero_is_exact(rho, mode, a, b):
    d0 = decompose(rho)
    out = evolve_analytic(AnalyticSolution(mode, a, b, 1.0, d0), 0.0)
    assert np.array_equal(out.as_vector(), d0.as_vector())


def test_mode_a_singlet_at_ln2(singlet_d):
    out = evolve_analytic(AnalyticSolution("A", 0, 0, 1.0, singlet_d), math.log(2))
    assert np.allclose(out.c, np.diag([-0.5, -0.5, -1]), atol=1e-15)


def test_negative_time_rejected(singlet_d):
    with pytest.raises(DomainError):
        evolve_analytic(AnalyticSolution("A", 0, 0, 1.0, singlet_d), -0.1)


def test_negative_rate_rejected(singlet_d):
    with pytest.raises(DomainError):
        AnalyticSolution("A", 0, 0, -1.0, singlet_d)


@pytest.mark.parametrize("lam_t", [0.3, 1.0, 2.5])
def test_mode_c_matches_rk4(rng, lam_t):
    rho = random_density_matrix(rng)
    a, b = 1.1, 4.2
    analytic = evolve_analytic(AnalyticSolution("C", a, b, 1.0, decompose(rho)), lam_t)
    numeric = decompose(integrate(rho, DecoherenceConfig(1.0, build_projectors("C", a, b)), lam_t))
    assert np.max(np.abs(analytic.as_vector() - numeric.as_vector())) < 1e-8


@given(density_matrices(), angles, st.floats(0, 3))
def test_mode_nesting(rho, a, t):
    d0 = decompose(rho)
    c0 = evolve_analytic(AnalyticSolution("C", a, 0.0, 1.0, d0), t)
    b = evolve_analytic(AnalyticSolution("B", a, 0.0, 1.0, d0), t)
    assert np.max(np.abs(c0.as_vector() - b.as_vector())) <= 1e-14
    b0 = evolve_analytic(AnalyticSolution("B", 0.0, 0.0, 1.0, d0), t)
    a0 = evolve_analytic(AnalyticSolution("A", 0.0, 0.0, 1.0, d0), t)
    assert np.max(np.abs(b0.as_vector() - a0.as_vector())) <= 1e-14


@given(density_matrices(), modes, angles, angles, st.floats(0, 2), st.floats(0, 2))
def test_semigroup(rho, mode, a, b, t1, t2):
    sol = AnalyticSolution(mode, a, b, 1.0, decompose(rho))
    mid = evolve_analytic(sol, t1)
    restart = evolve_analytic(AnalyticSolution(mode, a, b, 1.0, mid), t2)
    assert np.max(np.abs(restart.as_vector() - evolve_analytic(sol, t1 + t2).as_vector())) < 1e-10


@given(density_matrices())
def test_mode_a_damping_is_monotone(rho):
    sol = AnalyticSolution("A", 0, 0, 1.0, decompose(rho))
    series = np.array([evolve_analytic(sol, t).as_vector() for t in np.linspace(0, 5, 30)])
    # conserved: m_z, n_z, c_zz; index into (m, n, c row-major)
    conserved = {2, 5, 14}
    for k in range(15):
        col = series[:, k]
        if k in conserved:
            assert np.max(np.abs(col - col[0])) <= 1e-15
        elif abs(col[0]) > 1e-12:
            assert np.all(np.diff(np.abs(col)) < 0)


def test_mode_a_damps_off_diagonal_correlations():
    c0 = np.arange(9, dtype=float).reshape(3, 3) / 20
    sol = AnalyticSolution("A", 0, 0, 1.0, PauliDecomposition(np.zeros(3), np.zeros(3), c0))
    e = math.exp(-1)
    expect = e * c0
    expect[2, 2] = c0[2, 2]
    assert np.allclose(evolve_analytic(sol, 1.0).c, expect, atol=1e-15)


def test_asymptote_singlet_mode_a(singlet_d):
    res = asymptotic(AnalyticSolution("C", 0, 0, 1.0, singlet_d))
    assert res.w == -1
    assert np.array_equal(res.c_infinity, -np.diag([0.0, 0.0, 1.0]))
    assert res.correlation_vector == (0.0, 0.0, 1.0)


def test_asymptote_of_zero_correlations():
    res = asymptotic(AnalyticSolution("C", 0.3, 1.2, 1.0, PauliDecomposition.zero()))
    assert res.w == 0 and np.array_equal(res.c_infinity, np.zeros((3, 3)))


@given(density_matrices(), angles, angles)
def test_asymptote_is_large_time_limit(rho, a, b):
    sol = AnalyticSolution("C", a, b, 1.0, decompose(rho))
    res = asymptotic(sol)
    assert np.max(np.abs(evolve_analytic(sol, 40.0).c - res.c_infinity)) < 1e-12
    assert np.linalg.matrix_rank(res.c_infinity, tol=1e-12) <= 1
    assert np.allclose(np.sort(svd3(res.c_infinity).magnitudes), np.sort(res.correlation_vector), atol=1e-15)


def test_asymptotic_w_formula(rng):
    d0 = decompose(random_density_matrix(rng))
    a, b = 0.7, 2.3
    c = d0.c
    w = math.sin(a) * (c[0, 2] * math.cos(b) + c[0, 0] * math.sin(b)) + math.cos(a) * (
        c[2, 2] * math.cos(b) + c[2, 0] * math.sin(b)
    )
    assert asymptotic(AnalyticSolution("C", a, b, 1.0, d0)).w == pytest.approx(w, abs=1e-15)


@given(lam_ts)
def test_singular_values_alpha_zero(t):
    e = math.exp(-t)
    assert np.allclose(bell_singlet_singular_values("B", 0, 0, 1.0, t), (e, e, 1), atol=1e-15)


@given(lam_ts)
def test_singular_values_alpha_half_pi(t):
    e = math.exp(-t)
    assert np.allclose(bell_singlet_singular_values("B", math.pi / 2, 0, 1.0, t), (e, e, e), atol=1e-15)


def test_singular_values_mode_c_reduces_to_mode_b(singlet_d):
    got = bell_singlet_singular_values("C", 0.9, 0.4, 1.0, 0.7)
    assert np.allclose(got, bell_singlet_singular_values("B", 0.5, 0, 1.0, 0.7), atol=1e-15)
    evolved = evolve_analytic(AnalyticSolution("C", 0.9, 0.4, 1.0, singlet_d), 0.7).c
    assert np.allclose(np.sort(got)[::-1], svd3(evolved).magnitudes, atol=1e-9)


@given(angles, angles, st.floats(-10, 10), lam_ts)
def test_singular_values_depend_only_on_difference(a, b, s, t):
    base = bell_singlet_singular_values("C", a, b, 1.0, t)
    shifted = bell_singlet_singular_values("C", a + s, b + s, 1.0, t)
    assert np.allclose(base, shifted, atol=1e-12)


@given(angles, st.floats(0.01, 3))
def test_singular_values_match_svd(a, t):
    evolved = evolve_analytic(AnalyticSolution("B", a, 0, 1.0, decompose(bell_state("psi-"))), t).c
    closed = np.sort(bell_singlet_singular_values("B", a, 0, 1.0, t))[::-1]
    assert np.allclose(closed, svd3(evolved).magnitudes, atol=1e-10)


def test_expansion_examples():
    e = math.exp(-1.3)
    assert bell_singlet_expansion(0.0, 1.0, 1.3) == pytest.approx((e, 1.0), abs=1e-15)
    assert bell_singlet_expansion(0.8, 1.0, 0.0) == pytest.approx((1.0, 1.0), abs=1e-15)


def test_expansion_close_to_exact_at_small_angle():
    _, c2, c3 = bell_singlet_singular_values("B", 0.1, 0, 1.0, 1.0)
    a2, a3 = bell_singlet_expansion(0.1, 1.0, 1.0)
    assert max(abs(c2 - a2), abs(c3 - a3)) < 5e-3


def test_eigenvalue_examples():
    e = math.exp(-0.4)
    assert bell_singlet_eigenvalues("B", 0, 0, 1.0, 0.4) == pytest.approx((-e, -e, -1))
    assert bell_singlet_eigenvalues("C", 2.0, 2.0 - math.pi / 2, 1.0, 0.4) == pytest.approx((-e, -e, -e))


def test_eigenvalues_match_general_eigensolver(singlet_d):
    evolved = evolve_analytic(AnalyticSolution("B", 0.6, 0, 1.0, singlet_d), 0.8).c
    ev = np.sort(np.linalg.eigvals(evolved).real)
    assert np.allclose(ev, np.sort(bell_singlet_eigenvalues("B", 0.6, 0, 1.0, 0.8)), atol=1e-10)


def test_closed_forms_reject_negative_time():
    for fn in (
        lambda: bell_singlet_singular_values("B", 0, 0, 1.0, -1),
        lambda: bell_singlet_eigenvalues("B", 0, 0, 1.0, -1),
        lambda: bell_singlet_expansion(0.1, 1.0, -1),
    ):
        with pytest.raises(DomainError):
            fn()


def test_solution_at_is_evolve(singlet_d):
    sol = AnalyticSolution("B", 0.3, 0, 2.0, singlet_d)
    assert np.array_equal(sol.at(0.4).c, evolve_analytic(sol, 0.4).c)
