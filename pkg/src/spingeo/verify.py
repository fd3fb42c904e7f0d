"""Self-check suite behind ``spingeo verify``.

Each check returns a :class:`CheckResult`; a failing check names the worst
input it saw so the failure can be reproduced.
"""
import math
import time
from contextlib import contextmanager
from dataclasses import dataclass

import numpy as np

from . import closed_form
from .closed_form import AnalyticSolution, asymptotic, bell_singlet_singular_values, evolve_analytic
from .decoherence import DecoherenceConfig, build_projectors, integrate
from .equivalence import angle_grid, check_conditions, seed_to_matrix, verify_equivalence
from .geometry import membership, separability_crossing, svd3
from .oracles import charpoly_singular_values, random_bell_diagonal, random_physical_seed
from .pauli import decompose, reconstruct
from .states import bell_state, local_unitary, metrics, random_density_matrix, random_su2, su2_to_so3

DEFAULT_SEED = 20061


@dataclass(frozen=True)
class CheckResult:
    module: str
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0


@contextmanager
def fault_injected(offset=1e-3):
    """Perturb every closed-form evolution by ``offset`` (suite sanity test)."""
    old = closed_form._FAULT_OFFSET
    closed_form._FAULT_OFFSET = offset
    try:
        yield
    finally:
        closed_form._FAULT_OFFSET = old


def _singlet():
    return decompose(bell_state("psi-"))


def check_oracle_equivalence(rng, n):
    worst = (0.0, None)
    for _ in range(n):
        rho = random_density_matrix(rng)
        mode = str(rng.choice(["A", "B", "C"]))
        alpha, beta = rng.uniform(0, 2 * math.pi, size=2)
        lam = float(rng.uniform(0.5, 2.0))
        lam_t = float(rng.uniform(1e-3, 3.0))
        t = lam_t / lam
        sol = AnalyticSolution(mode, alpha, beta, lam, decompose(rho))
        analytic = evolve_analytic(sol, t)
        cfg = DecoherenceConfig(lam, build_projectors(mode, alpha, beta))
        numeric = decompose(integrate(rho, cfg, t))
        err = float(np.max(np.abs(analytic.as_vector() - numeric.as_vector())))
        if err > worst[0]:
            worst = (err, f"mode={mode} alpha={alpha:.6g} beta={beta:.6g} lam_t={lam_t:.6g}")
    return worst[0] <= 1e-8, f"max |analytic - RK4| = {worst[0]:.2e} ({worst[1]})"


def check_mode_nesting(rng, n):
    worst = 0.0
    for _ in range(n):
        d0 = decompose(random_density_matrix(rng))
        alpha = float(rng.uniform(0, 2 * math.pi))
        t = float(rng.uniform(0, 3))
        c_as_b = evolve_analytic(AnalyticSolution("C", alpha, 0.0, 1.0, d0), t)
        b = evolve_analytic(AnalyticSolution("B", alpha, 0.0, 1.0, d0), t)
        b0 = evolve_analytic(AnalyticSolution("B", 0.0, 0.0, 1.0, d0), t)
        a = evolve_analytic(AnalyticSolution("A", 0.0, 0.0, 1.0, d0), t)
        worst = max(worst, np.max(np.abs(c_as_b.as_vector() - b.as_vector())), np.max(np.abs(b0.as_vector() - a.as_vector())))
    return worst <= 1e-14, f"max nesting gap = {worst:.2e}"


def check_semigroup(rng, n):
    worst = 0.0
    for _ in range(n):
        d0 = decompose(random_density_matrix(rng))
        mode = str(rng.choice(["A", "B", "C"]))
        alpha, beta = rng.uniform(0, 2 * math.pi, size=2)
        t1, t2 = rng.uniform(0, 2, size=2)
        sol = AnalyticSolution(mode, alpha, beta, 1.0, d0)
        mid = evolve_analytic(sol, t1)
        two_step = evolve_analytic(AnalyticSolution(mode, alpha, beta, 1.0, mid), t2)
        worst = max(worst, np.max(np.abs(two_step.as_vector() - evolve_analytic(sol, t1 + t2).as_vector())))
    return worst <= 1e-10, f"max semigroup gap = {worst:.2e}"


def check_delta_reduction(rng, n):
    worst = 0.0
    d0 = _singlet()
    for _ in range(n):
        alpha, beta = rng.uniform(0, 2 * math.pi, size=2)
        t = float(rng.uniform(0, 3))
        mc = svd3(evolve_analytic(AnalyticSolution("C", alpha, beta, 1.0, d0), t).c).magnitudes
        mb = svd3(evolve_analytic(AnalyticSolution("B", alpha - beta, 0.0, 1.0, d0), t).c).magnitudes
        closed = np.sort(bell_singlet_singular_values("C", alpha, beta, 1.0, t))[::-1]
        worst = max(worst, np.max(np.abs(mc - mb)), np.max(np.abs(mc - closed)))
    return worst <= 1e-9, f"max |mode C - mode B(delta)| = {worst:.2e}"


def check_asymptotics(rng, n):
    worst = 0.0
    for _ in range(n):
        d0 = decompose(random_density_matrix(rng))
        alpha, beta = rng.uniform(0, 2 * math.pi, size=2)
        sol = AnalyticSolution("C", alpha, beta, 1.0, d0)
        far = evolve_analytic(sol, 40.0).c
        res = asymptotic(sol)
        mags = svd3(far).magnitudes
        worst = max(worst, np.max(np.abs(far - res.c_infinity)), np.max(np.abs(mags - [abs(res.w), 0, 0])))
    return worst <= 1e-12, f"max gap to asymptote = {worst:.2e}"


def check_svd(rng, n):
    recon = mags = 0.0
    bad_sign = 0
    for _ in range(n):
        c = rng.uniform(-1, 1, size=(3, 3))
        cv = svd3(c)
        recon = max(recon, np.max(np.abs(cv.matrix() - c)))
        mags = max(mags, np.max(np.abs(cv.magnitudes - charpoly_singular_values(c))))
        det = np.linalg.det(c)
        if abs(det) > 1e-12 and np.sign(np.prod(cv.values)) != np.sign(det):
            bad_sign += 1
    ok = recon < 1e-10 and mags < 1e-10 and bad_sign == 0
    return ok, f"reconstruction {recon:.2e}, char-poly gap {mags:.2e}, sign mismatches {bad_sign}"


def check_membership_vs_ppt(rng, n):
    disagree = 0
    for _ in range(n):
        rho = random_bell_diagonal(rng)
        verdict = membership(svd3(decompose(rho).c))
        if verdict.in_octahedron != metrics(rho).ppt_separable:
            disagree += 1
    corners = max(abs(membership(svd3(decompose(bell_state(b)).c)).tetra_margin) for b in ("psi+", "psi-", "phi+", "phi-"))
    return disagree == 0 and corners < 1e-12, f"{disagree} disagreements, corner margin {corners:.1e}"


def check_crossing():
    res = separability_crossing(AnalyticSolution("B", math.pi / 2, 0.0, 1.0, _singlet()))
    err = abs(res.lambda_t - math.log(3)) if res.lambda_t is not None else math.inf
    return err <= 1e-6, f"crossing at {res.lambda_t!r}, |error| = {err:.1e}"


def check_proposition(rng, n, grid_size):
    grid = angle_grid(grid_size)
    failures = []
    for _ in range(n):
        seed = random_physical_seed(rng)
        rep = check_conditions(seed_to_matrix(seed), grid=grid)
        if not (rep.trace_condition_ok and rep.det_condition_ok and verify_equivalence(seed, 1.0, 1.0, grid)):
            failures.append(seed)
    detail = f"{n - len(failures)}/{n} seeds equivalent"
    if failures:
        detail += f"; first failure {failures[0]}"
    return not failures, detail


def check_local_unitary(rng, n):
    worst = 0.0
    for _ in range(n):
        rho = random_density_matrix(rng)
        u1, u2 = random_su2(rng), random_su2(rng)
        d = decompose(rho)
        dp = decompose(local_unitary(rho, u1, u2))
        o1, o2 = su2_to_so3(u1), su2_to_so3(u2)
        worst = max(worst, np.max(np.abs(dp.m - o1 @ d.m)), np.max(np.abs(dp.n - o2 @ d.n)), np.max(np.abs(dp.c - o1 @ d.c @ o2.T)))
    return worst <= 1e-10, f"max covariance gap = {worst:.2e}"


def check_round_trip(rng, n):
    worst = 0.0
    for _ in range(n):
        d = decompose(random_density_matrix(rng))
        worst = max(worst, np.max(np.abs(decompose(reconstruct(d)).as_vector() - d.as_vector())))
    return worst <= 1e-12, f"max round-trip gap = {worst:.2e}"


def run_suite(seed=DEFAULT_SEED, quick=False):
    scale = 0.1 if quick else 1.0

    def count(full):
        return max(2, int(full * scale))

    plan = [
        ("pauli", "round_trip", lambda r: check_round_trip(r, count(200))),
        ("states", "local_unitary_covariance", lambda r: check_local_unitary(r, count(200))),
        ("closed_form", "oracle_equivalence", lambda r: check_oracle_equivalence(r, count(200))),
        ("closed_form", "mode_nesting", lambda r: check_mode_nesting(r, count(100))),
        ("closed_form", "semigroup", lambda r: check_semigroup(r, count(100))),
        ("closed_form", "delta_reduction", lambda r: check_delta_reduction(r, count(50))),
        ("closed_form", "asymptotics", lambda r: check_asymptotics(r, count(50))),
        ("geometry", "svd_engine", lambda r: check_svd(r, count(1000))),
        ("geometry", "octahedron_vs_ppt", lambda r: check_membership_vs_ppt(r, count(500))),
        ("geometry", "crossing_ln3", lambda r: check_crossing()),
        ("equivalence", "proposition", lambda r: check_proposition(r, count(100), 12)),
    ]
    results = []
    for i, (module, name, fn) in enumerate(plan):
        rng = np.random.default_rng([seed, i])
        start = time.perf_counter()
        try:
            ok, detail = fn(rng)
        except Exception as exc:  # a crash is a failed check, reported like any other
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append(CheckResult(module, name, bool(ok), detail, time.perf_counter() - start))
    return results
