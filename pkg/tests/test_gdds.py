import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from odds.gdds import (
    InfeasibleError,
    RecoveryProblem,
    SolverConfig,
    lp_oracle,
    project_linf_ball,
    soft_threshold,
    solve_ds,
    solve_gdds,
)
from odds.linalg import make_rng, normalize_columns

vectors = arrays(np.float64, st.integers(1, 8), elements=st.floats(-100, 100, allow_nan=False))


def random_instance(seed, n=None, m=None):
    rng = make_rng(seed)
    n = n or int(rng.integers(4, 16))
    m = m or int(rng.integers(n, 31))
    x = normalize_columns(rng.standard_normal((n, m)))
    q = normalize_columns(rng.standard_normal((n, m)))
    y = rng.standard_normal(n)
    return x, q, y


def test_soft_threshold_examples():
    np.testing.assert_allclose(soft_threshold(np.array([3.0, -1.0, 0.5]), 1.0), [2.0, 0.0, 0.0])
    v = np.array([1.5, -0.2])
    assert np.array_equal(soft_threshold(v, 0.0), v)
    np.testing.assert_allclose(soft_threshold(np.array([-2.0, 2.0]), 5.0), [0.0, 0.0])
    with pytest.raises(ValueError):
        soft_threshold(v, -1.0)


@given(vectors, st.floats(0, 50))
def test_soft_threshold_shrinks(v, t):
    out = soft_threshold(v, t)
    assert np.all(np.abs(out) <= np.maximum(np.abs(v) - t, 0.0) + 1e-12)
    assert np.all(out * v >= 0.0)


def test_project_linf_examples():
    np.testing.assert_allclose(project_linf_ball(np.array([2.0, -0.5]), 1.0), [1.0, -0.5])
    v = np.array([3.0, -7.0])
    assert np.array_equal(project_linf_ball(v, 1e12), v)
    np.testing.assert_allclose(project_linf_ball(np.array([0.3]), 0.0), [0.0])
    with pytest.raises(ValueError):
        project_linf_ball(v, -0.1)


@given(vectors, st.floats(0, 10))
def test_project_linf_is_projection(v, r):
    out = project_linf_ball(v, r)
    assert np.max(np.abs(out)) <= r + 1e-12
    inside = np.abs(v) <= r
    assert np.array_equal(out[inside], v[inside])


def test_problem_validation():
    x = np.eye(3)
    with pytest.raises(ValueError):
        RecoveryProblem(x=x, y=np.ones(3), lam=-0.1, q=x)
    with pytest.raises(ValueError):
        RecoveryProblem(x=x, y=np.ones(2), lam=0.1, q=x)
    with pytest.raises(ValueError):
        RecoveryProblem(x=x, y=np.ones(3), lam=0.1, q=np.eye(2))


def test_solve_identity_lambda_zero():
    y = np.array([1.0, 0.0, -2.0])
    sol = solve_gdds(RecoveryProblem(x=np.eye(3), y=y, lam=0.0, q=np.eye(3)))
    np.testing.assert_allclose(sol.beta, y, atol=1e-6)
    assert sol.converged


def test_solve_large_lambda_gives_zero():
    x, q, y = random_instance(11)
    lam = float(np.max(np.abs(q.T @ y))) * 1.001
    sol = solve_gdds(RecoveryProblem(x=x, y=y, lam=lam, q=q))
    assert sol.objective == pytest.approx(0.0, abs=1e-9)


def test_solve_ds_identity_soft_threshold():
    sol = solve_ds(np.eye(2), np.array([2.0, -1.0]), 1.0)
    np.testing.assert_allclose(sol.beta, [1.0, 0.0], atol=1e-6)
    ref = lp_oracle(RecoveryProblem(x=np.eye(2), y=np.array([2.0, -1.0]), lam=1.0, q=np.eye(2)))
    assert sol.objective == pytest.approx(ref.objective, abs=1e-6)


def test_solve_ds_matches_gdds_special_case():
    x, _, y = random_instance(13)
    a = solve_ds(x, y, 0.2)
    b = solve_gdds(RecoveryProblem(x=x, y=y, lam=0.2, q=x))
    assert abs(a.objective - b.objective) <= 1e-10


def test_noiseless_exact_recovery(coherent_2x2):
    beta_star = np.array([1.0, 0.0])
    y = coherent_2x2 @ beta_star
    sol = solve_ds(coherent_2x2, y, 0.0)
    np.testing.assert_allclose(sol.beta, beta_star, atol=1e-6)


def test_solution_invariants():
    x, q, y = random_instance(17)
    sol = solve_gdds(RecoveryProblem(x=x, y=y, lam=0.1, q=q))
    assert sol.objective == pytest.approx(float(np.sum(np.abs(sol.beta))), abs=1e-12)
    if sol.converged:
        assert sol.constraint_violation <= 1e-7


def test_oracle_equivalence_random_instances():
    # small-scale version of the full acceptance sweep
    for seed in range(10):
        x, q, y = random_instance(seed)
        lam = 0.5 * float(np.max(np.abs(q.T @ y)))
        prob = RecoveryProblem(x=x, y=y, lam=lam, q=q)
        sol = solve_gdds(prob)
        ref = lp_oracle(prob)
        assert abs(sol.objective - ref.objective) <= 1e-4
        assert sol.constraint_violation <= 1e-6


def test_lp_oracle_examples():
    ref = lp_oracle(RecoveryProblem(x=np.eye(2), y=np.ones(2), lam=0.0, q=np.eye(2)))
    assert ref.objective == pytest.approx(2.0, abs=1e-9)
    np.testing.assert_allclose(ref.beta, [1.0, 1.0], atol=1e-9)


def test_lp_oracle_beats_ray_shooting():
    # random feasible points constructed by shooting rays from a
    # pseudo-inverse solution can never have a smaller l1 norm
    for seed in range(5):
        rng = make_rng(seed)
        x = normalize_columns(rng.standard_normal((8, 16)))
        q = normalize_columns(rng.standard_normal((8, 16)))
        y = rng.standard_normal(8)
        lam = 0.3 * float(np.max(np.abs(q.T @ y)))
        prob = RecoveryProblem(x=x, y=y, lam=lam, q=q)
        ref = lp_oracle(prob)
        w = q.T @ x
        c = q.T @ y
        base, *_ = np.linalg.lstsq(w, c, rcond=None)
        assert np.max(np.abs(w @ base - c)) <= lam + 1e-9
        for _ in range(1000):
            d = rng.standard_normal(16)
            t = rng.uniform(0, 1)
            cand = base + t * d
            # walk back toward the feasible base point until inside
            while np.max(np.abs(w @ cand - c)) > lam and t > 1e-12:
                t *= 0.5
                cand = base + t * d
            assert ref.objective <= np.sum(np.abs(cand)) + 1e-9


def test_lp_oracle_scaling_covariance():
    x, q, y = random_instance(23)
    lam = 0.4 * float(np.max(np.abs(q.T @ y)))
    base = lp_oracle(RecoveryProblem(x=x, y=y, lam=lam, q=q))
    alpha = 3.7
    scaled = lp_oracle(RecoveryProblem(x=x, y=alpha * y, lam=alpha * lam, q=q))
    assert scaled.objective == pytest.approx(alpha * base.objective, rel=1e-9, abs=1e-9)


def test_lp_oracle_guard():
    rng = make_rng(0)
    x = rng.standard_normal((5, 250))
    with pytest.raises(ValueError):
        lp_oracle(RecoveryProblem(x=x, y=np.ones(5), lam=1.0, q=x))


def test_lp_oracle_infeasible():
    # q orthogonal to x makes W = 0 while c != 0: no feasible beta at lam = 0
    x = np.array([[1.0], [0.0]])
    q = np.array([[0.0], [1.0]])
    with pytest.raises(InfeasibleError):
        lp_oracle(RecoveryProblem(x=x, y=np.array([0.0, 1.0]), lam=0.0, q=q))


def test_beta_star_feasible_and_cone_minimality():
    # with lam = ||Q^T eps||_inf the truth is feasible, so the solver's
    # error h = beta_hat - beta_star is l1-dominated by its on-support part
    for seed in range(5):
        rng = make_rng(seed, 99)
        x = normalize_columns(rng.standard_normal((12, 20)))
        q = normalize_columns(rng.standard_normal((12, 20)))
        beta_star = np.zeros(20)
        support = rng.choice(20, size=3, replace=False)
        beta_star[support] = rng.standard_normal(3)
        eps = 0.05 * rng.standard_normal(12)
        y = x @ beta_star + eps
        lam = float(np.max(np.abs(q.T @ eps)))
        prob = RecoveryProblem(x=x, y=y, lam=lam, q=q)
        viol = np.max(np.abs(q.T @ (x @ beta_star - y))) - lam
        assert viol <= 1e-12
        sol = solve_gdds(prob)
        h = sol.beta - beta_star
        t_mask = np.zeros(20, dtype=bool)
        t_mask[support] = True
        assert np.sum(np.abs(h[~t_mask])) <= np.sum(np.abs(h[t_mask])) + 1e-6


def test_nonconvergence_reported_not_raised():
    x, q, y = random_instance(31)
    sol = solve_gdds(
        RecoveryProblem(x=x, y=y, lam=0.05, q=q),
        SolverConfig(max_iters=3, primal_tol=1e-14, dual_tol=1e-14),
    )
    assert isinstance(sol.converged, bool)


def test_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(primal_tol=0.0)
    with pytest.raises(ValueError):
        SolverConfig(max_iters=0)
