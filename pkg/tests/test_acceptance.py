"""End-to-end acceptance checks. Each test prints one PASS/FAIL line."""
import subprocess
import sys
import time

import cvxpy as cp
import mpmath
import numpy as np

import conftest
from alh.dataset import make_blobs, write_csv
from alh.harness import RunConfig, final_accuracies, run_experiment
from alh.informative import HyperParams, combined_objective, informative_penalty, worst_case_pseudo_label
from alh.iral import admm_solve_theta, admm_theta, select_query_iral, soft_threshold, theta_objective
from alh.kernel import GramCache, gram
from alh.representative import QpProblem, build_mmd_qp, mmd_direct, solve_simplex_qp
from alh.state import ActiveState
from alh.stats import paired_t_test

HP = HyperParams()


def report(number: int, ok: bool, detail: str) -> None:
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} {detail}"
    print(line)
    conftest.CRITERIA.append(line)
    assert ok, line


def test_criterion_1_mmd_qp_oracle():
    rng = np.random.default_rng(1)
    t0 = time.perf_counter()
    worst, ok = 0.0, True
    for _ in range(20):
        n, d = int(rng.integers(3, 41)), int(rng.integers(1, 6))
        l = int(rng.integers(0, n - 2))
        X = rng.normal(size=(n, d))
        G = GramCache(X, 1.0 / d)
        state = ActiveState.from_partition(range(l), range(l, n), rng.integers(0, 2, l), 2)
        vert = build_mmd_qp(state, G).vertex_objectives()
        direct = np.array([mmd_direct(np.r_[state.labeled, s], np.setdiff1d(state.unlabeled, [s]), G)
                           for s in state.unlabeled])
        A = np.c_[direct, np.ones_like(direct)]
        coef = np.linalg.lstsq(A, vert, rcond=None)[0]
        resid = np.abs(vert - A @ coef).max()
        worst = max(worst, resid)
        ok &= bool(np.argmin(vert) == np.argmin(direct) and coef[0] > 0 and resid < 1e-8)
    elapsed = time.perf_counter() - t0
    report(1, ok and elapsed < 1.0, f"max affine residual {worst:.2e}, {elapsed:.2f}s")


def cvx_theta_minimum(K, Y, k_s, lam):
    w, V = np.linalg.eigh(K)
    half = V * np.sqrt(np.maximum(w, 0.0))
    T = cp.Variable(Y.shape)
    fs = T.T @ k_s
    obj = cp.sum_squares(Y - K @ T) + cp.sum_squares(fs) + 2 * cp.norm1(fs) + lam * cp.sum_squares(half.T @ T)
    prob = cp.Problem(cp.Minimize(obj))
    prob.solve(solver="CLARABEL", tol_gap_abs=1e-12, tol_gap_rel=1e-12, tol_feas=1e-12)
    return prob.value


def test_criterion_2_admm_against_convex_solver():
    rng = np.random.default_rng(2)
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(20):
        l, c, d = int(rng.integers(1, 21)), int(rng.integers(2, 5)), int(rng.integers(1, 4))
        X = rng.normal(size=(l + 1, d))
        K = gram(X, X, 1.0 / d)
        Y = -np.ones((l, c))
        Y[np.arange(l), rng.integers(0, c, l)] = 1.0
        theta, _, _ = admm_theta(K[:l, :l], Y, K[:l, l], HP.lam, HP.rho)
        ours = theta_objective(theta, K[:l, :l], Y, K[:l, l], HP.lam)
        ref = cvx_theta_minimum(K[:l, :l], Y, K[:l, l], HP.lam)
        worst = max(worst, abs(ours - ref) / abs(ref))
    elapsed = time.perf_counter() - t0

    grid = np.arange(-6.0, 6.0, 1e-6)
    grid_err = 0.0
    for _ in range(10):
        t, xi, rho = rng.uniform(-3, 3), rng.uniform(-2, 2), rng.uniform(0.1, 5)
        vals = grid ** 2 + 2 * np.abs(grid) + xi * (grid - t) + 0.5 * rho * (grid - t) ** 2
        a = soft_threshold((rho * t - xi) / (rho + 2), 2 / (rho + 2))
        grid_err = max(grid_err, abs(a - grid[np.argmin(vals)]))
    ok = worst <= 1e-4 and grid_err <= 1e-6 and elapsed < 10
    report(2, ok, f"max relative gap {worst:.2e}, a-update grid error {grid_err:.1e}, {elapsed:.2f}s")


def test_criterion_3_worst_case_pseudo_label():
    rng = np.random.default_rng(3)
    t0 = time.perf_counter()
    ok, worst = True, 0.0
    signs = {c: np.array(np.meshgrid(*[[-1.0, 1.0]] * c)).reshape(c, -1).T for c in range(1, 7)}
    for _ in range(1000):
        c = int(rng.integers(1, 7))
        f = rng.normal(size=c) * rng.choice([0.1, 1.0, 10.0])
        y = worst_case_pseudo_label(f)
        risk = np.sum((y - f) ** 2)
        ok &= bool(risk >= np.max(np.sum((signs[c] - f) ** 2, axis=1)))
        # a one-dimensional kernel column turns theta into the score vector itself
        err = abs(risk - (c + informative_penalty(f[None, :], np.ones(1))))
        worst = max(worst, err)
    elapsed = time.perf_counter() - t0
    report(3, ok and worst <= 1e-12 and elapsed < 1.0, f"identity error {worst:.1e}, {elapsed:.2f}s")


def test_criterion_4_end_to_end_selection():
    rng = np.random.default_rng(123)
    t0 = time.perf_counter()
    hits, gaps = 0, []
    for _ in range(50):
        u, l = int(rng.integers(2, 13)), int(rng.integers(1, 7))
        c, d = int(rng.integers(2, 4)), int(rng.integers(1, 4))
        G = GramCache(rng.normal(size=(l + u, d)), 1.0 / d)
        state = ActiveState.from_partition(range(l), range(l, l + u), rng.integers(0, c, l), c)
        chosen = select_query_iral(state, None, G, HP)
        objs = []
        for j, s in enumerate(state.unlabeled):
            theta, _ = admm_solve_theta(state, int(s), None, G, HP)
            objs.append(combined_objective(theta, np.eye(u)[j], state, G, HP))
        objs = np.array(objs)
        best = int(np.argmin(objs))
        if chosen.position == best:
            hits += 1
        else:
            gaps.append((objs[chosen.position] - objs[best]) / abs(objs[best]))
    elapsed = time.perf_counter() - t0
    max_gap = max(gaps, default=0.0)
    ok = hits >= 45 and max_gap <= 0.05 and elapsed < 60
    report(4, ok, f"{hits}/50 match, max disagreement gap {max_gap:.2%}, {elapsed:.2f}s")


def grid_minimum(Q, q, step=1e-4):
    m = int(round(1 / step))
    ticks = np.arange(m + 1) * step
    if len(q) == 2:
        alphas = np.c_[ticks, 1 - ticks]
        return np.min(0.5 * np.einsum("ij,jk,ik->i", alphas, Q, alphas) + alphas @ q)
    best = np.inf
    for i, a in enumerate(ticks):
        b = ticks[: m + 1 - i]
        alphas = np.c_[np.full_like(b, a), b, np.maximum(1 - a - b, 0.0)]
        best = min(best, np.min(0.5 * np.einsum("ij,jk,ik->i", alphas, Q, alphas) + alphas @ q))
    return best


def test_criterion_5_simplex_qp():
    rng = np.random.default_rng(5)
    elapsed, worst_kkt = 0.0, 0.0
    for _ in range(50):
        u = int(rng.integers(2, 51))
        A = rng.normal(size=(u, int(rng.integers(1, u + 1))))
        p = QpProblem(A @ A.T, rng.normal(size=u))
        t0 = time.perf_counter()
        sol = solve_simplex_qp(p)
        elapsed += time.perf_counter() - t0
        worst_kkt = max(worst_kkt, sol.kkt_residual)
    # the grid oracle itself is slow; only the solver counts toward runtime
    worst_grid = 0.0
    for u in (2, 2, 2, 3, 3, 3):
        A = rng.normal(size=(u, u))
        p = QpProblem(A @ A.T, rng.normal(size=u))
        t0 = time.perf_counter()
        sol = solve_simplex_qp(p)
        elapsed += time.perf_counter() - t0
        worst_grid = max(worst_grid, abs(p.objective(sol) - grid_minimum(p.Q, p.q)))
    ok = worst_kkt <= 1e-6 and worst_grid <= 1e-4 and elapsed < 10
    report(5, ok, f"max KKT residual {worst_kkt:.1e}, max grid gap {worst_grid:.1e}, {elapsed:.2f}s")


def test_criterion_6_learning_curve_sanity(tmp_path):
    path = tmp_path / "blobs.csv"
    write_csv(make_blobs(n=300, c=3, d=2, separation=4.0, seed=0), path)
    t0 = time.perf_counter()
    final = {}
    for strategy in ("iral", "random"):
        curves = run_experiment(RunConfig(str(path), strategy, budget=30, runs=10, seed=0))
        final[strategy] = final_accuracies(curves, strategy).mean()
    elapsed = time.perf_counter() - t0
    # accuracies are multiples of 1/1200 here; compare at that granularity
    not_worse = round(final["iral"], 9) >= round(final["random"] - 0.01, 9)
    ok = not_worse and final["iral"] >= 0.95 and elapsed < 120
    report(6, ok, f"iral {final['iral']:.4f}, random {final['random']:.4f}, {elapsed:.2f}s")


def t_tail_quadrature(t, df):
    nu = mpmath.mpf(df)
    norm = mpmath.gamma((nu + 1) / 2) / (mpmath.sqrt(nu * mpmath.pi) * mpmath.gamma(nu / 2))
    with mpmath.workdps(30):
        tail = mpmath.quad(lambda x: norm * (1 + x * x / nu) ** (-(nu + 1) / 2), [abs(t), mpmath.inf])
    return float(2 * tail)


def test_criterion_7_statistics():
    rng = np.random.default_rng(7)
    flip = {"win": "loss", "loss": "win", "tie": "tie"}
    worst, antisym = 0.0, True
    for _ in range(100):
        n = int(rng.integers(3, 31))
        a = rng.uniform(0.6, 1.0, n)
        b = np.clip(a + rng.normal(rng.uniform(-0.05, 0.05), 0.05, n), 0, 1)
        ab, ba = paired_t_test(a, b), paired_t_test(b, a)
        worst = max(worst, abs(ab.p_value - t_tail_quadrature(ab.t_stat, n - 1)))
        antisym &= ab.outcome == flip[ba.outcome]
    report(7, worst <= 1e-6 and antisym, f"max p-value error {worst:.1e}, antisymmetric {antisym}")


def test_criterion_8_determinism(tmp_path):
    data = tmp_path / "blobs.csv"
    write_csv(make_blobs(n=90, seed=4), data)
    outs = []
    for name in ("first", "second"):
        out = tmp_path / name
        for strategy in ("iral", "random", "margin", "mmd"):
            subprocess.run([sys.executable, "-m", "alh.cli", "run", "--data", str(data), "--strategy", strategy,
                            "--budget", "6", "--runs", "3", "--seed", "11", "--out", str(out)], check=True)
        outs.append(out)
    same = all((outs[0] / f).read_bytes() == (outs[1] / f).read_bytes()
               for f in ("curves.csv", "summary.csv", "ttest.csv"))
    report(8, same, "curves.csv, summary.csv, ttest.csv byte-identical across reruns")
